#include "dephaser/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "dephaser/errors.hpp"
#include "dephaser/kernels.hpp"

namespace dephaser {
namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxy / sxx;
}

}  // namespace

double Trajectory::max_population_drift() const {
    double worst = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k)
        for (std::size_t i = 0; i < dim; ++i)
            worst = std::max(worst, std::abs(population(k, i) - population(0, i)));
    return worst;
}

std::optional<std::vector<cplx>> Trajectory::element(std::size_t i, std::size_t j) const {
    for (const auto& e : tracked) {
        if (e.i == i && e.j == j) return e.values;
        if (e.i == j && e.j == i) {
            std::vector<cplx> out(e.values.size());
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::conj(e.values[k]);
            return out;
        }
    }
    if (!snapshots.empty() && i < dim && j < dim) {
        std::vector<cplx> out;
        out.reserve(snapshots.size());
        for (const auto& s : snapshots) out.push_back(s(i, j));
        return out;
    }
    return std::nullopt;
}

double stiffness_scale(const ComplexMatrix& h, std::span<const Channel> channels) {
    double dissipative = 0.0;
    for (const auto& ch : channels) {
        const double norm = frobenius_norm(ch.op);
        dissipative += ch.gamma * norm * norm;
    }
    return std::max(frobenius_norm(h), dissipative);
}

std::size_t min_stable_steps(const ComplexMatrix& h, std::span<const Channel> channels,
                             double t_max) {
    const double scale = stiffness_scale(h, channels);
    if (scale == 0.0) return 1;
    // Shave relative rounding so an exact multiple does not round up a step.
    const double needed = t_max * scale / kStepBoundFactor;
    const double steps = std::ceil(needed * (1.0 - 1e-12));
    return std::max<std::size_t>(1, static_cast<std::size_t>(steps));
}

Trajectory evolve(const ComplexMatrix& h, std::span<const Channel> channels,
                  const DensityMatrix& rho0, double t_max, std::size_t steps,
                  const EvolveOptions& options) {
    if (h.dim() != rho0.dim()) throw DimensionError("Hamiltonian and state dims differ");
    if (rho0.dim() > (std::size_t{1} << kMaxDynamicQubits)) {
        throw ValidationError("integration is limited to " + std::to_string(kMaxDynamicQubits) +
                              " qubits");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive");
    if (steps == 0) throw ValidationError("steps must be >= 1");
    const std::size_t required = min_stable_steps(h, channels, t_max);
    if (steps < required) {
        throw StabilityError("step size " + format_number(t_max / static_cast<double>(steps)) +
                                 " exceeds the stability bound; use at least " +
                                 std::to_string(required) + " steps",
                             required);
    }
    const std::size_t dim = rho0.dim();
    for (const auto& [i, j] : options.track) {
        if (i >= dim || j >= dim) throw ValidationError("tracked element index out of range");
    }

    const MasterEquation equation(h, channels);
    const auto& kern = kernels::active();
    const std::size_t len = dim * dim;
    const double dt = t_max / static_cast<double>(steps);

    Trajectory traj;
    traj.dim = dim;
    traj.times.reserve(steps + 1);
    traj.populations.reserve((steps + 1) * dim);
    for (const auto& [i, j] : options.track) {
        traj.tracked.push_back({i, j, {}});
        traj.tracked.back().values.reserve(steps + 1);
    }

    ComplexMatrix rho = rho0.matrix();
    auto record = [&](double t) {
        traj.times.push_back(t);
        for (std::size_t i = 0; i < dim; ++i) traj.populations.push_back(rho(i, i).real());
        for (auto& e : traj.tracked) e.values.push_back(rho(e.i, e.j));
        if (options.keep_snapshots) traj.snapshots.push_back(DensityMatrix::trusted(rho));
    };
    record(0.0);

    ComplexMatrix k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);
    auto set_stage = [&](const ComplexMatrix& k, double scale) {
        std::copy(rho.data(), rho.data() + len, stage.data());
        kern.caxpy(len, scale, k.data(), stage.data());
    };
    for (std::size_t s = 1; s <= steps; ++s) {
        equation.evaluate(rho, k1);
        set_stage(k1, 0.5 * dt);
        equation.evaluate(stage, k2);
        set_stage(k2, 0.5 * dt);
        equation.evaluate(stage, k3);
        set_stage(k3, dt);
        equation.evaluate(stage, k4);
        kern.caxpy(len, dt / 6.0, k1.data(), rho.data());
        kern.caxpy(len, dt / 3.0, k2.data(), rho.data());
        kern.caxpy(len, dt / 3.0, k3.data(), rho.data());
        kern.caxpy(len, dt / 6.0, k4.data(), rho.data());

        const double t = t_max * static_cast<double>(s) / static_cast<double>(steps);
        const double defect = hermiticity_defect(rho);
        const double trace_error = std::abs(trace(rho) - 1.0);
        traj.max_hermiticity_defect = std::max(traj.max_hermiticity_defect, defect);
        traj.max_trace_error = std::max(traj.max_trace_error, trace_error);
        if (!(defect <= kHermiticitySlack)) {
            throw IntegrationError("Hermiticity defect " + format_number(defect) + " at t = " +
                                       format_number(t),
                                   t);
        }
        if (!(trace_error <= kTraceSlack)) {
            throw IntegrationError("trace drifted by " + format_number(trace_error) +
                                       " at t = " + format_number(t),
                                   t);
        }
        rho = hermitian_part(rho);
        record(t);
    }
    return traj;
}

FitResult fit_coherence(std::span<const double> times, std::span<const cplx> values) {
    if (times.size() != values.size()) throw DimensionError("times and values differ in length");
    if (values.empty() || std::abs(values.front()) < kSignalFloor) {
        throw FitError("no signal: initial coherence magnitude is below 1e-8");
    }
    std::vector<double> t;
    std::vector<double> log_mag;
    std::vector<double> phase;
    double previous_arg = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double mag = std::abs(values[k]);
        if (!(mag > kSignalFloor)) continue;
        const double arg = std::arg(values[k]);
        if (phase.empty()) {
            phase.push_back(arg);
        } else {
            phase.push_back(phase.back() + std::remainder(arg - previous_arg, 2.0 * std::numbers::pi));
        }
        previous_arg = arg;
        t.push_back(times[k]);
        log_mag.push_back(std::log(mag));
    }
    if (t.size() < 2) throw FitError("fewer than 2 samples above the signal floor");

    FitResult fit;
    fit.n_points = t.size();
    const double decay_slope = slope(t, log_mag);
    fit.gamma_hat = -decay_slope;
    fit.omega_hat = slope(t, phase);

    double mt = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        mt += t[k];
        my += log_mag[k];
    }
    mt /= static_cast<double>(t.size());
    my /= static_cast<double>(t.size());
    double ss = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double r = log_mag[k] - (my + decay_slope * (t[k] - mt));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(t.size()));
    // Exact exponentials fit to rounding; keep -0.0 out of reports.
    if (fit.gamma_hat == 0.0) fit.gamma_hat = 0.0;
    if (fit.omega_hat == 0.0) fit.omega_hat = 0.0;
    return fit;
}

FitResult fit_decay_rate(const Trajectory& traj, const BasisState& i, const BasisState& j) {
    if (i.qubits() != j.qubits()) throw DimensionError("basis states have different qubit counts");
    const auto values = traj.element(i.index(), j.index());
    if (!values) {
        throw ValidationError("element (" + i.label() + ", " + j.label() +
                              ") is not tracked by the trajectory");
    }
    return fit_coherence(traj.times, *values);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t n_qubits) {
    out << "t";
    for (const auto& e : traj.tracked) {
        const std::string tag =
            BasisState(n_qubits, e.i).label() + "_" + BasisState(n_qubits, e.j).label();
        out << ",re_rho_" << tag << ",im_rho_" << tag << ",abs_rho_" << tag;
    }
    out << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << format_number(traj.times[k]);
        for (const auto& e : traj.tracked) {
            const cplx v = e.values[k];
            out << ',' << format_number(v.real()) << ',' << format_number(v.imag()) << ','
                << format_number(std::abs(v));
        }
        out << '\n';
    }
}

}  // namespace dephaser
