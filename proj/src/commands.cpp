#include "dephaser/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "dephaser/errors.hpp"
#include "dephaser/presets.hpp"

namespace dephaser {

using nlohmann::json;

namespace {

constexpr cplx kI{0.0, 1.0};

std::string label(std::size_t n_qubits, std::size_t index) {
    return BasisState(n_qubits, index).label();
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

HamiltonianSpec diagonal_energies(const ComplexMatrix& h) {
    HamiltonianSpec spec;
    for (const cplx& e : h.diagonal_entries()) spec.energies.push_back(e.real());
    return spec;
}

CommandResult refuse(const char* command, const PreservationReport& preservation,
                     std::size_t n_qubits, const std::string& why) {
    CommandResult result;
    result.exit_code = kExitValidation;
    result.report = {{"command", command},
                     {"error", why},
                     {"preservation", to_json(preservation, n_qubits)}};
    return result;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_count(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<DiagonalChannel> random_diagonal_channels(std::mt19937_64& rng, std::size_t dim,
                                                      std::size_t count) {
    std::vector<DiagonalChannel> out;
    for (std::size_t m = 0; m < count; ++m) {
        std::vector<cplx> lam(dim);
        for (auto& l : lam) l = cplx(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        out.emplace_back(1.0 - uniform(rng, 0.0, 1.0), std::move(lam));
    }
    return out;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
    ComplexMatrix m(dim);
    for (auto& v : m.entries()) v = cplx(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    return hermitian_part(m);
}

DensityMatrix random_pure_density(std::mt19937_64& rng, std::size_t n_qubits) {
    std::vector<cplx> amps(register_dim(n_qubits));
    double norm = 0.0;
    for (auto& a : amps) {
        a = cplx(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        norm += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    return density_from_pure(StateVector(n_qubits, std::move(amps)));
}

}  // namespace

json to_json(const PreservationReport& r, std::size_t n_qubits) {
    json j;
    j["verdict"] = r.verdict;
    if (r.structural_witness) {
        const auto& w = *r.structural_witness;
        j["structural_witness"] = {{"operator", w.op},
                                   {"i", label(n_qubits, w.i)},
                                   {"j", label(n_qubits, w.j)},
                                   {"magnitude", w.magnitude}};
    } else {
        j["structural_witness"] = nullptr;
    }
    if (r.leakage_witness) {
        j["leakage_witness"] = {{"state", label(n_qubits, r.leakage_witness->state)},
                                {"rate", r.leakage_witness->rate}};
    } else {
        j["leakage_witness"] = nullptr;
    }
    return j;
}

json to_json(const BoundReport& r) {
    return {{"lhs", r.lhs}, {"link_rates", r.link_rates}, {"n", r.n},
            {"rhs", r.rhs}, {"tight", r.tight},           {"margin", r.margin}};
}

json to_json(const FitResult& r) {
    return {{"gamma_hat", r.gamma_hat},
            {"omega_hat", r.omega_hat},
            {"residual", r.residual},
            {"n_points", r.n_points}};
}

json to_json(const ChainBoundSummary& s) {
    json j = {{"trials", s.trials},
              {"bound_violations", s.bound_violations},
              {"tight", s.tight},
              {"equality", s.equality},
              {"disagreements", s.disagreements},
              {"equal_step_trials", s.equal_step_trials},
              {"spin_flip_trials", s.spin_flip_trials},
              {"worst_relative_margin", s.worst_relative_margin},
              {"ok", s.ok()}};
    j["first_failing_seed"] = s.first_failing_seed ? json(*s.first_failing_seed) : json(nullptr);
    return j;
}

json rate_table_json(const RateTable& t, std::size_t n_qubits) {
    json basis = json::array();
    json gamma = json::array();
    json delta = json::array();
    json omega = json::array();
    for (std::size_t i = 0; i < t.dim(); ++i) {
        basis.push_back(label(n_qubits, i));
        json g = json::array(), d = json::array(), w = json::array();
        for (std::size_t j = 0; j < t.dim(); ++j) {
            g.push_back(t.gamma(i, j));
            d.push_back(t.delta(i, j));
            w.push_back(t.omega(i, j));
        }
        gamma.push_back(std::move(g));
        delta.push_back(std::move(d));
        omega.push_back(std::move(w));
    }
    return {{"basis", basis}, {"gamma", gamma}, {"delta", delta}, {"omega", omega}};
}

std::string rate_table_csv(const RateTable& t, std::size_t n_qubits) {
    std::ostringstream out;
    out << "i,j,gamma,delta,omega\n";
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j) {
            out << label(n_qubits, i) << ',' << label(n_qubits, j) << ','
                << format_number(t.gamma(i, j)) << ',' << format_number(t.delta(i, j)) << ','
                << format_number(t.omega(i, j)) << '\n';
        }
    return out.str();
}

CommandResult cmd_rates(const Scenario& scenario, const Tolerances& tol) {
    const ResolvedScenario r = resolve(scenario, tol);
    const PreservationReport preservation =
        check_population_preserving(r.hamiltonian, r.channels, tol);
    if (!preservation.verdict) {
        return refuse("rates", preservation, r.n_qubits,
                      "scenario is not population preserving: the Hamiltonian and every "
                      "Lindblad operator must be diagonal in the product basis for closed-form "
                      "rates to apply");
    }
    const RateTable table =
        analytic_rates(diagonal_energies(r.hamiltonian), diagonal_channels(r.channels, tol));
    CommandResult result;
    result.report = {{"command", "rates"},
                     {"n_qubits", r.n_qubits},
                     {"preservation", to_json(preservation, r.n_qubits)},
                     {"rate_table", rate_table_json(table, r.n_qubits)}};
    result.files.push_back({"rates.csv", rate_table_csv(table, r.n_qubits)});
    result.files.push_back({"rates.json", result.report.dump(2) + "\n"});
    return result;
}

CommandResult cmd_evolve(const Scenario& scenario, const Tolerances& tol) {
    const ResolvedScenario r = resolve(scenario, tol);
    const PreservationReport preservation =
        check_population_preserving(r.hamiltonian, r.channels, tol);
    EvolveOptions options;
    options.track = r.track;
    const Trajectory traj = evolve(r.hamiltonian, r.channels, r.rho0, r.t_max, r.steps, options);

    std::optional<RateTable> table;
    if (preservation.verdict) {
        table = analytic_rates(diagonal_energies(r.hamiltonian), diagonal_channels(r.channels, tol));
    }

    CommandResult result;
    json fits = json::array();
    for (const auto& [i, j] : r.track) {
        json entry = {{"i", label(r.n_qubits, i)}, {"j", label(r.n_qubits, j)}};
        try {
            const FitResult fit =
                fit_decay_rate(traj, BasisState(r.n_qubits, i), BasisState(r.n_qubits, j));
            entry["fit"] = to_json(fit);
            if (table) {
                const double gamma = table->gamma(i, j);
                const double omega = table->omega(i, j);
                const double allowed = std::max(kFitAbsTol, kFitRelTol * gamma);
                const double gamma_error = std::abs(fit.gamma_hat - gamma);
                const double omega_error = std::abs(fit.omega_hat - omega);
                entry["analytic"] = {{"gamma", gamma}, {"omega", omega}};
                entry["gamma_abs_error"] = gamma_error;
                entry["omega_abs_error"] = omega_error;
                entry["tolerance"] = allowed;
                entry["agrees"] = gamma_error <= allowed && omega_error <= allowed;
            }
        } catch (const FitError& e) {
            entry["fit"] = nullptr;
            entry["error"] = e.what();
            result.exit_code = kExitValidation;
        }
        fits.push_back(std::move(entry));
    }

    result.report = {{"command", "evolve"},
                     {"n_qubits", r.n_qubits},
                     {"t_max", r.t_max},
                     {"steps", r.steps},
                     {"samples", traj.times.size()},
                     {"max_trace_error", traj.max_trace_error},
                     {"max_hermiticity_defect", traj.max_hermiticity_defect},
                     {"max_population_drift", traj.max_population_drift()},
                     {"fit_tolerance", {{"abs", kFitAbsTol}, {"rel", kFitRelTol}}},
                     {"fits", std::move(fits)},
                     {"preservation", to_json(preservation, r.n_qubits)}};
    if (table) result.report["rate_table"] = rate_table_json(*table, r.n_qubits);

    std::ostringstream csv;
    write_trajectory_csv(csv, traj, r.n_qubits);
    result.files.push_back({"trajectory.csv", csv.str()});
    result.files.push_back({"report.json", result.report.dump(2) + "\n"});
    return result;
}

std::pair<BasisState, BasisState> parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
        throw ValidationError("--pair expects two bitstrings separated by a comma, got '" + text +
                              "'");
    }
    BasisState a = BasisState::parse(text.substr(0, comma));
    BasisState b = BasisState::parse(text.substr(comma + 1));
    if (a.qubits() != b.qubits()) throw ValidationError("--pair bitstrings differ in length");
    return {a, b};
}

CommandResult cmd_bound(const Scenario& scenario, const BoundTarget& target,
                        const Tolerances& tol) {
    if (target.ghz == target.pair.has_value()) {
        throw ValidationError("bound needs exactly one of --ghz or --pair");
    }
    const ResolvedScenario r = resolve(scenario, tol);
    const PreservationReport preservation =
        check_population_preserving(r.hamiltonian, r.channels, tol);
    if (!preservation.verdict) {
        return refuse("bound", preservation, r.n_qubits,
                      "scenario is not population preserving; the chain bound needs diagonal "
                      "Lindblad operators and Hamiltonian");
    }
    const auto channels = diagonal_channels(r.channels, tol);
    const RateTable table = analytic_rates(diagonal_energies(r.hamiltonian), channels);

    std::optional<SpinFlipPath> path;
    if (target.ghz) {
        path = ghz_chain(r.n_qubits);
    } else {
        const auto& [from, to] = *target.pair;
        if (from.qubits() != r.n_qubits) {
            throw ValidationError("--pair bitstrings must have " + std::to_string(r.n_qubits) +
                                  " characters");
        }
        path = hamming_path(from, to);
    }
    const BoundReport report = chain_bound(table, *path, tol);
    const bool equality = equality_condition(channels, *path, tol);

    json labels = json::array();
    for (const auto& s : path->states()) labels.push_back(s.label());
    json bound = to_json(report);
    bound["path"] = labels;
    bound["equality_condition"] = equality;

    CommandResult result;
    result.report = {{"command", "bound"},
                     {"n_qubits", r.n_qubits},
                     {"target", target.ghz ? "ghz" : "pair"},
                     {"bound", bound},
                     {"preservation", to_json(preservation, r.n_qubits)}};
    const auto best =
        min_hamming_path_bound(channels, path->states().front(), path->states().back(), tol);
    if (best) {
        json alt = to_json(best->report);
        json alt_labels = json::array();
        for (const auto& s : best->path.states()) alt_labels.push_back(s.label());
        alt["path"] = alt_labels;
        alt["note"] = "implementation-defined: smallest rhs over all single-flip orderings";
        result.report["min_over_hamming_paths"] = alt;
    }
    result.files.push_back({"bound.json", result.report.dump(2) + "\n"});
    return result;
}

ClosedFormSummary verify_closed_form_random(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_qubits, std::size_t max_channels) {
    ClosedFormSummary summary;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = trial_seed(seed, trial);
        std::mt19937_64 rng(s);
        const std::size_t n = uniform_count(rng, 1, max_qubits);
        const std::size_t dim = register_dim(n);
        const auto channels = random_diagonal_channels(rng, dim, uniform_count(rng, 1, max_channels));
        HamiltonianSpec h;
        for (std::size_t i = 0; i < dim; ++i) h.energies.push_back(uniform(rng, -1.0, 1.0));
        const ComplexMatrix rho = random_hermitian(rng, dim);

        std::vector<Channel> matrices;
        for (const auto& ch : channels) matrices.push_back(ch.to_channel());
        const ComplexMatrix brute = dissipator_apply(matrices, rho);
        const RateTable table = analytic_rates(h, channels);

        double worst = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                const cplx closed = dissipator_element_closed_form(channels, i, j, rho(i, j));
                const cplx rates = (kI * table.delta(i, j) - table.gamma(i, j)) * rho(i, j);
                // Scale of the individual terms summed by either route.
                double scale = 0.0;
                for (const auto& ch : channels) {
                    scale += ch.gamma * (std::norm(ch.eigenvalues[i]) + std::norm(ch.eigenvalues[j]));
                }
                scale *= std::abs(rho(i, j));
                const double denom = std::max(std::abs(closed), scale);
                for (const double diff : {std::abs(brute(i, j) - closed), std::abs(closed - rates),
                                          std::abs(brute(i, j) - rates)}) {
                    const double rel = denom > 0.0 ? diff / denom : (diff == 0.0 ? 0.0 : INFINITY);
                    worst = std::max(worst, rel);
                }
            }
        ++summary.instances;
        summary.elements += dim * dim;
        summary.max_relative_error = std::max(summary.max_relative_error, worst);
        if (!(worst <= kOracleRelTol) && !summary.first_failing_seed) summary.first_failing_seed = s;
    }
    return summary;
}

PreservationSummary verify_preservation_random(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_qubits, double mutant_fraction,
                                       const Tolerances& tol) {
    PreservationSummary summary;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = trial_seed(seed ^ 0x5bd1e995ull, trial);
        std::mt19937_64 rng(s);
        const std::size_t n = uniform_count(rng, 1, max_qubits);
        const std::size_t dim = register_dim(n);
        std::vector<double> energies(dim);
        for (auto& e : energies) e = uniform(rng, -1.0, 1.0);
        ComplexMatrix h = HamiltonianSpec{energies}.matrix();
        std::vector<Channel> channels;
        for (const auto& d : random_diagonal_channels(rng, dim, uniform_count(rng, 1, 3)))
            channels.push_back(d.to_channel());

        const bool mutant = uniform(rng, 0.0, 1.0) < mutant_fraction;
        if (mutant) {
            const std::size_t i = uniform_count(rng, 0, dim - 1);
            std::size_t j = uniform_count(rng, 0, dim - 2);
            if (j >= i) ++j;
            const cplx value = std::polar(uniform(rng, 1e-3, 1.0), uniform(rng, 0.0, 2.0 * M_PI));
            const std::size_t target = uniform_count(rng, 0, channels.size());
            if (target == channels.size()) {
                h(i, j) = value;
                h(j, i) = std::conj(value);
            } else {
                channels[target].op(i, j) = value;
            }
            ++summary.mutants;
            const auto report = check_population_preserving(h, channels, tol);
            const bool detected = !report.verdict && report.leakage_witness &&
                                  report.leakage_witness->rate > 0.0;
            if (detected) {
                ++summary.mutants_detected;
            } else if (!summary.first_failing_seed) {
                summary.first_failing_seed = s;
            }
            continue;
        }

        ++summary.diagonal_instances;
        const auto report = check_population_preserving(h, channels, tol);
        const DensityMatrix rho = random_pure_density(rng, n);
        const ComplexMatrix derivative = rhs(h, channels, rho);
        double scale = frobenius_norm(h);
        for (const auto& ch : channels) scale += ch.gamma * std::pow(frobenius_norm(ch.op), 2);
        double worst = 0.0;
        for (std::size_t i = 0; i < dim; ++i) worst = std::max(worst, std::abs(derivative(i, i)));
        summary.max_population_derivative = std::max(summary.max_population_derivative, worst);
        if (report.verdict && worst <= 1e-12 * std::max(1.0, scale)) {
            ++summary.diagonal_confirmed;
        } else if (!summary.first_failing_seed) {
            summary.first_failing_seed = s;
        }
    }
    return summary;
}

CommandResult cmd_verify(const VerifyOptions& options, const Tolerances& tol) {
    const std::size_t oracle_qubits = std::clamp<std::size_t>(options.n_qubits, 1, 4);
    const auto t1 = verify_closed_form_random(options.trials, options.seed, oracle_qubits);
    const auto t2 = verify_preservation_random(options.trials, options.seed,
                                           std::min<std::size_t>(oracle_qubits, 3),
                                           options.mutant_fraction, tol);
    ChainBoundConfig config;
    config.n_qubits = options.n_qubits;
    config.trials = options.trials;
    config.seed = options.seed;
    const auto t3 = verify_chain_bound_random(config, tol);

    auto seed_json = [](const std::optional<std::uint64_t>& s) {
        return s ? json(*s) : json(nullptr);
    };
    CommandResult result;
    result.report = {
        {"command", "verify"},
        {"seed", options.seed},
        {"trials", options.trials},
        {"n_qubits", options.n_qubits},
        {"closed_form",
         {{"instances", t1.instances},
          {"elements", t1.elements},
          {"max_relative_error", t1.max_relative_error},
          {"tolerance", kOracleRelTol},
          {"ok", t1.ok()},
          {"first_failing_seed", seed_json(t1.first_failing_seed)}}},
        {"preservation",
         {{"diagonal_instances", t2.diagonal_instances},
          {"diagonal_confirmed", t2.diagonal_confirmed},
          {"mutants", t2.mutants},
          {"mutants_detected", t2.mutants_detected},
          {"max_population_derivative", t2.max_population_derivative},
          {"ok", t2.ok()},
          {"first_failing_seed", seed_json(t2.first_failing_seed)}}},
        {"chain_bound", to_json(t3)}};
    const bool ok = t1.ok() && t2.ok() && t3.ok();
    result.report["ok"] = ok;
    if (!ok) result.exit_code = kExitTheoremViolation;
    result.files.push_back({"verify.json", result.report.dump(2) + "\n"});
    return result;
}

CommandResult cmd_presets() {
    CommandResult result;
    json list = json::array();
    for (const auto& name : preset_names()) {
        json entry = {{"name", name}};
        if (name == "local_dephasing_n") {
            entry["rates"] = "n";
        } else {
            entry["rates"] = preset_arity(name, 2);
        }
        entry["qubits"] = (name == "local_dephasing_n" || name == "collective_linear_n") ? json("any")
                                                                                         : json(2);
        list.push_back(std::move(entry));
    }
    result.report = {{"command", "presets"}, {"presets", list}};
    return result;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace dephaser
