#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dephaser/lindblad.hpp"
#include "dephaser/register.hpp"

namespace dephaser {

// Largest admissible RK4 step is kStepBoundFactor / max(|H|_F, sum_m gamma_m |A_m|_F^2).
inline constexpr double kStepBoundFactor = 0.05;
// Coherence magnitudes at or below this are excluded from fits.
inline constexpr double kSignalFloor = 1e-8;
inline constexpr double kTraceSlack = 1e-6;
inline constexpr double kHermiticitySlack = 1e-8;

struct TrackedElement {
    std::size_t i = 0;
    std::size_t j = 0;
    std::vector<cplx> values;  // one per time sample
};

struct Trajectory {
    std::size_t dim = 0;
    std::vector<double> times;
    std::vector<TrackedElement> tracked;
    // populations[k * dim + i] = rho_ii at times[k]
    std::vector<double> populations;
    // Filled only when requested; one per time sample.
    std::vector<DensityMatrix> snapshots;
    double max_trace_error = 0.0;
    double max_hermiticity_defect = 0.0;

    double population(std::size_t sample, std::size_t i) const {
        return populations[sample * dim + i];
    }
    // Largest |rho_ii(t) - rho_ii(0)| over all samples and i.
    double max_population_drift() const;
    // Values of rho_ij over time, from tracked elements or snapshots.
    std::optional<std::vector<cplx>> element(std::size_t i, std::size_t j) const;
};

struct EvolveOptions {
    std::vector<std::pair<std::size_t, std::size_t>> track;
    bool keep_snapshots = false;
};

// max(|H|_F, sum_m gamma_m |A_m|_F^2); zero for a static problem.
double stiffness_scale(const ComplexMatrix& h, std::span<const Channel> channels);
// Fewest RK4 steps over [0, t_max] that satisfy the step bound (at least 1).
std::size_t min_stable_steps(const ComplexMatrix& h, std::span<const Channel> channels,
                             double t_max);

// Fixed-step classical RK4 on the master equation, re-Hermitizing after each
// step. Throws StabilityError if steps is below min_stable_steps, and
// IntegrationError when trace or Hermiticity drift past their slack.
Trajectory evolve(const ComplexMatrix& h, std::span<const Channel> channels,
                  const DensityMatrix& rho0, double t_max, std::size_t steps,
                  const EvolveOptions& options = {});

struct FitResult {
    double gamma_hat = 0.0;  // 1/time
    double omega_hat = 0.0;  // rad/time
    double residual = 0.0;   // RMS of the log-magnitude fit
    std::size_t n_points = 0;
};

// Least-squares decay rate and rotation frequency of one coherence element.
FitResult fit_decay_rate(const Trajectory& traj, const BasisState& i, const BasisState& j);
FitResult fit_coherence(std::span<const double> times, std::span<const cplx> values);

// CSV: t, then re_rho_<i>_<j>, im_rho_<i>_<j>, abs_rho_<i>_<j> per tracked
// element with bitstring labels; 12 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t n_qubits);

}  // namespace dephaser
