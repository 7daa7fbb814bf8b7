#pragma once

namespace dephaser {

// Numerical thresholds shared by every module.
struct Tolerances {
    double atol_zero = 1e-10;  // magnitude below which an entry counts as zero
    double atol_herm = 1e-10;  // max |M_ij - conj(M_ji)| for Hermitian inputs
    double rtol_rate = 1e-9;   // relative slack for rate comparisons

    // Throws ValidationError unless all fields are strictly positive.
    void validate() const;

    // Defaults, with rtol_rate taken from DEPHASER_TOL when set.
    static Tolerances from_environment();
};

}  // namespace dephaser
