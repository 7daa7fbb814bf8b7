#include "dephaser/tolerances.hpp"

#include <cstdlib>
#include <string>

#include "dephaser/errors.hpp"

namespace dephaser {

void Tolerances::validate() const {
    if (!(atol_zero > 0.0) || !(atol_herm > 0.0) || !(rtol_rate > 0.0)) {
        throw ValidationError("tolerances must be strictly positive");
    }
}

Tolerances Tolerances::from_environment() {
    Tolerances tol;
    if (const char* env = std::getenv("DEPHASER_TOL"); env != nullptr && *env != '\0') {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(env, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || env[used] != '\0') {
            throw ValidationError(std::string("DEPHASER_TOL is not a number: ") + env);
        }
        tol.rtol_rate = value;
    }
    tol.validate();
    return tol;
}

}  // namespace dephaser
