#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace scmaofdm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Thrown on bad user-supplied values (wrong lengths, out-of-range parameters).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown on inconsistent configuration (e.g. channel delay exceeding the CP).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a special-function evaluation cannot reach its accuracy target.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace scmaofdm
