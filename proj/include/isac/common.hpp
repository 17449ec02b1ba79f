// SPDX-License-Identifier: Apache-2.0
//
// Shared constants, scalar aliases and error types.

#ifndef ISAC_COMMON_HPP
#define ISAC_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isac {

using Complex = std::complex<double>;

inline constexpr double speed_of_light = 299'792'458.0; // m/s
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Sentinel SNR meaning "do not add thermal noise".
inline constexpr double noise_free_snr = std::numeric_limits<double>::infinity();

// Sentinel for ratio metrics whose numerator is exactly zero.
inline constexpr double minus_infinity_db = -std::numeric_limits<double>::infinity();

// Raised when a scenario falls outside the validity region of the signal model,
// e.g. a round-trip delay longer than one OFDM symbol.
class ModelValidityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double value)
{
    return value > 0.0 ? 10.0 * std::log10(value) : minus_infinity_db;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace isac

#endif // ISAC_COMMON_HPP
