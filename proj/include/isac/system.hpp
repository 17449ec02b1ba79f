// SPDX-License-Identifier: Apache-2.0
//
// System configuration shared by the channel, radar and metrics layers.

#ifndef ISAC_SYSTEM_HPP
#define ISAC_SYSTEM_HPP

#include "isac/common.hpp"
#include "isac/numerology.hpp"

#include <string>
#include <string_view>

namespace isac {

enum class Window { rect, hann };

// How detect_peak refines the integer argmax.
enum class PeakInterpolation {
    none,
    parabolic_linear, // 3-point parabola through the power samples
    parabolic_db      // 3-point parabola through the dB-scaled samples
};

inline std::string_view to_string(Window w) { return w == Window::rect ? "rect" : "hann"; }

inline Window parse_window(std::string_view s)
{
    if (s == "rect")
        return Window::rect;
    if (s == "hann")
        return Window::hann;
    throw std::invalid_argument("unknown window '" + std::string(s) + "' (expected rect or hann)");
}

inline std::string_view to_string(PeakInterpolation p)
{
    switch (p) {
    case PeakInterpolation::none: return "none";
    case PeakInterpolation::parabolic_linear: return "parabolic_linear";
    case PeakInterpolation::parabolic_db: return "parabolic_db";
    }
    return "?";
}

inline PeakInterpolation parse_interpolation(std::string_view s)
{
    if (s == "none")
        return PeakInterpolation::none;
    if (s == "parabolic_linear")
        return PeakInterpolation::parabolic_linear;
    if (s == "parabolic_db")
        return PeakInterpolation::parabolic_db;
    throw std::invalid_argument("unknown interpolation '" + std::string(s) + "'");
}

// Defaults reproduce the reference configuration: 130 GHz, mu = 5
// (480 kHz), N = 256, M = 64, N_cp = 64, 2048-point FFTs, f_s = 122.88 MHz.
struct SystemConfig {
    double carrier_hz = 130e9;
    int mu = 5;
    std::size_t n_subcarriers = 256;
    std::size_t n_symbols = 64;
    std::size_t n_cp = 64;
    std::size_t k_fft = 2048;
    std::size_t l_fft = 2048;
    Window window = Window::rect;
    PeakInterpolation interpolation = PeakInterpolation::parabolic_db;

    double subcarrier_spacing() const { return numerology::subcarrier_spacing(mu); }
    double sample_rate() const { return static_cast<double>(n_subcarriers) * subcarrier_spacing(); }
    double bandwidth() const { return sample_rate(); }
    // CP-free symbol duration 1/delta_f.
    double useful_symbol_time() const { return 1.0 / subcarrier_spacing(); }
    // Full symbol period including the cyclic prefix; Doppler phase accrues over this.
    double symbol_period() const { return static_cast<double>(n_subcarriers + n_cp) / sample_rate(); }
    double cp_duration() const { return static_cast<double>(n_cp) / sample_rate(); }
    std::size_t frame_length() const { return n_symbols * (n_subcarriers + n_cp); }

    void validate() const
    {
        if (!(carrier_hz > 0.0))
            throw std::invalid_argument("carrier frequency must be positive");
        (void)numerology::subcarrier_spacing(mu);
        if (n_subcarriers == 0 || n_symbols == 0)
            throw std::invalid_argument("grid dimensions must be positive");
        if (n_cp > n_subcarriers)
            throw std::invalid_argument("cyclic prefix longer than the symbol");
        if (!is_power_of_two(k_fft) || !is_power_of_two(l_fft))
            throw std::invalid_argument("FFT sizes must be powers of two");
        if (k_fft < n_subcarriers || l_fft < n_symbols)
            throw std::invalid_argument("FFT sizes must be at least the grid dimensions");
    }
};

} // namespace isac

#endif // ISAC_SYSTEM_HPP
