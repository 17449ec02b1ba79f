// SPDX-License-Identifier: Apache-2.0
//
// FFT-based range-Doppler processing: reciprocal filtering against the known
// transmit grid, zero-padded 2D transform, peak search with sub-bin
// refinement and conversion from bins to physical units.

#ifndef ISAC_RADAR_HPP
#define ISAC_RADAR_HPP

#include "isac/common.hpp"
#include "isac/fft.hpp"
#include "isac/ofdm.hpp"
#include "isac/system.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace isac {

// K x L power map, range-major. Column l holds Doppler bin (l - doppler_center),
// so negative velocities sit in the left half.
struct RangeDopplerMap {
    std::size_t k_bins = 0;
    std::size_t l_bins = 0;
    std::size_t doppler_center = 0;
    double range_bin_m = 0.0;
    double velocity_bin_mps = 0.0;
    std::vector<double> power;

    double operator()(std::size_t k, std::size_t l) const { return power[k * l_bins + l]; }
    std::span<const double> doppler_row(std::size_t k) const { return {power.data() + k * l_bins, l_bins}; }

    double unambiguous_range() const { return range_bin_m * static_cast<double>(k_bins); }
    double velocity_span() const { return velocity_bin_mps * static_cast<double>(l_bins); }
    double total_energy() const
    {
        double e = 0.0;
        for (double p : power)
            e += p;
        return e;
    }
};

struct SensingEstimate {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double peak_power = 0.0;
    std::size_t peak_k = 0;
    std::size_t peak_l = 0;
    double frac_k = 0.0;
    double frac_l = 0.0;
};

/// Element-wise rx / tx.
inline SymbolGrid compensate(const SymbolGrid& rx, const SymbolGrid& tx)
{
    if (!rx.same_shape(tx))
        throw std::invalid_argument("compensate: grid shapes differ");
    SymbolGrid out(rx.subcarriers(), rx.symbols());
    auto o = out.data();
    const auto r = rx.data();
    const auto t = tx.data();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = r[i] / t[i];
    return out;
}

inline std::vector<double> window_taps(Window window, std::size_t n)
{
    std::vector<double> w(n, 1.0);
    if (window == Window::hann && n > 1)
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1));
    return w;
}

/// Zero-padded K x L transform of a compensated grid. The subcarrier axis uses
/// the inverse kernel so a delay ramp exp(-j 2 pi l df tau) peaks at
/// k = tau * K * df; the symbol axis uses the forward kernel so
/// exp(+j 2 pi f_D T0 m) peaks at f_D * T0 * L. Scaled by 1/sqrt(K L), which
/// makes the map energy equal to the windowed grid energy. `map` is reused as
/// output storage.
inline void range_doppler_map(const SymbolGrid& grid, const SystemConfig& cfg, RangeDopplerMap& map)
{
    const std::size_t n = grid.subcarriers();
    const std::size_t m = grid.symbols();
    const std::size_t k_fft = cfg.k_fft;
    const std::size_t l_fft = cfg.l_fft;
    if (!is_power_of_two(k_fft) || !is_power_of_two(l_fft))
        throw std::invalid_argument("range_doppler_map: FFT sizes must be powers of two");
    if (k_fft < n || l_fft < m)
        throw std::invalid_argument("range_doppler_map: FFT sizes must cover the grid");

    const auto w_range = window_taps(cfg.window, n);
    const auto w_doppler = window_taps(cfg.window, m);

    // Range transform per symbol, then transpose so each range bin's slow-time
    // samples are contiguous: stage[k][m].
    fft::AlignedVector column(k_fft);
    std::vector<Complex> stage(k_fft * m);
    const fft::Plan range_ifft(k_fft, fft::Direction::inverse, fft::Alignment::simd);
    for (std::size_t s = 0; s < m; ++s) {
        std::fill(column.begin(), column.end(), Complex{});
        const auto sym = grid.symbol(s);
        for (std::size_t l = 0; l < n; ++l)
            column[l] = sym[l] * (w_range[l] * w_doppler[s]);
        range_ifft.execute(column);
        for (std::size_t k = 0; k < k_fft; ++k)
            stage[k * m + s] = column[k];
    }

    map.k_bins = k_fft;
    map.l_bins = l_fft;
    map.doppler_center = l_fft / 2;
    map.range_bin_m = speed_of_light / (2.0 * static_cast<double>(k_fft) * cfg.subcarrier_spacing());
    map.velocity_bin_mps =
        speed_of_light / (2.0 * cfg.carrier_hz * static_cast<double>(l_fft) * cfg.symbol_period());
    map.power.resize(k_fft * l_fft);

    const double scale = 1.0 / (static_cast<double>(k_fft) * static_cast<double>(l_fft));
    const fft::Plan doppler_fft(l_fft, fft::Direction::forward, fft::Alignment::simd);
    fft::AlignedVector row(l_fft);
    const std::size_t half = l_fft / 2;
    for (std::size_t k = 0; k < k_fft; ++k) {
        std::copy_n(stage.begin() + static_cast<std::ptrdiff_t>(k * m), m, row.begin());
        std::fill(row.begin() + static_cast<std::ptrdiff_t>(m), row.end(), Complex{});
        doppler_fft.execute(row);
        // fftshift: Doppler bin b lands in column (b + L/2) mod L.
        double* out = map.power.data() + k * l_fft;
        for (std::size_t b = 0; b < half; ++b) {
            out[b + half] = std::norm(row[b]) * scale;
            out[b] = std::norm(row[b + half]) * scale;
        }
    }
}

inline RangeDopplerMap range_doppler_map(const SymbolGrid& grid, const SystemConfig& cfg)
{
    RangeDopplerMap map;
    range_doppler_map(grid, cfg, map);
    return map;
}

/// Vertex of the parabola through (-1, left), (0, centre), (1, right),
/// clamped to [-0.5, 0.5]. Returns 0 for a flat or non-concave triple.
inline double parabolic_vertex_offset(double left, double centre, double right)
{
    const double denom = left - 2.0 * centre + right;
    if (!(denom < 0.0) || !std::isfinite(denom))
        return 0.0;
    const double delta = 0.5 * (left - right) / denom;
    return std::clamp(delta, -0.5, 0.5);
}

namespace detail {

inline double refine(double left, double centre, double right, PeakInterpolation mode)
{
    switch (mode) {
    case PeakInterpolation::none:
        return 0.0;
    case PeakInterpolation::parabolic_db:
        if (left > 0.0 && centre > 0.0 && right > 0.0)
            return parabolic_vertex_offset(10.0 * std::log10(left), 10.0 * std::log10(centre),
                                           10.0 * std::log10(right));
        [[fallthrough]]; // log undefined, fall back to the linear parabola
    case PeakInterpolation::parabolic_linear:
        return parabolic_vertex_offset(left, centre, right);
    }
    return 0.0;
}

} // namespace detail

/// Maps (possibly fractional) map coordinates to range and velocity. l is a
/// column index of the centred Doppler axis. Range wraps into
/// [0, c / (2 df)) and velocity into [-span/2, span/2).
inline std::pair<double, double> bins_to_physical(double k, double l, const SystemConfig& cfg)
{
    const double k_fft = static_cast<double>(cfg.k_fft);
    const double l_fft = static_cast<double>(cfg.l_fft);
    const double range_bin = speed_of_light / (2.0 * k_fft * cfg.subcarrier_spacing());
    const double velocity_bin = speed_of_light / (2.0 * cfg.carrier_hz * l_fft * cfg.symbol_period());

    double kk = std::fmod(k, k_fft);
    if (kk < 0.0)
        kk += k_fft;
    double col = std::fmod(l, l_fft);
    if (col < 0.0)
        col += l_fft;
    const double lc = col - std::floor(l_fft / 2.0);
    return {kk * range_bin, lc * velocity_bin};
}

/// Global argmax (ties resolved toward smaller k, then smaller l), refined
/// independently along each axis with circular 3-point neighbourhoods.
inline SensingEstimate detect_peak(const RangeDopplerMap& map, const SystemConfig& cfg)
{
    if (map.power.empty())
        throw std::invalid_argument("detect_peak: empty map");

    std::size_t best = 0;
    double best_power = map.power[0];
    for (std::size_t i = 1; i < map.power.size(); ++i) {
        if (map.power[i] > best_power) {
            best_power = map.power[i];
            best = i;
        }
    }

    SensingEstimate est;
    est.peak_k = best / map.l_bins;
    est.peak_l = best % map.l_bins;
    est.peak_power = map.power[best];

    const std::size_t k = est.peak_k;
    const std::size_t l = est.peak_l;
    const std::size_t kp = (k + 1) % map.k_bins;
    const std::size_t km = (k + map.k_bins - 1) % map.k_bins;
    const std::size_t lp = (l + 1) % map.l_bins;
    const std::size_t lm = (l + map.l_bins - 1) % map.l_bins;

    const double centre = map(k, l);
    if (map.k_bins >= 3)
        est.frac_k = detail::refine(map(km, l), centre, map(kp, l), cfg.interpolation);
    if (map.l_bins >= 3)
        est.frac_l = detail::refine(map(k, lm), centre, map(k, lp), cfg.interpolation);

    const auto [range, velocity] = bins_to_physical(static_cast<double>(k) + est.frac_k,
                                                    static_cast<double>(l) + est.frac_l, cfg);
    est.range_m = range;
    est.velocity_mps = velocity;
    return est;
}

} // namespace isac

#endif // ISAC_RADAR_HPP
