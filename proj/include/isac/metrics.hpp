// SPDX-License-Identifier: Apache-2.0
//
// Estimation error aggregates, velocity-domain sidelobe ratios and
// Cramer-Rao reference curves.

#ifndef ISAC_METRICS_HPP
#define ISAC_METRICS_HPP

#include "isac/channel.hpp"
#include "isac/common.hpp"
#include "isac/radar.hpp"
#include "isac/system.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace isac {

struct RmsePair {
    double range_m = 0.0;
    double velocity_mps = 0.0;
};

inline RmsePair rmse(std::span<const SensingEstimate> estimates, const TargetScenario& truth)
{
    if (estimates.empty())
        throw std::invalid_argument("rmse: no estimates");
    double sr = 0.0;
    double sv = 0.0;
    for (const auto& e : estimates) {
        const double dr = e.range_m - truth.range_m;
        const double dv = e.velocity_mps - truth.velocity_mps;
        sr += dr * dr;
        sv += dv * dv;
    }
    const double n = static_cast<double>(estimates.size());
    return {std::sqrt(sr / n), std::sqrt(sv / n)};
}

struct SidelobeReport {
    double pslr_db = minus_infinity_db;
    double islr_db = minus_infinity_db;
    std::size_t mainlobe_lo = 0; // inclusive
    std::size_t mainlobe_hi = 0; // inclusive
};

/// Null-to-null mainlobe around peak_index: walk outward while the cut keeps
/// descending. A mainlobe that reaches the end of the cut is truncated there.
/// PSLR = max sidelobe / peak and ISLR = sidelobe energy / mainlobe energy,
/// both in dB; a cut without sidelobe power reports -inf for both.
inline SidelobeReport sidelobe_metrics(std::span<const double> cut, std::size_t peak_index)
{
    if (cut.size() < 3)
        throw std::invalid_argument("sidelobe_metrics: cut must have at least 3 bins");
    if (peak_index >= cut.size())
        throw std::invalid_argument("sidelobe_metrics: peak index out of range");
    const double peak = cut[peak_index];
    if (!(peak > 0.0) || std::any_of(cut.begin(), cut.end(), [peak](double v) { return v > peak || v < 0.0; }))
        throw std::invalid_argument("sidelobe_metrics: peak index is not the global maximum of a non-negative cut");

    SidelobeReport rep;
    std::size_t lo = peak_index;
    while (lo > 0 && cut[lo - 1] < cut[lo])
        --lo;
    std::size_t hi = peak_index;
    while (hi + 1 < cut.size() && cut[hi + 1] < cut[hi])
        ++hi;
    rep.mainlobe_lo = lo;
    rep.mainlobe_hi = hi;

    double main_energy = 0.0;
    double side_energy = 0.0;
    double side_peak = 0.0;
    for (std::size_t i = 0; i < cut.size(); ++i) {
        if (i >= lo && i <= hi) {
            main_energy += cut[i];
        } else {
            side_energy += cut[i];
            side_peak = std::max(side_peak, cut[i]);
        }
    }
    rep.pslr_db = linear_to_db(side_peak / peak);
    rep.islr_db = linear_to_db(side_energy / main_energy);
    return rep;
}

struct CrbPoint {
    double snr_db = 0.0;
    double sigma_range_m = 0.0;
    double sigma_velocity_mps = 0.0;
};

/// Standard bounds for a 2D complex exponential in white noise with per-element
/// SNR gamma:
///   var(tau) = 6 / ((2 pi df)^2 gamma M N (N^2 - 1))
///   var(f_D) = 6 / ((2 pi T0)^2 gamma N M (M^2 - 1))
inline CrbPoint crb(const SystemConfig& cfg, double snr_db)
{
    if (cfg.n_subcarriers < 2 || cfg.n_symbols < 2)
        throw std::invalid_argument("crb: need at least two subcarriers and two symbols");
    const double gamma = db_to_linear(snr_db);
    const double n = static_cast<double>(cfg.n_subcarriers);
    const double m = static_cast<double>(cfg.n_symbols);
    const double w_tau = two_pi * cfg.subcarrier_spacing();
    const double w_fd = two_pi * cfg.symbol_period();
    const double var_tau = 6.0 / (w_tau * w_tau * gamma * m * n * (n * n - 1.0));
    const double var_fd = 6.0 / (w_fd * w_fd * gamma * n * m * (m * m - 1.0));
    return {snr_db, 0.5 * speed_of_light * std::sqrt(var_tau),
            speed_of_light / (2.0 * cfg.carrier_hz) * std::sqrt(var_fd)};
}

} // namespace isac

#endif // ISAC_METRICS_HPP
