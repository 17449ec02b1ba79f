// SPDX-License-Identifier: Apache-2.0
//
// Brute-force delay/Doppler matched filter evaluated by direct summation.
// It shares no code with the FFT path and is used to cross-check it.

#ifndef ISAC_MATCHED_FILTER_HPP
#define ISAC_MATCHED_FILTER_HPP

#include "isac/common.hpp"
#include "isac/ofdm.hpp"
#include "isac/system.hpp"

#include <cmath>
#include <vector>

namespace isac {

struct MatchedFilterSearch {
    std::size_t range_points = 512;
    std::size_t velocity_points = 256;
    int refinement_levels = 4;
    std::size_t refinement_points = 21;
};

/// |sum_l sum_m g[l, m] exp(+j 2 pi l df tau) exp(-j 2 pi f_D T0 m)|^2
inline double matched_filter_power(const SymbolGrid& grid, const SystemConfig& cfg, double range_m,
                                   double velocity_mps)
{
    const double tau = 2.0 * range_m / speed_of_light;
    const double fd = 2.0 * velocity_mps * cfg.carrier_hz / speed_of_light;
    const double df = cfg.subcarrier_spacing();
    const double period = cfg.symbol_period();
    Complex acc{};
    for (std::size_t m = 0; m < grid.symbols(); ++m) {
        Complex inner{};
        for (std::size_t l = 0; l < grid.subcarriers(); ++l)
            inner += grid(l, m) * std::polar(1.0, two_pi * static_cast<double>(l) * df * tau);
        acc += inner * std::polar(1.0, -two_pi * fd * period * static_cast<double>(m));
    }
    return std::norm(acc);
}

struct MatchedFilterEstimate {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double power = 0.0;
};

/// Dense grid search over the unambiguous region followed by successively
/// finer local grids around the running maximum.
inline MatchedFilterEstimate brute_force_estimate(const SymbolGrid& grid, const SystemConfig& cfg,
                                                  const MatchedFilterSearch& search = {})
{
    const double range_span = speed_of_light / (2.0 * cfg.subcarrier_spacing());
    const double velocity_span = speed_of_light / (2.0 * cfg.carrier_hz * cfg.symbol_period());

    MatchedFilterEstimate best;
    best.power = -1.0;
    double range_step = range_span / static_cast<double>(search.range_points);
    double velocity_step = velocity_span / static_cast<double>(search.velocity_points);
    for (std::size_t i = 0; i < search.range_points; ++i) {
        for (std::size_t j = 0; j < search.velocity_points; ++j) {
            const double r = static_cast<double>(i) * range_step;
            const double v = -velocity_span / 2.0 + static_cast<double>(j) * velocity_step;
            const double p = matched_filter_power(grid, cfg, r, v);
            if (p > best.power)
                best = {r, v, p};
        }
    }

    const double half = static_cast<double>(search.refinement_points - 1) / 2.0;
    for (int level = 0; level < search.refinement_levels; ++level) {
        // New grid spans +/- one previous step around the incumbent.
        range_step /= half;
        velocity_step /= half;
        const auto centre = best;
        for (std::size_t i = 0; i < search.refinement_points; ++i) {
            for (std::size_t j = 0; j < search.refinement_points; ++j) {
                const double r = centre.range_m + (static_cast<double>(i) - half) * range_step;
                const double v = centre.velocity_mps + (static_cast<double>(j) - half) * velocity_step;
                const double p = matched_filter_power(grid, cfg, r, v);
                if (p > best.power)
                    best = {r, v, p};
            }
        }
    }
    return best;
}

} // namespace isac

#endif // ISAC_MATCHED_FILTER_HPP
