// SPDX-License-Identifier: Apache-2.0
//
// 5G-style numerology and the range/velocity resolution formulas used to pick
// a subcarrier spacing. Everything here is a pure function.

#ifndef ISAC_NUMEROLOGY_HPP
#define ISAC_NUMEROLOGY_HPP

#include "isac/common.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace isac::numerology {

inline constexpr int max_mu = 7;

/// Subcarrier spacing 15 kHz * 2^mu for mu in [0, 7].
inline double subcarrier_spacing(int mu)
{
    if (mu < 0 || mu > max_mu)
        throw std::invalid_argument("numerology index mu must lie in [0, 7], got " + std::to_string(mu));
    return 15'000.0 * static_cast<double>(1u << mu);
}

/// Range resolution c / (2B).
inline double range_resolution(double bandwidth_hz)
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("range_resolution: bandwidth must be positive");
    return speed_of_light / (2.0 * bandwidth_hz);
}

/// Velocity resolution c * delta_f / (2 f_c M), i.e. lambda / (2 M T_s).
inline double velocity_resolution(double carrier_hz, double subcarrier_spacing_hz, double n_symbols)
{
    if (!(carrier_hz > 0.0) || !(subcarrier_spacing_hz > 0.0) || !(n_symbols > 0.0))
        throw std::invalid_argument("velocity_resolution: all arguments must be positive");
    return speed_of_light * subcarrier_spacing_hz / (2.0 * carrier_hz * n_symbols);
}

struct ResolutionRow {
    int mu = 0;
    double delta_f_hz = 0.0;
    std::size_t n_subcarriers = 0;
    double t_symbol_s = 0.0;
    double range_resolution_m = 0.0;
    double velocity_resolution_mps = 0.0;
};

enum class TableMode {
    fixed_bandwidth,  // N = floor(B / delta_f), range resolution from B
    fixed_subcarriers // B = N * delta_f
};

struct TradeoffOptions {
    TableMode mode = TableMode::fixed_bandwidth;
    double bandwidth_hz = 1.5e9;
    std::size_t n_subcarriers = 256;
    double carrier_hz = 130e9;
    std::size_t n_symbols = 64;
    // Integrate over N symbols per row instead of the fixed n_symbols.
    bool symbols_equal_subcarriers = false;
    // Round the symbol time to 10 ns (the printed precision of the T_s column)
    // before computing the velocity resolution.
    bool quantize_symbol_time = false;
};

/// Options that regenerate the published 1.5 GHz fixed-bandwidth table at 130 GHz.
inline TradeoffOptions published_fixed_bandwidth_table()
{
    TradeoffOptions opts;
    opts.mode = TableMode::fixed_bandwidth;
    opts.bandwidth_hz = 1.5e9;
    opts.carrier_hz = 130e9;
    opts.symbols_equal_subcarriers = true;
    opts.quantize_symbol_time = true;
    return opts;
}

inline std::vector<ResolutionRow> tradeoff_table(const TradeoffOptions& opts, std::span<const int> mus)
{
    if (mus.empty())
        throw std::invalid_argument("tradeoff_table: empty numerology list");
    if (opts.mode == TableMode::fixed_subcarriers && opts.n_subcarriers == 0)
        throw std::invalid_argument("tradeoff_table: n_subcarriers must be positive");
    if (!opts.symbols_equal_subcarriers && opts.n_symbols == 0)
        throw std::invalid_argument("tradeoff_table: n_symbols must be positive");

    std::vector<ResolutionRow> rows;
    rows.reserve(mus.size());
    for (int mu : mus) {
        ResolutionRow row;
        row.mu = mu;
        row.delta_f_hz = subcarrier_spacing(mu);
        row.t_symbol_s = 1.0 / row.delta_f_hz;

        double bandwidth = 0.0;
        if (opts.mode == TableMode::fixed_bandwidth) {
            if (opts.bandwidth_hz < row.delta_f_hz)
                throw std::invalid_argument("tradeoff_table: bandwidth smaller than subcarrier spacing");
            row.n_subcarriers = static_cast<std::size_t>(std::floor(opts.bandwidth_hz / row.delta_f_hz));
            bandwidth = opts.bandwidth_hz;
        } else {
            row.n_subcarriers = opts.n_subcarriers;
            bandwidth = static_cast<double>(opts.n_subcarriers) * row.delta_f_hz;
        }
        row.range_resolution_m = range_resolution(bandwidth);

        const double symbols =
            static_cast<double>(opts.symbols_equal_subcarriers ? row.n_subcarriers : opts.n_symbols);
        double spacing = row.delta_f_hz;
        if (opts.quantize_symbol_time)
            spacing = 1.0 / (std::round(row.t_symbol_s * 1e8) * 1e-8);
        row.velocity_resolution_mps = velocity_resolution(opts.carrier_hz, spacing, symbols);
        rows.push_back(row);
    }
    return rows;
}

} // namespace isac::numerology

#endif // ISAC_NUMEROLOGY_HPP
