// SPDX-License-Identifier: Apache-2.0
//
// Monostatic point-target echo: delay phase ramp across subcarriers, Doppler
// progression across symbols, differential oscillator phase noise and AWGN.

#ifndef ISAC_CHANNEL_HPP
#define ISAC_CHANNEL_HPP

#include "isac/common.hpp"
#include "isac/ofdm.hpp"
#include "isac/phase_noise.hpp"
#include "isac/system.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <string_view>

namespace isac {

// Positive velocity means a closing target (positive Doppler).
struct TargetScenario {
    double range_m = 5.0;
    double velocity_mps = 1.5;
    double amplitude = 1.0;
    double rcs_dbsm = -20.0; // informational only

    double round_trip_delay() const { return 2.0 * range_m / speed_of_light; }
    double doppler_shift(double carrier_hz) const { return 2.0 * velocity_mps * carrier_hz / speed_of_light; }

    void validate() const
    {
        if (!(range_m >= 0.0))
            throw std::invalid_argument("target range must be non-negative");
        // Zero amplitude is accepted and yields an empty scene.
        if (!(amplitude >= 0.0))
            throw std::invalid_argument("target amplitude must be non-negative");
        if (!std::isfinite(velocity_mps))
            throw std::invalid_argument("target velocity must be finite");
    }
};

/// True when the echo delay is absorbed by the cyclic prefix.
inline bool delay_within_cyclic_prefix(const TargetScenario& scenario, const SystemConfig& cfg)
{
    return scenario.round_trip_delay() < cfg.cp_duration();
}

/// Round-trip delay rounded to whole samples at f_s.
inline std::size_t delay_samples(const TargetScenario& scenario, const SystemConfig& cfg)
{
    return static_cast<std::size_t>(std::llround(scenario.round_trip_delay() * cfg.sample_rate()));
}

enum class PhaseNoiseMode {
    off,
    cpe_differential, // one common rotation per symbol, applied on the grid
    per_sample        // sample-wise rotation of the time frame, produces ICI
};

inline std::string_view to_string(PhaseNoiseMode m)
{
    switch (m) {
    case PhaseNoiseMode::off: return "off";
    case PhaseNoiseMode::cpe_differential: return "cpe_differential";
    case PhaseNoiseMode::per_sample: return "per_sample";
    }
    return "?";
}

inline PhaseNoiseMode parse_pn_mode(std::string_view s)
{
    if (s == "off")
        return PhaseNoiseMode::off;
    if (s == "cpe_differential")
        return PhaseNoiseMode::cpe_differential;
    if (s == "per_sample")
        return PhaseNoiseMode::per_sample;
    throw std::invalid_argument("unknown phase noise mode '" + std::string(s) + "'");
}

struct ChannelConfig {
    double snr_db = noise_free_snr; // per resource element, after the DFT
    PhaseNoiseMode pn_mode = PhaseNoiseMode::per_sample;
    std::optional<PhaseNoiseModel> pn_model;
    std::uint64_t noise_seed = 0;
    std::uint64_t pn_seed = 0;
};

/// y = a * x * exp(-j 2 pi l df tau) * exp(j 2 pi f_D m T0), noise- and PN-free.
inline SymbolGrid apply_target(const SymbolGrid& tx, const TargetScenario& scenario, const SystemConfig& cfg)
{
    scenario.validate();
    const double tau = scenario.round_trip_delay();
    const double period = cfg.symbol_period();
    if (tau >= period)
        throw ModelValidityError("apply_target: round-trip delay exceeds the OFDM symbol period");

    const double df = cfg.subcarrier_spacing();
    const double fd = scenario.doppler_shift(cfg.carrier_hz);

    std::vector<Complex> range_ramp(tx.subcarriers());
    for (std::size_t l = 0; l < range_ramp.size(); ++l)
        range_ramp[l] = std::polar(scenario.amplitude, -two_pi * static_cast<double>(l) * df * tau);

    SymbolGrid rx(tx.subcarriers(), tx.symbols());
    for (std::size_t m = 0; m < tx.symbols(); ++m) {
        const Complex doppler = std::polar(1.0, two_pi * fd * static_cast<double>(m) * period);
        const auto in = tx.symbol(m);
        auto out = rx.symbol(m);
        for (std::size_t l = 0; l < in.size(); ++l)
            out[l] = in[l] * range_ramp[l] * doppler;
    }
    return rx;
}

/// Sample-wise differential rotation exp(j[phi[n-d] - phi[n]]). The path is
/// indexed with a d-sample lead, i.e. phi[n] = path.phi[n + d].
inline TimeFrame apply_phase_noise(TimeFrame frame, const PnSamplePath& path, std::size_t delay)
{
    if (path.phi.size() < frame.samples.size() + delay)
        throw std::invalid_argument("apply_phase_noise: phase-noise path shorter than frame plus delay");
    for (std::size_t n = 0; n < frame.samples.size(); ++n)
        frame.samples[n] *= std::polar(1.0, path.phi[n] - path.phi[n + delay]);
    return frame;
}

/// Common-phase-error variant: every subcarrier of symbol m is rotated by the
/// differential weight evaluated at the start of that symbol's DFT window.
inline SymbolGrid apply_phase_noise(SymbolGrid grid, const PnSamplePath& path, std::size_t delay,
                                    std::size_t n_cp)
{
    const std::size_t stride = grid.subcarriers() + n_cp;
    const auto w = symbol_cpe_weights(path, delay, stride, delay + n_cp, grid.symbols());
    for (std::size_t m = 0; m < grid.symbols(); ++m)
        for (auto& v : grid.symbol(m))
            v *= w[m];
    return grid;
}

namespace detail {

inline PnSamplePath frame_phase_noise(const TargetScenario& scenario, const SystemConfig& cfg,
                                      const ChannelConfig& ch)
{
    if (!ch.pn_model)
        throw std::invalid_argument("apply_phase_noise: no phase noise model configured");
    const std::size_t d = delay_samples(scenario, cfg);
    return synthesize(*ch.pn_model, cfg.frame_length() + d, cfg.sample_rate(), ch.pn_seed);
}

} // namespace detail

/// Grid-domain entry point; requires pn_mode == cpe_differential.
inline SymbolGrid apply_phase_noise(const SymbolGrid& grid, const TargetScenario& scenario,
                                    const SystemConfig& cfg, const ChannelConfig& ch)
{
    if (ch.pn_mode != PhaseNoiseMode::cpe_differential)
        throw std::invalid_argument("apply_phase_noise: a symbol grid requires pn_mode cpe_differential");
    const auto path = detail::frame_phase_noise(scenario, cfg, ch);
    return apply_phase_noise(grid, path, delay_samples(scenario, cfg), cfg.n_cp);
}

/// Time-domain entry point; requires pn_mode == per_sample.
inline TimeFrame apply_phase_noise(const TimeFrame& frame, const TargetScenario& scenario,
                                   const SystemConfig& cfg, const ChannelConfig& ch)
{
    if (ch.pn_mode != PhaseNoiseMode::per_sample)
        throw std::invalid_argument("apply_phase_noise: a time frame requires pn_mode per_sample");
    const auto path = detail::frame_phase_noise(scenario, cfg, ch);
    return apply_phase_noise(frame, path, delay_samples(scenario, cfg));
}

/// Adds CN(0, sigma^2) with sigma^2 = mean(|grid|^2) / 10^(snr/10). An
/// infinite SNR returns the grid unchanged.
inline SymbolGrid add_awgn(SymbolGrid grid, double snr_db, std::uint64_t seed)
{
    if (std::isinf(snr_db) && snr_db > 0.0)
        return grid;
    if (std::isnan(snr_db))
        throw std::invalid_argument("add_awgn: SNR is NaN");

    const double sigma2 = grid.mean_power() / db_to_linear(snr_db);
    const double sigma = std::sqrt(sigma2 / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : grid.data()) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v += Complex(re, im) * sigma;
    }
    return grid;
}

} // namespace isac

#endif // ISAC_CHANNEL_HPP
