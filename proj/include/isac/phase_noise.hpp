// SPDX-License-Identifier: Apache-2.0
//
// Oscillator phase-noise profiles and sample-path synthesis.
//
// A profile is a near-carrier plateau shaped by a cascade of poles plus a
// white floor:
//
//     S(f) = S_ref * prod_k 1 / (1 + (f / f_k)^order_k)  +  S_white
//
// in linear units, with dBc/Hz levels read directly as the one-sided PSD of
// phi in rad^2/Hz. A pole of order 1 followed by one of order 2 gives the
// plateau -> 1/f -> 1/f^3 shape.

#ifndef ISAC_PHASE_NOISE_HPP
#define ISAC_PHASE_NOISE_HPP

#include "isac/common.hpp"
#include "isac/fft.hpp"

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isac {

struct Pole {
    double corner_hz = 0.0;
    int order = 1;

    friend bool operator==(const Pole&, const Pole&) = default;
};

struct PhaseNoiseModel {
    std::string name;
    double ref_level_dbc = -70.0;    // plateau, dBc/Hz
    double white_floor_dbc = -150.0; // dBc/Hz
    std::vector<Pole> poles;

    void validate() const
    {
        if (!(ref_level_dbc > white_floor_dbc))
            throw std::invalid_argument("phase noise model '" + name + "': reference level must exceed the white floor");
        double previous = 0.0;
        for (const auto& p : poles) {
            if (!(p.corner_hz > previous))
                throw std::invalid_argument("phase noise model '" + name + "': corners must be positive and strictly increasing");
            if (p.order < 1)
                throw std::invalid_argument("phase noise model '" + name + "': pole orders must be >= 1");
            previous = p.corner_hz;
        }
    }

    friend bool operator==(const PhaseNoiseModel&, const PhaseNoiseModel&) = default;
};

enum class PhaseNoisePreset { tuned_130ghz, tgpp_70ghz };

inline std::string_view to_string(PhaseNoisePreset p)
{
    return p == PhaseNoisePreset::tuned_130ghz ? "tuned_130ghz" : "tgpp_70ghz";
}

inline PhaseNoisePreset parse_preset(std::string_view s)
{
    if (s == "tuned_130ghz")
        return PhaseNoisePreset::tuned_130ghz;
    if (s == "tgpp_70ghz")
        return PhaseNoisePreset::tgpp_70ghz;
    throw std::invalid_argument("unknown phase noise preset '" + std::string(s) + "'");
}

inline PhaseNoiseModel builtin_model(PhaseNoisePreset which)
{
    switch (which) {
    case PhaseNoisePreset::tuned_130ghz:
        return {"tuned_130ghz", -70.0, -150.0, {{1.1e4, 1}, {1.1e7, 2}}};
    case PhaseNoisePreset::tgpp_70ghz:
        return {"tgpp_70ghz", -39.5, -111.0, {{3.1e3, 1}, {3.96e5, 1}, {7.54e8, 1}}};
    }
    throw std::invalid_argument("unknown phase noise preset");
}

/// One-sided PSD in rad^2/Hz at offset f > 0.
inline double psd_linear(const PhaseNoiseModel& model, double f_hz)
{
    if (!(f_hz > 0.0))
        throw std::invalid_argument("psd: offset frequency must be positive");
    double s = db_to_linear(model.ref_level_dbc);
    for (const auto& p : model.poles)
        s /= 1.0 + std::pow(f_hz / p.corner_hz, p.order);
    return s + db_to_linear(model.white_floor_dbc);
}

/// One-sided PSD in dBc/Hz at offset f > 0.
inline double psd_eval(const PhaseNoiseModel& model, double f_hz)
{
    return 10.0 * std::log10(psd_linear(model, f_hz));
}

// Unwrapped phase sample path in radians.
struct PnSamplePath {
    std::vector<double> phi;
    double sample_rate = 0.0;
};

/// Frequency-domain coloring: independent circular Gaussian coefficients on
/// bins 1..L/2 scaled so that the path has the model's one-sided PSD,
/// Hermitian completion, zero DC, inverse DFT. Deterministic in seed.
inline PnSamplePath synthesize(const PhaseNoiseModel& model, std::size_t length, double sample_rate,
                               std::uint64_t seed)
{
    if (length < 2)
        throw std::invalid_argument("synthesize: path length must be at least 2");
    if (!(sample_rate > 0.0))
        throw std::invalid_argument("synthesize: sample rate must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double len = static_cast<double>(length);
    const std::size_t half = length / 2;
    std::vector<Complex> spectrum(length, Complex{});
    for (std::size_t k = 1; k <= half; ++k) {
        const double f = static_cast<double>(k) * sample_rate / len;
        const double power = psd_linear(model, f) * sample_rate * len; // E|X_k|^2 for a real bin
        const double a = gauss(rng);
        const double b = gauss(rng);
        if (2 * k == length) {
            // Nyquist bin is its own mirror and must stay real.
            spectrum[k] = Complex(std::sqrt(power) * a, 0.0);
        } else {
            // Half the one-sided power goes to each of the mirrored bins.
            spectrum[k] = Complex(a, b) * std::sqrt(power / 4.0);
            spectrum[length - k] = std::conj(spectrum[k]);
        }
    }

    fft::transform(spectrum, fft::Direction::inverse);

    PnSamplePath path;
    path.sample_rate = sample_rate;
    path.phi.resize(length);
    for (std::size_t n = 0; n < length; ++n)
        path.phi[n] = spectrum[n].real() / len;
    return path;
}

/// One differential weight per symbol: w_m = exp(j[phi[t_m - d] - phi[t_m]])
/// with t_m = m * symbol_stride + symbol_offset.
inline std::vector<Complex> symbol_cpe_weights(const PnSamplePath& path, std::size_t delay_samples,
                                               std::size_t symbol_stride, std::size_t symbol_offset,
                                               std::size_t n_symbols)
{
    std::vector<Complex> w(n_symbols);
    for (std::size_t m = 0; m < n_symbols; ++m) {
        const std::size_t t = m * symbol_stride + symbol_offset;
        if (t < delay_samples || t >= path.phi.size())
            throw std::invalid_argument("symbol_cpe_weights: symbol index " + std::to_string(m) +
                                        " falls outside the phase-noise path");
        w[m] = std::polar(1.0, path.phi[t - delay_samples] - path.phi[t]);
    }
    return w;
}

} // namespace isac

#endif // ISAC_PHASE_NOISE_HPP
