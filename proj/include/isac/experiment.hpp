// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo harness: SNR sweeps over phase-noise variants with hashed
// per-trial seeding, so every trial is reproducible on its own and results do
// not depend on execution order or thread count.

#ifndef ISAC_EXPERIMENT_HPP
#define ISAC_EXPERIMENT_HPP

#include "isac/channel.hpp"
#include "isac/metrics.hpp"
#include "isac/ofdm.hpp"
#include "isac/phase_noise.hpp"
#include "isac/radar.hpp"
#include "isac/system.hpp"

#include <atomic>
#include <bit>
#include <exception>
#include <initializer_list>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace isac {

struct PnVariant {
    std::string label;                   // "off" or the model name
    std::optional<PhaseNoiseModel> model; // empty means phase noise disabled
};

inline PnVariant pn_off() { return {"off", std::nullopt}; }
inline PnVariant pn_with(PhaseNoiseModel model)
{
    auto label = model.name.empty() ? std::string("custom") : model.name;
    return {std::move(label), std::move(model)};
}

struct SweepSpec {
    SystemConfig cfg;
    TargetScenario scenario;
    std::vector<double> snr_list_db = {0, 5, 10, 15, 20, 25, 30};
    std::size_t trials = 200;
    std::vector<PnVariant> pn_variants = {pn_off(), pn_with(builtin_model(PhaseNoisePreset::tuned_130ghz))};
    PhaseNoiseMode pn_mode = PhaseNoiseMode::per_sample;
    std::uint64_t master_seed = 1;

    void validate() const
    {
        cfg.validate();
        scenario.validate();
        if (trials < 1)
            throw std::invalid_argument("sweep: trials must be >= 1");
        if (snr_list_db.empty())
            throw std::invalid_argument("sweep: SNR list is empty");
        for (std::size_t i = 0; i < snr_list_db.size(); ++i) {
            if (std::isnan(snr_list_db[i]))
                throw std::invalid_argument("sweep: SNR is NaN");
            for (std::size_t j = 0; j < i; ++j)
                if (snr_list_db[i] == snr_list_db[j])
                    throw std::invalid_argument("sweep: duplicate SNR value");
        }
        if (pn_variants.empty())
            throw std::invalid_argument("sweep: no phase noise variants");
        for (const auto& v : pn_variants)
            if (v.model)
                v.model->validate();
    }
};

enum class Stream : std::uint64_t { data = 0x64617461, noise = 0x6e6f6973, phase_noise = 0x706e6f69 };

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto p : parts)
        h = detail::splitmix64(h ^ detail::splitmix64(p));
    return h;
}

// Seeds are keyed by the SNR value rather than its list position so that
// reordering the SNR list leaves every cell unchanged. Data and thermal noise
// are shared between phase-noise variants of the same (SNR, trial) cell, which
// makes PN-on/PN-off rows paired comparisons.
struct TrialSeeds {
    std::uint64_t data;
    std::uint64_t noise;
    std::uint64_t phase_noise;
};

inline TrialSeeds trial_seeds(std::uint64_t master, double snr_db, std::size_t variant, std::size_t trial)
{
    const auto snr_key = std::bit_cast<std::uint64_t>(snr_db == 0.0 ? 0.0 : snr_db);
    return {derive_seed({master, snr_key, trial, static_cast<std::uint64_t>(Stream::data)}),
            derive_seed({master, snr_key, trial, static_cast<std::uint64_t>(Stream::noise)}),
            derive_seed({master, snr_key, variant, trial, static_cast<std::uint64_t>(Stream::phase_noise)})};
}

struct TrialOutcome {
    SensingEstimate estimate;
    SidelobeReport sidelobes;
};

/// Received, compensated grid for one trial (the input of the 2D transform).
inline SymbolGrid simulate_observation(const SweepSpec& spec, double snr_db, std::size_t variant,
                                       std::size_t trial)
{
    const auto seeds = trial_seeds(spec.master_seed, snr_db, variant, trial);
    const auto& cfg = spec.cfg;
    const auto& pn = spec.pn_variants.at(variant);

    const SymbolGrid tx = generate_qam16(cfg.n_subcarriers, cfg.n_symbols, seeds.data);
    SymbolGrid rx = apply_target(tx, spec.scenario, cfg);

    if (pn.model && spec.pn_mode != PhaseNoiseMode::off) {
        ChannelConfig ch;
        ch.pn_mode = spec.pn_mode;
        ch.pn_model = pn.model;
        ch.pn_seed = seeds.phase_noise;
        if (spec.pn_mode == PhaseNoiseMode::per_sample) {
            const TimeFrame frame = modulate(rx, cfg.n_cp, cfg.subcarrier_spacing());
            rx = demodulate(apply_phase_noise(frame, spec.scenario, cfg, ch), cfg.n_subcarriers, cfg.n_symbols);
        } else {
            rx = apply_phase_noise(rx, spec.scenario, cfg, ch);
        }
    }

    rx = add_awgn(std::move(rx), snr_db, seeds.noise);
    return compensate(rx, tx);
}

/// Velocity cut through the detected range bin.
inline TrialOutcome process_observation(const SymbolGrid& compensated, const SystemConfig& cfg)
{
    thread_local RangeDopplerMap map;
    range_doppler_map(compensated, cfg, map);
    TrialOutcome out;
    out.estimate = detect_peak(map, cfg);
    out.sidelobes = sidelobe_metrics(map.doppler_row(out.estimate.peak_k), out.estimate.peak_l);
    return out;
}

inline TrialOutcome run_trial(const SweepSpec& spec, double snr_db, std::size_t variant, std::size_t trial)
{
    return process_observation(simulate_observation(spec, snr_db, variant, trial), spec.cfg);
}

struct SweepRow {
    double snr_db = 0.0;
    std::string pn;
    double fc_hz = 0.0;
    double rmse_range_m = 0.0;
    double rmse_velocity_mps = 0.0;
    double mean_pslr_db = 0.0;
    double mean_islr_db = 0.0;
    double crb_range_m = 0.0;
    double crb_velocity_mps = 0.0;
    std::size_t trials = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;                   // SNR-major, variants in spec order
    std::vector<std::vector<TrialOutcome>> trials; // parallel to rows, indexed by trial
};

inline SweepRow aggregate(const SweepSpec& spec, double snr_db, std::size_t variant,
                          std::span<const TrialOutcome> outcomes)
{
    std::vector<SensingEstimate> est;
    est.reserve(outcomes.size());
    double pslr = 0.0;
    double islr = 0.0;
    for (const auto& o : outcomes) {
        est.push_back(o.estimate);
        pslr += o.sidelobes.pslr_db;
        islr += o.sidelobes.islr_db;
    }
    const auto err = rmse(est, spec.scenario);
    const auto bound = crb(spec.cfg, snr_db);
    const double n = static_cast<double>(outcomes.size());

    SweepRow row;
    row.snr_db = snr_db;
    row.pn = spec.pn_variants[variant].label;
    row.fc_hz = spec.cfg.carrier_hz;
    row.rmse_range_m = err.range_m;
    row.rmse_velocity_mps = err.velocity_mps;
    row.mean_pslr_db = pslr / n;
    row.mean_islr_db = islr / n;
    row.crb_range_m = bound.sigma_range_m;
    row.crb_velocity_mps = bound.sigma_velocity_mps;
    row.trials = outcomes.size();
    return row;
}

/// Runs every (SNR, variant, trial) cell on `threads` workers (0 = hardware
/// concurrency) and aggregates in a fixed order.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0)
{
    spec.validate();
    const std::size_t n_rows = spec.snr_list_db.size() * spec.pn_variants.size();
    const std::size_t n_cells = n_rows * spec.trials;

    SweepResult result;
    result.trials.assign(n_rows, std::vector<TrialOutcome>(spec.trials));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= n_cells || failed.load())
                return;
            const std::size_t row = cell / spec.trials;
            const std::size_t trial = cell % spec.trials;
            const std::size_t snr_index = row / spec.pn_variants.size();
            const std::size_t variant = row % spec.pn_variants.size();
            const double snr = spec.snr_list_db[snr_index];
            try {
                result.trials[row][trial] = run_trial(spec, snr, variant, trial);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (!failed.exchange(true))
                    error = std::make_exception_ptr(std::runtime_error(
                        "sweep cell snr_db=" + std::to_string(snr) + " pn=" + spec.pn_variants[variant].label +
                        " trial=" + std::to_string(trial) + " failed: " + e.what()));
            }
        }
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_cells));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);

    result.rows.reserve(n_rows);
    for (std::size_t row = 0; row < n_rows; ++row) {
        const std::size_t snr_index = row / spec.pn_variants.size();
        const std::size_t variant = row % spec.pn_variants.size();
        result.rows.push_back(aggregate(spec, spec.snr_list_db[snr_index], variant, result.trials[row]));
    }
    return result;
}

} // namespace isac

#endif // ISAC_EXPERIMENT_HPP
