// SPDX-License-Identifier: Apache-2.0
//
// isac-sim subcommands. Exit codes: 0 success, 2 usage/config error, 3 I/O
// error, 1 anything unexpected.

#ifndef ISAC_TOOLS_COMMANDS_HPP
#define ISAC_TOOLS_COMMANDS_HPP

#include "isac/config.hpp"
#include "isac/experiment.hpp"
#include "isac/matched_filter.hpp"
#include "isac/numerology.hpp"
#include "isac/phase_noise.hpp"
#include "isac/report.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace isac::cli {

enum ExitCode : int { ok = 0, internal_error = 1, usage_error = 2, io_error = 3 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Writes to a file, or to `fallback` when path is empty or "-".
inline void write_output(const std::string& path, const std::string& content, std::ostream& fallback)
{
    if (path.empty() || path == "-") {
        fallback << content;
        fallback.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn)
{
    try {
        return fn();
    } catch (const config::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << "\n";
        return io_error;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return io_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const ModelValidityError& e) {
        err << "model validity error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    }
}

// Master seed precedence: explicit flag, then ISAC_SEED, then the config file.
inline std::optional<std::uint64_t> seed_from_environment()
{
    const char* env = std::getenv("ISAC_SEED");
    if (env == nullptr || *env == '\0')
        return std::nullopt;
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("ISAC_SEED must be an unsigned integer, got '" + std::string(s) + "'");
    return v;
}

inline config::ExperimentConfig load_or_default(const std::string& config_path)
{
    if (config_path.empty())
        return config::parse_experiment("", "<defaults>");
    return config::load_experiment(config_path);
}

struct SimulateArgs {
    std::string config_path;
    std::string out_path;
    std::string json_path;
    std::optional<std::size_t> trials;
    std::vector<double> snr_db;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

inline int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto ec = load_or_default(args.config_path);
        auto& spec = ec.sweep;
        if (args.trials)
            spec.trials = *args.trials;
        if (!args.snr_db.empty())
            spec.snr_list_db = args.snr_db;
        if (args.seed)
            spec.master_seed = *args.seed;
        else if (auto env = seed_from_environment())
            spec.master_seed = *env;
        if (args.threads)
            ec.threads = *args.threads;
        spec.validate();
        if (!delay_within_cyclic_prefix(spec.scenario, spec.cfg))
            err << "warning: round-trip delay exceeds the cyclic prefix; the echo model is outside its validity range\n";

        const SweepResult result = run_sweep(spec, ec.threads);

        std::ostringstream csv;
        report::write_sweep_csv(csv, ec, result);
        write_output(args.out_path, csv.str(), out);
        if (!args.json_path.empty())
            write_output(args.json_path, report::sweep_json(ec, result).dump(2) + "\n", out);
        return static_cast<int>(ok);
    });
}

struct NumerologyArgs {
    std::string mode = "fixed-bw";
    double bandwidth_hz = 1.5e9;
    std::size_t n_subcarriers = 256;
    double carrier_hz = 130e9;
    std::size_t m_symbols = 64;
    int mu_min = 4;
    int mu_max = 7;
    bool m_equals_n = false;
    bool quantize_symbol_time = false;
    bool published = false;
    std::string out_path;
};

inline int cmd_numerology(const NumerologyArgs& args, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        numerology::TradeoffOptions opts;
        if (args.published) {
            opts = numerology::published_fixed_bandwidth_table();
        } else {
            if (args.mode == "fixed-bw")
                opts.mode = numerology::TableMode::fixed_bandwidth;
            else if (args.mode == "fixed-n")
                opts.mode = numerology::TableMode::fixed_subcarriers;
            else
                throw std::invalid_argument("unknown mode '" + args.mode + "' (expected fixed-bw or fixed-n)");
            opts.bandwidth_hz = args.bandwidth_hz;
            opts.n_subcarriers = args.n_subcarriers;
            opts.carrier_hz = args.carrier_hz;
            opts.n_symbols = args.m_symbols;
            opts.symbols_equal_subcarriers = args.m_equals_n;
            opts.quantize_symbol_time = args.quantize_symbol_time;
        }
        if (args.mu_min > args.mu_max)
            throw std::invalid_argument("mu range is empty");
        std::vector<int> mus;
        for (int mu = args.mu_min; mu <= args.mu_max; ++mu)
            mus.push_back(mu);

        std::ostringstream csv;
        report::write_numerology_csv(csv, numerology::tradeoff_table(opts, mus));
        write_output(args.out_path, csv.str(), out);
        return static_cast<int>(ok);
    });
}

struct PsdArgs {
    std::string preset;
    std::string model_path;
    double f_min = 1.0;
    double f_max = 1e9;
    std::size_t points = 100;
    std::string out_path;
};

inline int cmd_psd(const PsdArgs& args, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (!args.preset.empty() && !args.model_path.empty())
            throw std::invalid_argument("give either --preset or --model, not both");
        const PhaseNoiseModel model = args.model_path.empty()
                                          ? builtin_model(parse_preset(args.preset.empty() ? "tuned_130ghz" : args.preset))
                                          : config::load_pn_model(args.model_path);
        if (!(args.f_min > 0.0) || !(args.f_max > args.f_min))
            throw std::invalid_argument("need 0 < f_min < f_max");
        if (args.points < 2)
            throw std::invalid_argument("need at least 2 points");

        std::ostringstream csv;
        csv << "# model = " << model.name << "\n";
        csv << "f_hz,psd_dbc_hz\n";
        const double ratio = args.f_max / args.f_min;
        for (std::size_t i = 0; i < args.points; ++i) {
            double f = args.f_min * std::pow(ratio, static_cast<double>(i) / static_cast<double>(args.points - 1));
            if (i == 0)
                f = args.f_min;
            if (i + 1 == args.points)
                f = args.f_max;
            csv << report::num(f) << ',' << report::num(psd_eval(model, f)) << "\n";
        }
        write_output(args.out_path, csv.str(), out);
        return static_cast<int>(ok);
    });
}

struct MapArgs {
    std::string config_path;
    double snr_db = noise_free_snr;
    bool pn = false;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::size_t radius = 0;
    bool oracle = false;
};

// Largest grid (N * M) the brute-force cross-check is run on.
inline constexpr std::size_t oracle_grid_limit = 4096;

inline int cmd_map(const MapArgs& args, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto ec = load_or_default(args.config_path);
        auto& spec = ec.sweep;
        if (args.seed)
            spec.master_seed = *args.seed;
        else if (auto env = seed_from_environment())
            spec.master_seed = *env;
        spec.snr_list_db = {args.snr_db};
        spec.validate();

        std::size_t variant = 0;
        if (args.pn) {
            if (spec.pn_variants.size() < 2)
                throw std::invalid_argument("--pn on requires a phase noise mode other than off in the config");
            variant = 1;
        }
        if (args.oracle && spec.cfg.n_subcarriers * spec.cfg.n_symbols > oracle_grid_limit)
            throw std::invalid_argument("--oracle is limited to grids with N*M <= " +
                                        std::to_string(oracle_grid_limit));

        const SymbolGrid grid = simulate_observation(spec, args.snr_db, variant, 0);
        const RangeDopplerMap map = range_doppler_map(grid, spec.cfg);
        const SensingEstimate est = detect_peak(map, spec.cfg);

        std::ostringstream csv;
        report::write_config_header(csv, ec);
        csv << "# map.snr_db = " << report::num(args.snr_db) << "\n";
        csv << "# map.pn = " << spec.pn_variants[variant].label << "\n";
        report::write_map_csv(csv, map, est, args.radius);
        write_output(args.out_path, csv.str(), out);

        if (args.oracle) {
            const auto mf = brute_force_estimate(grid, spec.cfg);
            double dr = std::abs(est.range_m - mf.range_m);
            dr = std::min(dr, map.unambiguous_range() - dr);
            double dv = std::abs(est.velocity_mps - mf.velocity_mps);
            dv = std::min(dv, map.velocity_span() - dv);
            err << "oracle: fft range_m=" << report::num(est.range_m) << " velocity_mps=" << report::num(est.velocity_mps)
                << " | matched filter range_m=" << report::num(mf.range_m)
                << " velocity_mps=" << report::num(mf.velocity_mps) << " | discrepancy range_bins="
                << report::num(dr / map.range_bin_m) << " velocity_bins=" << report::num(dv / map.velocity_bin_mps)
                << "\n";
        }
        return static_cast<int>(ok);
    });
}

} // namespace isac::cli

#endif // ISAC_TOOLS_COMMANDS_HPP
