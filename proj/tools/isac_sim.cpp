// SPDX-License-Identifier: Apache-2.0
//
// isac-sim: OFDM radar phase-noise simulator command line.

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace isac::cli;

    CLI::App app{"Monostatic OFDM ISAC simulator with oscillator phase noise"};
    app.set_version_flag("--version", ISAC_VERSION);
    app.require_subcommand(1);

    SimulateArgs sim;
    std::size_t sim_trials = 0;
    std::uint64_t sim_seed = 0;
    unsigned sim_threads = 0;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo SNR sweep and write the result CSV");
    simulate->add_option("-c,--config", sim.config_path, "Experiment config file (defaults apply when omitted)");
    simulate->add_option("-o,--out", sim.out_path, "Output CSV path ('-' for stdout)");
    simulate->add_option("--json", sim.json_path, "Also write a JSON mirror of the rows");
    auto* trials_opt = simulate->add_option("--trials", sim_trials, "Override trials per point")->check(CLI::PositiveNumber);
    simulate->add_option("--snr", sim.snr_db, "Override the SNR list (dB)");
    auto* seed_opt = simulate->add_option("--seed", sim_seed, "Override the master seed (takes precedence over ISAC_SEED)");
    auto* threads_opt = simulate->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");

    NumerologyArgs num;
    auto* numerology = app.add_subcommand("numerology", "Print the numerology / resolution trade-off table");
    numerology->add_option("--mode", num.mode, "fixed-bw or fixed-n");
    numerology->add_option("--bandwidth", num.bandwidth_hz, "Bandwidth in Hz (fixed-bw)");
    numerology->add_option("-n,--subcarriers", num.n_subcarriers, "Subcarrier count (fixed-n)");
    numerology->add_option("--fc", num.carrier_hz, "Carrier frequency in Hz");
    numerology->add_option("-m,--symbols", num.m_symbols, "Symbols per frame");
    numerology->add_option("--mu-min", num.mu_min, "Smallest numerology index");
    numerology->add_option("--mu-max", num.mu_max, "Largest numerology index");
    numerology->add_flag("--m-equals-n", num.m_equals_n, "Integrate over N symbols per row");
    numerology->add_flag("--quantize-ts", num.quantize_symbol_time, "Round T_s to 10 ns before computing velocity resolution");
    numerology->add_flag("--published", num.published, "Regenerate the published 1.5 GHz / 130 GHz table");
    numerology->add_option("-o,--out", num.out_path, "Output CSV path");

    PsdArgs psd;
    auto* psd_cmd = app.add_subcommand("psd", "Dump a phase-noise PSD on a log-spaced grid");
    psd_cmd->add_option("--preset", psd.preset, "tuned_130ghz or tgpp_70ghz");
    psd_cmd->add_option("--model", psd.model_path, "Phase noise model file");
    psd_cmd->add_option("--f-min", psd.f_min, "Lowest offset frequency (Hz)");
    psd_cmd->add_option("--f-max", psd.f_max, "Highest offset frequency (Hz)");
    psd_cmd->add_option("--points", psd.points, "Number of points");
    psd_cmd->add_option("-o,--out", psd.out_path, "Output CSV path");

    MapArgs map;
    std::string map_pn = "off";
    std::uint64_t map_seed = 0;
    auto* map_cmd = app.add_subcommand("map", "Dump one trial's range-Doppler map");
    map_cmd->add_option("-c,--config", map.config_path, "Experiment config file");
    map_cmd->add_option("--snr", map.snr_db, "SNR in dB (default: noise free)");
    map_cmd->add_option("--pn", map_pn, "on or off")->check(CLI::IsMember({"on", "off"}));
    auto* map_seed_opt = map_cmd->add_option("--seed", map_seed, "Master seed for the trial");
    map_cmd->add_option("--radius", map.radius, "Only dump bins within this radius of the peak (0 = all)");
    map_cmd->add_flag("--oracle", map.oracle, "Cross-check against a brute-force matched filter (small grids)");
    map_cmd->add_option("-o,--out", map.out_path, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage_error;
    }

    if (*simulate) {
        if (*trials_opt)
            sim.trials = sim_trials;
        if (*seed_opt)
            sim.seed = sim_seed;
        if (*threads_opt)
            sim.threads = sim_threads;
        return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*numerology)
        return cmd_numerology(num, std::cout, std::cerr);
    if (*psd_cmd)
        return cmd_psd(psd, std::cout, std::cerr);
    if (*map_cmd) {
        map.pn = map_pn == "on";
        if (*map_seed_opt)
            map.seed = map_seed;
        return cmd_map(map, std::cout, std::cerr);
    }
    return usage_error;
}
