// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "isac/config.hpp"
#include "isac/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace isac;
using namespace isac::config;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("empty text yields the defaults")
{
    const auto ec = parse_experiment("");
    CHECK(ec.sweep.cfg.carrier_hz == 130e9);
    CHECK(ec.sweep.trials == 200);
    CHECK(ec.sweep.snr_list_db.size() == 7);
    REQUIRE(ec.sweep.pn_variants.size() == 2);
    CHECK(ec.sweep.pn_variants[1].label == "tuned_130ghz");
    CHECK(ec.pn_source == "preset:tuned_130ghz");
}

TEST_CASE("full experiment file")
{
    const auto ec = parse_experiment(R"(
# comment
[system]
f_c_hz = 70e9          # inline comment
mu = 4
n_subcarriers = 128
m_symbols = 32
n_cp = 32
k_fft = 1024
l_fft = 256
window = "hann"
interpolation = "none"

[target]
range_m = 7.5
velocity_mps = -2
amplitude = 0.5

[sweep]
snr_db = [25, 30]
trials = 10
master_seed = 7
threads = 3

[phase_noise]
mode = "cpe_differential"
)");
    const auto& s = ec.sweep;
    CHECK(s.cfg.carrier_hz == 70e9);
    CHECK(s.cfg.mu == 4);
    CHECK(s.cfg.n_subcarriers == 128);
    CHECK(s.cfg.n_symbols == 32);
    CHECK(s.cfg.k_fft == 1024);
    CHECK(s.cfg.window == Window::hann);
    CHECK(s.cfg.interpolation == PeakInterpolation::none);
    CHECK(s.scenario.range_m == 7.5);
    CHECK(s.scenario.velocity_mps == -2.0);
    CHECK(s.snr_list_db == std::vector<double>{25.0, 30.0});
    CHECK(s.trials == 10);
    CHECK(s.master_seed == 7);
    CHECK(ec.threads == 3);
    CHECK(s.pn_mode == PhaseNoiseMode::cpe_differential);
    // Carrier below 100 GHz picks the 70 GHz profile.
    CHECK(s.pn_variants[1].label == "tgpp_70ghz");
}

TEST_CASE("phase noise off leaves a single variant")
{
    const auto ec = parse_experiment("[phase_noise]\nmode = \"off\"\n");
    CHECK(ec.sweep.pn_variants.size() == 1);
    CHECK(ec.pn_source == "off");
}

TEST_CASE("diagnostics carry the source and line")
{
    CHECK_THROWS_WITH(parse_experiment("[system]\n\nbogus = 1\n", "a.toml"),
                      ContainsSubstring("a.toml:3") && ContainsSubstring("bogus"));
    CHECK_THROWS_WITH(parse_experiment("[nope]\nx = 1\n", "a.toml"), ContainsSubstring("unknown section"));
    CHECK_THROWS_WITH(parse_experiment("[system]\nmu = \"five\"\n", "a.toml"), ContainsSubstring("a.toml:2"));
    CHECK_THROWS_WITH(parse_experiment("[system]\nmu = 9\n", "a.toml"), ContainsSubstring("mu must lie"));
    CHECK_THROWS_WITH(parse_experiment("[system]\nwindow = \"kaiser\"\n", "a.toml"), ContainsSubstring("kaiser"));
    CHECK_THROWS_AS(parse_experiment("[sweep]\ntrials = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("[sweep]\ntrials = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("[sweep]\nsnr_db = [1, 1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("[sweep]\nsnr_db = [1, \"x\"]\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("[target]\nrange_m = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("[system]\nk_fft = 1000\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("[phase_noise]\npreset = \"tuned_130ghz\"\nfile = \"x\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("[phase_noise]\npreset = \"nope\"\n"), ConfigError);
}

TEST_CASE("syntax errors")
{
    CHECK_THROWS_AS(parse("[system\n"), ConfigError);
    CHECK_THROWS_AS(parse("a = \n"), ConfigError);
    CHECK_THROWS_AS(parse("a = \"unterminated\n"), ConfigError);
    CHECK_THROWS_AS(parse("a = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("a = 1 2\n"), ConfigError);
    CHECK_NOTHROW(parse("a = -1.5e3\nb = [[1, 2], [3, 4]]\nc = \"x\"\n"));
}

TEST_CASE("phase noise model files")
{
    const auto m = parse_pn_model(R"(
name = "lab"
ref_level_dbc = -80
white_floor_dbc = -140
poles = [[1e4, 1], [1e6, 2]]
)");
    CHECK(m.name == "lab");
    CHECK(m.ref_level_dbc == -80.0);
    REQUIRE(m.poles.size() == 2);
    CHECK(m.poles[1] == Pole{1e6, 2});
    CHECK_THROWS_AS(parse_pn_model("poles = [[1e4, 1.5]]\n"), ConfigError);
    CHECK_THROWS_AS(parse_pn_model("poles = [[1e6, 1], [1e4, 1]]\n"), ConfigError);
    CHECK_THROWS_AS(parse_pn_model("poles = [1e4]\n"), ConfigError);
    CHECK_THROWS_AS(parse_pn_model("extra = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_pn_model("[section]\nx = 1\n"), ConfigError);
}

TEST_CASE("model file referenced relative to the experiment file")
{
    const auto dir = std::filesystem::temp_directory_path() / "isac_config_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "pn.toml") << "name = \"mine\"\npoles = [[2e4, 1]]\n";
    std::ofstream(dir / "exp.toml") << "[phase_noise]\nfile = \"pn.toml\"\n";
    const auto ec = load_experiment(dir / "exp.toml");
    CHECK(ec.sweep.pn_variants[1].label == "mine");
    CHECK(ec.pn_source == "file:pn.toml");
    CHECK_THROWS_AS(load_experiment(dir / "missing.toml"), std::ios_base::failure);
    std::filesystem::remove_all(dir);
}

TEST_CASE("report formatting")
{
    CHECK(report::num(0.1) == "0.1");
    CHECK(report::num(noise_free_snr) == "inf");
    CHECK(report::num(minus_infinity_db) == "-inf");

    std::ostringstream os;
    const std::vector<int> mus{5};
    report::write_numerology_csv(os, numerology::tradeoff_table(numerology::TradeoffOptions{}, mus));
    const auto text = os.str();
    CHECK(text.rfind(std::string(report::numerology_csv_header), 0) == 0);
    CHECK_THAT(text, ContainsSubstring("5,480000,3125,"));
}

TEST_CASE("sweep CSV has a self-describing header and one row per cell")
{
    auto ec = parse_experiment("[sweep]\nsnr_db = [20]\ntrials = 2\n");
    const auto result = run_sweep(ec.sweep, 1);
    std::ostringstream os;
    report::write_sweep_csv(os, ec, result);
    const auto text = os.str();
    CHECK(text.front() == '#');
    CHECK_THAT(text, ContainsSubstring(report::sweep_csv_header));
    CHECK_THAT(text, ContainsSubstring("\n20,off,1.3e+11,"));
    CHECK_THAT(text, ContainsSubstring("\n20,tuned_130ghz,"));
    const auto json = report::sweep_json(ec, result);
    CHECK(json["rows"].size() == 2);
}

TEST_CASE("shipped example configs load")
{
    const std::filesystem::path dir = ISAC_CONFIG_DIR;
    const auto def = load_experiment(dir / "default.toml");
    CHECK(def.sweep.cfg.sample_rate() == 122.88e6);
    CHECK(def.sweep.pn_variants[1].label == "tuned_130ghz");
    CHECK(load_experiment(dir / "70ghz.toml").sweep.pn_variants[1].label == "tgpp_70ghz");
    const auto custom = load_experiment(dir / "custom_pn.toml");
    CHECK(custom.sweep.pn_mode == PhaseNoiseMode::cpe_differential);
    CHECK(custom.sweep.pn_variants[1].label == "lab_oscillator");
}
