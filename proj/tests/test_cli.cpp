// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "commands.hpp"

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace isac;
using namespace isac::cli;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace {

namespace fs = std::filesystem;

fs::path scratch()
{
    const auto dir = fs::temp_directory_path() / "isac_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args)
{
    const std::string cmd = std::string(ISAC_SIM_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("numerology command prints the published table")
{
    NumerologyArgs args;
    args.published = true;
    std::ostringstream out, err;
    REQUIRE(cmd_numerology(args, out, err) == ok);
    const auto text = out.str();
    CHECK_THAT(text, StartsWith(report::numerology_csv_header));
    CHECK_THAT(text, ContainsSubstring("\n4,240000,6250,"));
    CHECK_THAT(text, ContainsSubstring("\n7,1920000,781,"));
}

TEST_CASE("numerology command rejects bad input")
{
    NumerologyArgs args;
    args.mode = "sideways";
    std::ostringstream out, err;
    CHECK(cmd_numerology(args, out, err) == usage_error);
    args = {};
    args.mu_min = 6;
    args.mu_max = 5;
    CHECK(cmd_numerology(args, out, err) == usage_error);
}

TEST_CASE("psd command writes exact endpoints")
{
    PsdArgs args;
    args.f_min = 10.0;
    args.f_max = 1e8;
    args.points = 8;
    std::ostringstream out, err;
    REQUIRE(cmd_psd(args, out, err) == ok);
    const auto text = out.str();
    CHECK_THAT(text, ContainsSubstring("\n10,"));
    CHECK_THAT(text, ContainsSubstring("\n100000000,"));
    args.preset = "nope";
    CHECK(cmd_psd(args, out, err) == usage_error);
    args.preset = "";
    args.f_min = 0.0;
    CHECK(cmd_psd(args, out, err) == usage_error);
}

TEST_CASE("map command with oracle on a small grid")
{
    const auto dir = scratch();
    std::ofstream(dir / "small.toml") << "[system]\nn_subcarriers = 16\nm_symbols = 8\nn_cp = 4\nk_fft = 64\nl_fft = 32\n";
    MapArgs args;
    args.config_path = (dir / "small.toml").string();
    args.oracle = true;
    args.radius = 2;
    std::ostringstream out, err;
    REQUIRE(cmd_map(args, out, err) == ok);
    CHECK_THAT(out.str(), ContainsSubstring("k,l,power_db"));
    CHECK_THAT(err.str(), ContainsSubstring("oracle:"));

    args.config_path.clear();
    CHECK(cmd_map(args, out, err) == usage_error); // default grid is over the oracle limit
}

TEST_CASE("simulate writes CSV and JSON")
{
    const auto dir = scratch();
    SimulateArgs args;
    args.trials = 2;
    args.snr_db = {20.0};
    args.out_path = (dir / "out.csv").string();
    args.json_path = (dir / "out.json").string();
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(args, out, err) == ok);
    CHECK_THAT(slurp(dir / "out.csv"), ContainsSubstring(report::sweep_csv_header));
    CHECK_THAT(slurp(dir / "out.json"), ContainsSubstring("\"rows\""));
}

TEST_CASE("simulate warns when the echo leaves the cyclic prefix")
{
    const auto dir = scratch();
    std::ofstream(dir / "far.toml") << "[target]\nrange_m = 100\n[sweep]\ntrials = 1\nsnr_db = [10]\n";
    SimulateArgs args;
    args.config_path = (dir / "far.toml").string();
    args.out_path = (dir / "far.csv").string();
    std::ostringstream out, err;
    CHECK(cmd_simulate(args, out, err) == ok);
    CHECK_THAT(err.str(), ContainsSubstring("warning"));
}

TEST_CASE("exit codes from the binary")
{
    const auto dir = scratch();
    CHECK(run("numerology --published") == 0);
    CHECK(run("--bogus-flag") == 2);
    CHECK(run("") == 2);
    CHECK(run("simulate --config " + (dir / "does_not_exist.toml").string()) == 3);
    std::ofstream(dir / "bad.toml") << "[system]\nmu = 42\n";
    CHECK(run("simulate --config " + (dir / "bad.toml").string()) == 2);
    CHECK(run("numerology -o " + (dir / "no_such_dir" / "x.csv").string()) == 3);
    CHECK(run("psd --preset tgpp_70ghz --points 5") == 0);
}

TEST_CASE("simulate output is byte-identical across runs and thread counts")
{
    const auto dir = scratch();
    const std::string common = "simulate --trials 3 --snr 10 --snr 30 --seed 5 ";
    REQUIRE(run(common + "--threads 1 -o " + (dir / "a.csv").string()) == 0);
    REQUIRE(run(common + "--threads 4 -o " + (dir / "b.csv").string()) == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK_FALSE(slurp(dir / "a.csv").empty());
}

TEST_CASE("seed precedence: flag over ISAC_SEED")
{
    ::setenv("ISAC_SEED", "17", 1);
    CHECK(seed_from_environment() == std::optional<std::uint64_t>{17});
    ::setenv("ISAC_SEED", "abc", 1);
    CHECK_THROWS_AS(seed_from_environment(), std::invalid_argument);
    SimulateArgs args;
    args.trials = 1;
    args.snr_db = {10.0};
    args.seed = 3;
    std::ostringstream out, err;
    CHECK(cmd_simulate(args, out, err) == ok); // the flag wins, bad env is never read
    ::unsetenv("ISAC_SEED");
    CHECK_FALSE(seed_from_environment().has_value());
}
