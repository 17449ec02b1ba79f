// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "isac/metrics.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <random>

using namespace isac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("sidelobe ratios on a hand-computed cut")
{
    const std::vector<double> cut{1, 9, 1, 4, 1};
    const auto rep = sidelobe_metrics(cut, 1);
    CHECK(rep.mainlobe_lo == 0);
    CHECK(rep.mainlobe_hi == 2);
    CHECK_THAT(rep.pslr_db, WithinAbs(-3.5218251811, 1e-9));
    CHECK_THAT(rep.islr_db, WithinAbs(-3.4242268082, 1e-9));
}

TEST_CASE("a cut that is all mainlobe reports -inf")
{
    const std::vector<double> cut{1, 2, 5, 3, 1};
    const auto rep = sidelobe_metrics(cut, 2);
    CHECK(rep.pslr_db == minus_infinity_db);
    CHECK(rep.islr_db == minus_infinity_db);
}

TEST_CASE("sidelobe argument checks")
{
    const std::vector<double> cut{1, 9, 1, 4, 1};
    CHECK_THROWS_AS(sidelobe_metrics(cut, 3), std::invalid_argument);
    CHECK_THROWS_AS(sidelobe_metrics(cut, 5), std::invalid_argument);
    CHECK_THROWS_AS(sidelobe_metrics(std::vector<double>{1, 2}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sidelobe_metrics(std::vector<double>{0, 0, 0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sidelobe_metrics(std::vector<double>{-1, 2, 1}, 1), std::invalid_argument);
}

TEST_CASE("on-grid tone has the rectangular-window sidelobe structure")
{
    const std::size_t m = 64, l = 512;
    std::vector<Complex> tone(m);
    for (std::size_t i = 0; i < m; ++i)
        tone[i] = std::polar(1.0, two_pi * 24.0 * double(i) / double(l));
    const auto spec = oracle::direct_dft(tone, l, -1.0);
    std::vector<double> cut(l);
    for (std::size_t i = 0; i < l; ++i)
        cut[i] = std::norm(spec[i]);
    const auto peak = static_cast<std::size_t>(std::max_element(cut.begin(), cut.end()) - cut.begin());
    REQUIRE(peak == 24);
    const auto rep = sidelobe_metrics(cut, peak);
    CHECK(rep.mainlobe_lo == 16);
    CHECK(rep.mainlobe_hi == 32);
    CHECK_THAT(rep.pslr_db, WithinAbs(-13.3901, 1e-3));
    CHECK_THAT(rep.islr_db, WithinAbs(-9.6848, 1e-3));
}

TEST_CASE("sidelobe properties on random cuts")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> cut(3 + rng() % 30);
        for (auto& v : cut)
            v = u(rng);
        const auto peak = static_cast<std::size_t>(std::max_element(cut.begin(), cut.end()) - cut.begin());
        const auto rep = sidelobe_metrics(cut, peak);
        CHECK(rep.mainlobe_lo <= peak);
        CHECK(rep.mainlobe_hi >= peak);
        CHECK(rep.pslr_db <= 0.0);
        // Scaling the cut leaves both ratios unchanged.
        std::vector<double> scaled(cut);
        for (auto& v : scaled)
            v *= 37.0;
        const auto rep2 = sidelobe_metrics(scaled, peak);
        if (std::isfinite(rep.pslr_db)) {
            CHECK_THAT(rep2.pslr_db, WithinAbs(rep.pslr_db, 1e-9));
            CHECK_THAT(rep2.islr_db, WithinAbs(rep.islr_db, 1e-9));
        } else {
            CHECK(rep2.pslr_db == minus_infinity_db);
        }
    }
}

TEST_CASE("RMSE of range and velocity errors")
{
    const TargetScenario truth{5.0, 1.5};
    std::vector<SensingEstimate> est(4);
    est[0].range_m = 5.1;
    est[1].range_m = 4.9;
    est[2].range_m = 5.1;
    est[3].range_m = 4.9;
    for (auto& e : est)
        e.velocity_mps = 1.5;
    est[0].velocity_mps = 1.7;
    const auto r = rmse(est, truth);
    CHECK_THAT(r.range_m, WithinAbs(0.1, 1e-12));
    CHECK_THAT(r.velocity_mps, WithinAbs(0.1, 1e-12));
    CHECK_THROWS_AS(rmse(std::vector<SensingEstimate>{}, truth), std::invalid_argument);
}

TEST_CASE("CRB reference values and SNR scaling")
{
    const SystemConfig cfg;
    const auto b = crb(cfg, 20.0);
    CHECK_THAT(b.sigma_range_m, WithinRel(3.715340e-4, 1e-6));
    CHECK_THAT(b.sigma_velocity_mps, WithinRel(2.1073536e-3, 1e-6));
    const auto b30 = crb(cfg, 30.0);
    CHECK_THAT(b.sigma_range_m / b30.sigma_range_m, WithinRel(std::sqrt(10.0), 1e-12));
    CHECK_THAT(b.sigma_velocity_mps / b30.sigma_velocity_mps, WithinRel(std::sqrt(10.0), 1e-12));
    SystemConfig tiny = cfg;
    tiny.n_symbols = 1;
    CHECK_THROWS_AS(crb(tiny, 10.0), std::invalid_argument);
}

TEST_CASE("CRB is positive and strictly decreasing in SNR")
{
    const SystemConfig cfg;
    double prev_r = std::numeric_limits<double>::infinity();
    double prev_v = prev_r;
    for (double snr = -10.0; snr <= 40.0; snr += 2.5) {
        const auto b = crb(cfg, snr);
        CHECK(b.sigma_range_m > 0.0);
        CHECK(b.sigma_velocity_mps > 0.0);
        CHECK(b.sigma_range_m < prev_r);
        CHECK(b.sigma_velocity_mps < prev_v);
        prev_r = b.sigma_range_m;
        prev_v = b.sigma_velocity_mps;
    }
}
