// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "isac/ofdm.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <set>

using namespace isac;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace

TEST_CASE("16-QAM grid uses the 16 unit-energy Gray points")
{
    const auto grid = generate_qam16(256, 64, 7);
    std::set<std::pair<double, double>> points;
    for (const auto& v : grid.data()) {
        const double re = v.real() * std::sqrt(10.0);
        const double im = v.imag() * std::sqrt(10.0);
        CHECK_THAT(std::abs(re - std::round(re)), WithinAbs(0.0, 1e-12));
        CHECK(std::abs(std::lround(re)) % 2 == 1);
        CHECK(std::abs(std::lround(im)) % 2 == 1);
        points.insert({std::round(re), std::round(im)});
    }
    CHECK(points.size() == 16);
    CHECK_THAT(grid.mean_power(), WithinAbs(1.0, 0.03));
}

TEST_CASE("Gray mapping: horizontally adjacent points differ in one bit")
{
    // Levels -3,-1,+1,+3 must carry 2-bit labels that differ by one bit between neighbours.
    std::array<unsigned, 4> label{};
    for (unsigned bits = 0; bits < 4; ++bits) {
        const double level = detail::gray_pam4[bits];
        label[static_cast<std::size_t>((level + 3.0) / 2.0)] = bits;
    }
    for (std::size_t i = 0; i + 1 < 4; ++i)
        CHECK(std::popcount(label[i] ^ label[i + 1]) == 1);
}

TEST_CASE("QAM generation is deterministic in the seed")
{
    CHECK(generate_qam16(64, 8, 11) == generate_qam16(64, 8, 11));
    CHECK_FALSE(generate_qam16(64, 8, 11) == generate_qam16(64, 8, 12));
    CHECK_THROWS_AS(generate_qam16(0, 8, 1), std::invalid_argument);
}

TEST_CASE("modulate then demodulate round-trips")
{
    for (std::size_t n : {16u, 64u, 256u}) {
        const auto tx = generate_qam16(n, 12, n);
        const auto frame = modulate(tx, n / 4, 480e3);
        CHECK(frame.samples.size() == 12 * (n + n / 4));
        CHECK(frame.sample_rate == static_cast<double>(n) * 480e3);
        const auto rx = demodulate(frame, n, 12);
        CHECK(max_abs_diff(tx.data(), rx.data()) < 1e-12);
    }
}

TEST_CASE("modulation is unitary and the prefix copies the tail")
{
    const std::size_t n = 64, cp = 16;
    const auto tx = generate_qam16(n, 4, 3);
    const auto frame = modulate(tx, cp);
    for (std::size_t m = 0; m < 4; ++m) {
        const Complex* block = frame.samples.data() + m * (n + cp);
        double body = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            body += std::norm(block[cp + i]);
        double freq = 0.0;
        for (const auto& v : tx.symbol(m))
            freq += std::norm(v);
        CHECK_THAT(body, WithinAbs(freq, 1e-10));
        for (std::size_t i = 0; i < cp; ++i)
            CHECK(block[i] == block[n + i]);
    }
}

TEST_CASE("modulated body matches a direct inverse DFT")
{
    const std::size_t n = 32;
    const auto tx = generate_qam16(n, 1, 5);
    const auto frame = modulate(tx, 8);
    std::vector<Complex> x(tx.symbol(0).begin(), tx.symbol(0).end());
    const auto ref = oracle::direct_dft(x, n, +1.0);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(frame.samples[8 + i] - ref[i] / std::sqrt(double(n))) < 1e-12);
}

TEST_CASE("ofdm argument errors")
{
    const auto tx = generate_qam16(16, 2, 1);
    CHECK_THROWS_AS(modulate(tx, 17), std::invalid_argument);
    auto frame = modulate(tx, 4);
    frame.samples.pop_back();
    CHECK_THROWS_AS(demodulate(frame, 16, 2), std::invalid_argument);
    CHECK_THROWS_AS(SymbolGrid(4, 0), std::invalid_argument);
}

TEST_CASE("constellation magnitudes and long-run power")
{
    const auto grid = generate_qam16(1000, 1000, 123);
    for (std::size_t i = 0; i < 1000; ++i) {
        const double mag2 = std::norm(grid.data()[i]) * 10.0;
        CHECK((std::abs(mag2 - 2.0) < 1e-12 || std::abs(mag2 - 10.0) < 1e-12 || std::abs(mag2 - 18.0) < 1e-12));
    }
    CHECK_THAT(grid.mean_power(), WithinAbs(1.0, 0.01));
}

TEST_CASE("DC subcarrier gives a constant symbol body")
{
    const std::size_t n = 16;
    SymbolGrid g(n, 3);
    for (std::size_t m = 0; m < 3; ++m)
        g(0, m) = std::sqrt(double(n));
    const auto frame = modulate(g, 4);
    for (const auto& v : frame.samples)
        CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("demodulating a single tone lands on one subcarrier")
{
    const std::size_t n = 8, l0 = 3;
    TimeFrame frame;
    frame.n_cp = 2;
    frame.samples.resize(2 * (n + 2));
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t i = 0; i < n + 2; ++i) {
            const double t = double(i + n - 2); // prefix continues the body cyclically
            frame.samples[m * (n + 2) + i] = std::sqrt(double(n)) * std::polar(1.0, two_pi * double(l0) * t / double(n));
        }
    const auto g = demodulate(frame, n, 2);
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t l = 0; l < n; ++l)
            CHECK(std::abs(g(l, m) - (l == l0 ? Complex(double(n), 0.0) : Complex{})) < 1e-12);

    TimeFrame zeros;
    zeros.n_cp = 2;
    zeros.samples.assign(2 * (n + 2), Complex{});
    CHECK(demodulate(zeros, n, 2).energy() == 0.0);
}

TEST_CASE("demodulate then modulate is the identity on CP-consistent frames")
{
    const std::size_t n = 64, cp = 16;
    const auto frame = modulate(generate_qam16(n, 5, 17), cp);
    const auto again = modulate(demodulate(frame, n, 5), cp);
    CHECK(max_abs_diff(frame.samples, again.samples) < 1e-12);
}

TEST_CASE("Parseval over random grids")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = generate_qam16(128, 16, seed);
        const auto frame = modulate(g, 32);
        double body = 0.0;
        for (std::size_t m = 0; m < 16; ++m)
            for (std::size_t i = 0; i < 128; ++i)
                body += std::norm(frame.samples[m * 160 + 32 + i]);
        CHECK(std::abs(body - g.energy()) <= 1e-9 * g.energy());
    }
}
