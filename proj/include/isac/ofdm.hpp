// SPDX-License-Identifier: Apache-2.0
//
// Frequency-domain symbol grids, 16-QAM data generation and CP-OFDM
// synthesis/analysis with a unitary (1/sqrt(N)) DFT in both directions.

#ifndef ISAC_OFDM_HPP
#define ISAC_OFDM_HPP

#include "isac/common.hpp"
#include "isac/fft.hpp"

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace isac {

// N x M complex grid, subcarrier l = 0..N-1, symbol m = 0..M-1. Storage is
// symbol-major so that each OFDM symbol is one contiguous span.
class SymbolGrid {
public:
    SymbolGrid(std::size_t n_subcarriers, std::size_t n_symbols)
        : n_(n_subcarriers), m_(n_symbols)
    {
        if (n_subcarriers == 0 || n_symbols == 0)
            throw std::invalid_argument("SymbolGrid: dimensions must be positive");
        data_.assign(n_ * m_, Complex{});
    }

    std::size_t subcarriers() const { return n_; }
    std::size_t symbols() const { return m_; }
    std::size_t size() const { return data_.size(); }

    Complex& operator()(std::size_t l, std::size_t m) { return data_[m * n_ + l]; }
    const Complex& operator()(std::size_t l, std::size_t m) const { return data_[m * n_ + l]; }

    std::span<Complex> symbol(std::size_t m) { return {data_.data() + m * n_, n_}; }
    std::span<const Complex> symbol(std::size_t m) const { return {data_.data() + m * n_, n_}; }

    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

    double energy() const
    {
        double e = 0.0;
        for (const auto& v : data_)
            e += std::norm(v);
        return e;
    }

    double mean_power() const { return energy() / static_cast<double>(data_.size()); }

    bool same_shape(const SymbolGrid& other) const { return n_ == other.n_ && m_ == other.m_; }

    friend bool operator==(const SymbolGrid&, const SymbolGrid&) = default;

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<Complex> data_;
};

// Time-domain CP-OFDM frame: M blocks of (n_cp prefix + N body) samples.
struct TimeFrame {
    std::vector<Complex> samples;
    double sample_rate = 0.0;
    std::size_t n_cp = 0;
};

namespace detail {

// Gray-coded 2-bit amplitude levels: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
inline constexpr std::array<double, 4> gray_pam4 = {-3.0, -1.0, 3.0, 1.0};

} // namespace detail

/// Gray-mapped 16-QAM grid with unit average constellation energy. Each
/// 64-bit draw of the generator supplies 16 symbols.
inline SymbolGrid generate_qam16(std::size_t n_subcarriers, std::size_t n_symbols, std::uint64_t seed)
{
    SymbolGrid grid(n_subcarriers, n_symbols);
    std::mt19937_64 rng(seed);
    const double scale = 1.0 / std::sqrt(10.0);

    auto data = grid.data();
    std::uint64_t word = 0;
    int left = 0;
    for (auto& v : data) {
        if (left == 0) {
            word = rng();
            left = 16;
        }
        const unsigned nibble = static_cast<unsigned>(word & 0xF);
        word >>= 4;
        --left;
        v = Complex(detail::gray_pam4[nibble >> 2], detail::gray_pam4[nibble & 0x3]) * scale;
    }
    return grid;
}

/// Per-symbol unitary IDFT followed by a cyclic prefix copied from the tail
/// of the body. sample_rate is N * subcarrier_spacing_hz.
inline TimeFrame modulate(const SymbolGrid& grid, std::size_t n_cp, double subcarrier_spacing_hz = 1.0)
{
    const std::size_t n = grid.subcarriers();
    if (n_cp > n)
        throw std::invalid_argument("modulate: cyclic prefix longer than the symbol");

    TimeFrame frame;
    frame.n_cp = n_cp;
    frame.sample_rate = static_cast<double>(n) * subcarrier_spacing_hz;
    frame.samples.resize(grid.symbols() * (n + n_cp));

    const fft::Plan ifft(n, fft::Direction::inverse);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Complex> body(n);
    for (std::size_t m = 0; m < grid.symbols(); ++m) {
        const auto sym = grid.symbol(m);
        std::copy(sym.begin(), sym.end(), body.begin());
        ifft.execute(body);
        Complex* out = frame.samples.data() + m * (n + n_cp);
        for (std::size_t i = 0; i < n_cp; ++i)
            out[i] = body[n - n_cp + i] * scale;
        for (std::size_t i = 0; i < n; ++i)
            out[n_cp + i] = body[i] * scale;
    }
    return frame;
}

/// Strips each cyclic prefix and applies the unitary forward DFT per symbol.
inline SymbolGrid demodulate(const TimeFrame& frame, std::size_t n_subcarriers, std::size_t n_symbols)
{
    SymbolGrid grid(n_subcarriers, n_symbols);
    const std::size_t block = n_subcarriers + frame.n_cp;
    if (frame.n_cp > n_subcarriers || frame.samples.size() != n_symbols * block)
        throw std::invalid_argument("demodulate: frame length does not match the grid dimensions");

    const fft::Plan dft(n_subcarriers, fft::Direction::forward);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_subcarriers));
    for (std::size_t m = 0; m < n_symbols; ++m) {
        auto sym = grid.symbol(m);
        const Complex* in = frame.samples.data() + m * block + frame.n_cp;
        std::copy(in, in + n_subcarriers, sym.begin());
        dft.execute(sym);
        for (auto& v : sym)
            v *= scale;
    }
    return grid;
}

} // namespace isac

#endif // ISAC_OFDM_HPP
