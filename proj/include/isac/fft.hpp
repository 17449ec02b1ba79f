// SPDX-License-Identifier: Apache-2.0
//
// Thin FFTW wrapper. Plans are created once per (length, direction) under a
// mutex and executed through the new-array interface, which is thread-safe.
// FFTW_ESTIMATE is used so that plan selection, and therefore every result,
// is reproducible from run to run.

#ifndef ISAC_FFT_HPP
#define ISAC_FFT_HPP

#include "isac/common.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace isac::fft {

enum class Direction { forward, inverse };

// simd plans may only run on buffers from AlignedAllocator; unaligned plans
// accept any buffer. The two can round differently, so a given call site
// always uses the same kind.
enum class Alignment { any, simd };

template <typename T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n)
    {
        if (void* p = fftw_malloc(n * sizeof(T)))
            return static_cast<T*>(p);
        throw std::bad_alloc();
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }

    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using AlignedVector = std::vector<Complex, AlignedAllocator<Complex>>;

namespace detail {

class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, Direction dir, Alignment align)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(n, dir, align);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;

        AlignedVector scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        const unsigned flags = FFTW_ESTIMATE | (align == Alignment::any ? FFTW_UNALIGNED : 0u);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, flags);
        if (plan == nullptr)
            throw std::runtime_error("fftw: unable to create plan of length " + std::to_string(n));
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::tuple<std::size_t, Direction, Alignment>, fftw_plan> plans_;
};

} // namespace detail

// Unnormalized in-place transform of a fixed length.
//   forward: X[k] = sum_n x[n] e^{-j 2 pi k n / N}
//   inverse: x[n] = sum_k X[k] e^{+j 2 pi k n / N}
class Plan {
public:
    Plan(std::size_t n, Direction dir, Alignment align = Alignment::any)
        : n_(n), align_(align), plan_(n > 0 ? detail::PlanCache::instance().get(n, dir, align) : nullptr)
    {
        if (n == 0)
            throw std::invalid_argument("fft: length must be positive");
    }

    std::size_t size() const { return n_; }

    void execute(std::span<Complex> data) const
    {
        if (data.size() != n_)
            throw std::invalid_argument("fft: buffer length does not match plan");
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        if (align_ == Alignment::simd && fftw_alignment_of(reinterpret_cast<double*>(buf)) != 0)
            throw std::invalid_argument("fft: simd plan executed on a misaligned buffer");
        fftw_execute_dft(plan_, buf, buf);
    }

private:
    std::size_t n_;
    Alignment align_;
    fftw_plan plan_;
};

inline void transform(std::span<Complex> data, Direction dir) { Plan(data.size(), dir).execute(data); }

} // namespace isac::fft

#endif // ISAC_FFT_HPP
