#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace infocontract {

/// Counter-based generator: draw i of stream s is SplitMix64 applied to a mix of (seed, s, i),
/// so any draw can be reproduced without replaying earlier ones and results do not depend on
/// how work is split across threads.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return at(counter_++); }
    [[nodiscard]] constexpr result_type at(std::uint64_t index) const noexcept {
        return mix(key_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    /// Uniform on {0, ..., count - 1} by rejection, count > 0.
    constexpr std::size_t below(std::size_t count) noexcept {
        const std::uint64_t n = count;
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t x = (*this)();
        while (x >= limit) {
            x = (*this)();
        }
        return static_cast<std::size_t>(x % n);
    }

    [[nodiscard]] constexpr std::uint64_t position() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace infocontract
