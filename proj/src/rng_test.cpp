#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "infocontract/rng.hpp"

using infocontract::CounterRng;

TEST_CASE("draws are addressable by index") {
    CounterRng rng(42, 3);
    const CounterRng copy = rng;
    for (std::uint64_t i = 0; i < 16; ++i) {
        CHECK(rng() == copy.at(i));
    }
    CHECK(rng.position() == 16);
}

TEST_CASE("seed and stream select independent sequences") {
    CounterRng a(1, 0);
    CounterRng b(1, 1);
    CounterRng c(2, 0);
    const auto first_a = a();
    CHECK(first_a != b());
    CHECK(first_a != c());
    CHECK(CounterRng(1, 0)() == first_a);
}

TEST_CASE("uniform and bounded draws") {
    CounterRng rng(9);
    double sum = 0.0;
    std::array<int, 5> counts{};
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        ++counts[rng.below(5)];
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    for (int c : counts) {
        CHECK(c == doctest::Approx(n / 5).epsilon(0.05));
    }
}

TEST_CASE("works with standard distributions") {
    CounterRng rng(5);
    std::uniform_int_distribution<int> die(1, 6);
    std::array<int, 6> seen{};
    for (int i = 0; i < 600; ++i) {
        ++seen[die(rng) - 1];
    }
    CHECK(std::ranges::all_of(seen, [](int s) { return s > 0; }));
}
