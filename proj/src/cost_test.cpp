#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "infocontract/cost.hpp"
#include "infocontract/error.hpp"

using infocontract::CostFunction;

TEST_CASE("power cost") {
    const auto c = CostFunction::power(0.125, 2.0);
    CHECK(c(0.0) == 0.0);
    CHECK(c(2.0) == doctest::Approx(0.5));
    CHECK(c.right_limit_at_zero() == 0.0);
    CHECK_THROWS_AS((void)c(-1.0), infocontract::DomainError);
    CHECK_THROWS_AS(CostFunction::power(1.0, 0.0), infocontract::DomainError);
    CHECK_THROWS_AS(CostFunction::power(-1.0, 2.0), infocontract::DomainError);
}

TEST_CASE("affine power cost has a fixed entry cost but c(0) = 0") {
    const auto c = CostFunction::affine_power(0.5, 0.125, 2.0);
    CHECK(c(0.0) == 0.0);
    CHECK(c(1e-12) == doctest::Approx(0.5));
    CHECK(c(2.0) == doctest::Approx(1.0));
    CHECK(c.right_limit_at_zero() == doctest::Approx(0.5));
}

TEST_CASE("tabulated cost interpolates and extrapolates") {
    const auto c = CostFunction::tabulated({0.0, 1.0, 2.0}, {0.1, 0.2, 0.6});
    CHECK(c(0.0) == 0.0);
    CHECK(c.right_limit_at_zero() == doctest::Approx(0.1));
    CHECK(c(0.5) == doctest::Approx(0.15));
    CHECK(c(1.5) == doctest::Approx(0.4));
    CHECK(c(3.0) == doctest::Approx(1.0));
    const auto starts_late = CostFunction::tabulated({1.0, 2.0}, {1.0, 2.0});
    CHECK(starts_late(0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(CostFunction::tabulated({1.0, 1.0}, {0.0, 1.0}), infocontract::DomainError);
    CHECK_THROWS_AS(CostFunction::tabulated({0.0, 1.0}, {0.0, -1.0}), infocontract::DomainError);
}

TEST_CASE("tabulated cost from CSV") {
    const auto path = std::filesystem::temp_directory_path() / "infocontract_cost.csv";
    {
        std::ofstream out(path);
        out << "lambda,cost\n0,0\n2,1\n";
    }
    CHECK(CostFunction::tabulated_csv(path)(1.0) == doctest::Approx(0.5));
    std::filesystem::remove(path);
}

TEST_CASE("scaling and dilation") {
    const auto c = CostFunction::power(0.125, 2.0);
    CHECK(c.scaled(4.0)(1.0) == doctest::Approx(0.5));
    CHECK(c.dilated(2.0)(1.0) == doctest::Approx(0.5));
    CHECK(c.scaled(2.0).scaled(3.0).parameters().at("scale") == doctest::Approx(6.0));
    CHECK(c.scaled(2.0)(0.0) == 0.0);
}

TEST_CASE("custom cost keeps c(0) = 0") {
    const auto c = CostFunction::custom("shifted", [](double l) { return 1.0 + l; });
    CHECK(c(0.0) == 0.0);
    CHECK(c(1.0) == 2.0);
    CHECK(c.right_limit_at_zero() == doctest::Approx(1.0));
    CHECK(c.kind() == infocontract::CostKind::custom);
}
