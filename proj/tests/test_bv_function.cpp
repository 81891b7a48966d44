#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fbmh/bv_function.hpp"

using namespace fbmh;

namespace {
const Atom* find_atom(const StieltjesMeasure& m, double loc) {
    for (const auto& a : m.atoms)
        if (std::abs(a.location - loc) < 1e-12) return &a;
    return nullptr;
}
}  // namespace

TEST_CASE("measure of the constant function") {
    auto g = BVFunction::constant(1.0, 2.0);
    auto m = measure_of(g);
    REQUIRE(m.atoms.size() == 2);
    CHECK(find_atom(m, 0.0)->mass == Catch::Approx(1.0));
    CHECK(find_atom(m, 2.0)->mass == Catch::Approx(-1.0));
    CHECK(g.deriv_at(1.0) == 0.0);
}

TEST_CASE("measure of the fOU kernel h_t") {
    const double t = 1.5, T = 3.0;
    auto g = BVFunction::exp_kernel(t, T);
    auto m = measure_of(g);
    REQUIRE(m.atoms.size() == 2);
    CHECK(find_atom(m, 0.0)->mass == Catch::Approx(std::exp(-t)).epsilon(1e-12));
    CHECK(find_atom(m, t)->mass == Catch::Approx(-1.0).epsilon(1e-12));
    CHECK(find_atom(m, T) == nullptr);  // g(T-) = 0, endpoint atom vanishes
    CHECK(g.deriv_at(1.0) == Catch::Approx(std::exp(1.0 - t)).epsilon(1e-12));
    CHECK(g.deriv_at(2.0) == 0.0);
}

TEST_CASE("measure of the ramp") {
    auto g = BVFunction::ramp(2.0);
    auto m = measure_of(g);
    REQUIRE(m.atoms.size() == 1);  // the zero-mass atom at 0 is dropped
    CHECK(find_atom(m, 2.0)->mass == Catch::Approx(-2.0));
    CHECK(g.deriv_at(0.7) == 1.0);
}

TEST_CASE("indicator edges and interior jumps") {
    auto g = BVFunction::indicator(0.5, 1.5, 2.0);
    auto m = measure_of(g);
    REQUIRE(m.atoms.size() == 2);
    CHECK(find_atom(m, 0.5)->mass == Catch::Approx(1.0));
    CHECK(find_atom(m, 1.5)->mass == Catch::Approx(-1.0));
    CHECK(g.value_at(1.0) == 1.0);
    CHECK(g.value_at(1.7) == 0.0);
}

TEST_CASE("explicit step components") {
    // 1 + 0.5 * 1_{u >= 1} on [0, 2]
    auto base = BVFunction::constant(1.0, 2.0);
    BVFunction g(2.0, base.pieces(), {{1.0, 0.5}});
    CHECK(g.value_at(0.5) == 1.0);
    CHECK(g.value_at(1.5) == 1.5);
    auto m = measure_of(g);
    CHECK(find_atom(m, 0.0)->mass == Catch::Approx(1.0));
    CHECK(find_atom(m, 1.0)->mass == Catch::Approx(0.5));
    CHECK(find_atom(m, 2.0)->mass == Catch::Approx(-1.5));
    CHECK_THROWS_AS(BVFunction(2.0, base.pieces(), {{2.0, 1.0}}), std::domain_error);
}

TEST_CASE("scaled sums merge breakpoints") {
    auto f = BVFunction::indicator(0.0, 1.0, 2.0);
    auto g = BVFunction::exp_kernel(1.5, 2.0);
    auto s = BVFunction::scaled_sum(2.0, f, g);
    CHECK(s.value_at(0.5) == Catch::Approx(2.0 + std::exp(0.5 - 1.5)));
    CHECK(s.value_at(1.2) == Catch::Approx(std::exp(1.2 - 1.5)));
    CHECK(s.value_at(1.8) == Catch::Approx(0.0));
    CHECK(s.deriv_at(1.2) == Catch::Approx(std::exp(1.2 - 1.5)));
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(BVFunction::indicator(1.0, 0.5, 2.0), std::domain_error);
    CHECK_THROWS_AS(BVFunction::exp_kernel(3.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(BVFunction(0.0, {}), std::domain_error);
}
