#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include "fbmh/ftnorm.hpp"
#include "fbmh/hilbert.hpp"

using namespace fbmh;
using fbmh::numerics::QuadratureSpec;

namespace {

const QuadratureSpec kTestSpec{1e-7, 1e-9, 60'000'000};

// Jacobi eigenvalue sweep for small symmetric matrices (test helper)
template <std::size_t N>
std::array<double, N> sym_eigenvalues(std::array<std::array<double, N>, N> a) {
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::array<double, N> ev{};
    for (std::size_t i = 0; i < N; ++i) ev[i] = a[i][i];
    return ev;
}

}  // namespace

TEST_CASE("covariance function basics") {
    HurstParam h(0.3);
    hilbert::FbmCovariance R(h);
    CHECK(R(2.0, 2.0) == Catch::Approx(std::pow(2.0, 0.6)));
    CHECK(R(0.0, 5.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(R(1.0, 2.0) == R(2.0, 1.0));
}

TEST_CASE("norm of the indicator is the variance") {
    for (double H : {0.3, 0.5, 0.7}) {
        auto one = BVFunction::constant(1.0, 2.0);
        const double ip = hilbert::inner_product(one, one, HurstParam(H), kTestSpec);
        CHECK(ip == Catch::Approx(std::pow(2.0, 2.0 * H)).epsilon(1e-6));
    }
}

TEST_CASE("indicator inner products reproduce covariance increments") {
    HurstParam h(0.3);
    auto f = BVFunction::indicator(0.0, 1.0, 2.0);
    auto g = BVFunction::indicator(0.0, 2.0, 2.0);
    const double want = 0.5 * (1.0 + std::pow(2.0, 0.6) - 1.0);
    CHECK(hilbert::inner_product(f, g, h, kTestSpec) == Catch::Approx(want).epsilon(1e-8));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    hilbert::FbmCovariance R(HurstParam(0.7));
    for (int trial = 0; trial < 4; ++trial) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        if (b - a < 0.05 || d - c < 0.05) continue;
        auto fa = BVFunction::indicator(a, b, 2.0);
        auto gc = BVFunction::indicator(c, d, 2.0);
        const double ip = hilbert::inner_product(fa, gc, HurstParam(0.7), kTestSpec);
        const double rr = R(b, d) - R(b, c) - R(a, d) + R(a, c);
        CHECK(ip == Catch::Approx(rr).margin(1e-7));
    }
}

TEST_CASE("brownian branch reduces to the L2 product") {
    auto hT = BVFunction::exp_kernel(10.0, 10.0);
    const double ip = hilbert::inner_product(hT, hT, HurstParam(0.5), kTestSpec);
    CHECK(ip == Catch::Approx(0.5 * (1.0 - std::exp(-20.0))).epsilon(1e-9));
}

TEST_CASE("bilinearity and symmetry on randomized BV functions") {
    std::mt19937 rng(20260215);
    std::uniform_real_distribution<double> ut(0.2, 2.0), ua(-1.5, 1.5);
    for (double H : {0.35, 0.5, 0.7}) {
        HurstParam h(H);
        const double t1 = ut(rng), lo = 0.25 * ut(rng), hi = lo + 0.4 * ut(rng) + 0.05;
        auto f1 = BVFunction::exp_kernel(t1, 2.0);
        auto f2 = BVFunction::indicator(lo, std::min(hi, 2.0), 2.0);
        auto g = BVFunction::exp_kernel(ut(rng), 2.0);
        const double alpha = ua(rng);
        auto combo = BVFunction::scaled_sum(alpha, f1, f2);
        const double lhs = hilbert::inner_product(combo, g, h, kTestSpec);
        const double rhs = alpha * hilbert::inner_product(f1, g, h, kTestSpec) +
                           hilbert::inner_product(f2, g, h, kTestSpec);
        CHECK(lhs == Catch::Approx(rhs).margin(2e-6));

        // the formula treats f and g asymmetrically; the product must not
        const double fg = hilbert::inner_product(f1, f2, h, kTestSpec);
        const double gf = hilbert::inner_product(f2, f1, h, kTestSpec);
        CHECK(fg == Catch::Approx(gf).margin(2e-6));
    }
}

TEST_CASE("gram matrix of indicators is positive semidefinite") {
    HurstParam h(0.3);
    const std::array<double, 5> ts{0.31, 0.77, 1.13, 1.58, 1.94};
    std::array<std::array<double, 5>, 5> gram{};
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j) {
            auto fi = BVFunction::indicator(0.0, ts[i], 2.0);
            auto fj = BVFunction::indicator(0.0, ts[j], 2.0);
            gram[i][j] = gram[j][i] = hilbert::inner_product(fi, fj, h, kTestSpec);
        }
    for (double ev : sym_eigenvalues(gram)) CHECK(ev >= -1e-8);
}

TEST_CASE("rho1 against independent references") {
    HurstParam h3(0.3), h7(0.7), h5(0.5);
    // diagonal: classical OU variance at H = 1/2
    CHECK(hilbert::rho1(3.0, 3.0, h5) == Catch::Approx(0.5 * (1.0 - std::exp(-6.0))).epsilon(1e-9));
    // frozen high-precision evaluations of E[eta_t eta_s]
    CHECK(hilbert::rho1(2.0, 3.0, h3, kTestSpec) ==
          Catch::Approx(0.066865850985743739).epsilon(1e-6));
    CHECK(hilbert::rho1(2.0, 3.0, h7, kTestSpec) ==
          Catch::Approx(0.36208366264471404).epsilon(1e-6));
    // symmetry
    CHECK(hilbert::rho1(1.3, 0.6, h3, kTestSpec) ==
          Catch::Approx(hilbert::rho1(0.6, 1.3, h3, kTestSpec)).margin(1e-6));
    // long-horizon variance approaches a = H Gamma(2H)
    CHECK(std::abs(hilbert::rho1(50.0, 50.0, h3) - 0.44675767464384513) < 0.02);
    CHECK(hilbert::rho1(0.0, 1.0, h3) == 0.0);
}

TEST_CASE("diagonal fast path agrees with the inner product") {
    for (double H : {0.3, 0.7}) {
        HurstParam h(H);
        auto ht = BVFunction::exp_kernel(2.0, 2.0);
        const double slow = hilbert::inner_product(ht, ht, h, kTestSpec);
        const double fast = hilbert::fou_variance(2.0, h);
        CHECK(slow == Catch::Approx(fast).epsilon(1e-6));
    }
    // frozen references for the reduced formula itself
    CHECK(hilbert::fou_variance(2.0, HurstParam(0.3)) ==
          Catch::Approx(0.45549726467605234).epsilon(1e-10));
    CHECK(hilbert::fou_variance(2.0, HurstParam(0.7)) ==
          Catch::Approx(0.56432006842859158).epsilon(1e-10));
}

TEST_CASE("b_T references and limits") {
    CHECK(hilbert::b_T(10.0, HurstParam(0.5)) ==
          Catch::Approx(0.5 - (1.0 - std::exp(-20.0)) / 40.0).epsilon(1e-9));
    CHECK(hilbert::b_T(25.0, HurstParam(0.3)) ==
          Catch::Approx(0.44497064394526835).epsilon(1e-8));
    // b_T -> 0 as T -> 0 (at the T^{2H} rate of E[eta_t^2])
    CHECK(hilbert::b_T(1e-3, HurstParam(0.3)) < 0.03);
    CHECK(hilbert::b_T(1e-6, HurstParam(0.3)) < hilbert::b_T(1e-3, HurstParam(0.3)) / 10.0);
}

TEST_CASE("discrete oracle exact on indicator products") {
    std::mt19937 rng(11);
    for (double H : {0.3, 0.6}) {
        HurstParam h(H);
        const std::size_t n = 64;
        const double T = 1.0;
        std::uniform_int_distribution<std::size_t> cell(8, n);
        for (int trial = 0; trial < 3; ++trial) {
            const double a = T * cell(rng) / n, b = T * cell(rng) / n;
            auto f2 = [&](double t, double s) { return (t <= a && s <= b) ? 1.0 : 0.0; };
            const double got = hilbert::discrete_norm_oracle_2d(f2, h, n, T);
            const double want = std::pow(a, 2.0 * H) * std::pow(b, 2.0 * H);
            CHECK(got == Catch::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("discrete oracle on the exponential kernel") {
    auto fT = [](double t, double s) { return std::exp(-std::abs(t - s)); };
    const double got = hilbert::discrete_norm_oracle_2d(fT, HurstParam(0.5), 512, 2.0);
    const double want = 2.0 - 0.5 * (1.0 - std::exp(-4.0));
    CHECK(std::abs(got - want) / want < 0.02);

    // refinement reduces the error against the reduction-engine value
    for (double H : {0.3, 0.6}) {
        HurstParam h(H);
        const double exact = fbmh::ftnorm::norm_fT_sq(2.0, h).total;
        const double e256 = std::abs(hilbert::discrete_norm_oracle_2d(fT, h, 256, 2.0) - exact);
        const double e512 = std::abs(hilbert::discrete_norm_oracle_2d(fT, h, 512, 2.0) - exact);
        CHECK(e512 < e256);
    }
}
