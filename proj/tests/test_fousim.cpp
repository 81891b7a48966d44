#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "fbmh/expansions.hpp"
#include "fbmh/fousim.hpp"

using namespace fbmh;
using namespace fbmh::fousim;

namespace {

struct PathStats {
    double mean = 0.0, var = 0.0, skew = 0.0;
};

PathStats terminal_stats(const FbmSampler& s, std::size_t n_paths) {
    std::vector<double> xs(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) xs[p] = s.path(p).back();
    PathStats st;
    for (double x : xs) st.mean += x;
    st.mean /= static_cast<double>(n_paths);
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        const double d = x - st.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n_paths);
    m3 /= static_cast<double>(n_paths);
    st.var = m2;
    st.skew = m3 / std::pow(m2, 1.5);
    return st;
}

}  // namespace

TEST_CASE("config validation") {
    McConfig bad{1, 1000, 100, 1.0, HurstParam(0.5), 1.0};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);  // not a power of two
    McConfig bad2{1, 1024, 1, 1.0, HurstParam(0.5), 1.0};
    CHECK_THROWS_AS(bad2.validate(), std::domain_error);
    McConfig bad3{1, 1024, 100, 1.0, HurstParam(0.5), 0.0};
    CHECK_THROWS_AS(bad3.validate(), std::domain_error);
}

TEST_CASE("terminal variance matches R(T,T)") {
    for (double H : {0.3, 0.5, 0.7}) {
        McConfig cfg{42, 512, 2000, 2.0, HurstParam(H), 1.0};
        FbmSampler s(cfg);
        CHECK_FALSE(s.used_cholesky());
        const auto st = terminal_stats(s, cfg.n_paths);
        const double target = std::pow(2.0, 2.0 * H);
        const double se = target * std::sqrt(2.0 / (cfg.n_paths - 1.0));
        CHECK(std::abs(st.var - target) <= 4.0 * se);
        CHECK(std::abs(st.skew) <= 4.0 * std::sqrt(6.0 / cfg.n_paths));
    }
}

TEST_CASE("brownian increments are uncorrelated at lag one") {
    McConfig cfg{7, 256, 400, 1.0, HurstParam(0.5), 1.0};
    FbmSampler s(cfg);
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
        const auto b = s.path(p);
        for (std::size_t k = 0; k + 2 < b.size(); ++k) {
            const double d0 = b[k + 1] - b[k], d1 = b[k + 2] - b[k + 1];
            num += d0 * d1;
            den += d0 * d0;
        }
    }
    CHECK(std::abs(num / den) <= 3.0 / std::sqrt(double(cfg.n_steps * cfg.n_paths)));
}

TEST_CASE("pathwise covariance matches R at interior times") {
    McConfig cfg{1234, 512, 2000, 3.0, HurstParam(0.3), 1.0};
    FbmSampler s(cfg);
    const std::size_t i = 512 / 3, j = 2 * 512 / 3;
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
        const auto b = s.path(p);
        const double prod = b[i] * b[j];
        acc += prod;
        acc2 += prod * prod;
    }
    const double mean = acc / cfg.n_paths;
    const double se = std::sqrt((acc2 / cfg.n_paths - mean * mean) / cfg.n_paths);
    const double si = 3.0 * double(i) / 512.0, sj = 3.0 * double(j) / 512.0;
    const double want = hilbert::fbm_covariance(si, sj, cfg.H);
    CHECK(std::abs(mean - want) <= 4.0 * se);
}

TEST_CASE("fOU variance against the quadrature oracle") {
    // classical OU at H = 1/2
    {
        McConfig cfg{99, 1024, 2000, 10.0, HurstParam(0.5), 1.0};
        FbmSampler s(cfg);
        double acc = 0.0;
        for (std::size_t p = 0; p < cfg.n_paths; ++p) {
            const auto eta = fou_path(s.path(p), 1.0, s.dt());
            acc += eta.back() * eta.back();
        }
        const double var = acc / cfg.n_paths;
        const double want = 0.5 * (1.0 - std::exp(-20.0));
        const double se = want * std::sqrt(2.0 / (cfg.n_paths - 1.0));
        CHECK(std::abs(var - want) <= 4.0 * se);
    }
    // rough kernel at H = 0.3, T = 50
    {
        McConfig cfg{77, 2048, 1000, 50.0, HurstParam(0.3), 1.0};
        FbmSampler s(cfg);
        double acc = 0.0;
        for (std::size_t p = 0; p < cfg.n_paths; ++p) {
            const auto eta = fou_path(s.path(p), 1.0, s.dt());
            acc += eta.back() * eta.back();
        }
        const double var = acc / cfg.n_paths;
        const double want = hilbert::rho1(50.0, 50.0, cfg.H);
        const double se = want * std::sqrt(2.0 / (cfg.n_paths - 1.0));
        CHECK(std::abs(var - want) <= 4.0 * se);
    }
}

TEST_CASE("theta = 0 reproduces the driving path") {
    McConfig cfg{5, 64, 4, 1.0, HurstParam(0.4), 1.0};
    FbmSampler s(cfg);
    const auto b = s.path(0);
    const auto eta = fou_path(b, 0.0, s.dt());
    for (std::size_t k = 0; k < b.size(); ++k) CHECK(eta[k] == Catch::Approx(b[k]).margin(1e-12));
}

TEST_CASE("halving the step on the same path barely moves the variance") {
    McConfig fine{31, 1024, 1500, 10.0, HurstParam(0.5), 1.0};
    FbmSampler s(fine);
    double acc_f = 0.0, acc_c = 0.0;
    for (std::size_t p = 0; p < fine.n_paths; ++p) {
        const auto b = s.path(p);
        const auto ef = fou_path(b, 1.0, s.dt());
        std::vector<double> bc(513);
        for (std::size_t k = 0; k <= 512; ++k) bc[k] = b[2 * k];
        const auto ec = fou_path(bc, 1.0, 2.0 * s.dt());
        acc_f += ef.back() * ef.back();
        acc_c += ec.back() * ec.back();
    }
    const double vf = acc_f / fine.n_paths, vc = acc_c / fine.n_paths;
    const double se = vf * std::sqrt(2.0 / (fine.n_paths - 1.0));
    CHECK(std::abs(vf - vc) < se);
}

TEST_CASE("reproducibility across worker counts") {
    McConfig cfg{2024, 256, 64, 5.0, HurstParam(0.6), 1.0};
    setenv("FBMH_THREADS", "1", 1);
    const auto one = mc_wt_variance(cfg);
    setenv("FBMH_THREADS", "4", 1);
    const auto four = mc_wt_variance(cfg);
    unsetenv("FBMH_THREADS");
    CHECK(one.mean == four.mean);  // bit identical
    CHECK(one.std_error == four.std_error);
}

TEST_CASE("W_T^2 at the Brownian point") {
    McConfig cfg{4321, 2048, 800, 50.0, HurstParam(0.5), 1.0};
    const auto est = mc_wt_variance(cfg);
    CHECK(std::abs(est.mean - 0.5) <= 4.0 * est.std_error);
    CHECK(est.std_error > 0.0);
    CHECK(est.n_paths == 800);
}

TEST_CASE("second-moment gap shrinks from T=25 to T=100") {
    const double s2 = expansions::sigma_consts(HurstParam(0.6)).sigma2;
    McConfig c25{99991, 1024, 1200, 25.0, HurstParam(0.6), 1.0};
    McConfig c100{99991, 4096, 1200, 100.0, HurstParam(0.6), 1.0};
    const auto e25 = mc_wt_variance(c25);
    const auto e100 = mc_wt_variance(c100);
    const double gap25 = std::abs(e25.mean - s2);
    const double gap100 = std::abs(e100.mean - s2);
    CHECK(gap100 <= gap25 + 2.0 * (e25.std_error + e100.std_error));
}

TEST_CASE("stationary autocovariance") {
    // classical OU: rho(r) = e^{-r} / 2
    CHECK(std::abs(rho_stationary(1.0, HurstParam(0.5)) - std::exp(-1.0) / 2.0) < 1e-3);
    // rho(0) approaches a = H Gamma(2H)
    const double a3 = expansions::sigma_consts(HurstParam(0.3)).a;
    CHECK(std::abs(rho_stationary(0.0, HurstParam(0.3)) - a3) <= 0.01 * a3);
    // power-decay plateau for H > 1/2: rho(r) r^{2-2H} stabilizes
    std::vector<double> plateau;
    for (double r : {5.0, 10.0, 20.0})
        plateau.push_back(rho_stationary(r, HurstParam(0.7), 0.0, {1e-5, 1e-8, 60'000'000}) *
                          std::pow(r, 0.6));
    const double mx = *std::max_element(plateau.begin(), plateau.end());
    const double mn = *std::min_element(plateau.begin(), plateau.end());
    CHECK(mx / mn < 1.25);
}

TEST_CASE("rho squared integral at the Brownian point") {
    const auto r = rho_sq_integral(HurstParam(0.5));
    CHECK(r.value == Catch::Approx(0.125).epsilon(1e-3));
    CHECK_FALSE(r.tail_warning);
    // cutting the integral short raises the tail flag
    const auto shortr = rho_sq_integral(HurstParam(0.6), 5.0);
    CHECK(shortr.tail_warning);
    CHECK_THROWS_AS(rho_sq_integral(HurstParam(0.8)), std::domain_error);
}
