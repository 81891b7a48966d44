#pragma once

// The verification suite: each criterion exercises one quantitative claim
// end to end and reports one pass/fail line.  Tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "fbmh/expansions.hpp"
#include "fbmh/fousim.hpp"
#include "fbmh/ftnorm.hpp"
#include "fbmh/hilbert.hpp"

namespace fbmh::acceptance {

inline constexpr std::uint64_t kDefaultMcSeed = 20260613ULL;

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;

    CriterionResult() = default;
    CriterionResult(int id_, std::string name_) : id(id_), name(std::move(name_)) {}
};

namespace detail {

inline std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

inline double max_over_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double mx = v.back();
    const std::size_t n = v.size();
    const double med = (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    return mx / med;
}

inline const std::vector<double>& t_grid() {
    static const std::vector<double> g{25.0, 50.0, 100.0, 200.0};
    return g;
}

}  // namespace detail

// 1. ||f_T||^2 at H = 1/2 equals T - (1 - e^{-2T})/2 to 1e-8 relative.
inline CriterionResult criterion_brownian() {
    CriterionResult r{1, "brownian-exactness"};
    double worst = 0.0;
    for (double T : {1.0, 5.0, 10.0}) {
        const double got = ftnorm::norm_fT_sq(T, HurstParam(0.5)).total;
        const double want = T - 0.5 * (-std::expm1(-2.0 * T));
        worst = std::max(worst, std::abs(got - want) / want);
    }
    r.pass = worst <= 1e-8;
    r.detail = detail::fmt("max rel gap %.3e (tol 1e-8)", worst);
    return r;
}

// 2. Reduction engine vs n=1024 discrete oracle within 3% relative.
inline CriterionResult criterion_oracle_equivalence() {
    CriterionResult r{2, "oracle-equivalence"};
    double worst = 0.0;
    std::string worst_at;
    for (double H : {0.25, 0.3, 0.6, 0.7}) {
        for (double T : {1.0, 2.0}) {
            const double engine = ftnorm::norm_fT_sq(T, HurstParam(H)).total;
            const double oracle = ftnorm::norm_fT_sq_bruteforce(T, HurstParam(H), 1024);
            const double gap = std::abs(engine - oracle) / std::abs(oracle);
            if (gap > worst) {
                worst = gap;
                worst_at = detail::fmt("H=%g,T=%g", H, T);
            }
        }
    }
    r.pass = worst <= 0.03;
    r.detail = detail::fmt("max rel gap %.4f at %s (tol 0.03)", worst, worst_at.c_str());
    return r;
}

// 3. norm / 2T at T = 200 within 1.5% of sigma^2.
inline CriterionResult criterion_sigma_limit() {
    CriterionResult r{3, "sigma2-limit"};
    double worst = 0.0;
    std::string worst_at;
    for (double H : {0.25, 0.3, 0.5, 0.6}) {
        const double s2 = expansions::sigma_consts(HurstParam(H)).sigma2;
        const double got = ftnorm::norm_over_2T(200.0, HurstParam(H));
        const double gap = std::abs(got - s2) / s2;
        if (gap > worst) {
            worst = gap;
            worst_at = detail::fmt("H=%g", H);
        }
    }
    r.pass = worst <= 0.015;
    r.detail = detail::fmt("max rel gap %.4f at %s (tol 0.015)", worst, worst_at.c_str());
    return r;
}

// 4. log-log slope of |norm - expansion| at most 4H-4+0.4 (H = 0.3, 0.6)
//    and at most -1.6 for the H = 3/4 log branch.
inline CriterionResult criterion_theorem_order() {
    CriterionResult r{4, "theorem-residual-order"};
    const numerics::QuadratureSpec spec{1e-10, 1e-12, 40'000'000};
    r.pass = true;
    for (double H : {0.3, 0.6, 0.75}) {
        std::vector<double> resid;
        for (double T : detail::t_grid()) {
            const double quad = ftnorm::norm_fT_sq(T, HurstParam(H), spec).total;
            const double exp = expansions::theorem_expansion(T, HurstParam(H)).value;
            resid.push_back(quad - exp);
        }
        const double slope = expansions::loglog_slope(detail::t_grid(), resid);
        const double bound = (H == 0.75) ? -1.6 : 4.0 * H - 4.0 + 0.4;
        if (slope > bound) r.pass = false;
        r.detail += detail::fmt("%sH=%g: slope %.2f (bound %.2f)", r.detail.empty() ? "" : "; ", H,
                                slope, bound);
    }
    return r;
}

// 5. Scaled residuals |norm/2T - sigma^2| T^{min(1,3-4H)} bounded:
//    max/median at most 3 over the grid.
inline CriterionResult criterion_decay_bound() {
    CriterionResult r{5, "decay-bound"};
    r.pass = true;
    for (double H : {0.25, 0.3, 0.6}) {
        auto rows = expansions::decay_check(HurstParam(H), detail::t_grid());
        std::vector<double> scaled;
        for (const auto& row : rows) scaled.push_back(row.scaled_residual);
        const double ratio = detail::max_over_median(scaled);
        if (ratio > 3.0) r.pass = false;
        r.detail += detail::fmt("%sH=%g: max/med %.2f", r.detail.empty() ? "" : "; ", H, ratio);
    }
    r.detail += " (bound 3)";
    return r;
}

// 6. Oblique asymptote: H = 0.3 gaps decrease with slope at most -0.4;
//    H = 0.5 gap at T = 200 below 1e-6.
inline CriterionResult criterion_asymptote() {
    CriterionResult r{6, "oblique-asymptote"};
    const auto p3 = expansions::asymptote_params(HurstParam(0.3));
    std::vector<double> gaps;
    bool decreasing = true;
    for (double T : detail::t_grid()) {
        const double half_norm = 0.5 * ftnorm::norm_fT_sq(T, HurstParam(0.3)).total;
        gaps.push_back(std::abs(half_norm - (p3.slope * T + p3.intercept)));
        if (gaps.size() > 1 && gaps.back() >= gaps[gaps.size() - 2]) decreasing = false;
    }
    const double slope = expansions::loglog_slope(detail::t_grid(), gaps);
    const auto p5 = expansions::asymptote_params(HurstParam(0.5));
    const double norm5 = 0.5 * ftnorm::norm_fT_sq(200.0, HurstParam(0.5)).total;
    const double gap5 = std::abs(norm5 - (p5.slope * 200.0 + p5.intercept));
    r.pass = decreasing && slope <= -0.4 && gap5 <= 1e-6;
    r.detail = detail::fmt("H=0.3: decreasing=%d slope %.2f (bound -0.4); H=0.5: gap %.2e (tol 1e-6)",
                           static_cast<int>(decreasing), slope, gap5);
    return r;
}

// 7. Every printed lemma expansion against its quadrature oracle, residual
//    scaled by the claimed remainder power: max/median at most 3.
inline CriterionResult criterion_lemma_suite() {
    CriterionResult r{7, "lemma-suite"};
    using expansions::LemmaId;
    struct Case {
        LemmaId id;
        double param;
    };
    std::vector<Case> cases{{LemmaId::A2, -0.9}, {LemmaId::A2, -0.5},  {LemmaId::A2, -0.1},
                            {LemmaId::A3, -0.5}, {LemmaId::A3, -0.2},  {LemmaId::A4, 0.0},
                            {LemmaId::A5, -0.7}, {LemmaId::A5, -0.5},  {LemmaId::A5, -0.3},
                            {LemmaId::A5, 0.2},  {LemmaId::L1, 0.3},   {LemmaId::L1, 0.6},
                            {LemmaId::L2, 0.6},  {LemmaId::L2, 0.9},   {LemmaId::L2_34, 0.0}};
    r.pass = true;
    double worst = 0.0;
    std::string worst_at;
    for (const auto& c : cases) {
        std::vector<double> scaled;
        for (double T : detail::t_grid()) {
            const double oracle = expansions::lemma_oracle(c.id, T, c.param);
            const auto exp = expansions::lemma_expansion(c.id, T, c.param);
            scaled.push_back(std::abs(oracle - exp.value) * std::pow(T, -exp.remainder_exponent));
        }
        const double ratio = detail::max_over_median(scaled);
        if (ratio > worst) {
            worst = ratio;
            worst_at = detail::fmt("%s(%g)", expansions::lemma_name(c.id), c.param);
        }
        if (ratio > 3.0) r.pass = false;
    }
    r.detail = detail::fmt("15 cases, worst max/med %.2f at %s (bound 3)", worst, worst_at.c_str());
    return r;
}

// 8. Monte Carlo E[W_T^2] at T=50, 4096 steps, 2000 paths: within 3 SE of
//    sigma^2 for H in {0.5, 0.6}; within 3 SE or 0.02 absolute for H = 0.3.
inline CriterionResult criterion_mc_wt(std::uint64_t seed = kDefaultMcSeed) {
    CriterionResult r{8, "mc-wt-variance"};
    r.pass = true;
    for (double H : {0.5, 0.6, 0.3}) {
        fousim::McConfig cfg{seed, 4096, 2000, 50.0, HurstParam(H), 1.0};
        const auto est = fousim::mc_wt_variance(cfg);
        const double s2 = expansions::sigma_consts(HurstParam(H)).sigma2;
        const double gap = std::abs(est.mean - s2);
        const bool ok = (gap <= 3.0 * est.std_error) || (H == 0.3 && gap <= 0.02);
        if (!ok) r.pass = false;
        r.detail += detail::fmt("%sH=%g: %.4f+-%.4f vs %.4f (|z|=%.2f)", r.detail.empty() ? "" : "; ",
                                H, est.mean, est.std_error, s2, gap / est.std_error);
    }
    return r;
}

// 9. int_0^inf rho^2 equals sigma^2/4 within 5%.
inline CriterionResult criterion_rho_sq() {
    CriterionResult r{9, "rho-squared-integral"};
    r.pass = true;
    for (double H : {0.25, 0.5, 0.6}) {
        const auto got = fousim::rho_sq_integral(HurstParam(H));
        const double want = expansions::sigma_consts(HurstParam(H)).sigma2 / 4.0;
        const double gap = std::abs(got.value - want) / want;
        if (gap > 0.05) r.pass = false;
        r.detail += detail::fmt("%sH=%g: gap %.3f%%", r.detail.empty() ? "" : "; ", H, 100.0 * gap);
    }
    r.detail += " (tol 5%)";
    return r;
}

// 10. |b_T - a| decays at least like T^{-0.6} on the grid.
inline CriterionResult criterion_bt_rate() {
    CriterionResult r{10, "bT-rate"};
    r.pass = true;
    for (double H : {0.3, 0.6}) {
        const double a = expansions::sigma_consts(HurstParam(H)).a;
        std::vector<double> gaps;
        for (double T : detail::t_grid()) gaps.push_back(std::abs(hilbert::b_T(T, HurstParam(H)) - a));
        const double slope = expansions::loglog_slope(detail::t_grid(), gaps);
        if (slope > -0.6) r.pass = false;
        r.detail += detail::fmt("%sH=%g: slope %.2f", r.detail.empty() ? "" : "; ", H, slope);
    }
    r.detail += " (bound -0.6)";
    return r;
}

inline CriterionResult run_criterion(int id, std::uint64_t mc_seed = kDefaultMcSeed) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    switch (id) {
        case 1: r = criterion_brownian(); break;
        case 2: r = criterion_oracle_equivalence(); break;
        case 3: r = criterion_sigma_limit(); break;
        case 4: r = criterion_theorem_order(); break;
        case 5: r = criterion_decay_bound(); break;
        case 6: r = criterion_asymptote(); break;
        case 7: r = criterion_lemma_suite(); break;
        case 8: r = criterion_mc_wt(mc_seed); break;
        case 9: r = criterion_rho_sq(); break;
        case 10: r = criterion_bt_rate(); break;
        default: throw std::domain_error("run_criterion: id in 1..10");
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::vector<CriterionResult> run_all(std::uint64_t mc_seed = kDefaultMcSeed) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id, mc_seed));
    return out;
}

inline void print_result(const CriterionResult& r, std::FILE* f = stdout) {
    std::fprintf(f, "[%s] %2d %-24s (%6.1f s)  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                 r.seconds, r.detail.c_str());
    std::fflush(f);
}

}  // namespace fbmh::acceptance
