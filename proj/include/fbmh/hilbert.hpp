#pragma once

// The canonical Hilbert space of fractional Brownian motion on [0, T]:
// inner products of bounded-variation functions via the simplified
// kernel formula
//
//   <f, g> = H int f(t) |t-s|^{2H-1} sgn(t-s) dt  nu_g(ds),
//
// plus a discretized increment-covariance oracle for the tensor square.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fbmh/bv_function.hpp"
#include "fbmh/detail/threading.hpp"
#include "fbmh/hurst.hpp"
#include "fbmh/quadrature.hpp"
#include "fbmh/special_functions.hpp"

namespace fbmh::hilbert {

using numerics::IntegralResult;
using numerics::NonConvergence;
using numerics::QuadratureSpec;
using numerics::SingularityAnnotation;

// R(s,t) = (s^{2H} + t^{2H} - |s-t|^{2H}) / 2
struct FbmCovariance {
    double two_h;
    explicit FbmCovariance(const HurstParam& h) : two_h(2.0 * h.value()) {}
    double operator()(double s, double t) const {
        if (s < 0.0 || t < 0.0) throw std::domain_error("FbmCovariance: negative time");
        return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(s - t), two_h));
    }
};

inline double fbm_covariance(double s, double t, const HurstParam& h) {
    return FbmCovariance(h)(s, t);
}

inline QuadratureSpec default_inner_product_spec() { return {1e-8, 1e-10, 60'000'000}; }

namespace detail {

// e^{-t} int_0^t e^x x^beta dx for any beta > -1 (the public
// scaled_lower_inc keeps the (-1, 0] contract).
inline double exp_scaled_lower_inc(double beta, double t, const QuadratureSpec& spec) {
    if (beta <= 0.0) return numerics::scaled_lower_inc(beta, t, spec);
    if (t <= 50.0) {
        auto f = [&](double x) { return std::exp(x - t) * std::pow(x, beta); };
        return numerics::integrate_1d(f, 0.0, t, {SingularityAnnotation::at_lower(0.0)}, spec).value;
    }
    auto f = [&](double u) { return std::exp(-u) * std::pow(t - u, beta); };
    return numerics::integrate_1d(f, 0.0, t, {SingularityAnnotation::at_upper(0.0)}, spec).value;
}

}  // namespace detail

// int_0^T f(t) |t-s|^{2H-1} sgn(t-s) dt, split at s and at the breakpoints
// of f; the |t-s|^{2H-1} factor is singular at t = s for H < 1/2 and has an
// unbounded derivative there for H > 1/2.
inline IntegralResult kernel_integral(const BVFunction& f, double s, const HurstParam& h,
                                      const QuadratureSpec& spec = default_inner_product_spec()) {
    const double T = f.domain_length();
    const double beta = h.value() == 0.5 ? 0.0 : 2.0 * h.value() - 1.0;
    std::vector<double> cuts = f.breakpoints();
    if (s > 0.0 && s < T) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // segments touching s are integrated in the distance variable
    // d = |t - s|, which keeps the singular factor d^beta exact where the
    // direct form t - s would cancel catastrophically
    const double s_below = std::nextafter(s, -1.0);
    const double s_above = std::nextafter(s, T + 1.0);

    IntegralResult total{0.0, 0.0, 0};
    auto accumulate = [&](IntegralResult r, double sign) {
        total.value += sign * r.value;
        total.abs_error_estimate += r.abs_error_estimate;
        total.evaluations += r.evaluations;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        QuadratureSpec sub = spec;
        if (total.evaluations >= sub.max_evals)
            throw NonConvergence("kernel_integral: evaluation budget exhausted");
        sub.max_evals -= total.evaluations;
        sub.abs_tol = spec.abs_tol / static_cast<double>(cuts.size());
        if (b == s || (i + 2 == cuts.size() && s >= T)) {
            // t in [a, s): contributes -int_0^{s-a} f(s-d) d^beta dd
            auto g = [&](double d) { return f.value_at(std::min(s - d, s_below)) * std::pow(d, beta); };
            accumulate(numerics::integrate_1d(g, 0.0, s - a, {SingularityAnnotation::at_lower(std::min(beta, 0.0))}, sub),
                       -1.0);
        } else if (a == s || (i == 0 && s <= 0.0)) {
            // t in (s, b]: contributes +int_0^{b-s} f(s+d) d^beta dd
            auto g = [&](double d) { return f.value_at(std::max(s + d, s_above)) * std::pow(d, beta); };
            accumulate(numerics::integrate_1d(g, 0.0, b - s, {SingularityAnnotation::at_lower(std::min(beta, 0.0))}, sub),
                       1.0);
        } else {
            auto g = [&](double t) {
                const double d = t - s;
                return f.value_at(t) * std::pow(std::abs(d), beta) * (d > 0.0 ? 1.0 : -1.0);
            };
            accumulate(numerics::integrate_1d(g, a, b, sub), 1.0);
        }
    }
    total.evaluations = std::max<std::size_t>(total.evaluations, 1);
    return total;
}

// Prop.-1 inner product of two BV functions sharing the domain [0, T].
// For H = 1/2 the space is L^2[0,T] and the product reduces to int f g dt.
inline double inner_product(const BVFunction& f, const BVFunction& g, const HurstParam& h,
                            const QuadratureSpec& spec = default_inner_product_spec()) {
    const double T = f.domain_length();
    if (std::abs(T - g.domain_length()) > 1e-12 * std::max(1.0, T))
        throw std::domain_error("inner_product: domains differ");

    if (h.is_brownian()) {
        std::vector<double> cuts = f.breakpoints();
        for (double x : g.breakpoints()) cuts.push_back(x);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        double v = 0.0;
        auto prod = [&](double t) { return f.value_at(t) * g.value_at(t); };
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i]) v += numerics::integrate_1d(prod, cuts[i], cuts[i + 1], spec).value;
        return v;
    }

    const StieltjesMeasure nu = measure_of(g);
    std::size_t evals = 0;
    QuadratureSpec sub = spec;

    double atom_part = 0.0;
    for (const Atom& a : nu.atoms) {
        sub.max_evals = spec.max_evals > evals ? spec.max_evals - evals : 0;
        IntegralResult k = kernel_integral(f, a.location, h, sub);
        evals += k.evaluations;
        atom_part += a.mass * k.value;
    }

    // density part: int_0^T g'(s) K(s) ds with K evaluated by quadrature;
    // dead zones of g' skip the inner integral entirely
    const double k_bound =
        f.sup_norm_estimate() * 2.0 * std::pow(T, 2.0 * h.value()) / (2.0 * h.value()) + 1e-30;
    const double outer_abs = std::max(spec.abs_tol, 0.3 * spec.rel_tol * (std::abs(atom_part) + 1e-3));
    const double skip = outer_abs * 1e-3 / std::max(1.0, T);
    QuadratureSpec inner = spec.with_tols(outer_abs, outer_abs).nested(3e-3, T);
    inner.rel_tol = std::max(spec.rel_tol * 3e-3, 2e-13);

    auto outer_integrand = [&](double s) {
        const double gp = g.deriv_at(s);
        if (std::abs(gp) * k_bound < skip) return 0.0;
        QuadratureSpec is = inner;
        is.max_evals = spec.max_evals > evals ? spec.max_evals - evals : 0;
        IntegralResult k = kernel_integral(f, s, h, is);
        evals += k.evaluations;
        return gp * k.value;
    };

    std::vector<SingularityAnnotation> outer_sing;
    outer_sing.push_back(SingularityAnnotation::at_lower(0.0));
    outer_sing.push_back(SingularityAnnotation::at_upper(0.0));
    for (double p : f.breakpoints())
        if (p > 0.0 && p < T) outer_sing.push_back(SingularityAnnotation::at(p, 0.0));
    for (double p : g.breakpoints())
        if (p > 0.0 && p < T) outer_sing.push_back(SingularityAnnotation::at(p, 0.0));

    QuadratureSpec outer_spec{spec.rel_tol, outer_abs, spec.max_evals};
    const double density_part =
        numerics::integrate_1d(outer_integrand, 0.0, T,
                               std::span<const SingularityAnnotation>(outer_sing), outer_spec)
            .value;

    return h.value() * (atom_part + density_part);
}

// E[eta_t^2] for the fOU process with theta = 1, by the reduced formula
//   H int_0^t e^{u-t} [ e^{-t} u^{2H-1} + (t-u)^{2H-1} ] du.
inline double fou_variance(double t, const HurstParam& h, double rel_tol = 1e-11) {
    if (t < 0.0) throw std::domain_error("fou_variance: t >= 0");
    if (t == 0.0) return 0.0;
    const double beta = 2.0 * h.value() - 1.0;
    const QuadratureSpec spec{rel_tol, 1e-300, 2'000'000};
    const double first = std::exp(-t) * hilbert::detail::exp_scaled_lower_inc(beta, t, spec);
    const double second = numerics::lower_incomplete_gamma(beta + 1.0, t, spec);
    return h.value() * (first + second);
}

// rho1(t, s) = E[eta_t eta_s] = <h_t, h_s> on [0, max(t, s)].
inline double rho1(double t, double s, const HurstParam& h,
                   const QuadratureSpec& spec = default_inner_product_spec()) {
    if (t < 0.0 || s < 0.0) throw std::domain_error("rho1: negative time");
    if (t == 0.0 || s == 0.0) return 0.0;
    if (t == s) return fou_variance(t, h, spec.rel_tol * 0.1);
    const double tau = std::max(t, s);
    const BVFunction ht = BVFunction::exp_kernel(t, tau);
    const BVFunction hs = BVFunction::exp_kernel(s, tau);
    return inner_product(ht, hs, h, spec);
}

// b_T = (1/T) int_0^T E[eta_t^2] dt
inline double b_T(double T, const HurstParam& h,
                  const QuadratureSpec& spec = {1e-10, 1e-13, 80'000'000}) {
    if (!(T > 0.0)) throw std::domain_error("b_T: T > 0");
    auto f = [&](double t) { return fou_variance(t, h, spec.rel_tol * 0.02); };
    const IntegralResult r =
        numerics::integrate_1d(f, 0.0, T, {SingularityAnnotation::at_lower(0.0)}, spec);
    return r.value / T;
}

// ||f2||^2 in the tensor square, approximated by expanding f2 in indicator
// steps on an n x n grid and contracting twice against the exact increment
// covariance M_ik = E[dB_i dB_k]:  sum_{j,l} (F^T M F)_{jl} M_{jl}.
template <class F2>
double discrete_norm_oracle_2d(F2&& f2, const HurstParam& h, std::size_t n, double T) {
    if (n < 8) throw std::domain_error("discrete_norm_oracle_2d: n >= 8");
    if (!(T > 0.0)) throw std::domain_error("discrete_norm_oracle_2d: T > 0");
    const double dt = T / static_cast<double>(n);
    const double two_h = 2.0 * h.value();

    // grid covariance R(u_i, u_k), then second differences
    std::vector<double> R((n + 1) * (n + 1));
    fbmh::detail::parallel_for(n + 1, [&](std::size_t i) {
        const double ui = dt * static_cast<double>(i);
        const double pi = std::pow(ui, two_h);
        for (std::size_t k = 0; k <= n; ++k) {
            const double uk = dt * static_cast<double>(k);
            const double d = std::abs(ui - uk);
            R[i * (n + 1) + k] = 0.5 * (pi + std::pow(uk, two_h) - std::pow(d, two_h));
        }
    });
    std::vector<double> M(n * n), F(n * n);
    fbmh::detail::parallel_for(n, [&](std::size_t i) {
        const double mi = dt * (static_cast<double>(i) + 0.5);
        for (std::size_t k = 0; k < n; ++k) {
            M[i * n + k] = R[(i + 1) * (n + 1) + (k + 1)] - R[(i + 1) * (n + 1) + k] -
                           R[i * (n + 1) + (k + 1)] + R[i * (n + 1) + k];
            F[i * n + k] = f2(mi, dt * (static_cast<double>(k) + 0.5));
        }
    });
    R.clear();
    R.shrink_to_fit();

    auto matmul = [n](const std::vector<double>& A, const std::vector<double>& B,
                      std::vector<double>& C) {
        fbmh::detail::parallel_for(n, [&](std::size_t i) {
            double* Ci = &C[i * n];
            for (std::size_t k = 0; k < n; ++k) Ci[k] = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double a = A[i * n + j];
                const double* Bj = &B[j * n];
                for (std::size_t k = 0; k < n; ++k) Ci[k] += a * Bj[k];
            }
        });
    };

    std::vector<double> A(n * n), Ft(n * n), C(n * n);
    matmul(M, F, A);  // A = M F
    fbmh::detail::parallel_for(n, [&](std::size_t i) {
        for (std::size_t k = 0; k < n; ++k) Ft[i * n + k] = F[k * n + i];
    });
    matmul(Ft, A, C);  // C = F^T M F

    std::vector<double> row_sums(n, 0.0);
    fbmh::detail::parallel_for(n, [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += C[j * n + l] * M[j * n + l];
        row_sums[j] = s;
    });
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += row_sums[j];
    return total;
}

}  // namespace fbmh::hilbert
