#pragma once

// ||f_T||^2 in the tensor square of the canonical Hilbert space, for
// f_T(t,s) = e^{-|t-s|} 1_{[0,T]^2}, evaluated exactly (to quadrature
// tolerance) through the dimension reductions of the proof: no asymptotic
// truncation anywhere.  Every kinked 2D domain is split along x = z and
// x + z = T before quadrature so integrands are smooth on each cell.

#include <cmath>
#include <string>

#include "fbmh/hilbert.hpp"
#include "fbmh/hurst.hpp"
#include "fbmh/quadrature.hpp"
#include "fbmh/special_functions.hpp"

namespace fbmh::ftnorm {

using numerics::IntegralResult;
using numerics::NonConvergence;
using numerics::QuadratureSpec;
using numerics::SingularityAnnotation;

inline QuadratureSpec default_norm_spec() { return {1e-8, 1e-10, 10'000'000}; }

struct NormComponents {
    HurstBranch branch = HurstBranch::brownian;
    double total = 0.0;
    // lowH decomposition: total = H^2 (I1 + 2 I2 + I3)
    double i1 = 0.0, i2 = 0.0, i3 = 0.0;
    // highH decomposition: total = 4 H^2 (2H-1)^2 (J1 + J2bar + L23pair)
    double j1 = 0.0, j2bar = 0.0, l23pair = 0.0;
    // brownian: total = closed_form = T - (1 - e^{-2T})/2
    double closed_form = 0.0;
};

namespace detail {

// shared evaluation state: one budget across all component integrals
struct Budget {
    std::size_t remaining;
    QuadratureSpec spec;

    QuadratureSpec sub() const {
        QuadratureSpec s = spec;
        s.max_evals = remaining;
        return s;
    }
    void charge(const IntegralResult& r, const char* component) {
        if (r.evaluations >= remaining)
            throw NonConvergence(std::string("norm_fT_sq[") + component +
                                 "]: evaluation budget exhausted");
        remaining -= r.evaluations;
    }
};

template <class F>
double run(Budget& b, const char* component, F&& f) {
    try {
        IntegralResult r = f(b.sub());
        b.charge(r, component);
        return r.value;
    } catch (const NonConvergence& e) {
        throw NonConvergence(std::string("norm_fT_sq[") + component + "]: " + e.what());
    }
}

// int_{x+z>=T} e^{x+z-2T} x^b z^b, reduced to one dimension through
// S(y) = e^{-y} int_0^y e^t t^b dt:
//   B(T) = int_0^T e^{x-T} x^b [ S(T) - e^{-x} S(T-x) ] dx.
inline IntegralResult band_exp_sq(double T, double beta, const QuadratureSpec& spec) {
    const QuadratureSpec sub = spec.nested(3e-3);
    const double ST = hilbert::detail::exp_scaled_lower_inc(beta, T, sub);
    std::size_t evals = 0;
    auto f = [&](double x) {
        evals += 600;  // rough cost of the nested S call
        const double inner =
            x >= T ? ST : ST - std::exp(-x) * hilbert::detail::exp_scaled_lower_inc(beta, T - x, sub);
        return std::exp(x - T) * std::pow(x, beta) * inner;
    };
    IntegralResult r = numerics::integrate_1d(
        f, 0.0, T, {SingularityAnnotation::at_lower(std::min(beta, 0.0))}, spec);
    r.evaluations += evals;
    return r;
}

// J1 with the square-difference terms folded into one triangle integrand:
//   J1 = B/4 + int_{0<=x<=z<=T} e^{-x-z} x^b z^b [ G(x,z) + (z-x)(T-z) ]
// where on x+z<=T:  G = x (2(T-z) - x) - (T-x-z) + 1/2
//       on x+z>=T:  G = (T-z)^2.
inline double j1_component(double T, double beta, Budget& b) {
    const double band = run(b, "J1:band", [&](QuadratureSpec s) { return band_exp_sq(T, beta, s); });
    const double e_in = std::min(beta, 0.0);
    const double pinch = std::clamp(2.0 * beta + 1.0, -0.9995, 0.0);

    auto w_le = [T](double x, double z) {
        return x * (2.0 * (T - z) - x) - (T - x - z) + 0.5 + (z - x) * (T - z);
    };
    auto w_ge = [T](double x, double z) { return (T - z) * (T - z) + (z - x) * (T - z); };

    auto f_le = [&](double x, double z) {
        return std::exp(-x - z) * std::pow(x, beta) * std::pow(z, beta) * w_le(x, z);
    };
    auto f_ge = [&](double x, double z) {
        return std::exp(-x - z) * std::pow(x, beta) * std::pow(z, beta) * w_ge(x, z);
    };

    std::vector<SingularityAnnotation> lo_sing{SingularityAnnotation::at_lower(pinch)};
    std::vector<SingularityAnnotation> hi_sing{SingularityAnnotation::at_upper(0.0)};

    const double tri_a = run(b, "J1:tri_le_a", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f_le, 0.0, T / 2.0, [](double) { return 0.0; }, [](double z) { return z; },
            std::span<const SingularityAnnotation>(lo_sing), e_in, s);
    });
    const double tri_b = run(b, "J1:tri_le_b", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f_le, T / 2.0, T, [](double) { return 0.0; }, [T](double z) { return T - z; },
            std::span<const SingularityAnnotation>(hi_sing), e_in, s);
    });
    const double tri_c = run(b, "J1:tri_ge", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f_ge, T / 2.0, T, [T](double z) { return T - z; }, [](double z) { return z; },
            std::span<const SingularityAnnotation>(hi_sing), e_in, s);
    });
    return 0.25 * band + tri_a + tri_b + tri_c;
}

// triangle integral of e^{x-z} x^b z^b times a polynomial bracket
template <class W>
double exp_diff_triangle(double T, double beta, Budget& b, const char* name, W&& bracket) {
    const double e_in = std::min(beta, 0.0);
    const double pinch = std::clamp(2.0 * beta + 1.0, -0.9995, 0.0);
    auto f = [&](double x, double z) {
        return std::exp(x - z) * std::pow(x, beta) * std::pow(z, beta) * bracket(x, z);
    };
    std::vector<SingularityAnnotation> lo_sing{SingularityAnnotation::at_lower(pinch)};
    return run(b, name, [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f, 0.0, T, [](double) { return 0.0; }, [](double z) { return z; },
            std::span<const SingularityAnnotation>(lo_sing), e_in, s);
    });
}

}  // namespace detail

// L1(T) = J1 + J2 with beta = 2H-1; the inner integral of the lowH branch
// (equal to I1/4).  Valid for H in (0, 3/4).
inline double l1_quadrature(double T, const HurstParam& h,
                            const QuadratureSpec& spec = default_norm_spec()) {
    if (!(h.value() < 0.75)) throw std::domain_error("l1_quadrature: H < 3/4");
    const double beta = h.beta_low();
    detail::Budget b{spec.max_evals, spec};
    const double j1 = detail::j1_component(T, beta, b);
    const double j2 = detail::exp_diff_triangle(T, beta, b, "J2", [T](double x, double z) {
        return T - z - 0.5 - (z - x) * (T - z);
    });
    return j1 + j2;
}

// L2(T) = J1 + J2bar + L23pair with beta = 2H-2; the inner integral of the
// highH branch.  Valid for H in (1/2, 1).
inline double l2_quadrature(double T, const HurstParam& h,
                            const QuadratureSpec& spec = default_norm_spec()) {
    if (!(h.value() > 0.5)) throw std::domain_error("l2_quadrature: H > 1/2");
    const double beta = h.beta_high();
    detail::Budget b{spec.max_evals, spec};
    const double j1 = detail::j1_component(T, beta, b);
    const double j2bar = detail::exp_diff_triangle(T, beta, b, "J2bar", [T](double x, double z) {
        return (z - x) * (T - z) + T - z - 0.5;
    });
    // L23pair = int_{x+z<=T} e^{-x-z} x^b z^b [ Y + expm1(-2Y)/2 ],  Y = T-x-z
    auto f = [&](double x, double z) {
        const double y = T - x - z;
        return std::exp(-x - z) * std::pow(x, beta) * std::pow(z, beta) *
               (y + 0.5 * std::expm1(-2.0 * y));
    };
    std::vector<SingularityAnnotation> zsing{SingularityAnnotation::at_lower(std::min(beta, 0.0)),
                                             SingularityAnnotation::at_upper(0.0)};
    const double l23 = detail::run(b, "L23pair", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f, 0.0, T, [](double) { return 0.0; }, [T](double z) { return T - z; },
            std::span<const SingularityAnnotation>(zsing), beta, s);
    });
    return j1 + j2bar + l23;
}

namespace detail {

inline void fill_low(NormComponents& out, double T, const HurstParam& h, const QuadratureSpec& spec) {
    const double beta = h.beta_low();
    Budget b{spec.max_evals, spec};
    const double j1 = j1_component(T, beta, b);
    const double j2 = exp_diff_triangle(T, beta, b, "J2", [T](double x, double z) {
        return T - z - 0.5 - (z - x) * (T - z);
    });
    out.i1 = 4.0 * (j1 + j2);

    // I21 over {x <= s}, split along x + s = T; doubled by symmetry
    auto f_a = [&](double x, double s) {
        return std::pow(x, beta) * std::pow(s, beta) *
               ((x - 0.5) * std::exp(-x - s) + 0.5 * std::exp(x - s));
    };
    auto f_b = [&](double x, double s) {
        return std::pow(x, beta) * std::pow(s, beta) *
               ((T - s) * std::exp(-x - s) + 0.5 * std::exp(x - s) - 0.5 * std::exp(x + s - 2.0 * T));
    };
    const double pinch = std::clamp(2.0 * beta + 1.0, -0.9995, 0.0);
    std::vector<SingularityAnnotation> lo_sing{SingularityAnnotation::at_lower(pinch)};
    std::vector<SingularityAnnotation> hi_sing{SingularityAnnotation::at_upper(0.0)};
    std::vector<SingularityAnnotation> both{SingularityAnnotation::at_lower(std::min(beta, 0.0)),
                                            SingularityAnnotation::at_upper(0.0)};
    const double i21_a1 = run(b, "I21:le_a", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f_a, 0.0, T / 2.0, [](double) { return 0.0; }, [](double z) { return z; },
            std::span<const SingularityAnnotation>(lo_sing), std::min(beta, 0.0), s);
    });
    const double i21_a2 = run(b, "I21:le_b", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f_a, T / 2.0, T, [](double) { return 0.0; }, [T](double z) { return T - z; },
            std::span<const SingularityAnnotation>(both), std::min(beta, 0.0), s);
    });
    const double i21_b = run(b, "I21:ge", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f_b, T / 2.0, T, [T](double z) { return T - z; }, [](double z) { return z; },
            std::span<const SingularityAnnotation>(hi_sing), std::min(beta, 0.0), s);
    });
    const double i21 = 2.0 * (i21_a1 + i21_a2 + i21_b);

    auto f22 = [&](double x, double s) {
        return (std::exp(-x - s) - std::exp(x - s)) * std::pow(x, beta) * std::pow(s, beta) * (s - x);
    };
    const double i22v = run(b, "I22", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f22, 0.0, T, [](double) { return 0.0; }, [](double z) { return z; },
            std::span<const SingularityAnnotation>(lo_sing), std::min(beta, 0.0), s);
    });
    out.i2 = 2.0 * (i21 + i22v);

    const QuadratureSpec sub{spec.rel_tol * 0.1, spec.abs_tol * 0.1, b.remaining};
    const double g = numerics::lower_incomplete_gamma(2.0 * h.value(), T, sub);
    const double sv = numerics::scaled_lower_inc(beta, T, sub);
    out.i3 = 2.0 * (g * g + sv * sv);

    const double h2 = h.value() * h.value();
    out.total = h2 * (out.i1 + 2.0 * out.i2 + out.i3);
}

inline void fill_high(NormComponents& out, double T, const HurstParam& h, const QuadratureSpec& spec) {
    const double beta = h.beta_high();
    Budget b{spec.max_evals, spec};
    out.j1 = j1_component(T, beta, b);
    out.j2bar = exp_diff_triangle(T, beta, b, "J2bar", [T](double x, double z) {
        return (z - x) * (T - z) + T - z - 0.5;
    });
    auto f = [&](double x, double z) {
        const double y = T - x - z;
        return std::exp(-x - z) * std::pow(x, beta) * std::pow(z, beta) *
               (y + 0.5 * std::expm1(-2.0 * y));
    };
    std::vector<SingularityAnnotation> zsing{SingularityAnnotation::at_lower(std::min(beta, 0.0)),
                                             SingularityAnnotation::at_upper(0.0)};
    out.l23pair = run(b, "L23pair", [&](QuadratureSpec s) {
        return numerics::integrate_region(
            f, 0.0, T, [](double) { return 0.0; }, [T](double z) { return T - z; },
            std::span<const SingularityAnnotation>(zsing), beta, s);
    });
    const double hh = h.value();
    const double f2 = 2.0 * hh - 1.0;
    out.total = 4.0 * hh * hh * f2 * f2 * (out.j1 + out.j2bar + out.l23pair);
}

}  // namespace detail

inline NormComponents norm_fT_sq(double T, const HurstParam& h,
                                 const QuadratureSpec& spec = default_norm_spec()) {
    if (!(T > 0.0)) throw std::domain_error("norm_fT_sq: T > 0");
    NormComponents out;
    out.branch = h.branch();
    switch (out.branch) {
        case HurstBranch::brownian:
            out.closed_form = T - 0.5 * (-std::expm1(-2.0 * T));
            out.total = out.closed_form;
            break;
        case HurstBranch::lowH:
            detail::fill_low(out, T, h, spec);
            break;
        case HurstBranch::highH:
            detail::fill_high(out, T, h, spec);
            break;
    }
    return out;
}

// Independent estimate through the discretized increment-covariance oracle;
// shares nothing with the reduction path beyond the covariance R itself.
inline double norm_fT_sq_bruteforce(double T, const HurstParam& h, std::size_t n) {
    return hilbert::discrete_norm_oracle_2d(
        [](double t, double s) { return std::exp(-std::abs(t - s)); }, h, n, T);
}

inline double norm_over_2T(double T, const HurstParam& h,
                           const QuadratureSpec& spec = default_norm_spec()) {
    return norm_fT_sq(T, h, spec).total / (2.0 * T);
}

}  // namespace fbmh::ftnorm
