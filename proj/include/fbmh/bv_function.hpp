#pragma once

// Bounded-variation functions on [0, T] represented as smooth pieces plus
// explicit step components, and their Lebesgue-Stieltjes measures.  The
// measure convention: nu_g carries +g(0+) at 0 and -g(T-) at T (the jumps
// of the zero-extension of g across the interval boundary); interior atoms
// are right-minus-left limits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fbmh {

struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

struct SmoothPiece {
    double a = 0.0, b = 0.0;  // piece covers [a, b)
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

class BVFunction {
public:
    BVFunction(double domain_length, std::vector<SmoothPiece> pieces, std::vector<Atom> steps = {})
        : T_(domain_length), pieces_(std::move(pieces)), steps_(std::move(steps)) {
        if (!(T_ > 0.0)) throw std::domain_error("BVFunction: domain length must be positive");
        if (pieces_.empty()) throw std::domain_error("BVFunction: needs at least one piece");
        double expect = 0.0;
        for (const auto& p : pieces_) {
            if (std::abs(p.a - expect) > 1e-12 * std::max(1.0, T_))
                throw std::domain_error("BVFunction: pieces must cover [0, T] contiguously");
            if (!(p.b > p.a)) throw std::domain_error("BVFunction: empty piece");
            expect = p.b;
        }
        if (std::abs(expect - T_) > 1e-12 * std::max(1.0, T_))
            throw std::domain_error("BVFunction: pieces must end at T");
        for (const auto& s : steps_) {
            if (s.location < 0.0 || s.location >= T_)
                throw std::domain_error("BVFunction: step locations lie in [0, T)");
        }
    }

    double domain_length() const { return T_; }
    const std::vector<SmoothPiece>& pieces() const { return pieces_; }
    const std::vector<Atom>& steps() const { return steps_; }

    // value of g at u, right-continuous at step locations
    double value_at(double u) const {
        const auto& p = piece_for(u);
        double v = p.value(u);
        for (const auto& s : steps_)
            if (u >= s.location) v += s.mass;
        return v;
    }

    double deriv_at(double u) const { return piece_for(u).deriv(u); }

    // one-sided limits, treating piece boundaries and steps
    double limit_right(double u) const {
        double v = 0.0;
        for (const auto& p : pieces_)
            if (u >= p.a - 1e-14 * T_ && u < p.b) {
                v = p.value(u);
                break;
            }
        if (u >= pieces_.back().b - 1e-14 * T_) v = pieces_.back().value(u);
        for (const auto& s : steps_)
            if (u >= s.location) v += s.mass;
        return v;
    }
    double limit_left(double u) const {
        double v = 0.0;
        for (const auto& p : pieces_)
            if (u > p.a && u <= p.b) {
                v = p.value(u);
                break;
            }
        for (const auto& s : steps_)
            if (u > s.location) v += s.mass;
        return v;
    }

    // every point where the function may be non-smooth
    std::vector<double> breakpoints() const {
        std::vector<double> bp;
        for (const auto& p : pieces_) bp.push_back(p.a);
        for (const auto& s : steps_) bp.push_back(s.location);
        bp.push_back(T_);
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end(),
                             [&](double x, double y) { return std::abs(x - y) < 1e-14 * std::max(1.0, T_); }),
                 bp.end());
        return bp;
    }

    // samples stay strictly inside each piece; boundary peaks are caught by
    // the near-edge points
    double sup_norm_estimate() const {
        double m = 0.0;
        for (const auto& p : pieces_) {
            const double w = p.b - p.a;
            for (int i = 0; i < 9; ++i) {
                const double u = p.a + w * (0.5 + i) / 9.0;
                m = std::max(m, std::abs(value_at(u)));
            }
            m = std::max(m, std::abs(value_at(p.a + w * 1e-9)));
            m = std::max(m, std::abs(value_at(p.b - w * 1e-9)));
        }
        return m;
    }

    // --- common constructions ---

    static BVFunction constant(double c, double T) {
        return BVFunction(T, {SmoothPiece{0.0, T, [c](double) { return c; }, [](double) { return 0.0; }}});
    }

    // indicator of [a, b] within [0, T]
    static BVFunction indicator(double a, double b, double T) {
        if (!(0.0 <= a && a < b && b <= T)) throw std::domain_error("indicator: 0 <= a < b <= T");
        std::vector<SmoothPiece> ps;
        auto zero = [](double) { return 0.0; };
        auto one = [](double) { return 1.0; };
        if (a > 0.0) ps.push_back({0.0, a, zero, zero});
        ps.push_back({a, b, one, zero});
        if (b < T) ps.push_back({b, T, zero, zero});
        return BVFunction(T, std::move(ps));
    }

    // h_t(u) = e^{u-t} 1_{[0,t]}(u) on [0, T], the fOU integrand kernel
    static BVFunction exp_kernel(double t, double T) {
        if (!(t > 0.0 && t <= T)) throw std::domain_error("exp_kernel: 0 < t <= T");
        std::vector<SmoothPiece> ps;
        auto e = [t](double u) { return std::exp(u - t); };
        ps.push_back({0.0, t, e, e});
        if (t < T) {
            auto zero = [](double) { return 0.0; };
            ps.push_back({t, T, zero, zero});
        }
        return BVFunction(T, std::move(ps));
    }

    static BVFunction ramp(double T) {
        return BVFunction(T, {SmoothPiece{0.0, T, [](double u) { return u; }, [](double) { return 1.0; }}});
    }

    // alpha * f + g on a shared domain
    static BVFunction scaled_sum(double alpha, const BVFunction& f, const BVFunction& g) {
        if (std::abs(f.domain_length() - g.domain_length()) > 1e-12)
            throw std::domain_error("scaled_sum: domains differ");
        const double T = f.domain_length();
        std::vector<double> bp = f.breakpoints();
        for (double x : g.breakpoints()) bp.push_back(x);
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end(),
                             [&](double x, double y) { return std::abs(x - y) < 1e-14 * std::max(1.0, T); }),
                 bp.end());
        auto value = [alpha, fc = f, gc = g](double u) { return alpha * fc.value_at(u) + gc.value_at(u); };
        auto deriv = [alpha, fc = f, gc = g](double u) { return alpha * fc.deriv_at(u) + gc.deriv_at(u); };
        std::vector<SmoothPiece> ps;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) ps.push_back({bp[i], bp[i + 1], value, deriv});
        return BVFunction(T, std::move(ps));
    }

private:
    const SmoothPiece& piece_for(double u) const {
        for (const auto& p : pieces_)
            if (u >= p.a && u < p.b) return p;
        return pieces_.back();  // u == T
    }

    double T_;
    std::vector<SmoothPiece> pieces_;
    std::vector<Atom> steps_;
};

// The Lebesgue-Stieltjes measure nu_g of a BV function.
struct StieltjesMeasure {
    std::vector<Atom> atoms;               // endpoint + interior jumps
    const BVFunction* source = nullptr;    // density is source->deriv_at
};

inline StieltjesMeasure measure_of(const BVFunction& g) {
    const double T = g.domain_length();
    StieltjesMeasure m;
    m.source = &g;
    auto push = [&](double loc, double mass) {
        if (mass != 0.0) m.atoms.push_back({loc, mass});
    };
    push(0.0, g.limit_right(0.0));
    for (double p : g.breakpoints()) {
        if (p <= 0.0 || p >= T) continue;
        push(p, g.limit_right(p) - g.limit_left(p));
    }
    push(T, -g.limit_left(T));
    return m;
}

}  // namespace fbmh
