#pragma once

// Adaptive Gauss-Legendre quadrature with graded meshes toward annotated
// endpoint singularities.  One kernel serves every integrable power-law
// endpoint exponent in (-1, 0]; grading depth is derived from the exponent
// and the requested tolerance instead of per-exponent quadrature weights.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbmh::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_evals = 4'000'000;

    QuadratureSpec with_tols(double rel, double abs) const {
        QuadratureSpec s = *this;
        s.rel_tol = rel;
        s.abs_tol = abs;
        return s;
    }
    QuadratureSpec with_budget(std::size_t evals) const {
        QuadratureSpec s = *this;
        s.max_evals = evals;
        return s;
    }
    // tolerances for a nested quadrature feeding this one: tighter by
    // `margin` but never below the double-precision error-estimate floor
    QuadratureSpec nested(double margin, double width_scale = 1.0) const {
        QuadratureSpec s = *this;
        s.rel_tol = std::max(rel_tol * margin, 2e-13);
        s.abs_tol = std::max(abs_tol * margin / std::max(1.0, width_scale), 1e-15);
        return s;
    }
};

inline QuadratureSpec default_spec_1d() { return {1e-10, 1e-12, 4'000'000}; }
inline QuadratureSpec default_spec_2d() { return {1e-8, 1e-10, 10'000'000}; }

struct IntegralResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Integrand behaves like (distance to the annotated point)^exponent.
// exponent must exceed -1 (integrability); exponent 0 marks a point that
// is merely non-smooth (kink, bounded derivative blow-up) and still gets
// a graded mesh plus an exact split.
struct SingularityAnnotation {
    enum class Edge { lower, upper, interior };
    Edge edge = Edge::lower;
    double location = 0.0;  // used for interior annotations
    double exponent = 0.0;  // in (-1, 0]

    static void validate(double exponent) {
        if (!(exponent > -1.0 && exponent <= 0.0))
            throw std::domain_error("SingularityAnnotation: exponent must lie in (-1, 0]");
    }
    static SingularityAnnotation at_lower(double exponent) {
        validate(exponent);
        return {Edge::lower, 0.0, exponent};
    }
    static SingularityAnnotation at_upper(double exponent) {
        validate(exponent);
        return {Edge::upper, 0.0, exponent};
    }
    static SingularityAnnotation at(double location, double exponent) {
        validate(exponent);
        return {Edge::interior, location, exponent};
    }
};

namespace detail {

inline constexpr int kPanelOrder = 15;
inline constexpr double kGradingRatio = 0.25;

struct GaussRule {
    std::array<double, kPanelOrder> node;    // on (-1, 1)
    std::array<double, kPanelOrder> weight;
};

// Newton iteration on Legendre polynomials; nodes are accurate to machine
// precision and never touch the interval endpoints.
inline GaussRule build_gauss_rule() {
    GaussRule r{};
    const int n = kPanelOrder;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.node[i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

inline const GaussRule& gauss_rule() {
    static const GaussRule r = build_gauss_rule();
    return r;
}

template <class F>
double gl_panel(F& f, double a, double b, std::size_t& evals) {
    const GaussRule& r = gauss_rule();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kPanelOrder; ++i) s += r.weight[i] * f(c + h * r.node[i]);
    evals += kPanelOrder;
    return s * h;
}

struct Panel {
    double a, b;
    double value;      // two-half Gauss-Legendre estimate (or stub closure)
    double err;        // |one-panel estimate - two-half estimate|
    bool stuck;        // below width floor; no further refinement
    int stub_side;     // 0: plain panel, -1: singular at a, +1: singular at b
    double exponent;   // annotated exponent (stub panels only)
};

template <class F>
Panel make_panel(F& f, double a, double b, double coarse, std::size_t& evals) {
    const double m = 0.5 * (a + b);
    const double left = gl_panel(f, a, m, evals);
    const double right = gl_panel(f, m, b, evals);
    Panel p{a, b, left + right, std::abs(coarse - (left + right)), false, 0, 0.0};
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    p.stuck = (b - a) < 64.0 * std::numeric_limits<double>::epsilon() * scale;
    return p;
}

// Stub panel hugging a singular endpoint: integrated by the two-point
// power-law rule, exact for f = phi * d^exponent with constant phi and
// near-exact when phi is itself a mild power of the distance d.
// Refining a stub peels off one more geometric mesh level.
template <class F>
Panel make_stub(F& f, double a, double b, int side, double exponent, std::size_t& evals) {
    const double w = b - a;
    const double edge = side < 0 ? a : b;
    const double sgn = side < 0 ? 1.0 : -1.0;
    const double x1 = edge + sgn * 0.25 * w;
    const double x2 = edge + sgn * 0.75 * w;
    const double d1 = std::abs(x1 - edge), d2 = std::abs(x2 - edge);
    Panel p{a, b, 0.0, 0.0, false, side, exponent};
    if (d1 > 0.0 && d2 > 0.0) {
        const double phi1 = f(x1) * std::pow(d1, -exponent);
        const double phi2 = f(x2) * std::pow(d2, -exponent);
        evals += 2;
        const double mass = std::pow(w, exponent + 1.0) / (exponent + 1.0);
        p.value = 0.5 * (phi1 + phi2) * mass;
        p.err = 0.5 * std::abs(phi1 - phi2) * mass + std::abs(p.value) * 1e-15;
    }
    const double floor_w = std::max(
        w * 0.0 + 512.0 * std::numeric_limits<double>::epsilon() * std::abs(edge), 1e-305);
    p.stuck = w <= floor_w;
    return p;
}

// Depth of the geometric mesh toward a singular endpoint.  The stub left
// after K levels is closed by a two-point power-law rule whose error decays
// like (stub width)^(exponent+2), one order faster than the stub mass, so
// the depth follows the (exponent+2) rate.  The width term accounts for
// integrands whose smooth factor varies on an O(1) scale.
inline int grading_depth(double exponent, double rel_tol, double width) {
    const double r = std::pow(kGradingRatio, exponent + 2.0);
    const double target = std::max(1e-16, 0.02 * rel_tol) / std::max(1.0, width);
    int k = static_cast<int>(std::ceil(std::log(target) / std::log(r)));
    return std::clamp(k, 4, 600);
}

struct StubSeed {
    double a, b;
    int side;         // -1: singular at a, +1: singular at b
    double exponent;  // annotated exponent
};

struct SeedPlan {
    std::vector<std::pair<double, double>> panels;
    std::vector<StubSeed> stubs;
};

// Split [a,b] into panel seeds, grading geometrically toward singular
// endpoints.  sing_lo/sing_hi are exponents, or NaN when the endpoint is
// regular.
inline void seed_interval(SeedPlan& plan, double a, double b, double sing_lo, double sing_hi,
                          double rel_tol) {
    if (!(b > a)) return;
    const bool lo = !std::isnan(sing_lo);
    const bool hi = !std::isnan(sing_hi);
    const double w = b - a;
    if (lo && hi) {
        const double m = 0.5 * (a + b);
        seed_interval(plan, a, m, sing_lo, std::numeric_limits<double>::quiet_NaN(), rel_tol);
        seed_interval(plan, m, b, std::numeric_limits<double>::quiet_NaN(), sing_hi, rel_tol);
        return;
    }
    if (!lo && !hi) {
        plan.panels.emplace_back(a, b);
        return;
    }
    const double edge = lo ? a : b;
    const double exponent = lo ? sing_lo : sing_hi;
    // width below which edge +/- width no longer separates from the edge
    const double floor_w =
        std::max(w * 1e-280, 512.0 * std::numeric_limits<double>::epsilon() * std::abs(edge));
    const int depth = grading_depth(exponent, rel_tol, w);
    double outer = w;
    for (int k = 0; k < depth && outer > floor_w; ++k) {
        double inner = outer * kGradingRatio;
        if (inner <= floor_w) inner = floor_w;
        if (lo)
            plan.panels.emplace_back(edge + inner, edge + outer);
        else
            plan.panels.emplace_back(edge - outer, edge - inner);
        outer = inner;
        if (inner == floor_w) break;
    }
    if (outer > 0.0) {
        if (lo)
            plan.stubs.push_back({edge, edge + outer, -1, exponent});
        else
            plan.stubs.push_back({edge - outer, edge, +1, exponent});
    }
}

}  // namespace detail

template <class F>
IntegralResult integrate_1d(F&& f, double a, double b,
                            std::span<const SingularityAnnotation> singularities,
                            const QuadratureSpec& spec = default_spec_1d()) {
    using detail::Panel;
    if (!(a < b)) throw std::domain_error("integrate_1d: requires a < b");
    std::size_t evals = 0;
    auto fn = [&](double x) { return f(x); };

    // breakpoints: interior singular locations
    std::vector<double> cuts;
    cuts.push_back(a);
    for (const auto& s : singularities) {
        if (s.edge == SingularityAnnotation::Edge::interior && s.location > a && s.location < b)
            cuts.push_back(s.location);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto exponent_at = [&](double x, bool as_lower) {
        double e = std::numeric_limits<double>::quiet_NaN();
        for (const auto& s : singularities) {
            if (s.edge == SingularityAnnotation::Edge::lower && x == a && as_lower) e = s.exponent;
            if (s.edge == SingularityAnnotation::Edge::upper && x == b && !as_lower) e = s.exponent;
            if (s.edge == SingularityAnnotation::Edge::interior && s.location == x) e = s.exponent;
        }
        return e;
    };

    detail::SeedPlan plan;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        detail::seed_interval(plan, cuts[i], cuts[i + 1], exponent_at(cuts[i], true),
                              exponent_at(cuts[i + 1], false), spec.rel_tol);

    std::vector<Panel> panels;
    panels.reserve(plan.panels.size() * 2 + plan.stubs.size());
    for (auto& [pa, pb] : plan.panels) {
        if (evals + 3 * detail::kPanelOrder > spec.max_evals)
            throw NonConvergence("integrate_1d: evaluation budget exhausted during seeding");
        const double coarse = detail::gl_panel(fn, pa, pb, evals);
        panels.push_back(detail::make_panel(fn, pa, pb, coarse, evals));
    }
    for (const auto& s : plan.stubs)
        panels.push_back(detail::make_stub(fn, s.a, s.b, s.side, s.exponent, evals));

    auto total = [&] {
        double v = 0.0;
        for (const auto& p : panels) v += p.value;
        return v;
    };
    auto total_err = [&] {
        double e = 0.0;
        for (const auto& p : panels) e += p.err;
        return e;
    };

    double value = total();
    double err = total_err();

    // lazy max-heap on panel error; stale entries are skipped on pop
    using HeapEntry = std::pair<double, std::size_t>;
    std::vector<HeapEntry> heap;
    auto heap_less = [](const HeapEntry& x, const HeapEntry& y) { return x.first < y.first; };
    for (std::size_t i = 0; i < panels.size(); ++i)
        if (!panels[i].stuck) heap.emplace_back(panels[i].err, i);
    std::make_heap(heap.begin(), heap.end(), heap_less);
    auto heap_push = [&](std::size_t i) {
        if (panels[i].stuck) return;
        heap.emplace_back(panels[i].err, i);
        std::push_heap(heap.begin(), heap.end(), heap_less);
    };

    // stagnation guard: error estimates bottom out at the noise floor of
    // the integrand (e.g. nested quadrature); give up rather than churn
    std::size_t since_progress = 0;
    double best_err = err;

    while (true) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
        if (err <= tol) break;
        std::size_t worst = panels.size();
        while (!heap.empty()) {
            std::pop_heap(heap.begin(), heap.end(), heap_less);
            const auto [e, i] = heap.back();
            heap.pop_back();
            if (e == panels[i].err && !panels[i].stuck) {
                worst = i;
                break;
            }
        }
        if (worst == panels.size()) break;  // only roundoff-floor panels remain
        if (evals + 4 * detail::kPanelOrder > spec.max_evals)
            throw NonConvergence("integrate_1d: error " + std::to_string(err) +
                                 " above tolerance with evaluation budget exhausted");
        if (panels.size() > 400'000)
            throw NonConvergence("integrate_1d: panel limit reached with error above tolerance");
        Panel p = panels[worst];
        if (p.stub_side != 0) {
            // peel one more geometric mesh level off the stub
            const double w = (p.b - p.a) * detail::kGradingRatio;
            if (p.stub_side < 0) {
                const double cut = p.a + w;
                const double coarse = detail::gl_panel(fn, cut, p.b, evals);
                panels[worst] = detail::make_panel(fn, cut, p.b, coarse, evals);
                panels.push_back(detail::make_stub(fn, p.a, cut, -1, p.exponent, evals));
            } else {
                const double cut = p.b - w;
                const double coarse = detail::gl_panel(fn, p.a, cut, evals);
                panels[worst] = detail::make_panel(fn, p.a, cut, coarse, evals);
                panels.push_back(detail::make_stub(fn, cut, p.b, +1, p.exponent, evals));
            }
        } else {
            const double m = 0.5 * (p.a + p.b);
            const double cl = detail::gl_panel(fn, p.a, m, evals);
            const double cr = detail::gl_panel(fn, m, p.b, evals);
            panels[worst] = detail::make_panel(fn, p.a, m, cl, evals);
            panels.push_back(detail::make_panel(fn, m, p.b, cr, evals));
        }
        value += panels[worst].value + panels.back().value - p.value;
        err += panels[worst].err + panels.back().err - p.err;
        heap_push(worst);
        heap_push(panels.size() - 1);
        if ((panels.size() & 1023u) == 0) {  // refresh running sums
            value = total();
            err = total_err();
        }
        if (err < 0.95 * best_err) {
            best_err = err;
            since_progress = 0;
        } else if (++since_progress > 600) {
            char msg[256];
            std::snprintf(msg, sizeof(msg),
                          "integrate_1d: error estimate stagnated at %.3e (tol %.3e) on [%g, %g], "
                          "%zu panels, %zu evaluations",
                          err, tol, a, b, panels.size(), evals);
            throw NonConvergence(msg);
        }
    }
    value = total();
    err = total_err();
    return {value, err, std::max<std::size_t>(evals, 1)};
}

template <class F>
IntegralResult integrate_1d(F&& f, double a, double b,
                            std::initializer_list<SingularityAnnotation> singularities,
                            const QuadratureSpec& spec = default_spec_1d()) {
    return integrate_1d(std::forward<F>(f), a, b,
                        std::span<const SingularityAnnotation>(singularities.begin(), singularities.size()),
                        spec);
}

template <class F>
IntegralResult integrate_1d(F&& f, double a, double b,
                            const QuadratureSpec& spec = default_spec_1d()) {
    return integrate_1d(std::forward<F>(f), a, b, std::span<const SingularityAnnotation>{}, spec);
}

// ---------------------------------------------------------------------------
// Iterated 2D integration over { z in [z0,z1], x in [xlo(z), xhi(z)] }.
// The x^exponent singularity sits at the absolute coordinate x = 0 and is
// annotated on the inner integral only when the inner interval reaches 0.
// Kinks of xlo/xhi must be handled by the caller via outer splits.
// ---------------------------------------------------------------------------

namespace detail {

template <class F2, class XLo, class XHi>
IntegralResult integrate_region(F2& f, double z0, double z1, XLo& xlo, XHi& xhi,
                                std::span<const SingularityAnnotation> z_sing,
                                double x_origin_exponent, const QuadratureSpec& spec) {
    std::size_t inner_evals = 0;
    // inner tolerances sit below the outer target so that inner-result
    // jitter never becomes the outer error floor
    const QuadratureSpec inner_spec = spec.nested(1e-2, z1 - z0);
    auto outer = [&](double z) {
        const double lo = xlo(z), hi = xhi(z);
        if (!(hi > lo)) return 0.0;
        auto fx = [&, z](double x) { return f(x, z); };
        std::vector<SingularityAnnotation> sing;
        if (!std::isnan(x_origin_exponent) && lo <= 0.0)
            sing.push_back(SingularityAnnotation::at_lower(x_origin_exponent));
        QuadratureSpec is = inner_spec;
        if (inner_evals >= is.max_evals)
            throw NonConvergence("integrate_region: inner evaluation budget exhausted");
        is.max_evals -= inner_evals;
        IntegralResult r = integrate_1d(fx, lo, hi, std::span<const SingularityAnnotation>(sing), is);
        inner_evals += r.evaluations;
        return r.value;
    };
    QuadratureSpec outer_spec = spec;
    IntegralResult out = integrate_1d(outer, z0, z1, z_sing, outer_spec);
    out.evaluations = inner_evals;
    out.abs_error_estimate += 3e-3 * (spec.abs_tol + spec.rel_tol * std::abs(out.value));
    return out;
}

}  // namespace detail

template <class F2, class XLo, class XHi>
IntegralResult integrate_region(F2&& f, double z0, double z1, XLo&& xlo, XHi&& xhi,
                                std::span<const SingularityAnnotation> z_sing,
                                double x_origin_exponent,
                                const QuadratureSpec& spec = default_spec_2d()) {
    return detail::integrate_region(f, z0, z1, xlo, xhi, z_sing, x_origin_exponent, spec);
}

enum class Domain2D {
    rectangle,         // [x0,x1] x [z0,z1]
    triangle_x_le_z,   // { 0 <= x <= z <= T }
    band_x_plus_z_ge,  // { (x,z) in [0,T]^2 : x + z >= T }
    band_x_plus_z_le,  // { (x,z) in [0,T]^2 : x + z <= T }
};

struct Region2D {
    Domain2D kind = Domain2D::rectangle;
    double x0 = 0.0, x1 = 1.0, z0 = 0.0, z1 = 1.0;  // rectangle only
    double T = 1.0;                                 // the three T-domains

    static Region2D rectangle(double x0, double x1, double z0, double z1) {
        return {Domain2D::rectangle, x0, x1, z0, z1, 0.0};
    }
    static Region2D triangle(double T) { return {Domain2D::triangle_x_le_z, 0, 0, 0, 0, T}; }
    static Region2D band_ge(double T) { return {Domain2D::band_x_plus_z_ge, 0, 0, 0, 0, T}; }
    static Region2D band_le(double T) { return {Domain2D::band_x_plus_z_le, 0, 0, 0, 0, T}; }
};

// x_exponent / z_exponent annotate the x = 0 and z = 0 edges (NaN = regular).
template <class F2>
IntegralResult integrate_2d(F2&& f, const Region2D& region, double x_exponent, double z_exponent,
                            const QuadratureSpec& spec = default_spec_2d()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto clamp_e = [](double e) { return std::isnan(e) ? e : std::clamp(e, -0.9995, 0.0); };
    std::vector<SingularityAnnotation> zs;
    switch (region.kind) {
        case Domain2D::rectangle: {
            if (!std::isnan(z_exponent) && region.z0 == 0.0)
                zs.push_back(SingularityAnnotation::at_lower(clamp_e(z_exponent)));
            auto lo = [&](double) { return region.x0; };
            auto hi = [&](double) { return region.x1; };
            const double xe = (region.x0 == 0.0) ? x_exponent : nan;
            return integrate_region(std::forward<F2>(f), region.z0, region.z1, lo, hi,
                                    std::span<const SingularityAnnotation>(zs), xe, spec);
        }
        case Domain2D::triangle_x_le_z: {
            // outer integrand behaves like z^(x_e + z_e + 1) near z = 0
            double pinch = 0.0;
            if (!std::isnan(x_exponent)) pinch += x_exponent + 1.0;
            if (!std::isnan(z_exponent)) pinch += z_exponent;
            zs.push_back(SingularityAnnotation::at_lower(clamp_e(pinch)));
            auto lo = [](double) { return 0.0; };
            auto hi = [](double z) { return z; };
            return integrate_region(std::forward<F2>(f), 0.0, region.T, lo, hi,
                                    std::span<const SingularityAnnotation>(zs), x_exponent, spec);
        }
        case Domain2D::band_x_plus_z_ge: {
            if (!std::isnan(z_exponent)) zs.push_back(SingularityAnnotation::at_lower(clamp_e(z_exponent)));
            if (!std::isnan(x_exponent)) zs.push_back(SingularityAnnotation::at_upper(0.0));
            auto lo = [T = region.T](double z) { return T - z; };
            auto hi = [T = region.T](double) { return T; };
            return integrate_region(std::forward<F2>(f), 0.0, region.T, lo, hi,
                                    std::span<const SingularityAnnotation>(zs), x_exponent, spec);
        }
        case Domain2D::band_x_plus_z_le: {
            if (!std::isnan(z_exponent)) zs.push_back(SingularityAnnotation::at_lower(clamp_e(z_exponent)));
            zs.push_back(SingularityAnnotation::at_upper(0.0));  // width pinches at z = T
            auto lo = [](double) { return 0.0; };
            auto hi = [T = region.T](double z) { return T - z; };
            return integrate_region(std::forward<F2>(f), 0.0, region.T, lo, hi,
                                    std::span<const SingularityAnnotation>(zs), x_exponent, spec);
        }
    }
    throw std::logic_error("integrate_2d: unknown domain");
}

}  // namespace fbmh::numerics
