#pragma once

// fBm path synthesis by circulant embedding of the fractional Gaussian
// noise autocovariance, fOU simulation, and Monte Carlo estimation of the
// second moment of W_T = T^{-1/2} int_0^T (eta_t^2 - E[eta_t^2]) dt.
// Randomness is counter-based per path: path i's stream depends only on
// (seed, i), so worker count never reorders it.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "fbmh/detail/fft.hpp"
#include "fbmh/detail/threading.hpp"
#include "fbmh/expansions.hpp"
#include "fbmh/hilbert.hpp"
#include "fbmh/hurst.hpp"

namespace fbmh::fousim {

class EmbeddingFailure : public std::runtime_error {
public:
    explicit EmbeddingFailure(const std::string& what) : std::runtime_error(what) {}
};

struct McConfig {
    std::uint64_t seed = 1;
    std::size_t n_steps = 1024;  // power of two
    std::size_t n_paths = 1000;
    double T = 50.0;
    HurstParam H{0.5};
    double theta = 1.0;

    void validate() const {
        if (n_steps < 2 || (n_steps & (n_steps - 1)) != 0)
            throw std::domain_error("McConfig: n_steps must be a power of two");
        if (n_paths < 2) throw std::domain_error("McConfig: n_paths >= 2");
        if (!(T > 0.0)) throw std::domain_error("McConfig: T > 0");
        if (!(theta > 0.0)) throw std::domain_error("McConfig: theta > 0");
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path_index) {
    std::uint64_t s = seed ^ (0xA0761D6478BD642FULL * (path_index + 1));
    const std::uint64_t s0 = splitmix64(s);
    const std::uint64_t s1 = splitmix64(s);
    return std::mt19937_64(s0 ^ (s1 << 1));
}

}  // namespace detail

// Exact-in-law Gaussian sampling of B^H on a uniform grid.  The fGn
// autocovariance row is embedded into a circulant of size 2 n_steps whose
// eigenvalues are nonnegative for fGn; if they are not (beyond -1e-8
// relative), a dense Cholesky factorization of the increment covariance
// takes over.
class FbmSampler {
public:
    explicit FbmSampler(const McConfig& cfg) : cfg_(cfg) {
        cfg.validate();
        const std::size_t n = cfg.n_steps;
        const double dt = cfg.T / static_cast<double>(n);
        const double two_h = 2.0 * cfg.H.value();
        const double scale = std::pow(dt, two_h);
        auto cov = [&](std::size_t k) {
            const double kk = static_cast<double>(k);
            return 0.5 * scale *
                   (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) +
                    std::pow(std::abs(kk - 1.0), two_h));
        };
        const std::size_t m = 2 * n;
        std::vector<std::complex<double>> row(m);
        for (std::size_t k = 0; k <= n; ++k) row[k] = cov(k);
        for (std::size_t k = 1; k < n; ++k) row[m - k] = cov(k);
        fbmh::detail::fft_pow2(row);
        lambda_.resize(m);
        double max_l = 0.0, min_l = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            lambda_[j] = row[j].real();
            max_l = std::max(max_l, lambda_[j]);
            min_l = std::min(min_l, lambda_[j]);
        }
        if (min_l < -1e-8 * max_l) {
            build_cholesky(cov);
        } else {
            for (auto& l : lambda_)
                l = std::sqrt(std::max(l, 0.0) / static_cast<double>(m));
        }
    }

    std::size_t n_steps() const { return cfg_.n_steps; }
    double dt() const { return cfg_.T / static_cast<double>(cfg_.n_steps); }
    bool used_cholesky() const { return !chol_.empty(); }

    // B^H at grid points 0..n_steps (B(0) = 0), for one path stream
    std::vector<double> path(std::uint64_t path_index) const {
        const std::size_t n = cfg_.n_steps;
        std::vector<double> increments(n);
        auto rng = detail::path_rng(cfg_.seed, path_index);
        std::normal_distribution<double> gauss(0.0, 1.0);
        if (chol_.empty()) {
            const std::size_t m = 2 * n;
            std::vector<std::complex<double>> v(m);
            for (std::size_t j = 0; j < m; ++j) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                v[j] = lambda_[j] * std::complex<double>(re, im);
            }
            fbmh::detail::fft_pow2(v);
            for (std::size_t k = 0; k < n; ++k) increments[k] = v[k].real();
        } else {
            std::vector<double> z(n);
            for (auto& x : z) x = gauss(rng);
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j <= i; ++j) s += chol_[i * n + j] * z[j];
                increments[i] = s;
            }
        }
        std::vector<double> b(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) b[k + 1] = b[k] + increments[k];
        return b;
    }

private:
    template <class Cov>
    void build_cholesky(Cov&& cov) {
        const std::size_t n = cfg_.n_steps;
        chol_.assign(n * n, 0.0);
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a[i * n + j] = cov(i > j ? i - j : j - i);
        const double jitter = 1e-12 * a[0];
        for (std::size_t i = 0; i < n; ++i) a[i * n + i] += jitter;
        for (std::size_t j = 0; j < n; ++j) {
            double d = a[j * n + j];
            for (std::size_t k = 0; k < j; ++k) d -= chol_[j * n + k] * chol_[j * n + k];
            if (d <= 0.0)
                throw EmbeddingFailure("FbmSampler: covariance not positive definite beyond jitter");
            chol_[j * n + j] = std::sqrt(d);
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a[i * n + j];
                for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n + k] * chol_[j * n + k];
                chol_[i * n + j] = s / chol_[j * n + j];
            }
        }
    }

    McConfig cfg_;
    std::vector<double> lambda_;  // sqrt(eigenvalue / m), circulant route
    std::vector<double> chol_;    // dense fallback
};

inline std::vector<double> fbm_path(const McConfig& cfg, std::uint64_t path_index = 0) {
    return FbmSampler(cfg).path(path_index);
}

// eta_{k+1} = e^{-theta dt} eta_k + e^{-theta dt/2} (B_{k+1} - B_k); eta_0 = 0.
// The half-step weight is the midpoint approximation of the integrated
// kernel over one step.  theta = 0 reproduces the driving path.
inline std::vector<double> fou_path(const std::vector<double>& fbm, double theta, double dt) {
    if (fbm.empty()) throw std::domain_error("fou_path: empty path");
    if (theta < 0.0) throw std::domain_error("fou_path: theta >= 0");
    std::vector<double> eta(fbm.size(), 0.0);
    const double decay = std::exp(-theta * dt);
    const double w = std::exp(-theta * dt / 2.0);
    for (std::size_t k = 0; k + 1 < fbm.size(); ++k)
        eta[k + 1] = decay * eta[k] + w * (fbm[k + 1] - fbm[k]);
    return eta;
}

// E[eta_t^2] on the simulation grid: quadrature values of rho1(t, t) on a
// coarse quadratically-refined grid, linearly interpolated.
inline std::vector<double> variance_curve(const McConfig& cfg, std::size_t coarse = 96) {
    const std::size_t n = cfg.n_steps;
    const double dt = cfg.T / static_cast<double>(n);
    std::vector<double> ct(coarse + 1), cv(coarse + 1);
    for (std::size_t i = 0; i <= coarse; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(coarse);
        ct[i] = cfg.T * f * f;
        cv[i] = hilbert::rho1(ct[i], ct[i], cfg.H);
    }
    std::vector<double> out(n + 1);
    std::size_t j = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = dt * static_cast<double>(k);
        while (j + 1 < coarse && ct[j + 1] < t) ++j;
        const double w = (ct[j + 1] > ct[j]) ? (t - ct[j]) / (ct[j + 1] - ct[j]) : 0.0;
        out[k] = cv[j] + w * (cv[j + 1] - cv[j]);
    }
    return out;
}

// Sample mean and standard error of W_T^2 over cfg.n_paths paths.
// Note: theta enters the path recursion, while the centering curve
// E[eta_t^2] is the theta = 1 quadrature (the convention used throughout).
inline McEstimate mc_wt_variance(const McConfig& cfg) {
    cfg.validate();
    const FbmSampler sampler(cfg);
    const std::size_t n = cfg.n_steps;
    const double dt = sampler.dt();
    const std::vector<double> var_curve = variance_curve(cfg);

    std::vector<double> wsq(cfg.n_paths);
    fbmh::detail::parallel_for(cfg.n_paths, [&](std::size_t p) {
        const std::vector<double> b = sampler.path(p);
        const std::vector<double> eta = fou_path(b, cfg.theta, dt);
        double acc = 0.0;  // trapezoid of eta^2 - E[eta^2]
        for (std::size_t k = 0; k <= n; ++k) {
            const double v = eta[k] * eta[k] - var_curve[k];
            acc += (k == 0 || k == n) ? 0.5 * v : v;
        }
        const double w = acc * dt / std::sqrt(cfg.T);
        wsq[p] = w * w;
    });

    McEstimate est;
    est.n_paths = cfg.n_paths;
    double mean = 0.0;
    for (double v : wsq) mean += v;
    mean /= static_cast<double>(cfg.n_paths);
    double ss = 0.0;
    for (double v : wsq) ss += (v - mean) * (v - mean);
    est.mean = mean;
    est.std_error = std::sqrt(ss / static_cast<double>(cfg.n_paths - 1) /
                              static_cast<double>(cfg.n_paths));
    return est;
}

// Stationary autocovariance rho(r) = E[Z_r Z_0], approximated by the
// finite-interval rho1 at a large anchor time (transient forgetting is
// exponential in the anchor).
inline double rho_stationary(double r, const HurstParam& h, double t_anchor = 0.0,
                             const numerics::QuadratureSpec& spec = {3e-7, 1e-9, 60'000'000}) {
    if (r < 0.0) throw std::domain_error("rho_stationary: r >= 0");
    if (t_anchor <= 0.0) t_anchor = std::max(50.0, 10.0 * r);
    return hilbert::rho1(t_anchor, t_anchor + r, h, spec);
}

struct RhoSqResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    bool tail_warning = false;  // estimated tail beyond r_max above 1% of value
    double r_max = 0.0;
};

// int_0^{r_max} rho(r)^2 dr on geometrically widening Gauss panels, with a
// power-law tail estimate rho(r_max)^2 r_max / (3 - 4H).  spec controls the
// per-sample rho quadrature; the 5% use case needs no more than 1e-5.
inline RhoSqResult rho_sq_integral(const HurstParam& h, double r_max = 0.0,
                                   const numerics::QuadratureSpec& spec = {1e-5, 1e-8,
                                                                           60'000'000}) {
    if (!(h.value() < 0.75)) throw std::domain_error("rho_sq_integral: H in (0, 3/4)");
    RhoSqResult out;
    out.r_max = r_max > 0.0 ? r_max : (h.value() <= 0.5 ? 60.0 : 200.0);

    const auto& rule = numerics::detail::gauss_rule();
    std::vector<double> edges{0.0, 0.05, 0.15, 0.35, 0.75, 1.5, 3.0};
    while (edges.back() < out.r_max) edges.push_back(std::min(out.r_max, edges.back() * 2.0));
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double c = 0.5 * (edges[i] + edges[i + 1]);
        const double hw = 0.5 * (edges[i + 1] - edges[i]);
        for (int k = 0; k < numerics::detail::kPanelOrder; ++k) {
            const double r = c + hw * rule.node[k];
            const double rho = rho_stationary(r, h, 0.0, spec);
            acc += hw * rule.weight[k] * rho * rho;
        }
    }
    out.value = acc;
    const double rho_end = rho_stationary(out.r_max, h, 0.0, spec);
    out.tail_estimate = rho_end * rho_end * out.r_max / (3.0 - 4.0 * h.value());
    out.tail_warning = out.tail_estimate > 0.01 * std::abs(out.value);
    return out;
}

}  // namespace fbmh::fousim
