#pragma once

// Kernels of the Whittaker product formula, the weight m_a, the transform
// kernel x^{a+iτ}Ψ(a+iτ, 1+2iτ; x) and the Plancherel density ρ_a.
//
// Notation: w = xy + xξ + yξ, z = w / sqrt(2xyξ). All exponentials are
// assembled in log space; the Gaussian-type exponent
//     -(xy/4ξ + xξ/4y + yξ/4x) = (x+y+ξ)/2 - w²/(4xyξ)
// is computed from its left-hand form, which has no cancellation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "quadrature.hpp"
#include "specfun.hpp"

namespace iwt {

namespace detail {

inline void check_positive(double x, double y, double xi, const char* who) {
    if (!(x > 0 && y > 0 && xi > 0) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(xi))
        throw DomainError(std::string(who) + ": x, y, xi must be positive and finite");
}

inline double gauss_exponent(double x, double y, double xi) {
    return -0.25 * (x * y / xi + x * xi / y + y * xi / x);
}

inline double kernel_z(double x, double y, double xi) {
    return (x * y + x * xi + y * xi) / std::sqrt(2 * x * y * xi);
}

}  // namespace detail

// m_a(ξ) = ξ^{-2a-1} e^{-ξ}
inline double weight_m(double a, double xi) {
    if (!(xi > 0)) throw DomainError("weight_m: xi must be positive");
    return std::exp(-(2 * a + 1) * std::log(xi) - xi);
}

inline double log_weight_m(double a, double xi) { return -(2 * a + 1) * std::log(xi) - xi; }

// k_α(x,y,ξ) = 2^{-1-α} π^{-1/2} (xyξ)^{1/2} exp((x+y+ξ)/2 - z²/4) D_{2α}(z)
inline cplx kernel_k(cplx alpha, double x, double y, double xi) {
    detail::check_positive(x, y, xi, "kernel_k");
    const double z = detail::kernel_z(x, y, xi);
    // D_{2α}(z) = z^{2α} e^{-z²/4} S_{2α}(z)
    const cplx s = detail::parabolic_scaled(2.0 * alpha, z).value;
    if (s == 0.0) return 0.0;
    const cplx lk = (-1.0 - alpha) * std::log(2.0) - 0.5 * std::log(pi) + 0.5 * std::log(x * y * xi) +
                    2.0 * alpha * std::log(z) + detail::gauss_exponent(x, y, xi) + std::log(s);
    cplx k = std::exp(lk);
    if (alpha.imag() == 0) k.imag(0);
    return k;
}

// log q_a(x,y,ξ) for real a ≥ 0, where
// q_a = 2^{a-3/2} π^{-1/2} (xyξ)^a exp(x+y+ξ - z²/4) D_{1-2a}(z) > 0.
inline double log_kernel_q(double a, double x, double y, double xi) {
    detail::check_positive(x, y, xi, "kernel_q");
    if (!(a >= 0)) throw DomainError("kernel_q: a must be non-negative");
    const double z = detail::kernel_z(x, y, xi);
    const double mu = 1 - 2 * a;
    const double s = detail::parabolic_scaled(mu, z).value.real();
    return (a - 1.5) * std::log(2.0) - 0.5 * std::log(pi) + a * std::log(x * y * xi) + mu * std::log(z) +
           0.5 * (x + y + xi) + detail::gauss_exponent(x, y, xi) + std::log(s);
}

inline double kernel_q(double a, double x, double y, double xi) { return std::exp(log_kernel_q(a, x, y, xi)); }

// q_a for one fixed a at many points: S_{1-2a}(z) = 2^{μ/2} z^{-μ} Ψ(-μ/2, 1/2; z²/2)
// is read from a table of Ψ along its argument.
class KernelQ {
public:
    explicit KernelQ(double a) : a_(a), mu_(1 - 2 * a), psi_(cplx(-0.5 * (1 - 2 * a)), cplx(0.5)) {
        if (!(a >= 0)) throw DomainError("kernel_q: a must be non-negative");
    }

    double a() const { return a_; }

    double log_value(double x, double y, double xi) const {
        detail::check_positive(x, y, xi, "kernel_q");
        const double z = detail::kernel_z(x, y, xi);
        const double s = psi_(0.5 * z * z).value.real();
        // μ log z from S cancels against the z^{-μ} of the Ψ form
        return (a_ - 1.5) * std::log(2.0) - 0.5 * std::log(pi) + a_ * std::log(x * y * xi) + 0.5 * mu_ * std::log(2.0) +
               0.5 * (x + y + xi) + detail::gauss_exponent(x, y, xi) + std::log(s);
    }

    double operator()(double x, double y, double xi) const { return std::exp(log_value(x, y, xi)); }

private:
    double a_, mu_;
    KummerPsiTable psi_;
};

// A(y) = 2^{-1-2α} π^{-1/2} sup_{t ≥ √y} |t^{-2α} e^{t²/4} D_{2α}(t)|, α = 1/2 - a.
// The supremum is taken on [√y, √y + 40] (the maximand tends to 1 at infinity)
// by a coarse scan followed by golden-section refinement.
inline double envelope_constant(double a, double y) {
    if (!(y > 0)) throw DomainError("envelope_constant: y must be positive");
    const double mu = 1 - 2 * a;  // 2α
    auto s = [mu](double t) { return std::abs(detail::parabolic_scaled(mu, t).value); };
    const double lo = std::sqrt(y), hi = lo + 40;
    const int n = 80;
    double best_t = lo, best = s(lo);
    for (int i = 1; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const double v = s(t);
        if (v > best) best = v, best_t = t;
    }
    double l = std::max(lo, best_t - (hi - lo) / n), r = std::min(hi, best_t + (hi - lo) / n);
    const double g = 0.5 * (std::sqrt(5.0) - 1);
    double c = r - g * (r - l), d = l + g * (r - l);
    double fc = s(c), fd = s(d);
    for (int it = 0; it < 60 && r - l > 1e-10 * (1 + r); ++it) {
        if (fc > fd) {
            r = d, d = c, fd = fc;
            c = r - g * (r - l), fc = s(c);
        } else {
            l = c, c = d, fc = fd;
            d = l + g * (r - l), fd = s(d);
        }
    }
    best = std::max({best, fc, fd, 1.0});
    return (1 + 1e-12) * std::exp((-1 - mu) * std::log(2.0) - 0.5 * std::log(pi)) * best;
}

// Upper bound for q_a(x,y,ξ):
// A(y) (xyξ)^{2a-1/2} w^{1-2a} exp(ξ - (x(ξ-y) + yξ)² / (4xyξ)).
inline double kernel_envelope(double a, double x, double y, double xi, double A) {
    detail::check_positive(x, y, xi, "kernel_envelope");
    const double w = x * y + x * xi + y * xi;
    const double e = 0.5 * (x + y + xi) + detail::gauss_exponent(x, y, xi);
    return A * std::exp((2 * a - 0.5) * std::log(x * y * xi) + (1 - 2 * a) * std::log(w) + e);
}

inline double kernel_envelope(double a, double x, double y, double xi) {
    return kernel_envelope(a, x, y, xi, envelope_constant(a, y));
}

// ξ-range outside of which envelope·m_a < threshold; found by walking out in
// log ξ from ξ* = xy/(x+y), where the Gaussian factor peaks.
inline std::pair<double, double> xi_cutoffs(double a, double x, double y, double threshold = 1e-16) {
    const double A = envelope_constant(a, y);
    auto g = [&](double xi) { return kernel_envelope(a, x, y, xi, A) * weight_m(a, xi); };
    const double start = x * y / (x + y);
    double lo = start, hi = start;
    const double step = 1.1;
    while (lo > 1e-300 && !(g(lo) < threshold && g(lo / step) < threshold)) lo /= step;
    while (hi < 1e300 && !(g(hi) < threshold && g(hi * step) < threshold)) hi *= step;
    return {lo, hi};
}

// Transform kernel x^{a+iτ} Ψ(a+iτ, 1+2iτ; x) = x^{a-1/2} e^{x/2} W_{1/2-a, iτ}(x);
// real for real a and τ, bounded by 1 in modulus on the real τ-axis for a > 0.
inline SpecValue<cplx> transform_kernel(cplx a, cplx tau, double x) {
    const cplx I(0, 1);
    const cplx s = a + I * tau;
    auto psi = kummer_psi(s, 1.0 + 2.0 * I * tau, x);
    psi.value *= std::exp(s * std::log(x));
    if (a.imag() == 0 && tau.imag() == 0) psi.value.imag(0);
    return psi;
}

// Transform kernel at fixed (a, τ) for many x, tabulated along x.
class TransformKernelTable {
public:
    TransformKernelTable(cplx a, cplx tau) : s_(a + cplx(0, 1) * tau), real_(a.imag() == 0 && tau.imag() == 0),
                                             psi_(s_, 1.0 + 2.0 * cplx(0, 1) * tau) {}

    SpecValue<cplx> operator()(double x) const {
        auto v = psi_(x);
        v.value *= std::exp(s_ * std::log(x));
        if (real_) v.value.imag(0);
        return v;
    }

private:
    cplx s_;
    bool real_;
    KummerPsiTable psi_;
};

// Plancherel density ρ_a(τ) = π^{-2} τ sinh(2πτ) |Γ(a+iτ)|².
inline double density_rho(double a, double tau) {
    if (!(a > 0)) throw DomainError("density_rho: a must be positive");
    if (!(tau >= 0)) throw DomainError("density_rho: tau must be non-negative");
    if (tau == 0) return 0;
    const double y = 2 * pi * tau;
    const double log_sinh = y + std::log1p(-std::exp(-2 * y)) - std::log(2.0);
    return tau / (pi * pi) * std::exp(log_sinh + 2 * ln_gamma(cplx(a, tau)).real());
}

// q_a(x,y,ξ) as an index integral of three transform kernels against ρ_a.
inline IntegralEstimate<double> kernel_q_spectral(double a, double x, double y, double xi, const QuadratureConfig& cfg) {
    detail::check_positive(x, y, xi, "kernel_q_spectral");
    if (!(a > 0)) throw DomainError("kernel_q_spectral: a must be positive");
    auto g = [&](double tau) {
        if (tau == 0) return 0.0;
        const double k = transform_kernel(a, tau, x).value.real() * transform_kernel(a, tau, y).value.real() *
                         transform_kernel(a, tau, xi).value.real();
        return k * density_rho(a, tau);
    };
    return integrate_index<double>(g, cfg);
}

}  // namespace iwt
