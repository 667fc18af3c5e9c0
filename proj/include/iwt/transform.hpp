#pragma once

// The index Whittaker transform in confluent hypergeometric form
//     (Ψ_a f)(τ) = ∫_0^∞ f(x) x^{a+iτ} Ψ(a+iτ, 1+2iτ; x) m_a(x) dx,
// its inverse against the density ρ_a, the classical form with kernel
// W_{α,iτ}(x) x^{-2}, the map Θ_a between the two, the operator
//     L_a f = x² f'' - ((2a-1)x + x²) f'
// and weighted norms on (0, ∞).

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "grid_function.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace iwt {

struct TransformResult {
    std::vector<double> tau_nodes;
    std::vector<cplx> values;
    std::vector<double> density;
    double a = 0;
    double max_error = 0;
    bool converged = true;
};

// Uniform τ-grid on [0, tau_max] with n points.
inline std::vector<double> tau_grid(double tau_max, std::size_t n) {
    if (!(tau_max > 0) || n < 2) throw std::invalid_argument("tau_grid: need tau_max > 0 and n >= 2");
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = tau_max * double(i) / double(n - 1);
    return t;
}

namespace detail {

inline cplx as_complex(const cplx& v) { return v; }
inline cplx as_complex(double v) { return v; }

// Rejects tails that make ∫ f x^{a+ν} Ψ(a+ν, 1+2ν; x) m_a(x) dx diverge:
// the kernel behaves like x^{a-ν} (log x when ν = 0) at 0 and like 1 at ∞.
inline void check_transform_decay(const GridFunction& f, double a, double nu, const char* who) {
    const auto& d = f.decay();
    if (f.values().front() != 0.0 && !(d.power_at_zero > a + nu))
        throw std::invalid_argument(std::string(who) + ": decay at zero x^" + std::to_string(d.power_at_zero) +
                                    " needs exponent > a + |Im tau| = " + std::to_string(a + nu));
    if (f.values().back() != 0.0 && !(d.rate_at_infinity > -1))
        throw std::invalid_argument(std::string(who) + ": growth rate at infinity must be below e^{x}");
}

template <class F>
auto callable(const F& f) {
    return [&f](double x) { return as_complex(f(x)); };
}

}  // namespace detail

// Transform at one (possibly complex) τ of a callable f.
// For real τ the absolute tolerance is divided by 1 + ρ_a(τ): the transform
// decays like e^{-πτ} while ρ_a grows like e^{πτ}, and it is the product that
// enters the inverse and the Plancherel integral.
template <class F>
IntegralEstimate<cplx> forward_at(const F& f, double a, cplx tau, const QuadratureConfig& cfg) {
    if (!(a > 0)) throw DomainError("forward: a must be positive");
    QuadratureConfig c = cfg;
    if (tau.imag() == 0) c.abs_tol = cfg.abs_tol / (1 + density_rho(a, std::abs(tau.real())));
    const TransformKernelTable kernel(a, tau);
    auto integrand = [&](double x) {
        const cplx fx = detail::as_complex(f(x));
        if (fx == 0.0) return cplx(0);
        return detail::times_exp(fx * kernel(x).value, log_weight_m(a, x));
    };
    return integrate_halfline<cplx>(integrand, c);
}

template <class F>
TransformResult forward(const F& f, double a, const std::vector<double>& taus, const QuadratureConfig& cfg) {
    TransformResult out;
    out.a = a;
    for (double tau : taus) {
        if (!(tau >= 0)) throw DomainError("forward: tau nodes must be non-negative");
        auto r = forward_at(f, a, tau, cfg);
        out.tau_nodes.push_back(tau);
        out.values.push_back(r.value);
        out.density.push_back(density_rho(a, tau));
        out.max_error = std::max(out.max_error, r.error_estimate);
        out.converged = out.converged && r.converged;
    }
    return out;
}

inline TransformResult forward(const GridFunction& f, double a, const std::vector<double>& taus, const QuadratureConfig& cfg) {
    detail::check_transform_decay(f, a, 0.0, "forward");
    return forward<GridFunction>(f, a, taus, cfg);
}

// Transform continued into the strip |Im τ| <= ν.
template <class F>
cplx forward_at_complex(const F& f, double a, cplx tau, double nu, const QuadratureConfig& cfg) {
    if (!(nu >= 0)) throw DomainError("forward_at_complex: nu must be non-negative");
    if (std::abs(tau.imag()) > nu) throw DomainError("forward_at_complex: |Im tau| exceeds nu");
    if constexpr (std::is_same_v<std::decay_t<F>, GridFunction>)
        detail::check_transform_decay(f, a, std::abs(tau.imag()), "forward_at_complex");
    return forward_at(f, a, tau, cfg).value;
}

// Inverse transform at x of a callable φ(τ), over [0, ∞) with tail bound.
template <class Phi>
IntegralEstimate<cplx> inverse_at(const Phi& phi, double a, double x, const QuadratureConfig& cfg) {
    auto g = [&](double tau) {
        if (tau == 0) return cplx(0);
        return detail::as_complex(phi(tau)) * transform_kernel(a, tau, x).value * density_rho(a, tau);
    };
    return integrate_index<cplx>(g, cfg);
}

// Inverse of sampled transform values over [τ_0, τ_N] of the samples. The
// spline goes through ρ_a φ rather than φ: φ falls off exponentially and ρ_a
// grows at the same rate, so interpolating φ itself loses relative accuracy
// exactly where ρ_a amplifies it.
inline GridFunction inverse(const TransformResult& phi, const std::vector<double>& x_nodes, const QuadratureConfig& cfg) {
    const auto& tn = phi.tau_nodes;
    if (tn.size() < 4) throw std::invalid_argument("inverse: need at least four tau nodes");
    for (std::size_t i = 1; i < tn.size(); ++i)
        if (!(tn[i] > tn[i - 1])) throw std::invalid_argument("inverse: tau nodes must be increasing");
    if (!(tn.front() >= 0)) throw std::invalid_argument("inverse: tau nodes must be non-negative");
    std::vector<cplx> weighted(tn.size());
    for (std::size_t i = 0; i < tn.size(); ++i) weighted[i] = phi.values[i] * density_rho(phi.a, tn[i]);
    const auto slopes = detail::not_a_knot_slopes(tn, weighted);
    auto weighted_at = [&](double tau) {
        cplx v[1];
        detail::hermite_eval(tn, weighted, slopes, tau, 0, v);
        return v[0];
    };
    // the spline is only C² across nodes, so each interval gets its own Gauss rule
    using rule = boost::math::quadrature::gauss<double, 4>;
    const auto& gx = rule::abscissa();
    const auto& gw = rule::weights();
    std::vector<double> taus;
    std::vector<cplx> wts;
    for (std::size_t i = 0; i + 1 < tn.size(); ++i) {
        const double mid = 0.5 * (tn[i] + tn[i + 1]), half = 0.5 * (tn[i + 1] - tn[i]);
        for (std::size_t k = 0; k < gx.size(); ++k) {
            for (double sgn : {-1.0, 1.0}) {
                if (gx[k] == 0 && sgn > 0) continue;
                const double tau = mid + sgn * half * gx[k];
                taus.push_back(tau);
                wts.push_back(half * gw[k] * weighted_at(tau));
            }
        }
    }
    std::vector<cplx> vals;
    vals.reserve(x_nodes.size());
    for (double x : x_nodes) {
        cplx sum = 0;
        for (std::size_t j = 0; j < taus.size(); ++j)
            if (taus[j] > 0) sum += wts[j] * transform_kernel(phi.a, taus[j], x).value;
        vals.push_back(sum);
    }
    (void)cfg;
    const DecayClass d = x_nodes.size() >= 3 ? fit_decay(x_nodes, vals, 0, true) : DecayClass{};
    return GridFunction(x_nodes, std::move(vals), d);
}

// Classical index Whittaker transform (W_α g)(τ) = ∫ g(x) W_{α,iτ}(x) x^{-2} dx.
template <class F>
TransformResult classical_forward(const F& g, double alpha, const std::vector<double>& taus, const QuadratureConfig& cfg) {
    if (!(alpha < 0.5)) throw DomainError("classical_forward: alpha must be below 1/2");
    if constexpr (std::is_same_v<std::decay_t<F>, GridFunction>) {
        // W_{α,iτ}(x) x^{-2} ~ x^{-3/2} at 0 (with a log at τ = 0), e^{-x/2} x^{α-2} at ∞
        if (g.values().front() != 0.0 && !(g.decay().power_at_zero > 0.5))
            throw std::invalid_argument("classical_forward: decay at zero needs exponent > 1/2");
        if (g.values().back() != 0.0 && !(g.decay().rate_at_infinity > -0.5))
            throw std::invalid_argument("classical_forward: growth rate at infinity must be below e^{x/2}");
    }
    TransformResult out;
    out.a = 0.5 - alpha;
    for (double tau : taus) {
        auto integrand = [&](double x) {
            const cplx gx = detail::as_complex(g(x));
            if (gx == 0.0) return cplx(0);
            return gx * whittaker_w(alpha, cplx(0, tau), x).value / (x * x);
        };
        auto r = integrate_halfline<cplx>(integrand, cfg);
        out.tau_nodes.push_back(tau);
        out.values.push_back(r.value);
        out.density.push_back(density_rho(out.a, tau));
        out.max_error = std::max(out.max_error, r.error_estimate);
        out.converged = out.converged && r.converged;
    }
    return out;
}

// (Θ_a f)(x) = x^{1/2-a} e^{-x/2} f(x)
inline GridFunction theta_map(const GridFunction& f, double a) {
    std::vector<cplx> v(f.values());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = f.nodes()[i];
        v[i] *= std::exp((0.5 - a) * std::log(x) - 0.5 * x);
    }
    DecayClass d = f.decay();
    d.power_at_zero += 0.5 - a;
    d.power_at_infinity += 0.5 - a;
    d.rate_at_infinity += 0.5;
    return GridFunction(f.nodes(), std::move(v), d);
}

inline GridFunction theta_unmap(const GridFunction& g, double a) {
    std::vector<cplx> v(g.values());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = g.nodes()[i];
        v[i] *= std::exp(-(0.5 - a) * std::log(x) + 0.5 * x);
    }
    DecayClass d = g.decay();
    d.power_at_zero -= 0.5 - a;
    d.power_at_infinity -= 0.5 - a;
    d.rate_at_infinity -= 0.5;
    return GridFunction(g.nodes(), std::move(v), d);
}

// L_a f at the nodes of f, from the spline's analytic derivatives.
inline GridFunction apply_L(const GridFunction& f, double a) {
    if (f.size() < 4) throw std::invalid_argument("apply_L: need at least four nodes for a cubic interpolant");
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.nodes()[i];
        v[i] = x * x * f.second_derivative(x) - ((2 * a - 1) * x + x * x) * f.derivative(x);
    }
    DecayClass d = f.decay();
    d.power_at_infinity += 2;
    return GridFunction(f.nodes(), std::move(v), d);
}

// L_a of a twice-differentiable callable, via its derivatives.
template <class F, class F1, class F2>
auto apply_L(const F& f, const F1& df, const F2& d2f, double a) {
    (void)f;
    return [&df, &d2f, a](double x) {
        return detail::as_complex(x * x * d2f(x)) - detail::as_complex(((2 * a - 1) * x + x * x) * df(x));
    };
}

// ‖f‖_{p,a} = (∫ |f|^p m_a)^{1/p} for p = 1, 2; for p = ∞ the maximum over the nodes.
inline double norm_p(const GridFunction& f, double a, double p, const QuadratureConfig& cfg) {
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1)) throw std::invalid_argument("norm_p: p must be >= 1");
    auto r = integrate_halfline<double>(
        [&](double x) {
            const double v = std::abs(f(x));
            return v == 0 ? 0.0 : std::exp(p * std::log(v) + log_weight_m(a, x));
        },
        cfg);
    return std::pow(r.value, 1 / p);
}

template <class F>
double norm_p(const F& f, double a, double p, const QuadratureConfig& cfg) {
    if (!(p >= 1) || std::isinf(p)) throw std::invalid_argument("norm_p: callable form needs finite p >= 1");
    auto r = integrate_halfline<double>(
        [&](double x) {
            const double v = std::abs(detail::as_complex(f(x)));
            return v == 0 ? 0.0 : std::exp(p * std::log(v) + log_weight_m(a, x));
        },
        cfg);
    return std::pow(r.value, 1 / p);
}

// ‖f‖ in L^{a,ν} = L_1((0,∞); x^{a+ν} Ψ(a+ν, 1+2ν; x) m_a(x) dx).
template <class F>
double norm_a_nu(const F& f, double a, double nu, const QuadratureConfig& cfg) {
    auto r = integrate_halfline<double>(
        [&](double x) {
            const double v = std::abs(detail::as_complex(f(x)));
            if (v == 0) return 0.0;
            const double k = transform_kernel(a, cplx(0, -nu), x).value.real();
            return detail::times_exp(v * k, log_weight_m(a, x)).real();
        },
        cfg);
    return r.value;
}

}  // namespace iwt
