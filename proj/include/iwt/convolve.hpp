#pragma once

// Generalized translation
//     (T_a^y f)(x) = ∫_0^∞ f(ξ) q_a(x, y, ξ) m_a(ξ) dξ
// and the convolution
//     (f ⋆_a g)(x) = ∫_0^∞ (T_a^x f)(ξ) g(ξ) m_a(ξ) dξ,
// both as iterated one-dimensional integrals. The ξ-range of each
// translation integral comes from the kernel envelope.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grid_function.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace iwt {

// (T_a^y ξ^β)(x) = (xy)^β Ψ(β, 1 - 2a + 2β; x + y)
inline cplx translate_power(cplx a, cplx beta, double x, double y) {
    if (!(x > 0) || !(y > 0)) throw DomainError("translate_power: x and y must be positive");
    if (beta == 0.0) return 1.0;
    return std::exp(beta * std::log(x * y)) * kummer_psi(beta, 1.0 - 2.0 * a + 2.0 * beta, x + y).value;
}

// The same for fixed (a, β) at many (x, y).
class PowerTranslation {
public:
    PowerTranslation(cplx a, cplx beta) : beta_(beta), psi_(beta, 1.0 - 2.0 * a + 2.0 * beta) {}

    cplx operator()(double x, double y) const { return scaled(x, y, 0); }

    // the translated power times e^{l}, with l added before exponentiating
    cplx scaled(double x, double y, double l) const {
        if (!(x > 0) || !(y > 0)) throw DomainError("translate_power: x and y must be positive");
        if (beta_ == 0.0) return std::exp(l);
        return std::exp(beta_ * std::log(x * y) + l) * psi_(x + y).value;
    }

private:
    cplx beta_;
    KummerPsiTable psi_;
};

namespace detail {

inline std::string at_point(const char* who, double x, double y) {
    std::ostringstream os;
    os.precision(17);
    os << who << ": no convergence at x = " << x << ", y = " << y;
    return os.str();
}

// ξ-interval outside of which |f|·envelope·m_a stays below `bound` times its
// peak, walking out in log ξ from the Gaussian peak ξ* = xy/(x+y).
template <class F>
std::pair<double, double> translation_range(const F& f, double a, double x, double y, double A, double bound) {
    auto g = [&](double xi) {
        const double fx = std::abs(cplx(f(xi)));
        return std::log(kernel_envelope(a, x, y, xi, A)) + log_weight_m(a, xi) +
               (fx > 0 ? std::log(fx) : -std::numeric_limits<double>::infinity());
    };
    const double start = x * y / (x + y);
    double peak = g(start);
    const double step = std::log(1.25);
    auto walk = [&](double dir) {
        double l = std::log(start);
        int small = 0;
        for (int i = 0; i < 4000; ++i) {
            l += dir * step;
            const double v = g(std::exp(l));
            peak = std::max(peak, v);
            if (v < peak + std::log(bound)) {
                if (++small >= 3) return std::exp(l);
            } else {
                small = 0;
            }
        }
        return std::exp(l);
    };
    double lo = walk(-1), hi = walk(+1);
    lo = walk(-1);
    return {lo, hi};
}

// `slack` widens the acceptance test for results that feed an outer integral
// run at a looser tolerance.
template <class F>
IntegralEstimate<cplx> translate_with(const F& f, const KernelQ& q, double y, double x, double A,
                                      const QuadratureConfig& cfg, double slack = 1) {
    const double a = q.a();
    auto [lo, hi] = translation_range(f, a, x, y, A, cfg.x_truncation_bound);
    HalflineOptions opt;
    opt.lower = lo;
    opt.upper = hi;
    opt.center = std::sqrt(lo * hi);
    auto integrand = [&](double xi) {
        const cplx fx = cplx(f(xi));
        if (fx == 0.0) return cplx(0);
        return times_exp(fx, q.log_value(x, y, xi) + log_weight_m(a, xi));
    };
    auto r = integrate_halfline<cplx>(integrand, cfg, opt);
    if (!r.converged && r.error_estimate <= slack * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value)))
        r.converged = true;
    if (!r.converged) throw ConvergenceError(at_point("translate", x, y));
    return r;
}

// spline-sampled f has jumps in its third derivative at the knots, which
// slows the trapezoid to algebraic convergence; allow two more halvings
inline QuadratureConfig translation_config(const QuadratureConfig& cfg) {
    QuadratureConfig c = cfg;
    c.max_refinement_levels = std::min(20, cfg.max_refinement_levels + 2);
    return c;
}

// Membership of f in L_p(m_a) read off its declared tails.
inline bool in_lp(const GridFunction& f, double a, double p) {
    const auto& d = f.decay();
    const bool zero_ok = f.values().front() == 0.0 || (std::isinf(p) ? d.power_at_zero >= 0 : p * d.power_at_zero > 2 * a);
    bool inf_ok;
    if (f.values().back() == 0.0) {
        inf_ok = true;
    } else if (std::isinf(p)) {
        inf_ok = d.rate_at_infinity > 0 || (d.rate_at_infinity == 0 && d.power_at_infinity <= 0);
    } else {
        inf_ok = p * d.rate_at_infinity > -1 ||
                 (p * d.rate_at_infinity == -1 && p * d.power_at_infinity - 2 * a - 1 < -1);
    }
    return zero_ok && inf_ok;
}

}  // namespace detail

// (T_a^y f)(x) at one point.
template <class F>
IntegralEstimate<cplx> translate_at(const F& f, double a, double y, double x, const QuadratureConfig& cfg) {
    if (!(a >= 0)) throw DomainError("translate: a must be non-negative");
    if (!(x > 0) || !(y > 0)) throw DomainError("translate: x and y must be positive");
    const KernelQ q(a);
    return detail::translate_with(f, q, y, x, envelope_constant(a, y), detail::translation_config(cfg));
}

template <class F>
GridFunction translate(const F& f, double a, double y, const std::vector<double>& x_nodes, const QuadratureConfig& cfg) {
    if (!(a >= 0)) throw DomainError("translate: a must be non-negative");
    if (!(y > 0)) throw DomainError("translate: y must be positive");
    const KernelQ q(a);
    const double A = envelope_constant(a, y);
    const QuadratureConfig c = detail::translation_config(cfg);
    std::vector<cplx> v;
    v.reserve(x_nodes.size());
    for (double x : x_nodes) {
        if (!(x > 0)) throw DomainError("translate: output nodes must be positive");
        v.push_back(detail::translate_with(f, q, y, x, A, c).value);
    }
    // T_a^y f(x) tends to f(y) as x grows
    DecayClass d;
    if constexpr (std::is_same_v<std::decay_t<F>, GridFunction>) d.power_at_zero = f.decay().power_at_zero;
    else if (x_nodes.size() >= 3) d.power_at_zero = fit_decay(x_nodes, v).power_at_zero;
    return GridFunction(x_nodes, std::move(v), d);
}

// (f ⋆_a g)(x) at one point: outer integral over ξ of (T_a^x f)(ξ) g(ξ) m_a(ξ).
template <class F, class G>
IntegralEstimate<cplx> convolve_at(const F& f, const G& g, double a, double x, const QuadratureConfig& cfg) {
    if (!(a >= 0)) throw DomainError("convolve: a must be non-negative");
    if (!(x > 0)) throw DomainError("convolve: x must be positive");
    const KernelQ q(a);
    const double A = envelope_constant(a, x);
    // The outer rule runs at 100 times the relative tolerance. Inner
    // translations are not required to converge on their own; their error
    // estimates are integrated alongside the values and the total must fit
    // the outer tolerance.
    // An absolute inner tolerance would be meaningless once multiplied by
    // m_a(ξ), which is unbounded near zero.
    QuadratureConfig c = cfg, inner = cfg;
    c.rel_tol = std::min(1e-2, 100 * cfg.rel_tol);
    inner.abs_tol = 0;
    auto outer = [&](double xi) -> std::array<cplx, 2> {
        const cplx gx = cplx(g(xi));
        if (gx == 0.0) return {0.0, 0.0};
        const auto t = detail::translate_with(f, q, x, xi, A, inner, INFINITY);
        const double l = log_weight_m(a, xi);
        return {detail::times_exp(t.value * gx, l), detail::times_exp(t.error_estimate * std::abs(gx), l)};
    };
    auto s = integrate_halfline<std::array<cplx, 2>>(outer, c);
    IntegralEstimate<cplx> r;
    r.value = s.value[0];
    r.error_estimate = s.error_estimate + std::abs(s.value[1]);
    r.abs_integral = s.abs_integral;
    r.nodes_used = s.nodes_used;
    r.converged = s.converged && r.error_estimate <= std::max(c.abs_tol, c.rel_tol * std::abs(r.value));
    if (!r.converged) throw ConvergenceError(detail::at_point("convolve", x, x));
    return r;
}

template <class F, class G>
GridFunction convolve(const F& f, const G& g, double a, const std::vector<double>& x_nodes, const QuadratureConfig& cfg) {
    if constexpr (std::is_same_v<std::decay_t<F>, GridFunction> && std::is_same_v<std::decay_t<G>, GridFunction>) {
        // Young's inequality needs f ∈ L_p, g ∈ L_q with 1/p + 1/q >= 1
        const double ps[] = {1.0, 2.0, INFINITY};
        bool ok = false;
        for (double p : ps)
            for (double r : ps)
                if (1 / p + 1 / r >= 1 && detail::in_lp(f, a, p) && detail::in_lp(g, a, r)) ok = true;
        if (!ok)
            throw std::invalid_argument(
                "convolve: declared tails put f and g in no pair L_p, L_q with 1/p + 1/q >= 1 for this a");
    }
    std::vector<cplx> v;
    v.reserve(x_nodes.size());
    for (double x : x_nodes) v.push_back(convolve_at(f, g, a, x, cfg).value);
    DecayClass d;
    if (x_nodes.size() >= 3) d = fit_decay(x_nodes, v);
    return GridFunction(x_nodes, std::move(v), d);
}

// (f ⋆_a λξ^β)(x) = λ ∫ f(ξ) (xξ)^β Ψ(β, 1 - 2a + 2β; x + ξ) m_a(ξ) dξ, a single
// integral because the translated power is known in closed form.
template <class F>
IntegralEstimate<cplx> convolve_power_at(const F& f, double a, cplx beta, cplx lambda, double x,
                                         const PowerTranslation& tp, const QuadratureConfig& cfg) {
    auto integrand = [&](double xi) {
        const cplx fx = cplx(f(xi));
        if (fx == 0.0) return cplx(0);
        const double l = std::log(std::abs(fx)) + log_weight_m(a, xi);
        return lambda * fx / std::abs(fx) * tp.scaled(x, xi, l);
    };
    (void)beta;
    auto r = integrate_halfline<cplx>(integrand, cfg);
    if (!r.converged) throw ConvergenceError(detail::at_point("convolve_power", x, x));
    return r;
}

template <class F>
IntegralEstimate<cplx> convolve_power_at(const F& f, double a, cplx beta, cplx lambda, double x, const QuadratureConfig& cfg) {
    return convolve_power_at(f, a, beta, lambda, x, PowerTranslation(a, beta), cfg);
}

}  // namespace iwt
