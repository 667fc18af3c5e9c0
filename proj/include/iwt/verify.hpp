#pragma once

// Registry of numerically checkable identities. Each entry evaluates both
// sides at one parameter point; `run_identity` sweeps a parameter grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "convolve.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "transform.hpp"

namespace iwt {

using ParamSet = std::map<std::string, double>;

struct IdentityCheck {
    cplx lhs = 0;
    cplx rhs = 0;
    double residual = 0;
};

struct Identity {
    std::string name;
    std::string formula;
    // relative residual |lhs - rhs| / |lhs|, or absolute when `absolute`
    double tolerance;
    bool absolute = false;
    ParamSet defaults;
    std::function<IdentityCheck(const ParamSet&, const QuadratureConfig&)> eval;
};

struct VerifySample {
    ParamSet params;
    IdentityCheck check;
    bool pass = false;
};

struct VerifyReport {
    std::string identity;
    double tolerance = 0;
    double max_residual = 0;
    bool pass = true;
    std::vector<VerifySample> samples;
};

namespace detail {

inline IdentityCheck compare(cplx lhs, cplx rhs, bool absolute) {
    const double d = std::abs(lhs - rhs);
    return {lhs, rhs, absolute ? d : d / std::abs(lhs)};
}

}  // namespace detail

// W_{α,iτ}(x) W_{α,iτ}(y) = ∫ W_{α,iτ}(ξ) k_α(x,y,ξ) ξ^{-2} dξ
inline IdentityCheck check_product_formula(double alpha, double tau, double x, double y, const QuadratureConfig& cfg) {
    const cplx nu(0, tau);
    const cplx lhs = whittaker_w(alpha, nu, x).value * whittaker_w(alpha, nu, y).value;
    auto r = integrate_halfline<cplx>(
        [&](double xi) { return whittaker_w(alpha, nu, xi).value * kernel_k(alpha, x, y, xi) / (xi * xi); }, cfg);
    return detail::compare(lhs, r.value, false);
}

// K_{iτ}(x) K_{iτ}(y) = ½ ∫ K_{iτ}(ξ) exp(-xy/2ξ - xξ/2y - yξ/2x) dξ/ξ
inline IdentityCheck check_macdonald(double tau, double x, double y, const QuadratureConfig& cfg) {
    const cplx nu(0, tau);
    const cplx lhs = bessel_k(nu, x).value * bessel_k(nu, y).value;
    auto r = integrate_halfline<cplx>(
        [&](double xi) {
            const double e = -x * y / (2 * xi) - x * xi / (2 * y) - y * xi / (2 * x);
            return 0.5 * bessel_k(nu, xi).value * std::exp(e) / xi;
        },
        cfg);
    return detail::compare(lhs, r.value, false);
}

// ∫ q_a(x,y,ξ) m_a(ξ) dξ = 1
inline IdentityCheck check_normalization(double a, double x, double y, const QuadratureConfig& cfg) {
    auto r = integrate_halfline<double>([&](double xi) { return std::exp(log_kernel_q(a, x, y, xi) + log_weight_m(a, xi)); },
                                        cfg);
    return detail::compare(1.0, r.value, true);
}

// ∫ |f|² m_a dx = ∫ |Ψ_a f|² ρ_a dτ for f = x^p e^{-qx}
inline IdentityCheck check_plancherel(double a, double p, double q, const QuadratureConfig& cfg) {
    if (!(p > a)) throw DomainError("plancherel: needs p > a");
    auto f = [p, q](double x) { return std::exp(p * std::log(x) - q * x); };
    auto lhs = integrate_halfline<double>([&](double x) { return std::exp(2 * (p * std::log(x) - q * x) + log_weight_m(a, x)); },
                                          cfg);
    auto rhs = integrate_index<double>(
        [&](double tau) { return std::norm(forward_at(f, a, tau, cfg).value) * density_rho(a, tau); }, cfg);
    return detail::compare(lhs.value, rhs.value, false);
}

// Ψ_a(x^β ⋆_a g) = Ψ_a(x^β) Ψ_a g for g = x^p e^{-qx}; the translated power is
// known in closed form, so the convolution is a single integral.
inline IdentityCheck check_factorization(double a, double tau, double beta, double p, double q, const QuadratureConfig& cfg) {
    if (!(beta > a) || !(p > a)) throw DomainError("factorization: needs beta > a and p > a");
    auto g = [p, q](double x) { return std::exp(p * std::log(x) - q * x); };
    const PowerTranslation tp(a, beta);
    auto fg = [&](double x) { return convolve_power_at(g, a, beta, 1.0, x, tp, cfg).value; };
    const cplx lhs = forward_at(fg, a, tau, cfg).value;
    const cplx pf = std::exp(ln_gamma(cplx(beta - a, tau)) + ln_gamma(cplx(beta - a, -tau))) * rgamma(beta);
    return detail::compare(lhs, pf * forward_at(g, a, tau, cfg).value, false);
}

// Ψ_a(L_a f) = -(τ² + a²) Ψ_a f for f = x^p e^{-qx}
inline IdentityCheck check_diagonalization(double a, double tau, double p, double q, const QuadratureConfig& cfg) {
    if (!(p > a)) throw DomainError("diagonalization: needs p > a");
    auto f = [p, q](double x) { return std::exp(p * std::log(x) - q * x); };
    // f' = (p/x - q) f, f'' = ((p/x - q)² - p/x²) f
    auto Lf = [&](double x) {
        const double g1 = p / x - q, g2 = g1 * g1 - p / (x * x);
        return (x * x * g2 - ((2 * a - 1) * x + x * x) * g1) * f(x);
    };
    const cplx lhs = forward_at(Lf, a, tau, cfg).value;
    return detail::compare(lhs, -(tau * tau + a * a) * forward_at(f, a, tau, cfg).value, false);
}

inline const std::vector<Identity>& identity_registry() {
    static const std::vector<Identity> reg = {
        {"product-formula", "W_{alpha,i tau}(x) W_{alpha,i tau}(y) = int_0^inf W_{alpha,i tau}(xi) k_alpha(x,y,xi) xi^{-2} dxi",
         1e-6, false, {{"alpha", -0.5}, {"tau", 1}, {"x", 1}, {"y", 2}},
         [](const ParamSet& p, const QuadratureConfig& c) {
             return check_product_formula(p.at("alpha"), p.at("tau"), p.at("x"), p.at("y"), c);
         }},
        {"normalization", "int_0^inf q_a(x,y,xi) m_a(xi) dxi = 1", 1e-8, true, {{"a", 1}, {"x", 1}, {"y", 2}},
         [](const ParamSet& p, const QuadratureConfig& c) { return check_normalization(p.at("a"), p.at("x"), p.at("y"), c); }},
        {"macdonald",
         "K_{i tau}(x) K_{i tau}(y) = (1/2) int_0^inf K_{i tau}(xi) exp(-xy/(2xi) - x xi/(2y) - y xi/(2x)) dxi/xi", 1e-8,
         false, {{"tau", 0.5}, {"x", 1}, {"y", 1}},
         [](const ParamSet& p, const QuadratureConfig& c) { return check_macdonald(p.at("tau"), p.at("x"), p.at("y"), c); }},
        {"plancherel", "int_0^inf |f|^2 m_a dx = int_0^inf |Psi_a f(tau)|^2 rho_a(tau) dtau, f = x^p e^{-qx}", 1e-4, false,
         {{"a", 0.5}, {"p", 1.5}, {"q", 1}},
         [](const ParamSet& p, const QuadratureConfig& c) { return check_plancherel(p.at("a"), p.at("p"), p.at("q"), c); }},
        {"factorization", "Psi_a(x^beta *_a g)(tau) = Psi_a(x^beta)(tau) Psi_a g(tau), g = x^p e^{-qx}", 1e-4, false,
         {{"a", 1}, {"tau", 0.5}, {"beta", 1.5}, {"p", 2}, {"q", 1}},
         [](const ParamSet& p, const QuadratureConfig& c) {
             return check_factorization(p.at("a"), p.at("tau"), p.at("beta"), p.at("p"), p.at("q"), c);
         }},
        {"diagonalization", "Psi_a(L_a f)(tau) = -(tau^2 + a^2) Psi_a f(tau), L_a = x^2 D^2 - ((2a-1)x + x^2) D, f = x^p e^{-qx}",
         1e-4, false, {{"a", 1}, {"tau", 0.5}, {"p", 2}, {"q", 1}},
         [](const ParamSet& p, const QuadratureConfig& c) {
             return check_diagonalization(p.at("a"), p.at("tau"), p.at("p"), p.at("q"), c);
         }},
    };
    return reg;
}

inline const Identity& find_identity(const std::string& name) {
    for (const auto& id : identity_registry())
        if (id.name == name) return id;
    throw std::invalid_argument("unknown identity '" + name + "'");
}

// Sweeps the Cartesian product of the given value lists; parameters not
// listed keep their defaults.
inline VerifyReport run_identity(const Identity& id, const std::map<std::string, std::vector<double>>& ranges,
                                 const QuadratureConfig& cfg) {
    for (const auto& [k, v] : ranges) {
        if (!id.defaults.count(k)) throw std::invalid_argument("identity '" + id.name + "' has no parameter '" + k + "'");
        if (v.empty()) throw std::invalid_argument("parameter '" + k + "' has no values");
    }
    VerifyReport rep;
    rep.identity = id.name;
    rep.tolerance = id.tolerance;
    std::vector<ParamSet> points{id.defaults};
    for (const auto& [k, vals] : ranges) {
        std::vector<ParamSet> next;
        for (const auto& p : points)
            for (double v : vals) {
                ParamSet q = p;
                q[k] = v;
                next.push_back(q);
            }
        points = std::move(next);
    }
    for (const auto& p : points) {
        VerifySample s;
        s.params = p;
        s.check = id.eval(p, cfg);
        s.pass = s.check.residual <= id.tolerance;
        rep.max_residual = std::max(rep.max_residual, s.check.residual);
        rep.pass = rep.pass && s.pass;
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

}  // namespace iwt
