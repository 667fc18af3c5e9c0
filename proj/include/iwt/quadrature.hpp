#pragma once

// Double-exponential quadrature on the half line and on a finite index range.
//
// All rules here are nested: each refinement level halves the step and only
// evaluates the new odd-indexed nodes, so the error estimate is simply the
// change between the last two levels.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace iwt {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_refinement_levels = 8;
    // Relative size below which outer integrand terms are treated as zero
    // when trimming the half-line rule.
    double x_truncation_bound = 1e-20;
    // Upper end of every index (tau) integral.
    double tau_max = 24.0;

    void validate() const {
        auto bad = [](const std::string& what) { throw std::invalid_argument("QuadratureConfig: " + what); };
        if (!(rel_tol > 0) || !std::isfinite(rel_tol)) bad("rel_tol must be positive");
        if (!(abs_tol >= 0) || !std::isfinite(abs_tol)) bad("abs_tol must be non-negative");
        if (max_refinement_levels < 1 || max_refinement_levels > 20) bad("max_refinement_levels must lie in [1, 20]");
        if (!(x_truncation_bound > 0) || !(x_truncation_bound < 1)) bad("x_truncation_bound must lie in (0, 1)");
        if (!(tau_max > 0) || !std::isfinite(tau_max)) bad("tau_max must be positive");
    }
};

template <class T = cplx>
struct IntegralEstimate {
    T value{};
    double error_estimate = 0;
    // Quadrature of the integrand magnitude; the ratio to |value| measures cancellation.
    double abs_integral = 0;
    int nodes_used = 0;
    bool converged = false;
};

// Raised when the integrand returns NaN or Inf; carries the offending abscissa.
class NonFiniteIntegrand : public std::runtime_error {
public:
    NonFiniteIntegrand(const std::string& where, double node)
        : std::runtime_error(message(where, node)), node_(node) {}
    double node() const { return node_; }

private:
    static std::string message(const std::string& where, double node) {
        std::ostringstream os;
        os.precision(17);
        os << where << ": integrand is not finite at node " << node;
        return os.str();
    }
    double node_;
};

// An integral that stopped at the refinement limit without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }
template <class T, std::size_t N>
double magnitude(const std::array<T, N>& v) {
    double m = 0;
    for (const auto& e : v) m = std::max(m, magnitude(e));
    return m;
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
template <class T, std::size_t N>
bool finite(const std::array<T, N>& v) {
    for (const auto& e : v)
        if (!finite(e)) return false;
    return true;
}

template <class T>
T scaled(const T& v, double s) { return v * s; }
template <class T, std::size_t N>
std::array<T, N> scaled(const std::array<T, N>& v, double s) {
    std::array<T, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = v[i] * s;
    return r;
}

template <class T>
void accumulate(T& acc, const T& v) { acc += v; }
template <class T, std::size_t N>
void accumulate(std::array<T, N>& acc, const std::array<T, N>& v) {
    for (std::size_t i = 0; i < N; ++i) acc[i] += v[i];
}

template <class T>
T difference(const T& a, const T& b) { return a - b; }
template <class T, std::size_t N>
std::array<T, N> difference(const std::array<T, N>& a, const std::array<T, N>& b) {
    std::array<T, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
    return r;
}

template <class T>
T zero() {
    if constexpr (std::is_arithmetic_v<T>) return T(0);
    else return T{};
}

// v e^{l} without overflow in e^{l} when v is tiny
inline cplx times_exp(cplx v, double l) {
    if (v == 0.0) return 0.0;
    return v / std::abs(v) * std::exp(std::log(std::abs(v)) + l);
}

// A node of a nested trapezoid rule in the transformed variable u.
struct DENode {
    double x;
    double w;  // dx/du
};

// Shared driver: `node(u)` maps u to (x, dx/du); the rule is trapezoidal in u
// on [u_lo, u_hi] (already trimmed), with nested halving from step h0.
template <class T, class F, class NodeMap>
IntegralEstimate<T> nested_trapezoid(F& f, NodeMap node, double u_lo, double u_hi, double h0,
                                     const QuadratureConfig& cfg, int min_levels, const char* where) {
    IntegralEstimate<T> out;
    auto eval = [&](double u, double& absum) -> T {
        DENode nd = node(u);
        if (!(nd.w > 0) || !(nd.x == nd.x)) return zero<T>();
        T v = f(nd.x);
        if (!finite(v)) throw NonFiniteIntegrand(where, nd.x);
        ++out.nodes_used;
        absum += magnitude(v) * nd.w;
        return scaled(v, nd.w);
    };

    // level 0: nodes k*h0 for k in [k_lo, k_hi]
    const long k_lo = static_cast<long>(std::ceil(u_lo / h0));
    const long k_hi = static_cast<long>(std::floor(u_hi / h0));
    T sum = zero<T>();
    double absum = 0;
    for (long k = k_lo; k <= k_hi; ++k) accumulate(sum, eval(k * h0, absum));
    double h = h0;
    T estimate = scaled(sum, h);
    double abs_estimate = absum * h;
    double err = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= cfg.max_refinement_levels; ++level) {
        h *= 0.5;
        // odd multiples of the new step inside [u_lo, u_hi]
        const long j_lo = static_cast<long>(std::ceil((u_lo / h - 1) / 2));
        const long j_hi = static_cast<long>(std::floor((u_hi / h - 1) / 2));
        for (long j = j_lo; j <= j_hi; ++j) accumulate(sum, eval((2 * j + 1) * h, absum));
        T next = scaled(sum, h);
        err = magnitude(difference(next, estimate));
        estimate = next;
        abs_estimate = absum * h;
        // also stop once the change is at the rounding floor of Σ|terms|
        const double floor = 64 * std::numeric_limits<double>::epsilon() * abs_estimate;
        if (level >= min_levels && err <= std::max({cfg.abs_tol, cfg.rel_tol * magnitude(estimate), floor})) {
            out.converged = true;
            break;
        }
    }
    out.value = estimate;
    out.error_estimate = err;
    out.abs_integral = abs_estimate;
    return out;
}

}  // namespace detail

struct HalflineOptions {
    // Scale of the integrand; nodes are symmetric about x = center in log scale.
    double center = 1.0;
    // Optional truncation of the domain to [lower, upper].
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    int min_levels = 2;
};

// Integral of f over (lower, upper) ⊂ (0, ∞) with the exp-sinh substitution
// x = center * exp((π/2) sinh u). T may be double, complex or std::array of either.
template <class T = cplx, class F>
IntegralEstimate<T> integrate_halfline(F&& f, const QuadratureConfig& cfg, const HalflineOptions& opt = {}) {
    cfg.validate();
    if (!(opt.center > 0) || !(opt.lower >= 0) || !(opt.upper > opt.lower))
        throw std::invalid_argument("integrate_halfline: bad center or bounds");
    const double c = opt.center;
    auto node = [c](double u) {
        const double e = std::exp(0.5 * pi * std::sinh(u));
        return detail::DENode{c * e, c * e * 0.5 * pi * std::cosh(u)};
    };
    auto u_of = [c](double x) { return std::asinh(std::log(x / c) / (0.5 * pi)); };
    double u_min = u_of(std::max(opt.lower, 1e-300));
    double u_max = u_of(std::min(opt.upper, 1e300));

    // Trim the range on the coarse grid: walk outward from u = 0 until two
    // consecutive terms are negligible against the largest term seen, and cut
    // at the first of them.
    const double h0 = 0.5;
    const double u0 = std::clamp(0.0, u_min, u_max);
    std::vector<double> head;
    double peak = 0;
    auto term = [&](double u) {
        auto nd = node(u);
        auto v = f(nd.x);
        if (!detail::finite(v)) throw NonFiniteIntegrand("integrate_halfline", nd.x);
        double m = detail::magnitude(v) * nd.w;
        peak = std::max(peak, m);
        return m;
    };
    auto walk = [&](double dir, double limit) {
        double u = u0;
        int small = 0;
        for (;;) {
            double next = u + dir * h0;
            if ((dir > 0 && next >= limit) || (dir < 0 && next <= limit)) return limit;
            u = next;
            double m = term(u);
            if (peak > 0 && m <= cfg.x_truncation_bound * peak) {
                if (++small >= 2) return u - dir * h0;
            } else {
                small = 0;
            }
        }
    };
    term(u0);
    double hi = walk(+1, u_max);
    double lo = walk(-1, u_min);
    // the peak may have been found late on one side; re-walk the other
    hi = walk(+1, u_max);
    auto r = detail::nested_trapezoid<T>(f, node, lo, hi, h0, cfg, opt.min_levels, "integrate_halfline");
    return r;
}

// Integral of g over [0, T] by tanh-sinh, with the tail beyond T bounded by
// |g(T)| / decay_rate and folded into the error estimate.
template <class T = cplx, class G>
IntegralEstimate<T> integrate_index(G&& g, const QuadratureConfig& cfg, double decay_rate = 0.5 * pi) {
    cfg.validate();
    const double tmax = cfg.tau_max;
    auto node = [tmax](double u) {
        const double v = 0.5 * pi * std::sinh(u);
        // tau = T / (1 + e^{-2v}) written to keep full precision near both ends
        const double tau = tmax / (1.0 + std::exp(-2 * v));
        const double ch = std::cosh(v);
        const double w = tmax * 0.5 * 0.5 * pi * std::cosh(u) / (ch * ch);
        return detail::DENode{tau, w};
    };
    const double u_edge = 3.2;  // weights below ~1e-300 beyond this
    auto r = detail::nested_trapezoid<T>(g, node, -u_edge, u_edge, 0.5, cfg, 2, "integrate_index");
    auto tail = g(tmax);
    if (!detail::finite(tail)) throw NonFiniteIntegrand("integrate_index", tmax);
    const double tail_bound = detail::magnitude(tail) / decay_rate;
    r.error_estimate += tail_bound;
    ++r.nodes_used;
    return r;
}

// Integral over a finite interval [lo, hi] by tanh-sinh (endpoint singularities allowed).
template <class T = cplx, class G>
IntegralEstimate<T> integrate_interval(G&& g, double lo, double hi, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(hi > lo)) throw std::invalid_argument("integrate_interval: empty interval");
    const double half = 0.5 * (hi - lo);
    auto node = [lo, hi, half](double u) {
        const double v = 0.5 * pi * std::sinh(u);
        const double x = v < 0 ? lo + (hi - lo) / (1.0 + std::exp(-2 * v)) : hi - (hi - lo) / (1.0 + std::exp(2 * v));
        if (!(x > lo && x < hi)) return detail::DENode{x, 0.0};
        const double ch = std::cosh(v);
        return detail::DENode{x, half * 0.5 * pi * std::cosh(u) / (ch * ch)};
    };
    // nodes reach within ~1e-37 of the ends, which covers x^{-1/2}-type singularities
    return detail::nested_trapezoid<T>(g, node, -4.0, 4.0, 0.5, cfg, 2, "integrate_interval");
}

}  // namespace iwt
