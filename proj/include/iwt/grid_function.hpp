#pragma once

// Sampled functions on (0, ∞): complex values on an increasing grid of
// positive nodes, interpolated by a not-a-knot cubic spline in t = log x, and
// extended beyond the grid by a declared tail model
//     f(x) ≈ f(x_0) (x/x_0)^{p0}                        for x < x_0
//     f(x) ≈ f(x_N) (x/x_N)^{p∞} e^{-q∞ (x - x_N)}      for x > x_N

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace iwt {

struct DecayClass {
    double power_at_zero = 0;
    double power_at_infinity = 0;
    double rate_at_infinity = 0;
};

namespace detail {

// Slopes df/dt at the nodes of the not-a-knot cubic spline through (t_i, f_i).
inline std::vector<cplx> not_a_knot_slopes(const std::vector<double>& t, const std::vector<cplx>& f) {
    const std::size_t n = t.size();
    std::vector<cplx> s(n, 0.0);
    if (n == 2) {
        s[0] = s[1] = (f[1] - f[0]) / (t[1] - t[0]);
        return s;
    }
    std::vector<double> dt(n - 1);
    std::vector<cplx> slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dt[i] = t[i + 1] - t[i];
        slope[i] = (f[i + 1] - f[i]) / dt[i];
    }
    if (n == 3) {
        // the not-a-knot cubic through three points is the interpolating parabola
        const cplx c2 = (slope[1] - slope[0]) / (t[2] - t[0]);
        s[0] = slope[0] - c2 * dt[0];
        s[1] = slope[0] + c2 * dt[0];
        s[2] = slope[1] + c2 * dt[1];
        return s;
    }
    std::vector<double> lo(n, 0), di(n, 0), up(n, 0);
    std::vector<cplx> rhs(n);
    di[0] = dt[1];
    up[0] = dt[0] + dt[1];
    rhs[0] = ((dt[0] + 2 * up[0]) * dt[1] * slope[0] + dt[0] * dt[0] * slope[1]) / up[0];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        lo[i] = dt[i];
        di[i] = 2 * (dt[i - 1] + dt[i]);
        up[i] = dt[i - 1];
        rhs[i] = 3.0 * (dt[i] * slope[i - 1] + dt[i - 1] * slope[i]);
    }
    const double d = dt[n - 2] + dt[n - 3];
    lo[n - 1] = d;
    di[n - 1] = dt[n - 3];
    rhs[n - 1] = (dt[n - 2] * dt[n - 2] * slope[n - 3] + (2 * d + dt[n - 2]) * dt[n - 3] * slope[n - 2]) / d;
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    s[n - 1] = rhs[n - 1] / di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) s[i] = (rhs[i] - up[i] * s[i + 1]) / di[i];
    return s;
}

// Value and derivatives up to `order` (in t) of the cubic Hermite spline at t,
// which must lie within [t_0, t_N].
inline void hermite_eval(const std::vector<double>& tn, const std::vector<cplx>& f, const std::vector<cplx>& s,
                         double t, int order, cplx* out) {
    std::size_t i = std::upper_bound(tn.begin(), tn.end(), t) - tn.begin();
    i = std::clamp<std::size_t>(i, 1, tn.size() - 1) - 1;
    const double h = tn[i + 1] - tn[i];
    const double u = (t - tn[i]) / h;
    const cplx f0 = f[i], f1 = f[i + 1], m0 = s[i] * h, m1 = s[i + 1] * h;
    const double u2 = u * u, u3 = u2 * u;
    out[0] = (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * m1;
    if (order < 1) return;
    out[1] = ((6 * u2 - 6 * u) * f0 + (3 * u2 - 4 * u + 1) * m0 + (-6 * u2 + 6 * u) * f1 + (3 * u2 - 2 * u) * m1) / h;
    if (order < 2) return;
    out[2] = ((12 * u - 6) * f0 + (6 * u - 4) * m0 + (-12 * u + 6) * f1 + (6 * u - 2) * m1) / (h * h);
}

}  // namespace detail

class GridFunction {
public:
    GridFunction() = default;

    GridFunction(std::vector<double> nodes, std::vector<cplx> values, DecayClass decay = {})
        : x_(std::move(nodes)), f_(std::move(values)), decay_(decay) {
        if (x_.size() != f_.size()) throw std::invalid_argument("GridFunction: nodes and values differ in length");
        if (x_.size() < 2) throw std::invalid_argument("GridFunction: at least two nodes are required");
        for (std::size_t i = 0; i < x_.size(); ++i) {
            if (!(x_[i] > 0) || !std::isfinite(x_[i])) throw std::invalid_argument("GridFunction: nodes must be positive and finite");
            if (i > 0 && !(x_[i] > x_[i - 1])) throw std::invalid_argument("GridFunction: nodes must be strictly increasing");
            if (!std::isfinite(f_[i].real()) || !std::isfinite(f_[i].imag()))
                throw std::invalid_argument("GridFunction: values must be finite");
        }
        if (!std::isfinite(decay_.power_at_zero) || !std::isfinite(decay_.power_at_infinity) ||
            !std::isfinite(decay_.rate_at_infinity))
            throw std::invalid_argument("GridFunction: decay exponents must be finite");
        build();
    }

    template <class F>
    static GridFunction sample(F&& f, const std::vector<double>& nodes, DecayClass decay = {}) {
        std::vector<cplx> v;
        v.reserve(nodes.size());
        for (double x : nodes) v.push_back(cplx(f(x)));
        return GridFunction(nodes, std::move(v), decay);
    }

    const std::vector<double>& nodes() const { return x_; }
    const std::vector<cplx>& values() const { return f_; }
    const DecayClass& decay() const { return decay_; }
    std::size_t size() const { return x_.size(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    cplx operator()(double x) const { return eval(x, 0); }
    cplx derivative(double x) const { return eval(x, 1); }
    cplx second_derivative(double x) const { return eval(x, 2); }

private:
    void build() {
        t_.resize(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) t_[i] = std::log(x_[i]);
        s_ = detail::not_a_knot_slopes(t_, f_);
    }

    // order-th derivative with respect to x
    cplx eval(double x, int order) const {
        if (!(x > 0)) throw std::domain_error("GridFunction: evaluation point must be positive");
        if (x < x_.front()) return tail(x, order, f_.front(), x_.front(), decay_.power_at_zero, 0.0);
        if (x > x_.back()) return tail(x, order, f_.back(), x_.back(), decay_.power_at_infinity, decay_.rate_at_infinity);
        const double t = std::log(x);
        cplx d[3];
        detail::hermite_eval(t_, f_, s_, t, order, d);
        if (order == 0) return d[0];
        if (order == 1) return d[1] / x;
        // f'' = (f_tt - f_t) / x²
        return (d[2] - d[1]) / (x * x);
    }

    static cplx tail(double x, int order, cplx f0, double x0, double p, double q) {
        const double v = std::exp(p * std::log(x / x0) - q * (x - x0));
        if (order == 0) return f0 * v;
        // g = log of the model; g' = p/x - q, g'' = -p/x²
        const double g1 = p / x - q;
        if (order == 1) return f0 * v * g1;
        return f0 * v * (g1 * g1 - p / (x * x));
    }

    std::vector<double> x_;
    std::vector<cplx> f_;
    DecayClass decay_{};
    std::vector<double> t_;
    std::vector<cplx> s_;
};

// Nodes uniform in log x.
inline std::vector<double> log_grid(double x_min, double x_max, std::size_t n) {
    if (!(x_min > 0) || !(x_max > x_min) || n < 2) throw std::invalid_argument("log_grid: need 0 < x_min < x_max, n >= 2");
    std::vector<double> g(n);
    const double a = std::log(x_min), b = std::log(x_max);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * double(i) / double(n - 1));
    g.front() = x_min;
    g.back() = x_max;
    return g;
}

// Nodes uniform in u = log x + x / scale: logarithmic near zero and linear
// for large x, which suits functions with power behaviour at 0 and
// exponential decay at infinity.
inline std::vector<double> log_linear_grid(double x_min, double x_max, std::size_t n, double scale = 1.0) {
    if (!(x_min > 0) || !(x_max > x_min) || n < 2 || !(scale > 0))
        throw std::invalid_argument("log_linear_grid: need 0 < x_min < x_max, n >= 2, scale > 0");
    auto u = [scale](double x) { return std::log(x) + x / scale; };
    const double a = u(x_min), b = u(x_max);
    std::vector<double> g(n);
    double x = x_min;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = a + (b - a) * double(i) / double(n - 1);
        for (int it = 0; it < 100; ++it) {
            const double dx = (u(x) - target) / (1 / x + 1 / scale);
            x = std::max(x - dx, 0.5 * x);
            if (std::abs(dx) <= 1e-15 * x) break;
        }
        g[i] = x;
    }
    g.front() = x_min;
    g.back() = x_max;
    return g;
}

// Tail exponents read off the end nodes: p0 from the first two nodes; at
// infinity either p∞ from the last two nodes with the rate q∞ given, or both
// from the last three nodes when fit_rate is true.
inline DecayClass fit_decay(const std::vector<double>& x, const std::vector<cplx>& f, double rate_at_infinity = 0,
                            bool fit_rate = false) {
    const std::size_t n = x.size();
    if (n < 3 || f.size() != n) throw std::invalid_argument("fit_decay: need at least three nodes");
    DecayClass d;
    d.rate_at_infinity = rate_at_infinity;
    auto lg = [](cplx v) { return std::log(std::max(std::abs(v), 1e-300)); };
    if (std::abs(f[0]) > 0 && std::abs(f[1]) > 0) d.power_at_zero = (lg(f[1]) - lg(f[0])) / std::log(x[1] / x[0]);
    const double l1 = lg(f[n - 2]), l2 = lg(f[n - 1]);
    if (std::abs(f[n - 1]) == 0 || std::abs(f[n - 2]) == 0) return d;
    if (fit_rate) {
        // ln|f| = c + p ln x - q x through the last three nodes
        const double l0 = lg(f[n - 3]);
        const double a1 = std::log(x[n - 2] / x[n - 3]), b1 = x[n - 2] - x[n - 3];
        const double a2 = std::log(x[n - 1] / x[n - 2]), b2 = x[n - 1] - x[n - 2];
        const double r1 = l1 - l0, r2 = l2 - l1;
        const double det = -a1 * b2 + a2 * b1;
        if (std::abs(det) > 1e-300) {
            d.power_at_infinity = (-r1 * b2 + r2 * b1) / det;
            d.rate_at_infinity = (a1 * r2 - a2 * r1) / det;
        }
    } else {
        d.power_at_infinity = (l2 - l1 + rate_at_infinity * (x[n - 1] - x[n - 2])) / std::log(x[n - 1] / x[n - 2]);
    }
    return d;
}

}  // namespace iwt
