#pragma once

// Second-kind convolution equations f + f ⋆_a θ = h on (0, ∞). The solution is
// f = h + h ⋆_a η with Ψ_a η = -Ψ_a θ / (1 + Ψ_a θ); η is known in closed form
// for the generalized Lebedev kernel and otherwise is obtained by inverting
// sampled values of that quotient. A Nyström discretization of the same
// equation serves as an independent check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "convolve.hpp"
#include "grid_function.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "transform.hpp"

namespace iwt {

// θ(x) = λ x^β
struct PowerKernel {
    cplx lambda = 1;
    cplx beta = 1;
};

// θ(x) = (n!/π) x^{n+1} with a = n + 1/2: the kernel (x/y)^{n+1} Ψ(n+1, 2; x+y) e^{-y}.
struct LebedevKernel {
    int n = 0;
};

using Theta = std::variant<GridFunction, PowerKernel, LebedevKernel>;

struct EquationSpec {
    double a = 0.5;
    double nu = 0;
    Theta theta = PowerKernel{0.0, 1.0};
    GridFunction h;

    void validate() const {
        if (!(a > 0)) throw std::invalid_argument("equation: a must be positive");
        if (!(nu >= 0)) throw std::invalid_argument("equation: nu must be non-negative");
        if (h.size() < 2) throw std::invalid_argument("equation: h is missing");
        detail::check_transform_decay(h, a, nu, "equation: h");
        if (auto* p = std::get_if<PowerKernel>(&theta)) {
            if (!(p->beta.real() > a + nu)) throw std::invalid_argument("equation: power kernel needs Re beta > a + nu");
        } else if (auto* l = std::get_if<LebedevKernel>(&theta)) {
            if (l->n < 0) throw std::invalid_argument("equation: Lebedev order must be non-negative");
            if (std::abs(a - (l->n + 0.5)) > 1e-12) throw std::invalid_argument("equation: Lebedev kernel needs a = n + 1/2");
            if (!(nu < 0.5)) throw std::invalid_argument("equation: Lebedev kernel needs nu < 1/2");
        } else {
            detail::check_transform_decay(std::get<GridFunction>(theta), a, nu, "equation: theta");
        }
    }
};

inline EquationSpec lebedev_equation(int n, double nu, GridFunction h) {
    EquationSpec s;
    s.a = n + 0.5;
    s.nu = nu;
    s.theta = LebedevKernel{n};
    s.h = std::move(h);
    s.validate();
    return s;
}

inline PowerKernel as_power(const LebedevKernel& l) {
    return {std::exp(ln_gamma(cplx(l.n + 1.0))) / pi, cplx(l.n + 1.0)};
}

struct SolvabilityReport {
    double min_abs = 1;
    cplx argmin_tau = 0;
    // 1 + Ψ_a θ tends to 1 as |τ| grows in the strip
    cplx limit_value = 1;
    bool solvable = true;
    bool indeterminate = false;
};

class NotSolvable : public std::runtime_error {
public:
    NotSolvable(const std::string& what, cplx tau) : std::runtime_error(what), tau_(tau) {}
    cplx tau() const { return tau_; }

private:
    cplx tau_;
};

struct InteqOptions {
    double solvability_margin = 1e-6;
    // strip sampling: real step, number of rows in Im τ (odd; one row if ν = 0)
    double tau_step = 0.05;
    int imag_rows = 5;
    // η from sampled transform values: τ-grid step and x-grid for its inverse
    double eta_tau_step = 0.05;
    std::size_t eta_nodes = 96;
    // Nyström: quadrature nodes and their range
    std::size_t nystrom_nodes = 160;
    double nystrom_x_min = 1e-8;
    double nystrom_x_max = 80;
};

// (Ψ_a λx^β)(τ) = λ Γ(β-a+iτ) Γ(β-a-iτ) / Γ(β)
inline cplx power_theta_transform(double a, cplx beta, cplx lambda, cplx tau) {
    const cplx I(0, 1);
    const cplx z1 = beta - a + I * tau, z2 = beta - a - I * tau;
    if (!(beta.real() > a + std::abs(tau.imag())))
        throw DomainError("power_theta_transform: needs Re beta > a + |Im tau|");
    if (detail::near_pole(z1) || detail::near_pole(z2)) throw DomainError("power_theta_transform: Gamma pole");
    return lambda * std::exp(ln_gamma(z1) + ln_gamma(z2)) * rgamma(beta);
}

// η_n(x) = π^{-3/2} n! Γ(3/2+n) x^{3/2+n} Σ_k (-1)^{k+1} Ψ(1/2, 1-k; x) / ((1/2+k) k! (n-k)!)
class LebedevEta {
public:
    explicit LebedevEta(int n) : n_(n) {
        if (n < 0) throw DomainError("lebedev_eta: n must be non-negative");
        for (int k = 0; k <= n; ++k) {
            const double c = ((k % 2 == 0) ? -1.0 : 1.0) /
                             ((0.5 + k) * std::exp(std::lgamma(k + 1.0) + std::lgamma(n - k + 1.0)));
            coef_.push_back(c);
            psi_.emplace_back(cplx(0.5), cplx(1.0 - k));
        }
        log_front_ = -1.5 * std::log(pi) + std::lgamma(n + 1.0) + std::lgamma(1.5 + n);
    }

    double operator()(double x) const {
        if (!(x > 0)) throw DomainError("lebedev_eta: x must be positive");
        double s = 0;
        for (std::size_t k = 0; k < coef_.size(); ++k) s += coef_[k] * psi_[k](x).value.real();
        return std::exp(log_front_ + (1.5 + n_) * std::log(x)) * s;
    }

private:
    int n_;
    double log_front_ = 0;
    std::vector<double> coef_;
    std::vector<KummerPsiTable> psi_;
};

inline double lebedev_eta(int n, double x) { return LebedevEta(n)(x); }

namespace detail {

inline bool zero_theta(const Theta& t) {
    if (auto* p = std::get_if<PowerKernel>(&t)) return p->lambda == 0.0;
    if (auto* g = std::get_if<GridFunction>(&t))
        return std::all_of(g->values().begin(), g->values().end(), [](cplx v) { return v == 0.0; });
    return false;
}

inline cplx theta_transform(const EquationSpec& s, cplx tau, const QuadratureConfig& cfg) {
    if (auto* p = std::get_if<PowerKernel>(&s.theta)) {
        if (p->lambda == 0.0) return 0.0;
        return power_theta_transform(s.a, p->beta, p->lambda, tau);
    }
    if (auto* l = std::get_if<LebedevKernel>(&s.theta)) {
        const auto pk = as_power(*l);
        return power_theta_transform(s.a, pk.beta, pk.lambda, tau);
    }
    return forward_at_complex(std::get<GridFunction>(s.theta), s.a, tau, s.nu, cfg);
}

// Tail exponents of a computed solution: the power at zero from two extra
// evaluations a decade and two decades below the grid, since the solution
// may change sign among the first nodes; at infinity a power and a rate fitted
// to the last three nodes.
template <class At>
DecayClass solution_decay(const At& at, const std::vector<double>& x, const std::vector<cplx>& v) {
    DecayClass d;
    if (x.size() >= 3) d = fit_decay(x, v, 0, true);
    const double x0 = x.front();
    const cplx f1 = at(0.01 * x0), f2 = at(0.1 * x0);
    if (std::abs(f1) > 0 && std::abs(f2) > 0) d.power_at_zero = std::log(std::abs(f2) / std::abs(f1)) / std::log(10.0);
    return d;
}

inline std::string tau_text(cplx t) {
    std::ostringstream os;
    os.precision(6);
    os << t.real() << (t.imag() < 0 ? " - " : " + ") << std::abs(t.imag()) << "i";
    return os.str();
}

}  // namespace detail

// Samples 1 + Ψ_a θ over 0 <= Re τ <= tau_max, |Im τ| <= ν (the transform
// of a real θ is conjugate-symmetric, which covers Re τ < 0). Past the point
// where |Ψ_a θ| has dropped below the margin for good, the sampling of a row
// stops. This is a numerical certificate on a finite grid, not a proof.
inline SolvabilityReport check_solvability(const EquationSpec& s, const QuadratureConfig& cfg, const InteqOptions& opt = {}) {
    s.validate();
    SolvabilityReport r;
    if (detail::zero_theta(s.theta)) return r;
    const int rows = s.nu > 0 ? std::max(1, opt.imag_rows | 1) : 1;
    const std::size_t n_re = static_cast<std::size_t>(std::ceil(cfg.tau_max / opt.tau_step)) + 1;
    r.min_abs = std::numeric_limits<double>::infinity();
    try {
        for (int j = 0; j < rows; ++j) {
            const double im = rows == 1 ? 0.0 : -s.nu + 2 * s.nu * j / (rows - 1);
            int negligible = 0;
            for (std::size_t i = 0; i < n_re; ++i) {
                const cplx tau(std::min(cfg.tau_max, i * opt.tau_step), im);
                const cplx t = detail::theta_transform(s, tau, cfg);
                const double m = std::abs(1.0 + t);
                if (m < r.min_abs) r.min_abs = m, r.argmin_tau = tau;
                negligible = std::abs(t) < 0.1 * opt.solvability_margin ? negligible + 1 : 0;
                if (negligible >= 8) break;
            }
        }
    } catch (const ConvergenceError&) {
        r.indeterminate = true;
    } catch (const NonFiniteIntegrand&) {
        r.indeterminate = true;
    }
    r.min_abs = std::min(r.min_abs, std::abs(r.limit_value));
    r.solvable = !r.indeterminate && r.min_abs > opt.solvability_margin;
    return r;
}

// Ψ_a η = -Ψ_a θ / (1 + Ψ_a θ)
inline cplx resolvent_transform(const EquationSpec& s, cplx tau, const QuadratureConfig& cfg, double margin = 1e-6) {
    const cplx t = detail::theta_transform(s, tau, cfg);
    if (!(std::abs(1.0 + t) > margin))
        throw NotSolvable("resolvent_transform: 1 + transform of theta vanishes at tau = " + detail::tau_text(tau), tau);
    return -t / (1.0 + t);
}

// f ⋆_a θ at x for the kinds of θ above.
template <class F>
cplx convolve_theta_at(const F& f, const EquationSpec& s, double x, const QuadratureConfig& cfg) {
    if (auto* p = std::get_if<PowerKernel>(&s.theta)) {
        if (p->lambda == 0.0) return 0.0;
        return convolve_power_at(f, s.a, p->beta, p->lambda, x, cfg).value;
    }
    if (auto* l = std::get_if<LebedevKernel>(&s.theta)) {
        const auto pk = as_power(*l);
        return convolve_power_at(f, s.a, pk.beta, pk.lambda, x, cfg).value;
    }
    return convolve_at(f, std::get<GridFunction>(s.theta), s.a, x, cfg).value;
}

struct SolveResult {
    GridFunction f;
    SolvabilityReport report;
    // sup over the nodes of |f + f ⋆_a θ - h|, and of |h|
    double residual_sup = 0;
    double h_sup = 0;
};

namespace detail {

inline void require_solvable(const SolvabilityReport& r, const char* who) {
    if (r.indeterminate) throw NotSolvable(std::string(who) + ": solvability could not be decided", r.argmin_tau);
    if (!r.solvable) {
        std::ostringstream os;
        os.precision(3);
        os << who << ": 1 + transform of theta vanishes (|.| = " << r.min_abs << ") near tau = " << tau_text(r.argmin_tau);
        throw NotSolvable(os.str(), r.argmin_tau);
    }
}

// η for a θ without closed form: inverse of sampled -Ψθ/(1+Ψθ).
inline GridFunction resolvent_kernel(const EquationSpec& s, const QuadratureConfig& cfg, const InteqOptions& opt) {
    const std::size_t n = static_cast<std::size_t>(std::ceil(cfg.tau_max / opt.eta_tau_step)) + 1;
    TransformResult phi;
    phi.a = s.a;
    for (double tau : tau_grid(cfg.tau_max, n)) {
        phi.tau_nodes.push_back(tau);
        phi.values.push_back(resolvent_transform(s, tau, cfg, opt.solvability_margin));
        phi.density.push_back(density_rho(s.a, tau));
    }
    const auto& hx = s.h.nodes();
    const double lo = std::min(hx.front(), 1e-3), hi = std::max(hx.back(), 40.0);
    return inverse(phi, log_linear_grid(lo, hi, opt.eta_nodes, 4.0), cfg);
}

}  // namespace detail

// Residual f + f ⋆_a θ - h at the nodes of f. The sampled f is continuous
// but not smooth where the spline meets its tails, so the integrals here run
// at a tolerance no tighter than 1e-7.
inline double residual_sup(const GridFunction& f, const EquationSpec& s, const QuadratureConfig& cfg_in) {
    QuadratureConfig cfg = cfg_in;
    cfg.rel_tol = std::max(cfg.rel_tol, 1e-7);
    cfg.max_refinement_levels = std::max(cfg.max_refinement_levels, 12);
    double r = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.nodes()[i];
        r = std::max(r, std::abs(f.values()[i] + convolve_theta_at(f, s, x, cfg) - s.h(x)));
    }
    return r;
}

inline SolveResult solve(const EquationSpec& s, const std::vector<double>& x_nodes, const QuadratureConfig& cfg,
                         const InteqOptions& opt = {}) {
    SolveResult out;
    out.report = check_solvability(s, cfg, opt);
    detail::require_solvable(out.report, "solve");
    for (double x : x_nodes) out.h_sup = std::max(out.h_sup, std::abs(s.h(x)));
    std::function<cplx(double)> at;
    GridFunction eta_grid;
    std::optional<LebedevEta> eta_closed;
    if (detail::zero_theta(s.theta)) {
        at = [&](double x) { return s.h(x); };
    } else if (auto* l = std::get_if<LebedevKernel>(&s.theta)) {
        eta_closed.emplace(l->n);
        at = [&](double x) { return s.h(x) + convolve_at(s.h, *eta_closed, s.a, x, cfg).value; };
    } else {
        eta_grid = detail::resolvent_kernel(s, cfg, opt);
        at = [&](double x) { return s.h(x) + convolve_at(s.h, eta_grid, s.a, x, cfg).value; };
    }
    std::vector<cplx> v;
    v.reserve(x_nodes.size());
    for (double x : x_nodes) v.push_back(at(x));
    out.f = GridFunction(x_nodes, v, detail::solution_decay(at, x_nodes, v));
    out.residual_sup = detail::zero_theta(s.theta) ? 0.0 : residual_sup(out.f, s, cfg);
    return out;
}

// f(x) = h(x) + Ψ_a^{-1}[Ψ_a η · Ψ_a h](x) at a single point, by index
// integration with the transform of h computed at every τ node.
inline cplx solve_direct_at(const EquationSpec& s, double x, const QuadratureConfig& cfg, const InteqOptions& opt = {}) {
    detail::require_solvable(check_solvability(s, cfg, opt), "solve_direct_at");
    if (detail::zero_theta(s.theta)) return s.h(x);
    auto phi = [&](double tau) {
        return resolvent_transform(s, tau, cfg, opt.solvability_margin) * forward_at(s.h, s.a, tau, cfg).value;
    };
    return s.h(x) + inverse_at(phi, s.a, x, cfg).value;
}

// Nyström discretization of f(x) + ∫ J(x,y) f(y) dy = h(x) with
// J(x,y) = (T_a^x θ)(y) m_a(y) on exp-sinh nodes; the solution is carried to
// x_nodes by the Nyström interpolant f(x) = h(x) - Σ w_j J(x, y_j) f_j.
inline GridFunction nystrom_solve(const EquationSpec& s, const std::vector<double>& x_nodes, const QuadratureConfig& cfg,
                                  const InteqOptions& opt = {}, double* condition = nullptr) {
    s.validate();
    if (detail::zero_theta(s.theta)) {
        if (condition) *condition = 1;
        std::vector<cplx> v;
        for (double x : x_nodes) v.push_back(s.h(x));
        return GridFunction(x_nodes, std::move(v), s.h.decay());
    }
    const std::size_t N = opt.nystrom_nodes;
    if (N < 8) throw std::invalid_argument("nystrom_solve: too few nodes");
    auto u_of = [](double x) { return std::asinh(std::log(x) / (0.5 * pi)); };
    const double u0 = u_of(opt.nystrom_x_min), u1 = u_of(opt.nystrom_x_max);
    const double hstep = (u1 - u0) / double(N - 1);
    std::vector<double> y(N), w(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double u = u0 + hstep * double(j);
        y[j] = std::exp(0.5 * pi * std::sinh(u));
        w[j] = hstep * 0.5 * pi * std::cosh(u) * y[j];
        if (j == 0 || j + 1 == N) w[j] *= 0.5;
    }
    std::function<cplx(double, double)> J;
    std::optional<PowerTranslation> tp;
    cplx lambda = 0;
    if (auto* p = std::get_if<PowerKernel>(&s.theta)) {
        tp.emplace(s.a, p->beta);
        lambda = p->lambda;
    } else if (auto* l = std::get_if<LebedevKernel>(&s.theta)) {
        const auto pk = as_power(*l);
        tp.emplace(s.a, pk.beta);
        lambda = pk.lambda;
    }
    if (tp) {
        J = [&](double x, double yy) { return lambda * tp->scaled(x, yy, log_weight_m(s.a, yy)); };
    } else {
        const auto& th = std::get<GridFunction>(s.theta);
        J = [&](double x, double yy) { return detail::times_exp(translate_at(th, s.a, x, yy, cfg).value, log_weight_m(s.a, yy)); };
    }
    Eigen::MatrixXcd A(N, N);
    Eigen::VectorXcd rhs(N);
    for (std::size_t i = 0; i < N; ++i) {
        rhs(i) = s.h(y[i]);
        for (std::size_t j = 0; j < N; ++j) A(i, j) = (i == j ? 1.0 : 0.0) + w[j] * J(y[i], y[j]);
    }
    // columns near y = 0 can carry powers of 1/y; equilibrate rows and
    // columns so the condition estimate reflects the equation, not the scaling
    Eigen::VectorXd rs(N), cs(N);
    for (std::size_t i = 0; i < N; ++i) rs(i) = 1 / A.row(i).cwiseAbs().maxCoeff();
    A = rs.asDiagonal() * A;
    for (std::size_t j = 0; j < N; ++j) cs(j) = 1 / A.col(j).cwiseAbs().maxCoeff();
    A = A * cs.asDiagonal();
    rhs = rs.asDiagonal() * rhs;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double cond = 1 / lu.rcond();
    if (condition) *condition = cond;
    if (!(cond <= 1e12)) {
        std::ostringstream os;
        os << "nystrom_solve: system is ill-conditioned (condition estimate " << cond << ")";
        throw NotSolvable(os.str(), 0.0);
    }
    const Eigen::VectorXcd fy = cs.asDiagonal() * lu.solve(rhs);
    std::vector<cplx> v;
    v.reserve(x_nodes.size());
    for (double x : x_nodes) {
        cplx sum = 0;
        for (std::size_t j = 0; j < N; ++j) sum += w[j] * J(x, y[j]) * fy(j);
        v.push_back(s.h(x) - sum);
    }
    auto at = [&](double x) {
        cplx sum = 0;
        for (std::size_t j = 0; j < N; ++j) sum += w[j] * J(x, y[j]) * fy(j);
        return s.h(x) - sum;
    };
    const DecayClass d = detail::solution_decay(at, x_nodes, v);
    return GridFunction(x_nodes, std::move(v), d);
}

}  // namespace iwt
