#include <gtest/gtest.h>

#include <cmath>

#include "iwt/transform.hpp"
#include "iwt/verify.hpp"

using namespace iwt;

namespace {

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

// transform of x^β: Γ(β-a+iτ) Γ(β-a-iτ) / Γ(β)
cplx power_transform(double a, double beta, cplx tau) {
    return std::exp(ln_gamma(beta - a + cplx(0, 1) * tau) + ln_gamma(beta - a - cplx(0, 1) * tau)) * rgamma(beta);
}

// classical transform of x^{3/2} e^{-x/2} at α = 0, 40-digit oracle
constexpr double classical_ref[2] = {0.77019714784917513171, 0.30695191848651881351};

}  // namespace

TEST(Forward, PowerFunction) {
    QuadratureConfig cfg;
    auto f = [](double x) { return x; };
    for (double tau : {0.0, 0.5, 1.0, 3.0}) {
        auto r = forward_at(f, 0.5, tau, cfg);
        EXPECT_TRUE(r.converged);
        EXPECT_LT(rel_err(r.value, pi / std::cosh(pi * tau)), 1e-9) << tau;
    }
    auto t = forward([](double x) { return x * x; }, 1.0, {0.0, 0.5, 2.0}, cfg);
    ASSERT_EQ(t.values.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel_err(t.values[i], power_transform(1.0, 2.0, t.tau_nodes[i])), 1e-9);
    EXPECT_NEAR(t.density[1], density_rho(1.0, 0.5), 1e-15);
}

TEST(Forward, ComplexIndexInsideStrip) {
    QuadratureConfig cfg;
    auto f = [](double x) { return std::pow(x, 2.5); };
    const cplx tau(0.5, 0.3);
    EXPECT_LT(rel_err(forward_at_complex(f, 1.0, tau, 0.4, cfg), power_transform(1.0, 2.5, tau)), 1e-9);
    EXPECT_THROW(forward_at_complex(f, 1.0, tau, 0.2, cfg), DomainError);
}

TEST(Forward, SampledInputAgreesWithCallable) {
    QuadratureConfig cfg;
    auto f = [](double x) { return x * x * std::exp(-x); };
    auto g = GridFunction::sample(f, log_linear_grid(1e-4, 60, 200, 4), {2, 2, 1});
    for (double tau : {0.0, 1.0, 2.5}) {
        const cplx want = forward_at(f, 1.0, tau, cfg).value;
        EXPECT_LT(std::abs(forward(g, 1.0, {tau}, cfg).values[0] - want), 1e-5 * std::abs(forward_at(f, 1.0, 0.0, cfg).value))
            << tau;
    }
}

TEST(Forward, RejectsDivergentTails) {
    QuadratureConfig cfg;
    auto g = GridFunction::sample([](double x) { return x; }, log_grid(0.01, 10, 10), {1, 1, 0});
    EXPECT_THROW(forward(g, 1.0, {0.5}, cfg), std::invalid_argument);
    auto h = GridFunction::sample([](double x) { return x * x; }, log_grid(0.01, 10, 10), {2, 0, -2});
    EXPECT_THROW(forward(h, 1.0, {0.5}, cfg), std::invalid_argument);
    EXPECT_THROW(forward_at([](double x) { return x; }, 0.0, 1.0, cfg), DomainError);
}

TEST(Inverse, RecoversPowerFromClosedForm) {
    QuadratureConfig cfg;
    const double a = 0.5, beta = 2;
    auto phi = [&](double tau) { return power_transform(a, beta, tau); };
    for (double x : {0.2, 1.0, 3.0}) {
        auto r = inverse_at(phi, a, x, cfg);
        EXPECT_LT(rel_err(r.value, x * x), 1e-7) << x;
    }
}

TEST(Inverse, RoundTripOnSampledTransform) {
    QuadratureConfig cfg;
    const double a = 1;
    auto f = [](double x) { return x * x * std::exp(-x); };
    auto t = forward(f, a, tau_grid(cfg.tau_max, 241), cfg);
    const std::vector<double> xs = {0.1, 0.5, 1, 2, 4, 8};
    auto g = inverse(t, xs, cfg);
    for (double x : xs) EXPECT_NEAR(g(x).real(), f(x), 1e-4 * 0.54) << x;
    EXPECT_THROW(inverse(TransformResult{{0, 1}, {1.0, 1.0}, {0, 1}, 1.0}, xs, cfg), std::invalid_argument);
}

TEST(Classical, Oracle) {
    QuadratureConfig cfg;
    auto g = [](double x) { return std::pow(x, 1.5) * std::exp(-x / 2); };
    auto t = classical_forward(g, 0.0, {0.5, 1.0}, cfg);
    EXPECT_LT(rel_err(t.values[0], classical_ref[0]), 1e-9);
    EXPECT_LT(rel_err(t.values[1], classical_ref[1]), 1e-9);
    EXPECT_THROW(classical_forward(g, 0.5, {1.0}, cfg), DomainError);
}

TEST(Operator, ThetaMapRoundTrip) {
    auto f = GridFunction::sample([](double x) { return x * x * std::exp(-x); }, log_grid(0.01, 20, 30), {2, 2, 1});
    auto g = theta_unmap(theta_map(f, 1.5), 1.5);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(g.values()[i] - f.values()[i]), 1e-15 * (1 + std::abs(f.values()[i])));
    EXPECT_EQ(g.decay().rate_at_infinity, f.decay().rate_at_infinity);
    EXPECT_EQ(theta_map(f, 1.5).decay().rate_at_infinity, 1.5);
}

TEST(Operator, SampledLAgreesWithAnalytic) {
    const double a = 1, p = 2, q = 1;
    auto f = [](double x) { return x * x * std::exp(-x); };
    auto g = GridFunction::sample(f, log_linear_grid(1e-3, 40, 160, 4), {p, p, q});
    auto Lg = apply_L(g, a);
    // x² f'' - ((2a-1)x + x²) f' with f' = (p/x - q) f, f'' = ((p/x - q)² - p/x²) f
    auto Lf = [&](double x) {
        const double g1 = p / x - q, g2 = g1 * g1 - p / (x * x);
        return (x * x * g2 - ((2 * a - 1) * x + x * x) * g1) * f(x);
    };
    // and by central differences in x
    auto Lfd = [&](double x) {
        const double h = 1e-4 * x;
        const double d1 = (f(x + h) - f(x - h)) / (2 * h), d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
        return x * x * d2 - ((2 * a - 1) * x + x * x) * d1;
    };
    double sup = 0;
    for (double x : g.nodes()) sup = std::max(sup, std::abs(Lf(x)));
    for (std::size_t i = 5; i + 5 < g.size(); i += 10) {
        const double x = g.nodes()[i];
        EXPECT_NEAR(Lfd(x), Lf(x), 1e-6 * sup) << x;
        EXPECT_NEAR(Lg.values()[i].real(), Lf(x), 2e-3 * sup) << x;
    }
}

TEST(Operator, Diagonalization) {
    QuadratureConfig cfg;
    for (double tau : {0.0, 0.5, 2.0}) {
        auto c = check_diagonalization(1.0, tau, 2, 1, cfg);
        EXPECT_LT(c.residual, 1e-8) << tau;
        // the eigenvalue is -(τ² + a²)
        EXPECT_LT(rel_err(c.lhs, -(tau * tau + 1) * forward_at([](double x) { return x * x * std::exp(-x); }, 1.0, tau, cfg).value), 1e-8);
    }
}

TEST(Norms, LpClosedForm) {
    QuadratureConfig cfg;
    // ‖x^p e^{-qx}‖_1 = Γ(p - 2a) / (1+q)^{p-2a}
    const double a = 0.5, p = 2.5, q = 1;
    auto f = [&](double x) { return std::pow(x, p) * std::exp(-q * x); };
    EXPECT_NEAR(norm_p(f, a, 1, cfg), std::tgamma(p - 2 * a) / std::pow(1 + q, p - 2 * a), 1e-10);
    // ‖f‖_2² = Γ(2p - 2a) / (1+2q)^{2p-2a}
    EXPECT_NEAR(norm_p(f, a, 2, cfg), std::sqrt(std::tgamma(2 * p - 2 * a) / std::pow(1 + 2 * q, 2 * p - 2 * a)), 1e-10);
    auto g = GridFunction::sample(f, log_grid(0.01, 30, 20));
    EXPECT_NEAR(norm_p(g, a, INFINITY, cfg), std::pow(p / q, p) * std::exp(-p), 0.05);
    EXPECT_THROW(norm_p(f, a, 0.5, cfg), std::invalid_argument);
}

TEST(Norms, WeightedNormAtZeroIndexIsTransformAtZero) {
    QuadratureConfig cfg;
    auto f = [](double x) { return x * x * std::exp(-x); };
    EXPECT_LT(std::abs(norm_a_nu(f, 1.0, 0.0, cfg) / forward_at(f, 1.0, 0.0, cfg).value.real() - 1), 1e-10);
}

TEST(Plancherel, OnePair) {
    QuadratureConfig cfg;
    EXPECT_LT(check_plancherel(1.0, 2.0, 0.5, cfg).residual, 1e-6);
}
