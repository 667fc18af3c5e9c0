#include <gtest/gtest.h>

#include <cmath>

#include "iwt/grid_function.hpp"

using namespace iwt;

TEST(Grids, LogGrid) {
    auto g = log_grid(1e-3, 10, 9);
    ASSERT_EQ(g.size(), 9u);
    EXPECT_EQ(g.front(), 1e-3);
    EXPECT_EQ(g.back(), 10.0);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(std::log(g[i] / g[i - 1]), std::log(1e4) / 8, 1e-12);
    EXPECT_THROW(log_grid(0, 1, 4), std::invalid_argument);
    EXPECT_THROW(log_grid(1, 1, 4), std::invalid_argument);
}

TEST(Grids, LogLinearGrid) {
    const double s = 4;
    auto g = log_linear_grid(1e-4, 60, 50, s);
    EXPECT_EQ(g.front(), 1e-4);
    EXPECT_EQ(g.back(), 60.0);
    auto u = [s](double x) { return std::log(x) + x / s; };
    const double step = u(g[1]) - u(g[0]);
    for (std::size_t i = 1; i < g.size(); ++i) {
        EXPECT_GT(g[i], g[i - 1]);
        EXPECT_NEAR(u(g[i]) - u(g[i - 1]), step, 1e-10);
    }
}

TEST(GridFunction, ReproducesCubicsInLogX) {
    auto f = [](double x) {
        const double t = std::log(x);
        return 1 - 2 * t + 0.5 * t * t * t;
    };
    auto g = GridFunction::sample(f, log_grid(0.1, 10, 7));
    for (double x : {0.13, 0.5, 1.0, 3.3, 9.9}) EXPECT_NEAR(g(x).real(), f(x), 1e-12) << x;
    // f' = (-2 + 1.5 t²) / x
    const double x = 2.2, t = std::log(x);
    EXPECT_NEAR(g.derivative(x).real(), (-2 + 1.5 * t * t) / x, 1e-11);
}

TEST(GridFunction, InterpolatesSmoothFunctions) {
    auto f = [](double x) { return cplx(x * x * std::exp(-x), std::sin(x)); };
    auto g = GridFunction::sample(f, log_linear_grid(1e-3, 40, 200, 4));
    double err = 0, derr = 0, d2err = 0;
    for (double x = 0.01; x < 30; x *= 1.17) {
        err = std::max(err, std::abs(g(x) - f(x)));
        const cplx d1(x * (2 - x) * std::exp(-x), std::cos(x));
        const cplx d2((2 - 4 * x + x * x) * std::exp(-x), -std::sin(x));
        derr = std::max(derr, std::abs(g.derivative(x) - d1));
        d2err = std::max(d2err, std::abs(g.second_derivative(x) - d2));
    }
    EXPECT_LT(err, 5e-5);
    EXPECT_LT(derr, 1e-3);
    EXPECT_LT(d2err, 0.05);
}

TEST(GridFunction, TailsFollowDecayClass) {
    DecayClass d{2.0, 1.0, 0.5};
    auto g = GridFunction::sample([](double x) { return x * x; }, log_grid(1, 10, 5), d);
    // below x_min: f(x_min) (x/x_min)^2
    EXPECT_NEAR(g(0.5).real(), 0.25, 1e-15);
    // above x_max: f(x_max) (x/x_max) e^{-(x - x_max)/2}
    EXPECT_NEAR(g(20).real(), 100 * 2 * std::exp(-5.0), 1e-12);
    EXPECT_NEAR(g.derivative(20).real(), g(20).real() * (1.0 / 20 - 0.5), 1e-12);
    EXPECT_THROW(g(0.0), std::domain_error);
}

TEST(GridFunction, RejectsBadInput) {
    EXPECT_THROW(GridFunction({1, 2}, {1.0}), std::invalid_argument);
    EXPECT_THROW(GridFunction({1}, {1.0}), std::invalid_argument);
    EXPECT_THROW(GridFunction({1, 1}, {1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(GridFunction({-1, 1}, {1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(GridFunction({1, 2}, {1.0, cplx(NAN)}), std::invalid_argument);
    EXPECT_THROW(GridFunction({1, 2}, {1.0, 2.0}, DecayClass{INFINITY, 0, 0}), std::invalid_argument);
}

TEST(FitDecay, RecoversExponents) {
    auto x = log_linear_grid(1e-3, 40, 60, 4);
    std::vector<cplx> v;
    for (double t : x) v.push_back(3 * std::pow(t, 2.5) * std::exp(-1.5 * t));
    auto d = fit_decay(x, v, 0, true);
    EXPECT_NEAR(d.power_at_zero, 2.5, 2e-3);
    EXPECT_NEAR(d.power_at_infinity, 2.5, 1e-8);
    EXPECT_NEAR(d.rate_at_infinity, 1.5, 1e-9);
    auto e = fit_decay(x, v, 1.5);
    EXPECT_NEAR(e.power_at_infinity, 2.5, 1e-9);
    EXPECT_THROW(fit_decay({1, 2}, {1.0, 1.0}), std::invalid_argument);
}
