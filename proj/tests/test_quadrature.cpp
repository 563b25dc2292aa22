#include "pusurv/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pusurv;

TEST(Quadrature, Polynomial) {
    const auto r = integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 2.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 15.0 / 4.0 - 3.0, 1e-13);
}

TEST(Quadrature, PeakedIntegrandSubdivides) {
    const auto r = integrate([](double x) { return 1e-3 / (1e-6 + (x - 0.3) * (x - 0.3)); }, 0.0, 1.0);
    EXPECT_TRUE(r.converged);
    const double exact = std::atan(0.7 / 1e-3) + std::atan(0.3 / 1e-3);
    EXPECT_NEAR(r.value, exact, 1e-8 * exact);
    EXPECT_GT(r.subdivisions, 1);
}

TEST(Quadrature, SemiInfinite) {
    const auto r = integrate_semi_infinite([](double x) { return std::exp(-x * x); });
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::sqrt(M_PI) / 2.0, 1e-10);
    const auto e = integrate_semi_infinite([](double x) { return 3.0 * std::exp(-3.0 * x); });
    EXPECT_NEAR(e.value, 1.0, 1e-10);
}

TEST(Quadrature, ReportsNonConvergence) {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 3;
    const auto r = integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_GT(r.error, 0.0);
}
