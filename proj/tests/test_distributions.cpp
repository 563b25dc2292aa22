#include "pusurv/distributions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace pusurv;

namespace {

std::vector<DistributionSpec> families(double shape) {
    return {DistributionSpec::exponential(), DistributionSpec::gamma(shape), DistributionSpec::weibull(shape)};
}

}  // namespace

TEST(Pdf, Examples) {
    EXPECT_NEAR(pdf(DistributionSpec::exponential(), 1.0, 1e-300), 1.0, 1e-15);
    EXPECT_NEAR(pdf(DistributionSpec::gamma(1.0), 2.0, 0.5), 2.0 * std::exp(-1.0), 1e-15);
    EXPECT_DOUBLE_EQ(pdf(DistributionSpec::gamma(1.0), 2.0, 0.5), pdf(DistributionSpec::exponential(), 2.0, 0.5));
    EXPECT_NEAR(pdf(DistributionSpec::weibull(2.0), 1.0, 1.0), 2.0 * std::exp(-1.0), 1e-15);
    EXPECT_THROW(pdf(DistributionSpec::exponential(), -1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(pdf(DistributionSpec::exponential(), 1.0, -1.0), std::invalid_argument);
}

TEST(Pdf, WeibullMatchesDerivativeOfCdf) {
    const auto w = DistributionSpec::weibull(2.0);
    const double h = 1e-6;
    const double fd = (cdf(w, 1.0, 1.0 + h) - cdf(w, 1.0, 1.0 - h)) / (2.0 * h);
    EXPECT_NEAR(pdf(w, 1.0, 1.0), fd, 1e-8);
}

TEST(Cdf, Examples) {
    EXPECT_NEAR(cdf(DistributionSpec::exponential(), 1.0, 1e300), 1.0, 1e-15);
    EXPECT_NEAR(cdf(DistributionSpec::exponential(), 1.0, std::log(2.0)), 0.5, 1e-15);
    EXPECT_NEAR(cdf(DistributionSpec::gamma(2.0), 1.0, 1.0), 1.0 - 2.0 * std::exp(-1.0), 1e-14);
    const auto q = integrate([](double u) { return pdf(DistributionSpec::gamma(2.0), 1.0, u); }, 0.0, 1.0);
    EXPECT_NEAR(cdf(DistributionSpec::gamma(2.0), 1.0, 1.0), q.value, 1e-12);
}

TEST(Distributions, ShapeOneAgreesWithExponential) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> rate(0.05, 20.0), t(0.001, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double l = rate(gen), u = t(gen);
        const double e_pdf = pdf(DistributionSpec::exponential(), l, u);
        const double e_cdf = cdf(DistributionSpec::exponential(), l, u);
        EXPECT_NEAR(pdf(DistributionSpec::gamma(1.0), l, u), e_pdf, 4e-16 * e_pdf + 1e-300);
        EXPECT_NEAR(pdf(DistributionSpec::weibull(1.0), l, u), e_pdf, 4e-16 * e_pdf + 1e-300);
        EXPECT_NEAR(cdf(DistributionSpec::gamma(1.0), l, u), e_cdf, 4e-16);
        EXPECT_NEAR(cdf(DistributionSpec::weibull(1.0), l, u), e_cdf, 4e-16);
    }
}

TEST(Distributions, PdfIntegratesToOneAndCdfIsIntegralOfPdf) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> shape(0.5, 4.0), rate(0.2, 5.0), t(0.05, 3.0);
    for (int i = 0; i < 20; ++i) {
        for (const auto& spec : families(shape(gen))) {
            const double l = rate(gen);
            const auto total = integrate_semi_infinite([&](double u) { return u > 0.0 ? pdf(spec, l, u) : 0.0; });
            EXPECT_NEAR(total.value, 1.0, 1e-8);
            const double upto = t(gen);
            const auto part = integrate([&](double u) { return u > 0.0 ? pdf(spec, l, u) : 0.0; }, 0.0, upto);
            EXPECT_NEAR(part.value, cdf(spec, l, upto), 1e-8);
            EXPECT_NEAR(survival(spec, l, upto), 1.0 - cdf(spec, l, upto), 1e-14);
        }
    }
}

TEST(EventProbability, ClosedFormExamples) {
    const auto e = DistributionSpec::exponential();
    EXPECT_DOUBLE_EQ(event_probability(e, e, 1.0, 1.0), 0.5);
    EXPECT_NEAR(event_probability(DistributionSpec::gamma(1.0), e, 2.0, 1.0), 2.0 / 3.0, 1e-15);
    EXPECT_THROW(event_probability(e, e, 0.0, 1.0), std::invalid_argument);
}

TEST(EventProbability, QuadratureExamples) {
    const auto e = DistributionSpec::exponential();
    EXPECT_NEAR(event_probability_quadrature(e, e, 1.0, 1.0), 0.5, 1e-8);
    EXPECT_NEAR(event_probability_quadrature(DistributionSpec::gamma(3.0), e, 2.0, 1.0), 8.0 / 27.0, 1e-8);
    EXPECT_NEAR(event_probability_quadrature(DistributionSpec::gamma(2.0), DistributionSpec::gamma(2.0), 1.0, 1.0), 0.5,
                1e-8);
}

TEST(EventProbability, WeibullAgainstMonteCarlo) {
    // 10^7 paired draws of t ~ Weibull(shape 2, l = 1) and c ~ Exp(1), by inversion.
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 10'000'000;
    long hits = 0;
    for (int i = 0; i < n; ++i) {
        const double t = std::sqrt(-std::log1p(-u(gen)));
        const double c = -std::log1p(-u(gen));
        hits += t < c ? 1 : 0;
    }
    const double p_hat = static_cast<double>(hits) / n;
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
    const double p = event_probability(DistributionSpec::weibull(2.0), DistributionSpec::exponential(), 1.0, 1.0);
    EXPECT_NEAR(p, p_hat, 3.0 * se);
}

TEST(EventProbability, DispatchAgreesWithQuadratureForAllPairs) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> shape(0.5, 3.0), log_rate(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double st = shape(gen), sc = shape(gen);
        const double lt = std::exp(log_rate(gen)), lc = std::exp(log_rate(gen));
        for (const auto& ts : families(st)) {
            for (const auto& cs : families(sc)) {
                EXPECT_NEAR(event_probability(ts, cs, lt, lc), event_probability_quadrature(ts, cs, lt, lc), 1e-7);
            }
        }
    }
}

TEST(EventProbability, MonotoneInRates) {
    for (const auto& ts : families(1.7)) {
        for (const auto& cs : families(0.8)) {
            double prev = 0.0;
            for (double lt = 0.1; lt < 10.0; lt *= 1.5) {
                const double p = event_probability(ts, cs, lt, 1.0);
                EXPECT_GT(p, prev);
                prev = p;
            }
            prev = 1.0;
            for (double lc = 0.1; lc < 10.0; lc *= 1.5) {
                const double p = event_probability(ts, cs, 1.0, lc);
                EXPECT_LT(p, prev);
                prev = p;
            }
        }
    }
}
