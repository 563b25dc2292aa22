#include "pusurv/distributions.hpp"
#include "pusurv/dp_mixture.hpp"
#include "pusurv/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pusurv;

namespace {

MixtureComponents random_components(Rng& rng, std::size_t K, std::size_t p) {
    MixtureComponents c;
    for (std::size_t k = 0; k < K; ++k) {
        c.shape.push_back(std::exp(0.6 * rng.normal()));
        ParamVector th(static_cast<Eigen::Index>(p));
        for (auto& v : th) v = 0.7 * rng.normal();
        c.theta.push_back(th);
    }
    return c;
}

Vector random_weights(Rng& rng, std::size_t K) {
    StickBreaking sb;
    sb.truncation = K;
    sb.v.resize(static_cast<Eigen::Index>(K));
    for (auto& v : sb.v) v = 0.05 + 0.9 * rng.uniform();
    return stick_weights(sb);
}

}  // namespace

TEST(StickWeights, Examples) {
    StickBreaking one;
    one.truncation = 1;
    EXPECT_EQ(stick_weights(one), Vector::Ones(1));
    StickBreaking two;
    two.truncation = 2;
    two.v = (Vector(1) << 0.5).finished();
    EXPECT_EQ(stick_weights(two), (Vector(2) << 0.5, 0.5).finished());
    StickBreaking three;
    three.truncation = 3;
    three.v = (Vector(2) << 0.5, 0.5).finished();
    EXPECT_EQ(stick_weights(three), (Vector(3) << 0.5, 0.25, 0.25).finished());
    three.v = (Vector(2) << 0.5, 1.5).finished();
    EXPECT_THROW(stick_weights(three), std::invalid_argument);
}

TEST(StickWeights, AlwaysAProbabilityVector) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const PriorDraw d = sample_prior(0.1 + static_cast<double>(seed % 7), BaseMeasure{}, 1 + seed % 40, 2, seed);
        const Vector pi = stick_weights(d.sticks);
        EXPECT_GE(pi.minCoeff(), 0.0);
        EXPECT_NEAR(pi.sum(), 1.0, 1e-15);
    }
}

TEST(MixtureDensity, ReducesToSingleGamma) {
    MixtureComponents c{{2.5}, {(Vector(2) << 0.3, -0.2).finished()}};
    const Vector x = (Vector(2) << 0.7, 0.4).finished();
    const double l = link_rate(x, c.theta[0]);
    for (double t : {0.1, 0.5, 2.0}) {
        EXPECT_EQ(mixture_density(t, x, c, Vector::Ones(1)), pdf(DistributionSpec::gamma(2.5), l, t));
    }
    MixtureComponents twice{{2.5, 2.5}, {c.theta[0], c.theta[0]}};
    EXPECT_NEAR(mixture_density(0.5, x, twice, (Vector(2) << 0.3, 0.7).finished()),
                pdf(DistributionSpec::gamma(2.5), l, 0.5), 1e-15);
}

TEST(MixtureDensity, IntegratesToOne) {
    Rng rng(4);
    const Vector x = (Vector(2) << 0.7, 0.4).finished();
    for (int i = 0; i < 10; ++i) {
        const auto c = random_components(rng, 2, 2);
        const Vector pi = random_weights(rng, 2);
        const auto r = integrate_semi_infinite([&](double t) { return t > 0 ? mixture_density(t, x, c, pi) : 0.0; });
        EXPECT_NEAR(r.value, 1.0, 1e-8);
    }
}

TEST(MixtureEventProbability, Examples) {
    const Vector x = (Vector(2) << 0.7, 0.4).finished();
    MixtureComponents one{{1.0}, {(Vector(2) << 2.0, 1.0).finished()}};
    const double lt = link_rate(x, one.theta[0]);
    EXPECT_EQ(mixture_event_probability(x, one, Vector::Ones(1), 3.0),
              event_probability(DistributionSpec::exponential(), DistributionSpec::exponential(), lt, 3.0));
    MixtureComponents two{{1.0, 1.0}, {Vector::Zero(2), Vector::Zero(2)}};
    EXPECT_DOUBLE_EQ(mixture_event_probability(x, two, (Vector(2) << 0.5, 0.5).finished(), 1.0), 0.5);
}

TEST(MixtureEventProbability, SingleComponentIsGammaClosedFormBitForBit) {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto c = random_components(rng, 1, 2);
        const Vector x = (Vector(2) << rng.normal(), rng.normal()).finished();
        const double lc = std::exp(rng.normal());
        EXPECT_EQ(mixture_event_probability(x, c, Vector::Ones(1), lc),
                  event_probability(DistributionSpec::gamma(c.shape[0]), DistributionSpec::exponential(),
                                    link_rate(x, c.theta[0]), lc));
    }
}

TEST(MixtureEventProbability, ConvexHullAndQuadrature) {
    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        const std::size_t K = 1 + static_cast<std::size_t>(rng.below(5));
        const auto c = random_components(rng, K, 2);
        const Vector pi = random_weights(rng, K);
        const Vector x = (Vector(2) << 0.7 + 0.5 * rng.normal(), 0.4 + 0.5 * rng.normal()).finished();
        const double lc = std::exp(0.5 * rng.normal());
        const double p = mixture_event_probability(x, c, pi, lc);
        double lo = 1.0, hi = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double pk = event_probability(DistributionSpec::gamma(c.shape[k]), DistributionSpec::exponential(),
                                                link_rate(x, c.theta[k]), lc);
            lo = std::min(lo, pk);
            hi = std::max(hi, pk);
        }
        EXPECT_GE(p, lo - 1e-15);
        EXPECT_LE(p, hi + 1e-15);
        EXPECT_NEAR(p, mixture_event_probability_quadrature(x, c, pi, lc), 1e-7);
    }
}

TEST(SamplePrior, Deterministic) {
    const PriorDraw a = sample_prior(1.0, BaseMeasure{}, 20, 2, 99);
    const PriorDraw b = sample_prior(1.0, BaseMeasure{}, 20, 2, 99);
    EXPECT_EQ(a.sticks.v, b.sticks.v);
    EXPECT_EQ(a.components.shape, b.components.shape);
    EXPECT_EQ(a.components.theta, b.components.theta);
}

TEST(SamplePrior, SmallConcentrationPutsMassOnFirstStick) {
    // pi_1 = V_1 ~ Beta(1, alpha): mean 1/(1+alpha), variance alpha/((1+alpha)^2 (2+alpha)).
    const double alpha = 0.01;
    const int draws = 1000;
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < draws; ++seed) {
        total += stick_weights(sample_prior(alpha, BaseMeasure{}, 20, 2, seed).sticks)[0];
    }
    const double mean = 1.0 / (1.0 + alpha);
    const double se = std::sqrt(alpha / ((1.0 + alpha) * (1.0 + alpha) * (2.0 + alpha)) / draws);
    EXPECT_NEAR(total / draws, mean, 4.0 * se);
    EXPECT_GT(total / draws, 0.98);
}

TEST(SamplePrior, HeadMassMatchesExpectation) {
    // alpha = 1, K = 50: E[sum_{k<=25} pi_k] = 1 - (1/2)^25.
    const int draws = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < draws; ++s) {
        const Vector pi = stick_weights(sample_prior(1.0, BaseMeasure{}, 50, 2, static_cast<std::uint64_t>(s)).sticks);
        const double head = pi.head(25).sum();
        sum += head;
        sum2 += head * head;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt(std::max(sum2 / draws - mean * mean, 0.0));
    const double expected = 1.0 - expected_tail_mass(1.0, 25);
    EXPECT_NEAR(mean, expected, 4.0 * sd / std::sqrt(draws) + 1e-12);
}
