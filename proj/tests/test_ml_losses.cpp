#include "pusurv/ml_losses.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pusurv;

namespace {

// Negative log partial likelihood (Breslow), straight from the definition.
double naive_cox(const std::vector<double>& t, const std::vector<double>& eta, const std::vector<double>& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double risk = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            if (t[j] >= t[i]) risk += std::exp(eta[j]);
        }
        sum += w[i] * (std::log(risk) - eta[i]);
    }
    return sum / static_cast<double>(t.size());
}

Dataset labeled_only(const std::vector<double>& times, const std::vector<Vector>& xs) {
    Dataset d;
    d.dimension = static_cast<std::size_t>(xs.front().size());
    d.c_observed_for_labeled = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        SubjectRecord r;
        r.survival_time = times[i];
        r.label = 1;
        r.covariates = xs[i];
        d.records.push_back(r);
    }
    return d;
}

KnownCensoringModel censoring(double a, double b) {
    KnownCensoringModel cm;
    cm.theta_c = (Vector(2) << a, b).finished();
    return cm;
}

}  // namespace

TEST(RiskSet, Examples) {
    EXPECT_EQ(risk_set({1, 2, 3}, 1), (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(risk_set({1, 2, 3}, 2), (std::vector<std::size_t>{2}));
    EXPECT_EQ(risk_set({2, 2}, 0), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(risk_set({2, 2}, 1), (std::vector<std::size_t>{0, 1}));
}

TEST(WeightedCoxLoss, MatchesDefinitionWithTiesAndWeights) {
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> t, eta, w;
        for (int i = 0; i < 40; ++i) {
            t.push_back(std::ceil(rng.exponential(1.0) * 4.0));  // many ties
            eta.push_back(rng.normal());
            w.push_back(1.0 + rng.uniform());
        }
        EXPECT_NEAR(weighted_cox_loss(t, eta, w), naive_cox(t, eta, w), 1e-12);
        const std::vector<double> ones(t.size(), 1.0);
        EXPECT_NEAR(weighted_cox_loss(t, eta, ones), naive_cox(t, eta, ones), 1e-12);

        std::vector<double> d_eta;
        weighted_cox_loss(t, eta, w, &d_eta);
        for (std::size_t j = 0; j < t.size(); j += 7) {
            auto up = eta, dn = eta;
            up[j] += 1e-6;
            dn[j] -= 1e-6;
            EXPECT_NEAR(d_eta[j], (naive_cox(t, up, w) - naive_cox(t, dn, w)) / 2e-6, 1e-8);
        }
    }
}

TEST(PuCoxLoss, UnitWeightsReduceToPartialLikelihood) {
    // Censoring vanishes when lambda_c -> 0, so every event probability is exactly 1.
    Rng rng(9);
    std::vector<double> t;
    std::vector<Vector> xs;
    for (int i = 0; i < 30; ++i) {
        t.push_back(rng.exponential(1.0));
        xs.push_back((Vector(2) << 1.0, rng.normal()).finished());
    }
    const Dataset d = labeled_only(t, xs);
    const RiskFunction g{RiskFunction::Kind::Linear, (Vector(2) << 0.4, -0.3).finished()};
    const KnownCensoringModel cm = censoring(-50.0, 0.0);
    for (double p : cox_event_probabilities(d, g, cm)) EXPECT_EQ(p, 1.0);
    std::vector<double> eta;
    for (const auto& x : xs) eta.push_back(g(x));
    EXPECT_EQ(pu_cox_loss(d, g, cm), weighted_cox_loss(t, eta, std::vector<double>(t.size(), 1.0)));
    EXPECT_NEAR(pu_cox_loss(d, g, cm), naive_cox(t, eta, std::vector<double>(t.size(), 1.0)), 1e-12);
}

TEST(PuCoxLoss, TranslationInvarianceWithFrozenWeights) {
    Rng rng(10);
    std::vector<double> t, eta, w;
    for (int i = 0; i < 50; ++i) {
        t.push_back(rng.exponential(2.0));
        eta.push_back(rng.normal());
        w.push_back(1.0 / (0.2 + 0.8 * rng.uniform()));
    }
    const double base = weighted_cox_loss(t, eta, w);
    for (double shift : {-50.0, -1.0, 0.5, 30.0}) {
        auto moved = eta;
        for (double& e : moved) e += shift;
        EXPECT_NEAR(weighted_cox_loss(t, moved, w), base, 1e-12 * (1.0 + std::abs(base)));
    }
}

TEST(PuCoxLoss, SingleLabeledRecordIsZero) {
    const Dataset d = labeled_only({0.7}, {(Vector(2) << 0.3, 0.2).finished()});
    const RiskFunction g{RiskFunction::Kind::Linear, (Vector(2) << 2.0, 1.0).finished()};
    EXPECT_EQ(pu_cox_loss(d, g, censoring(1.0, 0.5)), 0.0);
}

TEST(PuCoxLoss, NoLabeledEvents) {
    Dataset d;
    d.dimension = 2;
    SubjectRecord r;
    r.censoring_time = 1.0;
    r.covariates = Vector::Zero(2);
    d.records.push_back(r);
    const RiskFunction g{RiskFunction::Kind::Linear, Vector::Zero(2)};
    EXPECT_THROW(pu_cox_loss(d, g, censoring(0, 0)), std::invalid_argument);
}

TEST(DiscreteHazard, Examples) {
    DiscreteHazardParams hp;
    hp.alpha = (Vector(1) << 0.0).finished();
    hp.beta = Vector::Zero(2);
    EXPECT_EQ(discrete_hazard(1, Vector::Zero(2), hp), 0.5);
    hp.alpha[0] = -800.0;
    EXPECT_LT(discrete_hazard(1, Vector::Zero(2), hp), 1e-300);
    hp.alpha[0] = 0.5;
    hp.beta << 1.0, 2.0;
    EXPECT_NEAR(discrete_hazard(1, (Vector(2) << 1.0, 0.0).finished(), hp), 0.817574, 1e-6);
    EXPECT_THROW(discrete_hazard(2, Vector::Zero(2), hp), std::out_of_range);
}

TEST(DiscreteHazard, BoundedAndMonotone) {
    DiscreteHazardParams hp;
    hp.alpha = Vector::Zero(1);
    hp.beta = (Vector(1) << 1.0).finished();
    double prev = 0.0;
    for (double a = -30.0; a <= 30.0; a += 0.5) {
        hp.alpha[0] = a;
        const double h = discrete_hazard(1, Vector::Ones(1), hp);
        EXPECT_GT(h, 0.0);
        EXPECT_LT(h, 1.0);
        EXPECT_GT(h, prev);
        prev = h;
    }
}

TEST(PuLogitLoss, SingleBernoulliTerm) {
    DiscreteHazardParams hp;
    hp.alpha = Vector::Zero(1);
    hp.beta = Vector::Zero(2);
    const Dataset d = labeled_only({1.0}, {Vector::Zero(2)});
    EXPECT_NEAR(weighted_logit_loss(d, hp, {1.0}), 0.693147, 1e-6);
}

TEST(PuLogitLoss, AllUnlabeledRaises) {
    Dataset d;
    d.dimension = 2;
    SubjectRecord r;
    r.censoring_time = 2.0;
    r.covariates = Vector::Zero(2);
    d.records.push_back(r);
    DiscreteHazardParams hp{Vector::Zero(3), Vector::Zero(2)};
    try {
        pu_logit_loss(d, hp, censoring(0, 0));
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "no labeled events");
    }
}

TEST(PuLogitLoss, AdditiveOverSubjectsAndGradientMatches) {
    Rng rng(12);
    std::vector<double> t;
    std::vector<Vector> xs;
    for (int i = 0; i < 25; ++i) {
        t.push_back(1.0 + static_cast<double>(rng.below(6)));
        xs.push_back((Vector(2) << rng.normal(), rng.normal()).finished());
    }
    const Dataset d = labeled_only(t, xs);
    DiscreteHazardParams hp{(Vector(4) << -1.0, -0.5, 0.2, 0.0).finished(), (Vector(2) << 0.3, -0.7).finished()};
    std::vector<double> w(t.size());
    for (auto& v : w) v = 1.0 + rng.uniform();

    double by_subject = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        by_subject += weighted_logit_loss(labeled_only({t[i]}, {xs[i]}), hp, {w[i]});
    }
    EXPECT_NEAR(weighted_logit_loss(d, hp, w) * static_cast<double>(t.size()), by_subject, 1e-11);

    Vector g;
    weighted_logit_loss(d, hp, w, &g);
    Vector params(6);
    params << hp.alpha, hp.beta;
    for (int k = 0; k < 6; ++k) {
        Vector up = params, dn = params;
        up[k] += 1e-6;
        dn[k] -= 1e-6;
        const double fu = weighted_logit_loss(d, {up.head(4), up.tail(2)}, w);
        const double fd = weighted_logit_loss(d, {dn.head(4), dn.tail(2)}, w);
        EXPECT_NEAR(g[k], (fu - fd) / 2e-6, 1e-8);
    }
}

TEST(DiscreteEventProbability, MatchesLongDirectSum) {
    DiscreteHazardParams hp{(Vector(3) << -1.0, -2.0, -1.5).finished(), (Vector(1) << 0.4).finished()};
    const Vector x = (Vector(1) << 0.8).finished();
    const double lc = 0.3;
    // P(T < C) = sum_k P(T = k) P(C > k), C geometric with P(C > k) = exp(-lc k).
    double surv = 1.0, direct = 0.0;
    for (int k = 1; k < 5000; ++k) {
        const double h = discrete_hazard(std::min(k, 3), x, hp);
        direct += surv * h * std::exp(-lc * k);
        surv *= 1.0 - h;
    }
    EXPECT_NEAR(discrete_event_probability(x, hp, lc), direct, 1e-14);
}

TEST(FitLoss, VanishingCensoringEqualsUnweightedCox) {
    // Keep x1 > 0.2 so that lambda_c = exp(-100 x1) < 2e-9 for every subject.
    const SimulationOutput sim = generate(DgpConfig::study(4000, 31));
    std::vector<double> t;
    std::vector<Vector> xs;
    for (const auto& r : sim.dataset.records) {
        if (r.label != 1 || r.covariates[0] <= 0.2) continue;
        t.push_back(*r.survival_time);
        xs.push_back(r.covariates);
    }
    const KnownCensoringModel cm = censoring(-100.0, 0.0);
    const LossFit fit = fit_loss(labeled_only(t, xs), LossKind::Cox, cm);
    EXPECT_TRUE(fit.converged);

    auto fg = [&](const Vector& theta, Vector& g) {
        std::vector<double> eta;
        for (const auto& x : xs) eta.push_back(x.dot(theta));
        std::vector<double> d_eta;
        const double f = weighted_cox_loss(t, eta, std::vector<double>(t.size(), 1.0), &d_eta);
        g = Vector::Zero(2);
        for (std::size_t i = 0; i < xs.size(); ++i) g += d_eta[i] * xs[i];
        return f;
    };
    const MinimizeResult plain = minimize(fg, Vector::Zero(2));
    EXPECT_LE((fit.params - plain.argmin).lpNorm<Eigen::Infinity>(), 1e-4);
}

TEST(FitLoss, ConvergesOnStudyData) {
    int converged = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SimulationOutput sim = generate(DgpConfig::study(1000, 4000 + seed));
        const LossFit fit = fit_loss(sim.dataset, LossKind::Cox, censoring(1.0, 0.5));
        converged += fit.converged && fit.iterations < 100 ? 1 : 0;
    }
    EXPECT_GE(converged, 48);
}

TEST(GenerateDiscrete, IntegerTimesAndLabels) {
    DiscreteHazardParams hp{Vector::Constant(20, -1.0), (Vector(2) << 0.5, -0.5).finished()};
    const SimulationOutput sim = generate_discrete(DgpConfig::study(2000, 3), hp);
    EXPECT_TRUE(validate_dataset(sim.dataset).empty());
    for (std::size_t i = 0; i < sim.dataset.size(); ++i) {
        const auto& g = sim.truth[i];
        EXPECT_EQ(*g.record.survival_time, std::floor(*g.record.survival_time));
        EXPECT_GE(*g.record.censoring_time, 1.0);
        EXPECT_EQ(g.y_true, *g.record.survival_time < *g.record.censoring_time ? 1 : 0);
        if (sim.dataset.records[i].label == 1) EXPECT_EQ(g.y_true, 1);
    }
}
