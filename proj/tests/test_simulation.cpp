#include "pusurv/simulation.hpp"

#include "stats_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace pusurv;

TEST(Generate, DeterministicPerSeed) {
    const auto a = generate(DgpConfig::study(2000, 9));
    const auto b = generate(DgpConfig::study(2000, 9));
    ASSERT_EQ(a.dataset.size(), b.dataset.size());
    for (std::size_t i = 0; i < a.dataset.size(); ++i) {
        EXPECT_EQ(a.dataset.records[i].survival_time, b.dataset.records[i].survival_time);
        EXPECT_EQ(a.dataset.records[i].censoring_time, b.dataset.records[i].censoring_time);
        EXPECT_EQ(a.dataset.records[i].covariates, b.dataset.records[i].covariates);
    }
    const auto c = generate(DgpConfig::study(2000, 10));
    EXPECT_NE(a.dataset.records[0].covariates, c.dataset.records[0].covariates);
}

TEST(Generate, StructureAndModeFlags) {
    for (bool observed : {true, false}) {
        DgpConfig cfg = DgpConfig::study(3000, 4);
        cfg.c_observed_for_labeled = observed;
        const auto sim = generate(cfg);
        EXPECT_TRUE(validate_dataset(sim.dataset).empty());
        ASSERT_EQ(sim.truth.size(), sim.dataset.size());
        EXPECT_EQ(sim.population.size(), 3000u);
        for (std::size_t i = 0; i < sim.dataset.size(); ++i) {
            const auto& r = sim.dataset.records[i];
            const auto& g = sim.truth[i];
            EXPECT_EQ(g.y_true, *g.record.survival_time < *g.record.censoring_time ? 1 : 0);
            if (r.label == 1) {
                EXPECT_EQ(g.y_true, 1);
                EXPECT_EQ(r.censoring_time.has_value(), observed);
            } else {
                EXPECT_FALSE(r.survival_time);
            }
        }
        // 50% of D1's events (floor) and 50% of D2.
        std::size_t labeled = sim.dataset.labeled_count();
        EXPECT_EQ(sim.dataset.size() - labeled, 750u);
    }
}

TEST(Generate, RejectsBadCovariance) {
    DgpConfig cfg = DgpConfig::study(100, 1);
    cfg.x_cov << 1.0, 2.0, 2.0, 1.0;
    EXPECT_THROW(generate(cfg), std::invalid_argument);
    cfg = DgpConfig::study(100, 1);
    cfg.label_fraction_d1 = 0.0;
    EXPECT_THROW(generate(cfg), std::invalid_argument);
}

TEST(Generate, NoEventsGivesEmptyStratumAndFlag) {
    DgpConfig cfg = DgpConfig::study(500, 2);
    cfg.x_mean << 10.0, 0.0;
    cfg.x_cov << 1.0, 0.0, 0.0, 1.0;
    cfg.theta_t_true << -5.0, 0.0;
    cfg.theta_c_true << 5.0, 0.0;
    const auto sim = generate(cfg);
    EXPECT_TRUE(sim.no_labeled_events);
    EXPECT_EQ(sim.dataset.labeled_count(), 0u);
    EXPECT_GT(sim.dataset.size(), 0u);
    const auto v = validate_dataset(sim.dataset);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].rule, "no labeled events (s=1)");
}

TEST(Generate, AverageSizeMatchesReadingOfLabelingSteps) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) total += generate(DgpConfig::study(3000, 1000 + seed)).dataset.size();
    EXPECT_NEAR(total / 40.0, 1275.6, 0.02 * 1275.6);
}

TEST(EventRate, Examples) {
    GroundTruthRecord g;
    g.record.survival_time = 0.035;
    g.record.censoring_time = 0.178;
    g.y_true = 1;
    EXPECT_EQ(empirical_event_rate({g}), 1.0);
    EXPECT_THROW(empirical_event_rate({}), std::invalid_argument);

    DgpConfig cfg = DgpConfig::study(20000, 3);
    cfg.theta_c_true = cfg.theta_t_true;
    const auto sim = generate(cfg);
    const double rate = empirical_event_rate(sim.population);
    EXPECT_NEAR(rate, 0.5, 3.0 * std::sqrt(0.25 / 20000));
}

TEST(Generate, LabelingAssumptionFidelity) {
    int t_failures = 0, c_failures = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto sim = generate(DgpConfig::study(4000, 700 + s));
        std::vector<double> t_labeled, t_events, c_unlabeled, c_all;
        for (std::size_t i = 0; i < sim.dataset.size(); ++i) {
            if (sim.dataset.records[i].label == 1) {
                t_labeled.push_back(*sim.truth[i].record.survival_time);
            } else {
                c_unlabeled.push_back(*sim.truth[i].record.censoring_time);
            }
        }
        for (const auto& g : sim.population) {
            if (g.y_true == 1) t_events.push_back(*g.record.survival_time);
            c_all.push_back(*g.record.censoring_time);
        }
        t_failures += testing_stats::ks_pvalue(t_labeled, t_events) < 0.01 ? 1 : 0;
        c_failures += testing_stats::ks_pvalue(c_unlabeled, c_all) < 0.01 ? 1 : 0;
    }
    EXPECT_LE(t_failures, 2);
    EXPECT_LE(c_failures, 2);
}

TEST(TruthCsv, HasExpectedColumns) {
    const auto sim = generate(DgpConfig::study(200, 1));
    std::ostringstream out;
    write_truth_csv(out, sim);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "id,t,c,x1,x2,lambda_t,lambda_c,y,s");
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), sim.dataset.size() + 1);
}
