#include "pusurv/experiments.hpp"
#include "pusurv/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace pusurv;

TEST(Rmse, Examples) {
    EXPECT_EQ(rmse({2, 2, 2}, 2), 0.0);
    EXPECT_EQ(rmse({3, 1}, 2), 1.0);
    EXPECT_NEAR(rmse({2.1, 1.9, 2.2}, 2), std::sqrt(0.02), 1e-12);
    EXPECT_THROW(rmse({}, 1.0), std::invalid_argument);
}

TEST(CoverageRate, Examples) {
    EXPECT_EQ(coverage_rate({{1, 3}}, 2), 1.0);
    EXPECT_EQ(coverage_rate({{3, 4}, {0, 1}}, 2), 0.0);
    EXPECT_EQ(coverage_rate({{2, 3}, {1, 2}}, 2), 1.0);  // closed endpoints
    EXPECT_THROW(coverage_rate({}, 1.0), std::invalid_argument);
}

TEST(CoverageRate, NormalToyModelHitsNominalLevel) {
    // theta_hat ~ N(theta, se^2) with the true se: intervals cover at the nominal rate.
    for (double level : {0.95, 0.90}) {
        Rng rng(static_cast<std::uint64_t>(level * 1000));
        const int R = 1000;
        std::vector<std::pair<double, double>> intervals;
        for (int r = 0; r < R; ++r) intervals.push_back(confidence_interval(1.0 + 0.3 * rng.normal(), 0.3, level));
        const double tol = 3.0 * std::sqrt(level * (1.0 - level) / R);
        EXPECT_NEAR(coverage_rate(intervals, 1.0), level, tol);
    }
}

TEST(RmseRatio, Examples) {
    const Vector a = (Vector(2) << 0.3, 0.4).finished();
    EXPECT_EQ(rmse_ratio(a, a), 1.0);
    EXPECT_EQ(rmse_ratio(Vector::Zero(2), a), 0.0);
    EXPECT_NEAR(rmse_ratio(a, 2.0 * a), 0.5, 1e-15);
    EXPECT_THROW(rmse_ratio(a, Vector::Zero(2)), std::invalid_argument);
}

namespace {

ExperimentConfig small_config(std::size_t replicates, std::size_t workers) {
    ExperimentConfig cfg;
    cfg.dgp = DgpConfig::study(1500, 77);
    cfg.n_raw = {1500};
    cfg.replicates = replicates;
    cfg.workers = workers;
    return cfg;
}

}  // namespace

TEST(RunMonteCarlo, SingleReplicateDegenerates) {
    const ExperimentReport rep = run_monte_carlo(small_config(1, 1));
    ASSERT_EQ(rep.sizes.size(), 1u);
    for (std::size_t v = 0; v < rep.variants.size(); ++v) {
        const ReplicateFit& fit = rep.fits[v];
        const VariantSummary& vs = rep.sizes[0].variants[v];
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& ps = vs.parameters[k];
            EXPECT_DOUBLE_EQ(ps.mean, fit.estimate[static_cast<Eigen::Index>(k)]);
            EXPECT_NEAR(ps.rmse, std::abs(fit.estimate[static_cast<Eigen::Index>(k)] - ps.truth), 1e-15);
        }
    }
}

TEST(RunMonteCarlo, WorkerCountDoesNotChangeReport) {
    const ExperimentReport a = run_monte_carlo(small_config(6, 1));
    const ExperimentReport b = run_monte_carlo(small_config(6, 3));
    EXPECT_EQ(render_json(a), render_json(b));
    EXPECT_EQ(render_estimates_csv(a), render_estimates_csv(b));
    EXPECT_EQ(render_table_markdown(a), render_table_markdown(b));
}

TEST(Aggregate, InvariantToReplicateOrder) {
    ExperimentReport a = run_monte_carlo(small_config(5, 1));
    ExperimentReport b = a;
    std::reverse(b.fits.begin(), b.fits.end());
    aggregate(b);
    EXPECT_EQ(render_summary_csv(a), render_summary_csv(b));
}

TEST(Aggregate, FailedFitsAreExcludedAndCounted) {
    ExperimentReport rep = run_monte_carlo(small_config(4, 1));
    rep.fits[0].excluded = true;
    rep.fits[0].error = "injected";
    aggregate(rep);
    const VariantSummary& vs = rep.sizes[0].variants[0];
    EXPECT_EQ(vs.excluded, 1u);
    EXPECT_EQ(vs.parameters[0].used, 3u);
    EXPECT_NE(render_estimates_csv(rep).find("injected"), std::string::npos);
}

TEST(EmitReport, EmptyVariantListGivesHeadersOnly) {
    ExperimentConfig cfg = small_config(2, 1);
    cfg.variants.clear();
    const ExperimentReport rep = run_monte_carlo(cfg);
    const std::string csv = render_estimates_csv(rep);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
    const std::string summary = render_summary_csv(rep);
    EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 1);
}

TEST(EmitReport, SingleReplicateRowsAndFiles) {
    const ExperimentReport rep = run_monte_carlo(small_config(1, 1));
    const std::string csv = render_estimates_csv(rep);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 4);
    const auto dir = std::filesystem::temp_directory_path() / "pusurv_emit_test";
    std::filesystem::remove_all(dir);
    std::size_t files = 0;
    for (ReportFormat f : {ReportFormat::Csv, ReportFormat::Markdown, ReportFormat::Json}) {
        files += emit_report(rep, f, dir).size();
    }
    EXPECT_EQ(files, 5u);
    EXPECT_TRUE(std::filesystem::exists(dir / "table.md"));
    std::ifstream md(dir / "table.md");
    std::stringstream buf;
    buf << md.rdbuf();
    for (const char* row : {"True Value", "Mean Value", "Asymptotic SE", "RMSE Ratio"}) {
        EXPECT_NE(buf.str().find(row), std::string::npos) << row;
    }
    std::filesystem::remove_all(dir);
}
