#pragma once

// Monte Carlo study: simulate replicate datasets, fit every variant, and
// aggregate mean estimates, asymptotic SEs, RMSE and interval coverage.
//
// Each replicate draws one c-observed dataset; c-unobserved variants see the
// same draw with the labeled censoring times removed. Replicate r at sample size
// n uses the stream derive_seed(derive_seed(seed, n), r), so results do not
// depend on worker count or scheduling.

#include "pusurv/estimator.hpp"
#include "pusurv/simulation.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pusurv {

struct ExperimentConfig {
    DgpConfig dgp = DgpConfig::study();
    std::vector<ModelVariant> variants = all_variants();
    std::size_t replicates = 1000;
    std::vector<std::size_t> n_raw = {10000, 3000};
    std::vector<double> levels = {0.95, 0.90};
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;
    FitOptions fit;

    void validate() const;
};

/// Reads an ExperimentConfig (and its DgpConfig) from a key-value config file.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin = "<config>");

/// Parameter labels in report order: theta_t1..theta_tp, theta_c1..theta_cp.
std::vector<std::string> parameter_names(std::size_t dimension);

struct ReplicateFit {
    std::size_t n_raw = 0;
    std::size_t replicate = 0;
    ModelVariant variant;
    std::size_t dataset_size = 0;
    std::size_t labeled = 0;
    bool excluded = false;
    std::string error;       // reason for exclusion
    bool converged = false;  // outer loop met its tolerance and no inner stalls
    Vector estimate;         // theta_t then theta_c
    Vector se;               // NaN where the information was not positive definite
};

struct ParameterSummary {
    std::string name;
    double truth = 0.0;
    double mean = 0.0;
    double mean_se = 0.0;  // over fits with a finite SE
    double rmse = 0.0;
    std::vector<double> coverage;  // per level; a fit without an SE counts as a miss
    std::size_t used = 0;
    std::size_t missing_se = 0;
};

struct VariantSummary {
    ModelVariant variant;
    std::vector<ParameterSummary> parameters;
    std::vector<double> average_coverage;  // per level
    std::size_t excluded = 0;
    std::size_t non_converged = 0;
};

/// RMSE of a PUSA variant relative to the conventional variant with the same
/// censoring mode, for one parameter block, under three aggregations.
struct RmseRatio {
    ModelVariant pusa;
    ModelVariant conventional;
    char block = 't';
    double ratio_of_norms = 0.0;  // ||rmse_pusa||_2 / ||rmse_conv||_2 (reported value)
    double mean_of_ratios = 0.0;  // mean_k rmse_pusa[k] / rmse_conv[k]
    double ratio_of_sums = 0.0;   // sum_k rmse_pusa[k] / sum_k rmse_conv[k]
};

struct SizeReport {
    std::size_t n_raw = 0;
    double mean_dataset_size = 0.0;
    double mean_labeled = 0.0;
    std::vector<VariantSummary> variants;
    std::vector<RmseRatio> ratios;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    std::size_t replicates = 0;
    std::vector<double> levels;
    std::vector<std::string> parameter_names;
    ParamVector theta_t_true;
    ParamVector theta_c_true;
    std::vector<ModelVariant> variants;
    std::vector<SizeReport> sizes;
    std::vector<ReplicateFit> fits;  // ordered by (n_raw index, replicate, variant)
};

ExperimentReport run_monte_carlo(const ExperimentConfig& config);

/// Aggregates fits already produced (any order) into the per-size summaries.
void aggregate(ExperimentReport& report);

double rmse(const std::vector<double>& estimates, double truth);
double coverage_rate(const std::vector<std::pair<double, double>>& intervals, double truth);
/// ||pusa||_2 / ||conventional||_2. Throws if the conventional norm is zero.
double rmse_ratio(const Vector& pusa_rmse, const Vector& conventional_rmse);

enum class ReportFormat { Csv, Markdown, Json };

/// Writes the report files for one format into `dir`:
///   Csv      estimates.csv (one row per replicate, variant and parameter), summary.csv
///   Markdown table.md (estimates, SE, RMSE, RMSE ratio), coverage.md
///   Json     report.json
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& dir);

std::string render_estimates_csv(const ExperimentReport& report);
std::string render_summary_csv(const ExperimentReport& report);
std::string render_table_markdown(const ExperimentReport& report);
std::string render_coverage_markdown(const ExperimentReport& report);
std::string render_json(const ExperimentReport& report);

}  // namespace pusurv
