#pragma once

// Core domain types for positive-unlabeled survival data.
//
// A subject is observed as (t?, c?, s, x). Labeled subjects (s = 1) are known
// events and always carry their survival time; unlabeled subjects (s = 0)
// carry only their censoring time. Whether a labeled subject also exposes its
// censoring time depends on the dataset's censoring mode.

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pusurv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Regression coefficients (theta_t, theta_c, or beta_t). Entries must be finite.
using ParamVector = Eigen::VectorXd;

struct SubjectRecord {
    std::optional<double> survival_time;
    std::optional<double> censoring_time;
    int label = 0;  // s in {0, 1}
    Vector covariates;
    std::optional<int> true_event_indicator;  // y, synthetic data only
};

enum class CensoringMode { CObserved, CUnobserved };
enum class Estimator { Pusa, Conventional };

struct ModelVariant {
    Estimator estimator = Estimator::Pusa;
    CensoringMode censoring_mode = CensoringMode::CObserved;

    friend bool operator==(const ModelVariant&, const ModelVariant&) = default;
};

/// The four variants in report order: PUSA c-obs, PUSA c-unobs, Conventional c-obs, Conventional c-unobs.
std::vector<ModelVariant> all_variants();

/// Short names used by the CLI and config files: pusa-cobs, pusa-cunobs, conv-cobs, conv-cunobs.
std::string variant_name(const ModelVariant& v);
ModelVariant parse_variant(std::string_view name);

struct Dataset {
    std::vector<SubjectRecord> records;
    std::size_t dimension = 0;
    bool c_observed_for_labeled = true;

    CensoringMode mode() const {
        return c_observed_for_labeled ? CensoringMode::CObserved : CensoringMode::CUnobserved;
    }
    std::size_t size() const { return records.size(); }
    std::size_t labeled_count() const;
};

struct Violation {
    std::optional<std::size_t> record;  // absent for dataset-level rules
    std::string rule;
};

/// Checks every record and dataset invariant. Never throws on a structurally
/// well-formed dataset; an empty result means the dataset is valid.
std::vector<Violation> validate_dataset(const Dataset& d);

/// exp(x' theta). Throws std::invalid_argument on dimension mismatch.
double link_rate(const Vector& x, const ParamVector& theta);

/// Returns a copy of `d` in c-unobserved mode: labeled rows lose their censoring time.
Dataset hide_labeled_censoring(const Dataset& d);

}  // namespace pusurv
