#pragma once

// Synthetic positive-unlabeled survival data:
//
//   1. x ~ MVN(mean, cov); lt = exp(x' theta_t), lc = exp(x' theta_c)
//   2. t ~ Exp(lt), c ~ Exp(lc), y = 1(t < c)
//   3. split the sample at random into D1 (split_fraction) and D2
//   4. from D1, a random label_fraction_d1 of the y = 1 records become s = 1
//   5. from D2, a random keep_fraction_d2 of all records are kept as s = 0
//   6. the union is the dataset; labeled rows drop c in c-unobserved mode and
//      unlabeled rows always drop t.

#include "pusurv/model.hpp"
#include "pusurv/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pusurv {

struct DgpConfig {
    ParamVector theta_t_true;
    ParamVector theta_c_true;
    Vector x_mean;
    Matrix x_cov;
    std::size_t n_raw = 10000;
    double label_fraction_d1 = 0.5;
    double keep_fraction_d2 = 0.5;
    double split_fraction = 0.5;
    bool c_observed_for_labeled = true;
    std::uint64_t seed = 1;

    /// theta_t = (2, 1), theta_c = (1, 0.5), x ~ MVN((0.7, 0.4), [[0.3, -0.1], [-0.1, 0.2]]).
    static DgpConfig study(std::size_t n_raw = 10000, std::uint64_t seed = 1);
    void validate() const;
};

struct GroundTruthRecord {
    SubjectRecord record;  // both times present
    int y_true = 0;
    double lambda_t = 0.0;
    double lambda_c = 0.0;
};

struct SimulationOutput {
    Dataset dataset;
    std::vector<GroundTruthRecord> truth;       // aligned with dataset.records
    std::vector<GroundTruthRecord> population;  // every raw draw, before labeling
    bool no_labeled_events = false;
};

SimulationOutput generate(const DgpConfig& config);

/// Steps 3 to 6 on an already drawn `out.population`: split, label, strip.
void label_population(SimulationOutput& out, const DgpConfig& config, Rng& rng);

/// Sidecar with the hidden truth, one row per dataset record:
/// id,t,c,x1..xp,lambda_t,lambda_c,y,s (id is the 1-based dataset row).
void write_truth_csv(std::ostream& out, const SimulationOutput& sim);

/// Fraction of records with y_true = 1. Throws on an empty list.
double empirical_event_rate(const std::vector<GroundTruthRecord>& truth);

}  // namespace pusurv
