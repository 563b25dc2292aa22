#pragma once

// Inverse-probability-weighted losses for PU survival data with a known
// censoring distribution.
//
// Continuous time, over the labeled subsample (s = 1, n1 records):
//
//   loss_cox = (1/n1) sum_i w_i [ log sum_{j in R_i} exp(g(x_j)) - g(x_i) ],
//   R_i = { j : t_j >= t_i },  w_i = 1 / P(y = 1 | x_i)
//
// Discrete time with hazard h(k | x) = logistic(alpha_k + beta' x):
//
//   loss_logit = -(1/n1) sum_i w_i sum_{k <= T_i} [ y_ik log h_k + (1 - y_ik) log(1 - h_k) ],
//   y_ik = 1(k = T_i)
//
// Periods after J reuse alpha_J. Discrete censoring is geometric with
// per-period probability q = 1 - exp(-lambda_c), i.e. the ceiling of an
// exponential censoring time, and y = 1(T < C).

#include "pusurv/distributions.hpp"
#include "pusurv/optimize.hpp"
#include "pusurv/simulation.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pusurv {

struct RiskFunction {
    enum class Kind { Linear };
    Kind kind = Kind::Linear;
    ParamVector params;

    double operator()(const Vector& x) const;
};

struct DiscreteHazardParams {
    Vector alpha;  // alpha_1..alpha_J
    ParamVector beta;

    std::size_t periods() const { return static_cast<std::size_t>(alpha.size()); }
};

struct KnownCensoringModel {
    DistributionSpec spec = DistributionSpec::exponential();
    ParamVector theta_c;

    double rate(const Vector& x) const { return link_rate(x, theta_c); }
};

/// A loss term could not be evaluated (zero event probability, saturated hazard).
class LossError : public std::runtime_error {
public:
    LossError(const std::string& what, std::optional<std::size_t> record)
        : std::runtime_error(what), record_(record) {}
    std::optional<std::size_t> record() const noexcept { return record_; }

private:
    std::optional<std::size_t> record_;
};

/// { j : times[j] >= times[i] } in index order.
std::vector<std::size_t> risk_set(const std::vector<double>& times, std::size_t i);

/// Weighted mean negative log partial likelihood with Breslow ties:
/// (1/n) sum_i weight_i [ log sum_{t_j >= t_i} exp(eta_j) - eta_i ].
/// Writes d/d eta into `d_eta` when given.
double weighted_cox_loss(const std::vector<double>& times, const std::vector<double>& eta,
                         const std::vector<double>& weights, std::vector<double>* d_eta = nullptr);

/// P(y = 1 | x_i) for each labeled record, t ~ Exp(exp(g(x))), c from `cm`.
std::vector<double> cox_event_probabilities(const Dataset& data, const RiskFunction& g,
                                            const KnownCensoringModel& cm);

double pu_cox_loss(const Dataset& data, const RiskFunction& g, const KnownCensoringModel& cm);

double discrete_hazard(std::size_t tau, const Vector& x, const DiscreteHazardParams& hp);

/// P(T < C | x) under the discrete hazard model and geometric censoring.
double discrete_event_probability(const Vector& x, const DiscreteHazardParams& hp, double lambda_c);

/// Labeled records need integer survival times >= 1.
double pu_logit_loss(const Dataset& data, const DiscreteHazardParams& hp, const KnownCensoringModel& cm);

/// Same loss with caller-supplied weights (one per labeled record, dataset order).
/// Writes the gradient over (alpha, beta) when `grad` is given.
double weighted_logit_loss(const Dataset& data, const DiscreteHazardParams& hp, const std::vector<double>& weights,
                           Vector* grad = nullptr);

enum class LossKind { Cox, Logit };

struct LossFitOptions {
    double tolerance = 1e-6;  // max-norm parameter change between outer iterations
    int max_iterations = 100;
    std::size_t periods = 0;  // logit: J; 0 means the largest labeled T
    /// Freeze the weights at these parameters instead of iterating.
    std::optional<Vector> frozen_weight_params;
    MinimizeOptions inner;
};

struct LossFit {
    LossKind kind = LossKind::Cox;
    Vector params;  // Cox: theta_t.  Logit: alpha_1..alpha_J then beta.
    bool converged = false;
    int iterations = 0;
    double loss = 0.0;
    std::vector<Vector> trace;

    DiscreteHazardParams hazard(std::size_t dimension) const;
};

/// Alternates: weights from the current parameters (zero at the start), then
/// minimize the loss with the weights frozen.
LossFit fit_loss(const Dataset& data, LossKind kind, const KnownCensoringModel& cm, const LossFitOptions& opts = {});

/// Discrete-time PU data: the continuous generator's covariates, split and
/// labeling, with T drawn from the discrete hazard and C = ceil(Exp(lambda_c)).
SimulationOutput generate_discrete(const DgpConfig& config, const DiscreteHazardParams& hp);

}  // namespace pusurv
