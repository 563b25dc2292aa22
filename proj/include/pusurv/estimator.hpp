#pragma once

// Alternating maximum likelihood: minimize -log L(theta_t) with theta_c held
// fixed, then -log L(theta_c) with theta_t held fixed, until neither block moves
// by more than the outer tolerance.

#include "pusurv/likelihood.hpp"
#include "pusurv/optimize.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pusurv {

struct FitOptions {
    ParamVector init_theta_t;  // empty means the zero vector
    ParamVector init_theta_c;
    double outer_tolerance = 1e-6;  // max-norm of the parameter change over one full cycle
    int max_outer_iters = 100;
    MinimizeOptions inner;
};

struct FitSnapshot {
    ParamVector theta_t;
    ParamVector theta_c;
    double joint_objective = 0.0;  // joint negative log-likelihood after the cycle
};

struct FitResult {
    ParamVector theta_t_hat;
    ParamVector theta_c_hat;
    bool converged = false;
    int outer_iterations = 0;
    Matrix info_t;
    Matrix info_c;
    std::optional<Vector> se_t;  // absent when the information is not positive definite
    std::optional<Vector> se_c;
    std::vector<FitSnapshot> trace;
    int inner_stalls = 0;  // inner minimizations that ended without meeting the gradient tolerance
};

/// Minimizer failure, tagged with the block ('t' or 'c') and the outer iteration.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, char step, int iteration)
        : std::runtime_error(what), step_(step), iteration_(iteration) {}
    char step() const noexcept { return step_; }
    int iteration() const noexcept { return iteration_; }

private:
    char step_;
    int iteration_;
};

/// Joint negative log-likelihood whose theta_t and theta_c slices are the two
/// block objectives (up to additive constants).
double joint_neg_loglik(const Dataset& d, ModelVariant variant, const ParamVector& theta_t,
                        const ParamVector& theta_c);

FitResult fit_alternating(const Dataset& d, ModelVariant variant, const FitOptions& opts = {});

/// Experimental: BFGS on the joint objective over (theta_t, theta_c) at once.
FitResult fit_simultaneous(const Dataset& d, ModelVariant variant, const FitOptions& opts = {});

/// sqrt(diag(info^-1)) when info is positive definite, otherwise absent.
std::optional<Vector> asymptotic_se(const Matrix& info);

/// theta_hat -/+ z se with z = 1.6449 (level 0.90) or 1.9600 (level 0.95).
std::pair<double, double> confidence_interval(double theta_hat, double se, double level);

double normal_quantile_for_level(double level);

}  // namespace pusurv
