#pragma once

// Negative log-likelihoods, gradients and observed information for the four
// exponential model variants (PUSA / conventional x c observed / unobserved).
//
// With lt = exp(x' theta_t) and lc = exp(x' theta_c), the log-likelihoods are
//
//   PUSA, theta_t (both modes):  sum s (log(lt + lc) - lt t)
//   PUSA c-obs, theta_c:         sum s log(lt + lc) + x' theta_c - lc c
//   PUSA c-unobs, theta_c:       sum s (log(lt + lc) - lc t) + (1 - s)(x' theta_c - lc c)
//   Conv, theta_t (both modes):  sum -s lt t - (1 - s) lt c + log(lt + lc)
//   Conv c-obs, theta_c:         sum s x' theta_c - lc c + log(lt + lc)
//   Conv c-unobs, theta_c:       sum -s lc t - (1 - s) lc c + log(lt + lc)
//
// The conventional model treats s as the censoring indicator. Every form is an
// instance of the exposure kernel (see kernels/exposure.hpp); derivatives are
// taken from these log-likelihoods directly.

#include "pusurv/kernels/exposure.hpp"
#include "pusurv/model.hpp"

#include <stdexcept>
#include <string>

namespace pusurv {

enum class ObjectiveTarget { ThetaT, ThetaC };

struct LikelihoodContext {
    const Dataset& dataset;
    ModelVariant variant;
    ParamVector theta_t;
    ParamVector theta_c;
};

/// A record lacks a field its variant needs, or an intermediate became non-finite.
class LikelihoodError : public std::runtime_error {
public:
    LikelihoodError(const std::string& what, std::size_t record) : std::runtime_error(what), record_(record) {}
    std::size_t record() const noexcept { return record_; }

private:
    std::size_t record_;
};

double neg_loglik(const LikelihoodContext& ctx, ObjectiveTarget target);
/// Gradient of neg_loglik with respect to the target block.
Vector grad(const LikelihoodContext& ctx, ObjectiveTarget target);
/// Observed information Q = -Hessian of log L for the target block (symmetric).
Matrix neg_hessian(const LikelihoodContext& ctx, ObjectiveTarget target);

/// One block's objective with the other block frozen; the per-record kernel
/// inputs are laid out once and reused across evaluations.
class BlockObjective {
public:
    BlockObjective(const Dataset& dataset, ModelVariant variant, ObjectiveTarget target,
                   const ParamVector& other_block);

    double value(const ParamVector& theta) const;
    Vector gradient(const ParamVector& theta) const;
    Matrix information(const ParamVector& theta) const;

    /// Raw kernel sums of log L (not negated).
    kernels::ExposureSums evaluate(const ParamVector& theta, kernels::Want want) const;
    std::size_t dimension() const { return problem_.p; }

private:
    void throw_non_finite(const ParamVector& theta) const;

    kernels::ExposureProblem problem_;
};

}  // namespace pusurv
