#pragma once

// Finite-difference audit of the analytic gradients and observed information,
// used by the `check-gradients` subcommand.

#include "pusurv/likelihood.hpp"

#include <cstdint>
#include <vector>

namespace pusurv {

/// A random dataset in the given mode with n records of dimension p, plus
/// random parameters. Labels are balanced; times are positive and labeled rows
/// satisfy t < c.
struct RandomContext {
    Dataset dataset;
    ParamVector theta_t;
    ParamVector theta_c;
};
RandomContext random_context(CensoringMode mode, std::size_t n, std::size_t p, std::uint64_t seed);

struct GradientCheckRow {
    ModelVariant variant;
    ObjectiveTarget target;
    double max_gradient_error = 0.0;  // relative, worst over contexts
    double max_hessian_error = 0.0;
};

/// Relative error ||a - b||_inf / max(||b||_inf, 1).
double relative_error(const Matrix& analytic, const Matrix& numeric);

/// Central differences of the objective (gradient) and of the analytic gradient
/// (information), for every variant and target over `contexts` random contexts.
std::vector<GradientCheckRow> check_gradients(std::uint64_t seed, std::size_t contexts = 50, std::size_t n = 50,
                                              std::size_t p = 2);

}  // namespace pusurv
