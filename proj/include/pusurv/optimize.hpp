#pragma once

// Unconstrained quasi-Newton minimization (BFGS, strong Wolfe line search).

#include "pusurv/model.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace pusurv {

struct MinimizeOptions {
    double gradient_tolerance = 1e-8;  // max-norm
    int max_iterations = 500;
};

enum class MinimizeStatus { Converged, IterationLimit, Stalled };

struct MinimizeResult {
    Vector argmin;
    double value = 0.0;
    Vector gradient;
    MinimizeStatus status = MinimizeStatus::Stalled;
    int iterations = 0;
    int fallback_steps = 0;  // steepest-descent rescues after a failed line search

    bool converged() const { return status == MinimizeStatus::Converged; }
};

/// The objective or its gradient was non-finite at `point()`.
class MinimizerError : public std::runtime_error {
public:
    MinimizerError(const std::string& what, Vector point) : std::runtime_error(what), point_(std::move(point)) {}
    const Vector& point() const noexcept { return point_; }

private:
    Vector point_;
};

/// Returns f(x) and writes the gradient into `grad`.
using ValueAndGradient = std::function<double(const Vector& x, Vector& grad)>;
using ObjectiveFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

MinimizeResult minimize(const ValueAndGradient& fg, const Vector& init, const MinimizeOptions& opts = {});
MinimizeResult minimize(const ObjectiveFn& objective, const GradientFn& gradient, const Vector& init,
                        const MinimizeOptions& opts = {});

}  // namespace pusurv
