#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace pusurv {

struct QuadratureConfig {
    double abs_tolerance = 1e-10;
    double rel_tolerance = 1e-8;
    int max_subdivisions = 200;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    int subdivisions = 0;
    bool converged = false;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]: the interval with the largest
/// error estimate is bisected until the total error meets the tolerances.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg = {});

/// Integral over (0, inf) via u = s / (1 - s), s in (0, 1).
QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureConfig& cfg = {});

}  // namespace pusurv
