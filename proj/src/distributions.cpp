#include "pusurv/distributions.hpp"

#include "pusurv/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pusurv {

namespace {

void check(const DistributionSpec& spec, double rate, double t) {
    if (!(spec.effective_shape() > 0.0) || !std::isfinite(spec.shape)) {
        throw std::invalid_argument("distribution shape must be positive and finite");
    }
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("rate must be positive and finite");
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive, got " + std::to_string(t));
}

}  // namespace

double pdf(const DistributionSpec& spec, double rate, double t) {
    check(spec, rate, t);
    if (std::isinf(t)) return 0.0;
    const double a = spec.effective_shape();
    switch (spec.family) {
        case Family::Exponential:
            return rate * std::exp(-rate * t);
        case Family::Gamma:
            if (a == 1.0) return rate * std::exp(-rate * t);
            return std::exp(a * std::log(rate) + (a - 1.0) * std::log(t) - rate * t - std::lgamma(a));
        case Family::Weibull:
            if (a == 1.0) return rate * std::exp(-rate * t);
            return a * std::pow(t, a - 1.0) * rate * std::exp(-rate * std::pow(t, a));
    }
    return 0.0;
}

double survival(const DistributionSpec& spec, double rate, double t) {
    check(spec, rate, t);
    const double a = spec.effective_shape();
    switch (spec.family) {
        case Family::Exponential:
            return std::exp(-rate * t);
        case Family::Gamma:
            if (a == 1.0) return std::exp(-rate * t);
            return regularized_gamma_q(a, rate * t);
        case Family::Weibull:
            if (a == 1.0) return std::exp(-rate * t);
            return std::exp(-rate * std::pow(t, a));
    }
    return 0.0;
}

double cdf(const DistributionSpec& spec, double rate, double t) {
    check(spec, rate, t);
    const double a = spec.effective_shape();
    switch (spec.family) {
        case Family::Exponential:
            return -std::expm1(-rate * t);
        case Family::Gamma:
            if (a == 1.0) return -std::expm1(-rate * t);
            return regularized_gamma_p(a, rate * t);
        case Family::Weibull:
            if (a == 1.0) return -std::expm1(-rate * t);
            return -std::expm1(-rate * std::pow(t, a));
    }
    return 0.0;
}

double event_probability(const DistributionSpec& t_spec, const DistributionSpec& c_spec, double lambda_t,
                         double lambda_c, const QuadratureConfig& quad) {
    if (!(lambda_t > 0.0) || !(lambda_c > 0.0)) throw std::invalid_argument("rates must be positive");
    const bool gamma_like_t = t_spec.family != Family::Weibull || t_spec.is_exponential();
    if (c_spec.is_exponential() && gamma_like_t) {
        const double ratio = lambda_t / (lambda_t + lambda_c);
        return t_spec.is_exponential() ? ratio : std::pow(ratio, t_spec.effective_shape());
    }
    return event_probability_quadrature(t_spec, c_spec, lambda_t, lambda_c, quad);
}

double event_probability_quadrature(const DistributionSpec& t_spec, const DistributionSpec& c_spec,
                                    double lambda_t, double lambda_c, const QuadratureConfig& quad) {
    if (!(lambda_t > 0.0) || !(lambda_c > 0.0)) throw std::invalid_argument("rates must be positive");
    if (!(quad.abs_tolerance > 0.0) || !(quad.rel_tolerance > 0.0)) {
        throw std::invalid_argument("quadrature tolerances must be positive");
    }
    // 1 - int p_t F_c == int p_t (1 - F_c); the latter avoids cancellation for rare events.
    auto integrand = [&](double u) {
        if (!(u > 0.0)) return 0.0;
        const double density = pdf(t_spec, lambda_t, u);
        return density == 0.0 ? 0.0 : density * survival(c_spec, lambda_c, u);
    };
    const QuadratureResult r = integrate_semi_infinite(integrand, quad);
    if (!r.converged) {
        throw QuadratureError("event probability quadrature did not converge (error estimate " +
                                  std::to_string(r.error) + ")",
                              r.error);
    }
    return r.value;
}

}  // namespace pusurv
