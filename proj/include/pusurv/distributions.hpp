#pragma once

// Survival and censoring time families, all driven by a regression-linked rate.
//
//   Exponential  p(t) = l exp(-l t)
//   Gamma        p(t) = l^a t^(a-1) exp(-l t) / Gamma(a)      (rate parameterization)
//   Weibull      p(t) = a t^(a-1) l exp(-l t^a)               (l is not raised to a)
//
// Shape 1 Gamma and shape 1 Weibull are the exponential.

#include "pusurv/quadrature.hpp"

namespace pusurv {

enum class Family { Exponential, Gamma, Weibull };

struct DistributionSpec {
    Family family = Family::Exponential;
    double shape = 1.0;  // ignored for Exponential

    static DistributionSpec exponential() { return {Family::Exponential, 1.0}; }
    static DistributionSpec gamma(double shape) { return {Family::Gamma, shape}; }
    static DistributionSpec weibull(double shape) { return {Family::Weibull, shape}; }

    double effective_shape() const { return family == Family::Exponential ? 1.0 : shape; }
    /// True for the exponential and any shape 1 spec.
    bool is_exponential() const { return effective_shape() == 1.0; }
};

double pdf(const DistributionSpec& spec, double rate, double t);
double cdf(const DistributionSpec& spec, double rate, double t);
/// 1 - cdf, evaluated without cancellation.
double survival(const DistributionSpec& spec, double rate, double t);

/// P(t < c | x) = 1 - int_0^inf p_t(u) F_c(u) du for independent t and c.
/// Closed forms for exponential x exponential and gamma x exponential, quadrature
/// otherwise. Throws QuadratureError if the integral misses its tolerance.
double event_probability(const DistributionSpec& t_spec, const DistributionSpec& c_spec, double lambda_t,
                         double lambda_c, const QuadratureConfig& quad = {});

/// Same quantity, always by numerical integration.
double event_probability_quadrature(const DistributionSpec& t_spec, const DistributionSpec& c_spec,
                                    double lambda_t, double lambda_c, const QuadratureConfig& quad = {});

}  // namespace pusurv
