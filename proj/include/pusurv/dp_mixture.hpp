#pragma once

// Truncated stick-breaking mixture of gamma survival models.
//
//   pi_1 = V_1,  pi_k = V_k prod_{i<k} (1 - V_i),  V_k ~ Beta(1, alpha_dp),  V_K := 1
//   p(t | x) = sum_k pi_k Gamma(t; shape_k, rate exp(x' theta_k))
//   P(t < c | x) = sum_k pi_k (l_k / (l_k + l_c))^shape_k   for exponential censoring

#include "pusurv/quadrature.hpp"
#include "pusurv/model.hpp"

#include <cstdint>
#include <vector>

namespace pusurv {

struct StickBreaking {
    Vector v;  // length K or K - 1; an entry at index K - 1 is ignored (the last stick is closed)
    double alpha_dp = 1.0;
    std::size_t truncation = 1;
};

struct MixtureComponents {
    std::vector<double> shape;
    std::vector<ParamVector> theta;

    std::size_t size() const { return shape.size(); }
};

struct BaseMeasure {
    double theta_mean = 0.0;  // every coordinate of theta_k ~ Normal(theta_mean, theta_sd)
    double theta_sd = 1.0;
    double shape_log_mean = 0.0;  // log shape_k ~ Normal(shape_log_mean, shape_log_sd)
    double shape_log_sd = 0.5;
};

Vector stick_weights(const StickBreaking& sb);

double mixture_density(double t, const Vector& x, const MixtureComponents& comps, const Vector& pi);

double mixture_event_probability(const Vector& x, const MixtureComponents& comps, const Vector& pi, double lambda_c);

/// The same probability by integrating p_mix(t) S_c(t) numerically.
double mixture_event_probability_quadrature(const Vector& x, const MixtureComponents& comps, const Vector& pi,
                                            double lambda_c, const QuadratureConfig& quad = {});

struct PriorDraw {
    StickBreaking sticks;
    MixtureComponents components;
};

PriorDraw sample_prior(double alpha_dp, const BaseMeasure& base, std::size_t truncation, std::size_t dimension,
                       std::uint64_t seed);

/// E[mass beyond the first k sticks] = (alpha / (1 + alpha))^k.
double expected_tail_mass(double alpha_dp, std::size_t k);

}  // namespace pusurv
