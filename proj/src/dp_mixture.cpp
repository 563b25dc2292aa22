#include "pusurv/dp_mixture.hpp"

#include "pusurv/distributions.hpp"
#include "pusurv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pusurv {

namespace {

void check_mixture(const MixtureComponents& comps, const Vector& pi, const Vector& x) {
    if (comps.shape.size() != comps.theta.size()) throw std::invalid_argument("mixture: shape/theta count mismatch");
    if (comps.size() == 0) throw std::invalid_argument("mixture: no components");
    if (static_cast<std::size_t>(pi.size()) != comps.size()) throw std::invalid_argument("mixture: weight count mismatch");
    for (std::size_t k = 0; k < comps.size(); ++k) {
        if (!(comps.shape[k] > 0.0)) throw std::invalid_argument("mixture: shapes must be positive");
        if (comps.theta[k].size() != x.size()) throw std::invalid_argument("mixture: covariate length mismatch");
        if (!(pi[static_cast<Eigen::Index>(k)] >= 0.0)) throw std::invalid_argument("mixture: negative weight");
    }
}

}  // namespace

Vector stick_weights(const StickBreaking& sb) {
    const std::size_t K = sb.truncation;
    if (K < 1) throw std::invalid_argument("stick_weights: truncation must be >= 1");
    if (static_cast<std::size_t>(sb.v.size()) + 1 < K) {
        throw std::invalid_argument("stick_weights: need at least K - 1 stick fractions");
    }
    Vector pi(static_cast<Eigen::Index>(K));
    double remaining = 1.0;
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double v = sb.v[static_cast<Eigen::Index>(k)];
        if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("stick_weights: fractions must lie in (0, 1)");
        pi[static_cast<Eigen::Index>(k)] = v * remaining;
        remaining -= pi[static_cast<Eigen::Index>(k)];
    }
    pi[static_cast<Eigen::Index>(K - 1)] = remaining;
    return pi;
}

double mixture_density(double t, const Vector& x, const MixtureComponents& comps, const Vector& pi) {
    check_mixture(comps, pi, x);
    double total = 0.0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        const double weight = pi[static_cast<Eigen::Index>(k)];
        if (weight == 0.0) continue;
        total += weight * pdf(DistributionSpec::gamma(comps.shape[k]), link_rate(x, comps.theta[k]), t);
    }
    return total;
}

double mixture_event_probability(const Vector& x, const MixtureComponents& comps, const Vector& pi, double lambda_c) {
    check_mixture(comps, pi, x);
    double total = 0.0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        const double weight = pi[static_cast<Eigen::Index>(k)];
        if (weight == 0.0) continue;
        total += weight * event_probability(DistributionSpec::gamma(comps.shape[k]), DistributionSpec::exponential(),
                                            link_rate(x, comps.theta[k]), lambda_c);
    }
    return total;
}

double mixture_event_probability_quadrature(const Vector& x, const MixtureComponents& comps, const Vector& pi,
                                            double lambda_c, const QuadratureConfig& quad) {
    check_mixture(comps, pi, x);
    if (!(lambda_c > 0.0)) throw std::invalid_argument("censoring rate must be positive");
    auto integrand = [&](double u) {
        if (!(u > 0.0)) return 0.0;
        const double density = mixture_density(u, x, comps, pi);
        return density == 0.0 ? 0.0 : density * std::exp(-lambda_c * u);
    };
    const QuadratureResult r = integrate_semi_infinite(integrand, quad);
    if (!r.converged) {
        throw QuadratureError("mixture event probability quadrature did not converge (error estimate " +
                                  std::to_string(r.error) + ")",
                              r.error);
    }
    return r.value;
}

PriorDraw sample_prior(double alpha_dp, const BaseMeasure& base, std::size_t truncation, std::size_t dimension,
                       std::uint64_t seed) {
    if (truncation < 1) throw std::invalid_argument("sample_prior: truncation must be >= 1");
    if (!(alpha_dp > 0.0)) throw std::invalid_argument("sample_prior: alpha_dp must be positive");
    if (!(base.theta_sd >= 0.0) || !(base.shape_log_sd >= 0.0)) {
        throw std::invalid_argument("sample_prior: base measure spreads must be non-negative");
    }
    Rng rng(seed);
    PriorDraw draw;
    draw.sticks.alpha_dp = alpha_dp;
    draw.sticks.truncation = truncation;
    draw.sticks.v.resize(static_cast<Eigen::Index>(truncation));
    for (std::size_t k = 0; k < truncation; ++k) {
        // Keep fractions strictly inside (0, 1) for the weight recursion.
        const double v = rng.beta_one(alpha_dp);
        draw.sticks.v[static_cast<Eigen::Index>(k)] = std::min(std::max(v, 1e-300), 1.0 - 0x1.0p-53);
    }
    draw.sticks.v[static_cast<Eigen::Index>(truncation - 1)] = 1.0;
    for (std::size_t k = 0; k < truncation; ++k) {
        ParamVector theta(static_cast<Eigen::Index>(dimension));
        for (std::size_t j = 0; j < dimension; ++j) theta[static_cast<Eigen::Index>(j)] = base.theta_mean + base.theta_sd * rng.normal();
        draw.components.theta.push_back(std::move(theta));
        draw.components.shape.push_back(std::exp(base.shape_log_mean + base.shape_log_sd * rng.normal()));
    }
    return draw;
}

double expected_tail_mass(double alpha_dp, std::size_t k) {
    if (!(alpha_dp > 0.0)) throw std::invalid_argument("alpha_dp must be positive");
    return std::pow(alpha_dp / (1.0 + alpha_dp), static_cast<double>(k));
}

}  // namespace pusurv
