#include "pusurv/estimator.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace pusurv {

namespace {

ParamVector init_or_zero(const ParamVector& v, std::size_t p) {
    if (v.size() == 0) return ParamVector::Zero(static_cast<Eigen::Index>(p));
    if (static_cast<std::size_t>(v.size()) != p) throw std::invalid_argument("initial value has wrong length");
    return v;
}

void require_identifiable(const Dataset& d) {
    if (d.labeled_count() == 0) throw std::invalid_argument("unidentifiable: no labeled events");
}

ValueAndGradient block_function(const BlockObjective& obj) {
    return [&obj](const Vector& theta, Vector& g) {
        try {
            const auto sums = obj.evaluate(theta, kernels::Want::Gradient);
            g = -sums.gradient;
            return -sums.loglik;
        } catch (const LikelihoodError&) {
            g.setConstant(theta.size(), std::numeric_limits<double>::quiet_NaN());
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
}

void finish(FitResult& res, const Dataset& d, ModelVariant variant) {
    res.info_t = BlockObjective(d, variant, ObjectiveTarget::ThetaT, res.theta_c_hat).information(res.theta_t_hat);
    res.info_c = BlockObjective(d, variant, ObjectiveTarget::ThetaC, res.theta_t_hat).information(res.theta_c_hat);
    res.se_t = asymptotic_se(res.info_t);
    res.se_c = asymptotic_se(res.info_c);
}

}  // namespace

double joint_neg_loglik(const Dataset& d, ModelVariant variant, const ParamVector& theta_t,
                        const ParamVector& theta_c) {
    // theta_t slice plus the theta_c-only terms of the theta_c slice.
    const double t_block = BlockObjective(d, variant, ObjectiveTarget::ThetaT, theta_c).value(theta_t);
    double c_only = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& r = d.records[i];
        const double eta_c = r.covariates.dot(theta_c);
        const double lc = std::exp(eta_c);
        const bool labeled = r.label == 1;
        auto at_risk = [&] { return labeled ? r.survival_time.value() : r.censoring_time.value(); };
        if (variant.estimator == Estimator::Pusa) {
            if (variant.censoring_mode == CensoringMode::CObserved) {
                c_only += eta_c - lc * r.censoring_time.value();
            } else {
                c_only += labeled ? -lc * r.survival_time.value() : eta_c - lc * r.censoring_time.value();
            }
        } else if (variant.censoring_mode == CensoringMode::CObserved) {
            c_only += (labeled ? eta_c : 0.0) - lc * r.censoring_time.value();
        } else {
            c_only += -lc * at_risk();
        }
    }
    return t_block - c_only;
}

FitResult fit_alternating(const Dataset& d, ModelVariant variant, const FitOptions& opts) {
    require_identifiable(d);
    if (!(opts.outer_tolerance > 0.0)) throw std::invalid_argument("outer tolerance must be positive");
    FitResult res;
    res.theta_t_hat = init_or_zero(opts.init_theta_t, d.dimension);
    res.theta_c_hat = init_or_zero(opts.init_theta_c, d.dimension);

    for (int iter = 1; iter <= opts.max_outer_iters; ++iter) {
        res.outer_iterations = iter;
        const ParamVector prev_t = res.theta_t_hat;
        const ParamVector prev_c = res.theta_c_hat;

        for (const char step : {'t', 'c'}) {
            const bool is_t = step == 't';
            const BlockObjective obj(d, variant, is_t ? ObjectiveTarget::ThetaT : ObjectiveTarget::ThetaC,
                                     is_t ? res.theta_c_hat : res.theta_t_hat);
            ParamVector& block = is_t ? res.theta_t_hat : res.theta_c_hat;
            try {
                const MinimizeResult m = minimize(block_function(obj), block, opts.inner);
                if (!m.converged()) ++res.inner_stalls;
                block = m.argmin;
            } catch (const MinimizerError& e) {
                throw FitError(std::string("step ") + step + ", outer iteration " + std::to_string(iter) + ": " +
                                   e.what(),
                               step, iter);
            }
        }

        res.trace.push_back(
            {res.theta_t_hat, res.theta_c_hat, joint_neg_loglik(d, variant, res.theta_t_hat, res.theta_c_hat)});
        const double change = std::max((res.theta_t_hat - prev_t).lpNorm<Eigen::Infinity>(),
                                       (res.theta_c_hat - prev_c).lpNorm<Eigen::Infinity>());
        if (change <= opts.outer_tolerance) {
            res.converged = true;
            break;
        }
    }
    finish(res, d, variant);
    return res;
}

FitResult fit_simultaneous(const Dataset& d, ModelVariant variant, const FitOptions& opts) {
    require_identifiable(d);
    const auto p = static_cast<Eigen::Index>(d.dimension);
    Vector init(2 * p);
    init << init_or_zero(opts.init_theta_t, d.dimension), init_or_zero(opts.init_theta_c, d.dimension);

    ValueAndGradient fg = [&](const Vector& z, Vector& g) {
        const ParamVector tt = z.head(p);
        const ParamVector tc = z.tail(p);
        g.resize(2 * p);
        try {
            g.head(p) = BlockObjective(d, variant, ObjectiveTarget::ThetaT, tc).gradient(tt);
            g.tail(p) = BlockObjective(d, variant, ObjectiveTarget::ThetaC, tt).gradient(tc);
            return joint_neg_loglik(d, variant, tt, tc);
        } catch (const LikelihoodError&) {
            g.setConstant(std::numeric_limits<double>::quiet_NaN());
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    FitResult res;
    try {
        const MinimizeResult m = minimize(fg, init, opts.inner);
        res.theta_t_hat = m.argmin.head(p);
        res.theta_c_hat = m.argmin.tail(p);
        res.converged = m.converged();
        res.outer_iterations = 1;
        res.inner_stalls = m.converged() ? 0 : 1;
    } catch (const MinimizerError& e) {
        throw FitError(std::string("simultaneous fit: ") + e.what(), 'j', 1);
    }
    res.trace.push_back({res.theta_t_hat, res.theta_c_hat, joint_neg_loglik(d, variant, res.theta_t_hat, res.theta_c_hat)});
    finish(res, d, variant);
    return res;
}

std::optional<Vector> asymptotic_se(const Matrix& info) {
    if (info.rows() != info.cols() || info.rows() == 0 || !info.allFinite()) return std::nullopt;
    const Eigen::LLT<Matrix> llt(0.5 * (info + info.transpose()));
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Matrix inverse = llt.solve(Matrix::Identity(info.rows(), info.cols()));
    Vector se = inverse.diagonal();
    for (Eigen::Index k = 0; k < se.size(); ++k) {
        if (!(se[k] > 0.0) || !std::isfinite(se[k])) return std::nullopt;
        se[k] = std::sqrt(se[k]);
    }
    return se;
}

double normal_quantile_for_level(double level) {
    if (level == 0.95) return 1.9600;
    if (level == 0.90) return 1.6449;
    throw std::invalid_argument("confidence level must be 0.90 or 0.95");
}

std::pair<double, double> confidence_interval(double theta_hat, double se, double level) {
    const double z = normal_quantile_for_level(level);
    if (!(se > 0.0)) throw std::invalid_argument("standard error must be positive");
    return {theta_hat - z * se, theta_hat + z * se};
}

}  // namespace pusurv
