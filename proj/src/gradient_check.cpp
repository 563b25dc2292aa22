#include "pusurv/gradient_check.hpp"

#include "pusurv/rng.hpp"

#include <algorithm>
#include <cmath>

namespace pusurv {

RandomContext random_context(CensoringMode mode, std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    RandomContext ctx;
    ctx.dataset.dimension = p;
    ctx.dataset.c_observed_for_labeled = mode == CensoringMode::CObserved;
    for (std::size_t i = 0; i < n; ++i) {
        SubjectRecord r;
        r.covariates.resize(static_cast<Eigen::Index>(p));
        for (std::size_t k = 0; k < p; ++k) r.covariates[static_cast<Eigen::Index>(k)] = 0.7 * rng.normal();
        r.label = i % 2 == 0 ? 1 : 0;
        if (r.label == 1) {
            const double t = rng.exponential(1.0);
            r.survival_time = t;
            if (ctx.dataset.c_observed_for_labeled) r.censoring_time = t + rng.exponential(1.0);
        } else {
            r.censoring_time = rng.exponential(1.0);
        }
        ctx.dataset.records.push_back(std::move(r));
    }
    ctx.theta_t.resize(static_cast<Eigen::Index>(p));
    ctx.theta_c.resize(static_cast<Eigen::Index>(p));
    for (std::size_t k = 0; k < p; ++k) {
        ctx.theta_t[static_cast<Eigen::Index>(k)] = 0.5 * rng.normal();
        ctx.theta_c[static_cast<Eigen::Index>(k)] = 0.5 * rng.normal();
    }
    return ctx;
}

double relative_error(const Matrix& analytic, const Matrix& numeric) {
    const double scale = std::max(numeric.lpNorm<Eigen::Infinity>(), 1.0);
    return (analytic - numeric).lpNorm<Eigen::Infinity>() / scale;
}

std::vector<GradientCheckRow> check_gradients(std::uint64_t seed, std::size_t contexts, std::size_t n, std::size_t p) {
    std::vector<GradientCheckRow> rows;
    for (ModelVariant variant : all_variants()) {
        for (ObjectiveTarget target : {ObjectiveTarget::ThetaT, ObjectiveTarget::ThetaC}) {
            GradientCheckRow row{variant, target};
            for (std::size_t c = 0; c < contexts; ++c) {
                const RandomContext ctx = random_context(variant.censoring_mode, n, p, derive_seed(seed, c));
                const bool is_t = target == ObjectiveTarget::ThetaT;
                const BlockObjective obj(ctx.dataset, variant, target, is_t ? ctx.theta_c : ctx.theta_t);
                const ParamVector theta = is_t ? ctx.theta_t : ctx.theta_c;

                Vector fd_grad(theta.size());
                Matrix fd_info(theta.size(), theta.size());
                for (Eigen::Index k = 0; k < theta.size(); ++k) {
                    const double h = 1e-5 * std::max(1.0, std::abs(theta[k]));
                    ParamVector up = theta, down = theta;
                    up[k] += h;
                    down[k] -= h;
                    fd_grad[k] = (obj.value(up) - obj.value(down)) / (2.0 * h);
                    fd_info.col(k) = (obj.gradient(up) - obj.gradient(down)) / (2.0 * h);
                }
                fd_info = 0.5 * (fd_info + fd_info.transpose()).eval();
                row.max_gradient_error = std::max(row.max_gradient_error, relative_error(obj.gradient(theta), fd_grad));
                row.max_hessian_error = std::max(row.max_hessian_error, relative_error(obj.information(theta), fd_info));
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace pusurv
