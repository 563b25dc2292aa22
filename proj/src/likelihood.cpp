#include "pusurv/likelihood.hpp"

#include <cmath>
#include <span>

namespace pusurv {

namespace {

struct Weights {
    double a, b, w;
};

double require(const std::optional<double>& v, const char* field, std::size_t i, const ModelVariant& variant) {
    if (!v) {
        throw LikelihoodError(std::string("record ") + std::to_string(i) + ": " + field + " required by variant " +
                                  variant_name(variant),
                              i);
    }
    return *v;
}

// (a, b, w) of the exposure form for one record.
Weights record_weights(const SubjectRecord& r, std::size_t i, const ModelVariant& v, ObjectiveTarget target) {
    const double s = r.label == 1 ? 1.0 : 0.0;
    // Time the record was at risk: t for labeled rows, c for unlabeled rows.
    auto at_risk = [&] {
        return r.label == 1 ? require(r.survival_time, "survival time", i, v)
                            : require(r.censoring_time, "censoring time", i, v);
    };

    if (v.estimator == Estimator::Pusa) {
        if (target == ObjectiveTarget::ThetaT) {
            if (r.label != 1) return {0.0, 0.0, 0.0};
            return {1.0, 0.0, require(r.survival_time, "survival time", i, v)};
        }
        if (v.censoring_mode == CensoringMode::CObserved) {
            return {s, 1.0, require(r.censoring_time, "censoring time", i, v)};
        }
        return {s, 1.0 - s, at_risk()};
    }

    if (target == ObjectiveTarget::ThetaT) return {1.0, 0.0, at_risk()};
    if (v.censoring_mode == CensoringMode::CObserved) {
        return {1.0, s, require(r.censoring_time, "censoring time", i, v)};
    }
    return {1.0, 0.0, at_risk()};
}

}  // namespace

BlockObjective::BlockObjective(const Dataset& dataset, ModelVariant variant, ObjectiveTarget target,
                               const ParamVector& other_block) {
    const std::size_t p = dataset.dimension;
    if (static_cast<std::size_t>(other_block.size()) != p) {
        throw std::invalid_argument("parameter length must equal dataset dimension");
    }
    problem_.p = p;
    problem_.reserve(dataset.size());

    std::vector<std::size_t> rows;
    rows.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& r = dataset.records[i];
        if (static_cast<std::size_t>(r.covariates.size()) != p) {
            throw LikelihoodError("record " + std::to_string(i) + ": covariate length mismatch", i);
        }
        const Weights wt = record_weights(r, i, variant, target);
        if (wt.a == 0.0 && wt.b == 0.0 && wt.w == 0.0) continue;
        problem_.nu.push_back(r.covariates.dot(other_block));
        problem_.a.push_back(wt.a);
        problem_.b.push_back(wt.b);
        problem_.w.push_back(wt.w);
        problem_.source_index.push_back(i);
        rows.push_back(i);
    }
    problem_.n = rows.size();
    problem_.x.resize(problem_.n * p);
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto& x = dataset.records[rows[j]].covariates;
        for (std::size_t k = 0; k < p; ++k) problem_.x[k * problem_.n + j] = x[static_cast<Eigen::Index>(k)];
    }
}

kernels::ExposureSums BlockObjective::evaluate(const ParamVector& theta, kernels::Want want) const {
    if (static_cast<std::size_t>(theta.size()) != problem_.p) {
        throw std::invalid_argument("parameter length must equal dataset dimension");
    }
    auto sums = kernels::evaluate(problem_, std::span<const double>(theta.data(), problem_.p), want);
    bool finite = std::isfinite(sums.loglik);
    if (want != kernels::Want::Value) finite = finite && sums.gradient.allFinite();
    if (want == kernels::Want::Information) finite = finite && sums.information.allFinite();
    if (!finite) throw_non_finite(theta);
    return sums;
}

void BlockObjective::throw_non_finite(const ParamVector& theta) const {
    const std::size_t n = problem_.n;
    for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t k = 0; k < problem_.p; ++k) eta += problem_.x[k * n + i] * theta[static_cast<Eigen::Index>(k)];
        const auto t = kernels::record_terms(eta, problem_.nu[i], problem_.a[i], problem_.b[i], problem_.w[i]);
        if (!std::isfinite(t.loglik) || !std::isfinite(t.score) || !std::isfinite(t.information)) {
            const std::size_t row = problem_.source_index[i];
            throw LikelihoodError("non-finite log-likelihood term at record " + std::to_string(row), row);
        }
    }
    throw LikelihoodError("non-finite log-likelihood sum", n);
}

double BlockObjective::value(const ParamVector& theta) const { return -evaluate(theta, kernels::Want::Value).loglik; }

Vector BlockObjective::gradient(const ParamVector& theta) const {
    return -evaluate(theta, kernels::Want::Gradient).gradient;
}

Matrix BlockObjective::information(const ParamVector& theta) const {
    return evaluate(theta, kernels::Want::Information).information;
}

namespace {

BlockObjective make_block(const LikelihoodContext& ctx, ObjectiveTarget target) {
    const auto& other = target == ObjectiveTarget::ThetaT ? ctx.theta_c : ctx.theta_t;
    return BlockObjective(ctx.dataset, ctx.variant, target, other);
}

const ParamVector& own(const LikelihoodContext& ctx, ObjectiveTarget target) {
    return target == ObjectiveTarget::ThetaT ? ctx.theta_t : ctx.theta_c;
}

}  // namespace

double neg_loglik(const LikelihoodContext& ctx, ObjectiveTarget target) {
    return make_block(ctx, target).value(own(ctx, target));
}

Vector grad(const LikelihoodContext& ctx, ObjectiveTarget target) {
    return make_block(ctx, target).gradient(own(ctx, target));
}

Matrix neg_hessian(const LikelihoodContext& ctx, ObjectiveTarget target) {
    return make_block(ctx, target).information(own(ctx, target));
}

}  // namespace pusurv
