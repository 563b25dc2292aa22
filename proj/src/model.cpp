#include "pusurv/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pusurv {

std::vector<ModelVariant> all_variants() {
    return {
        {Estimator::Pusa, CensoringMode::CObserved},
        {Estimator::Pusa, CensoringMode::CUnobserved},
        {Estimator::Conventional, CensoringMode::CObserved},
        {Estimator::Conventional, CensoringMode::CUnobserved},
    };
}

std::string variant_name(const ModelVariant& v) {
    std::string name = v.estimator == Estimator::Pusa ? "pusa" : "conv";
    name += v.censoring_mode == CensoringMode::CObserved ? "-cobs" : "-cunobs";
    return name;
}

ModelVariant parse_variant(std::string_view name) {
    for (const auto& v : all_variants()) {
        if (variant_name(v) == name) return v;
    }
    throw std::invalid_argument("unknown model variant '" + std::string(name) +
                                "' (expected pusa-cobs, pusa-cunobs, conv-cobs or conv-cunobs)");
}

std::size_t Dataset::labeled_count() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.label == 1 ? 1 : 0;
    return n;
}

namespace {

bool valid_time(const std::optional<double>& v) { return !v || (std::isfinite(*v) && *v > 0.0); }

}  // namespace

std::vector<Violation> validate_dataset(const Dataset& d) {
    std::vector<Violation> out;
    auto flag = [&](std::size_t i, std::string rule) { out.push_back({i, std::move(rule)}); };

    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const auto& r = d.records[i];
        if (r.label != 0 && r.label != 1) {
            flag(i, "label must be 0 or 1");
            continue;
        }
        if (!valid_time(r.survival_time)) flag(i, "survival_time must be finite and > 0");
        if (!valid_time(r.censoring_time)) flag(i, "censoring_time must be finite and > 0");
        if (static_cast<std::size_t>(r.covariates.size()) != d.dimension) {
            flag(i, "covariate length must equal dataset dimension");
        } else if (!r.covariates.allFinite()) {
            flag(i, "covariates must be finite");
        }

        if (r.label == 1) {
            if (!r.survival_time) flag(i, "survival_time required under s=1");
            if (d.c_observed_for_labeled) {
                if (!r.censoring_time) {
                    flag(i, "censoring_time required under s=1 in c-observed mode");
                } else if (r.survival_time && !(*r.survival_time < *r.censoring_time)) {
                    flag(i, "t<c required under s=1");
                }
            } else if (r.censoring_time) {
                flag(i, "censoring_time must be absent under s=1 in c-unobserved mode");
            }
        } else {
            if (!r.censoring_time) flag(i, "censoring_time required under s=0");
            if (r.survival_time) flag(i, "survival_time must be absent under s=0");
        }
    }
    if (d.labeled_count() == 0) out.push_back({std::nullopt, "no labeled events (s=1)"});
    return out;
}

double link_rate(const Vector& x, const ParamVector& theta) {
    if (x.size() != theta.size()) {
        throw std::invalid_argument("link_rate: covariate length " + std::to_string(x.size()) +
                                    " != parameter length " + std::to_string(theta.size()));
    }
    return std::exp(x.dot(theta));
}

Dataset hide_labeled_censoring(const Dataset& d) {
    Dataset out = d;
    out.c_observed_for_labeled = false;
    for (auto& r : out.records) {
        if (r.label == 1) r.censoring_time.reset();
    }
    return out;
}

}  // namespace pusurv
