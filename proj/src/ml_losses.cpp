#include "pusurv/ml_losses.hpp"

#include "pusurv/rng.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pusurv {

double RiskFunction::operator()(const Vector& x) const {
    if (x.size() != params.size()) throw std::invalid_argument("risk function: covariate length mismatch");
    return x.dot(params);
}

std::vector<std::size_t> risk_set(const std::vector<double>& times, std::size_t i) {
    if (i >= times.size()) throw std::out_of_range("risk_set: index out of range");
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!std::isfinite(times[j])) throw std::invalid_argument("risk_set: non-finite time");
        if (times[j] >= times[i]) out.push_back(j);
    }
    return out;
}

double weighted_cox_loss(const std::vector<double>& times, const std::vector<double>& eta,
                         const std::vector<double>& weights, std::vector<double>* d_eta) {
    const std::size_t n = times.size();
    if (eta.size() != n || weights.size() != n) throw std::invalid_argument("cox loss: length mismatch");
    if (n == 0) throw std::invalid_argument("no labeled events");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] > times[b]; });
    const double shift = *std::max_element(eta.begin(), eta.end());

    // Walk from the latest time; each tie group joins the risk sum before any of its members is scored.
    std::vector<double> log_risk(n);
    std::vector<double> risk_sum(n);
    double running = 0.0;
    for (std::size_t g = 0; g < n;) {
        std::size_t end = g;
        while (end < n && times[order[end]] == times[order[g]]) running += std::exp(eta[order[end++]] - shift);
        for (std::size_t k = g; k < end; ++k) {
            risk_sum[order[k]] = running;
            log_risk[order[k]] = std::log(running) + shift;
        }
        g = end;
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += weights[i] * (log_risk[i] - eta[i]);
    loss /= static_cast<double>(n);

    if (d_eta) {
        // d/d eta_j = (1/n) [ exp(eta_j) sum_{i : t_i <= t_j} w_i / S_i - w_j ]
        d_eta->assign(n, 0.0);
        double acc = 0.0;
        for (std::size_t g = n; g > 0;) {
            std::size_t begin = g;
            while (begin > 0 && times[order[begin - 1]] == times[order[g - 1]]) {
                --begin;
                acc += weights[order[begin]] / risk_sum[order[begin]];
            }
            for (std::size_t k = begin; k < g; ++k) {
                const std::size_t j = order[k];
                (*d_eta)[j] = (std::exp(eta[j] - shift) * acc - weights[j]) / static_cast<double>(n);
            }
            g = begin;
        }
    }
    return loss;
}

namespace {

struct LabeledView {
    std::vector<std::size_t> rows;
    std::vector<double> times;
};

LabeledView labeled_view(const Dataset& data) {
    LabeledView v;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const auto& r = data.records[i];
        if (r.label != 1) continue;
        if (!r.survival_time) throw LossError("labeled record without survival time", i);
        v.rows.push_back(i);
        v.times.push_back(*r.survival_time);
    }
    if (v.rows.empty()) throw std::invalid_argument("no labeled events");
    return v;
}

std::vector<double> inverse(const std::vector<double>& probs, const std::vector<std::size_t>& rows) {
    std::vector<double> w(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (!(probs[k] > 0.0)) throw LossError("zero event probability", rows[k]);
        w[k] = 1.0 / probs[k];
    }
    return w;
}

double cox_loss_at(const Dataset& data, const LabeledView& view, const Vector& theta, const std::vector<double>& w,
                   Vector* grad) {
    std::vector<double> eta(view.rows.size());
    for (std::size_t k = 0; k < eta.size(); ++k) eta[k] = data.records[view.rows[k]].covariates.dot(theta);
    std::vector<double> d_eta;
    const double loss = weighted_cox_loss(view.times, eta, w, grad ? &d_eta : nullptr);
    if (grad) {
        grad->setZero(theta.size());
        for (std::size_t k = 0; k < eta.size(); ++k) *grad += d_eta[k] * data.records[view.rows[k]].covariates;
    }
    return loss;
}

int discrete_period(const SubjectRecord& r, std::size_t row) {
    const double t = *r.survival_time;
    if (!(t >= 1.0) || t != std::floor(t) || t > 1e9) throw LossError("discrete survival times must be integers >= 1", row);
    return static_cast<int>(t);
}

double logistic(double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// log(logistic(z)) and log(1 - logistic(z)) without cancellation.
double log_logistic(double z) { return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

}  // namespace

std::vector<double> cox_event_probabilities(const Dataset& data, const RiskFunction& g, const KnownCensoringModel& cm) {
    std::vector<double> out;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const auto& r = data.records[i];
        if (r.label != 1) continue;
        const double lt = std::exp(g(r.covariates));
        const double lc = cm.rate(r.covariates);
        if (!(lt > 0.0) || !std::isfinite(lt)) throw LossError("event rate is zero or infinite", i);
        out.push_back(event_probability(DistributionSpec::exponential(), cm.spec, lt, lc));
    }
    return out;
}

double pu_cox_loss(const Dataset& data, const RiskFunction& g, const KnownCensoringModel& cm) {
    const LabeledView view = labeled_view(data);
    const std::vector<double> w = inverse(cox_event_probabilities(data, g, cm), view.rows);
    return cox_loss_at(data, view, g.params, w, nullptr);
}

double discrete_hazard(std::size_t tau, const Vector& x, const DiscreteHazardParams& hp) {
    if (tau < 1 || tau > hp.periods()) throw std::out_of_range("discrete_hazard: period outside 1..J");
    if (x.size() != hp.beta.size()) throw std::invalid_argument("discrete_hazard: covariate length mismatch");
    return logistic(hp.alpha[static_cast<Eigen::Index>(tau - 1)] + hp.beta.dot(x));
}

double discrete_event_probability(const Vector& x, const DiscreteHazardParams& hp, double lambda_c) {
    if (!(lambda_c > 0.0)) throw std::invalid_argument("censoring rate must be positive");
    if (hp.periods() == 0) throw std::invalid_argument("discrete hazard needs at least one period");
    // P(C > k) = (1 - q)^k = exp(-lambda_c k)
    const double bx = hp.beta.dot(x);
    double surv = 1.0;  // P(T > k - 1)
    double total = 0.0;
    const std::size_t J = hp.periods();
    for (std::size_t k = 1; k <= J; ++k) {
        const double h = logistic(hp.alpha[static_cast<Eigen::Index>(k - 1)] + bx);
        total += surv * h * std::exp(-lambda_c * static_cast<double>(k));
        surv *= 1.0 - h;
    }
    const double h = logistic(hp.alpha[static_cast<Eigen::Index>(J - 1)] + bx);
    const double keep = std::exp(-lambda_c);
    // sum_{k > J} S(J) h (1-h)^(k-J-1) (1-q)^k
    total += surv * h * std::exp(-lambda_c * static_cast<double>(J + 1)) / (1.0 - (1.0 - h) * keep);
    return total;
}

double weighted_logit_loss(const Dataset& data, const DiscreteHazardParams& hp, const std::vector<double>& weights,
                           Vector* grad) {
    const std::size_t J = hp.periods();
    const auto p = hp.beta.size();
    if (J == 0) throw std::invalid_argument("discrete hazard needs at least one period");
    if (grad) grad->setZero(static_cast<Eigen::Index>(J) + p);
    double loss = 0.0;
    std::size_t n1 = 0;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const auto& r = data.records[i];
        if (r.label != 1) continue;
        if (n1 >= weights.size()) throw std::invalid_argument("logit loss: fewer weights than labeled records");
        const double w = weights[n1++];
        const int T = discrete_period(r, i);
        const double bx = hp.beta.dot(r.covariates);
        double term = 0.0;
        for (int k = 1; k <= T; ++k) {
            const std::size_t slot = std::min<std::size_t>(static_cast<std::size_t>(k), J) - 1;
            const double z = hp.alpha[static_cast<Eigen::Index>(slot)] + bx;
            const bool event = k == T;
            const double ll = event ? log_logistic(z) : log_logistic(-z);
            if (!std::isfinite(ll)) throw LossError("hazard saturated at a needed period", i);
            term += ll;
            if (grad) {
                // d(-ll)/dz = h - y
                const double dz = w * (logistic(z) - (event ? 1.0 : 0.0));
                (*grad)[static_cast<Eigen::Index>(slot)] += dz;
                grad->tail(p) += dz * r.covariates;
            }
        }
        loss -= w * term;
    }
    if (n1 == 0) throw std::invalid_argument("no labeled events");
    if (n1 != weights.size()) throw std::invalid_argument("logit loss: more weights than labeled records");
    if (grad) *grad /= static_cast<double>(n1);
    return loss / static_cast<double>(n1);
}

namespace {

std::vector<double> logit_event_probabilities(const Dataset& data, const DiscreteHazardParams& hp,
                                              const KnownCensoringModel& cm) {
    if (!cm.spec.is_exponential()) throw std::invalid_argument("discrete losses need exponential (geometric) censoring");
    std::vector<double> out;
    for (const auto& r : data.records) {
        if (r.label == 1) out.push_back(discrete_event_probability(r.covariates, hp, cm.rate(r.covariates)));
    }
    return out;
}

std::vector<std::size_t> labeled_rows(const Dataset& data) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        if (data.records[i].label == 1) rows.push_back(i);
    }
    if (rows.empty()) throw std::invalid_argument("no labeled events");
    return rows;
}

DiscreteHazardParams unpack(const Vector& params, std::size_t J) {
    DiscreteHazardParams hp;
    hp.alpha = params.head(static_cast<Eigen::Index>(J));
    hp.beta = params.tail(params.size() - static_cast<Eigen::Index>(J));
    return hp;
}

}  // namespace

double pu_logit_loss(const Dataset& data, const DiscreteHazardParams& hp, const KnownCensoringModel& cm) {
    const std::vector<double> w = inverse(logit_event_probabilities(data, hp, cm), labeled_rows(data));
    return weighted_logit_loss(data, hp, w);
}

DiscreteHazardParams LossFit::hazard(std::size_t dimension) const {
    if (kind != LossKind::Logit) throw std::logic_error("hazard() on a Cox fit");
    return unpack(params, static_cast<std::size_t>(params.size()) - dimension);
}

LossFit fit_loss(const Dataset& data, LossKind kind, const KnownCensoringModel& cm, const LossFitOptions& opts) {
    const std::vector<std::size_t> rows = labeled_rows(data);
    const std::size_t p = data.dimension;
    if (static_cast<std::size_t>(cm.theta_c.size()) != p) throw std::invalid_argument("censoring model dimension mismatch");

    std::size_t J = 0;
    if (kind == LossKind::Logit) {
        J = opts.periods;
        if (J == 0) {
            for (std::size_t i : rows) J = std::max<std::size_t>(J, static_cast<std::size_t>(discrete_period(data.records[i], i)));
        }
    }
    const auto dim = static_cast<Eigen::Index>(J + p);

    auto weights_at = [&](const Vector& params) {
        if (kind == LossKind::Cox) {
            return inverse(cox_event_probabilities(data, RiskFunction{RiskFunction::Kind::Linear, params}, cm), rows);
        }
        return inverse(logit_event_probabilities(data, unpack(params, J), cm), rows);
    };
    const LabeledView view = kind == LossKind::Cox ? labeled_view(data) : LabeledView{};

    LossFit fit;
    fit.kind = kind;
    fit.params = Vector::Zero(dim);
    if (opts.frozen_weight_params && opts.frozen_weight_params->size() != dim) {
        throw std::invalid_argument("frozen weight parameters have the wrong length");
    }
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        const std::vector<double> w = weights_at(opts.frozen_weight_params ? *opts.frozen_weight_params : fit.params);
        ValueAndGradient fg;
        if (kind == LossKind::Cox) {
            fg = [&](const Vector& theta, Vector& g) { return cox_loss_at(data, view, theta, w, &g); };
        } else {
            fg = [&](const Vector& params, Vector& g) { return weighted_logit_loss(data, unpack(params, J), w, &g); };
        }
        const MinimizeResult r = minimize(fg, fit.params, opts.inner);
        const double change = (r.argmin - fit.params).lpNorm<Eigen::Infinity>();
        fit.params = r.argmin;
        fit.loss = r.value;
        fit.iterations = iter;
        fit.trace.push_back(fit.params);
        if (opts.frozen_weight_params || change <= opts.tolerance) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

SimulationOutput generate_discrete(const DgpConfig& config, const DiscreteHazardParams& hp) {
    if (hp.beta.size() != config.x_mean.size()) throw std::invalid_argument("hazard dimension mismatch");
    if (hp.periods() == 0) throw std::invalid_argument("discrete hazard needs at least one period");
    SimulationOutput out = generate(config);
    // Times come from an independent stream; only the covariates and rates are reused.
    Rng rng(derive_seed(config.seed, 0xd15c7e7eULL));
    for (auto& g : out.population) {
        const Vector& x = g.record.covariates;
        std::size_t T = 1;
        while (rng.uniform() >= discrete_hazard(std::min(T, hp.periods()), x, hp)) ++T;
        const double c = std::ceil(rng.exponential(g.lambda_c));
        g.record.survival_time = static_cast<double>(T);
        g.record.censoring_time = c;
        g.y_true = static_cast<double>(T) < c ? 1 : 0;
        g.record.true_event_indicator = g.y_true;
    }
    Rng pick(derive_seed(config.seed, 0x1abe1ULL));
    label_population(out, config, pick);
    return out;
}

}  // namespace pusurv
