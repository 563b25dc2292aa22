#include "pusurv/simulation.hpp"

#include "pusurv/dataset_io.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace pusurv {

DgpConfig DgpConfig::study(std::size_t n_raw, std::uint64_t seed) {
    DgpConfig c;
    c.theta_t_true = (Vector(2) << 2.0, 1.0).finished();
    c.theta_c_true = (Vector(2) << 1.0, 0.5).finished();
    c.x_mean = (Vector(2) << 0.7, 0.4).finished();
    c.x_cov = (Matrix(2, 2) << 0.3, -0.1, -0.1, 0.2).finished();
    c.n_raw = n_raw;
    c.seed = seed;
    return c;
}

void DgpConfig::validate() const {
    const auto p = x_mean.size();
    if (p == 0 || theta_t_true.size() != p || theta_c_true.size() != p || x_cov.rows() != p || x_cov.cols() != p) {
        throw std::invalid_argument("DGP: theta_t_true, theta_c_true, x_mean and x_cov must share one dimension");
    }
    if (!x_cov.isApprox(x_cov.transpose())) throw std::invalid_argument("DGP: x_cov must be symmetric");
    auto in_unit = [](double f) { return f > 0.0 && f <= 1.0; };
    if (!in_unit(label_fraction_d1) || !in_unit(keep_fraction_d2) || !in_unit(split_fraction)) {
        throw std::invalid_argument("DGP: fractions must lie in (0, 1]");
    }
    if (n_raw == 0) throw std::invalid_argument("DGP: n_raw must be positive");
}

void label_population(SimulationOutput& out, const DgpConfig& cfg, Rng& rng) {
    const std::size_t n = out.population.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle_indices(order);
    const auto n1 = static_cast<std::size_t>(std::llround(cfg.split_fraction * static_cast<double>(n)));
    std::vector<std::size_t> d1(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n1));
    std::vector<std::size_t> d2(order.begin() + static_cast<std::ptrdiff_t>(n1), order.end());
    std::sort(d1.begin(), d1.end());
    std::sort(d2.begin(), d2.end());

    std::vector<std::size_t> d1_events;
    for (std::size_t i : d1) {
        if (out.population[i].y_true == 1) d1_events.push_back(i);
    }
    const auto n_pos = static_cast<std::size_t>(cfg.label_fraction_d1 * static_cast<double>(d1_events.size()));
    const auto n_unl = static_cast<std::size_t>(cfg.keep_fraction_d2 * static_cast<double>(d2.size()));
    const std::vector<std::size_t> positives = rng.sample(d1_events, n_pos);
    const std::vector<std::size_t> unlabeled = rng.sample(d2, n_unl);

    out.dataset = Dataset{};
    out.truth.clear();
    out.dataset.dimension = static_cast<std::size_t>(cfg.x_mean.size());
    out.dataset.c_observed_for_labeled = cfg.c_observed_for_labeled;
    auto emit = [&](std::size_t i, int label) {
        const GroundTruthRecord& g = out.population[i];
        SubjectRecord r = g.record;
        r.label = label;
        if (label == 1) {
            if (!cfg.c_observed_for_labeled) r.censoring_time.reset();
        } else {
            r.survival_time.reset();
        }
        out.dataset.records.push_back(std::move(r));
        out.truth.push_back(g);
    };
    for (std::size_t i : positives) emit(i, 1);
    for (std::size_t i : unlabeled) emit(i, 0);
    out.no_labeled_events = positives.empty();
}

SimulationOutput generate(const DgpConfig& cfg) {
    cfg.validate();
    const Eigen::LLT<Matrix> llt(cfg.x_cov);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("DGP: Cholesky failed, x_cov is not positive definite");
    const Matrix chol = llt.matrixL();
    const auto p = cfg.x_mean.size();

    Rng rng(cfg.seed);
    SimulationOutput out;
    out.population.resize(cfg.n_raw);
    Vector z(p);
    for (auto& g : out.population) {
        for (Eigen::Index k = 0; k < p; ++k) z[k] = rng.normal();
        g.record.covariates = cfg.x_mean + chol * z;
        g.lambda_t = link_rate(g.record.covariates, cfg.theta_t_true);
        g.lambda_c = link_rate(g.record.covariates, cfg.theta_c_true);
        const double t = rng.exponential(g.lambda_t);
        const double c = rng.exponential(g.lambda_c);
        g.record.survival_time = t;
        g.record.censoring_time = c;
        g.y_true = t < c ? 1 : 0;
        g.record.true_event_indicator = g.y_true;
    }

    label_population(out, cfg, rng);
    return out;
}

double empirical_event_rate(const std::vector<GroundTruthRecord>& truth) {
    if (truth.empty()) throw std::invalid_argument("empirical_event_rate: empty truth list");
    std::size_t events = 0;
    for (const auto& g : truth) events += g.y_true == 1 ? 1 : 0;
    return static_cast<double>(events) / static_cast<double>(truth.size());
}

void write_truth_csv(std::ostream& out, const SimulationOutput& sim) {
    out << "id,t,c";
    for (std::size_t k = 1; k <= sim.dataset.dimension; ++k) out << ",x" << k;
    out << ",lambda_t,lambda_c,y,s\n";
    for (std::size_t i = 0; i < sim.truth.size(); ++i) {
        const GroundTruthRecord& g = sim.truth[i];
        out << i + 1 << ',' << format_double(*g.record.survival_time) << ',' << format_double(*g.record.censoring_time);
        for (double v : g.record.covariates) out << ',' << format_double(v);
        out << ',' << format_double(g.lambda_t) << ',' << format_double(g.lambda_c) << ',' << g.y_true << ','
            << sim.dataset.records[i].label << '\n';
    }
}

}  // namespace pusurv
