// pusurvive: command-line front end.
//
//   pusurvive simulate --config F --out D [--seed S] [--n-raw N]
//   pusurvive fit --data F --variant V [--simultaneous]
//   pusurvive fit --data F --loss cox|logit --theta-c a,b [--periods J]
//   pusurvive experiment --config F --out D [--workers K] [--replicates R]
//   pusurvive check-gradients [--seed S] [--contexts N]
//   pusurvive dp-sample --config F [--seed S]

#include "pusurv/config.hpp"
#include "pusurv/dataset_io.hpp"
#include "pusurv/dp_mixture.hpp"
#include "pusurv/estimator.hpp"
#include "pusurv/experiments.hpp"
#include "pusurv/gradient_check.hpp"
#include "pusurv/kernels/exposure.hpp"
#include "pusurv/ml_losses.hpp"
#include "pusurv/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

using namespace pusurv;
using nlohmann::ordered_json;

namespace {

ordered_json to_json(const Vector& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr));
    return a;
}

ordered_json optional_json(const std::optional<Vector>& v) { return v ? to_json(*v) : ordered_json(nullptr); }

int run_simulate(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> n_raw) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    DgpConfig dgp = cfg.dgp;
    if (seed) dgp.seed = *seed;
    if (n_raw) dgp.n_raw = *n_raw;
    const SimulationOutput sim = generate(dgp);
    std::filesystem::create_directories(out_dir);
    save_dataset(std::filesystem::path(out_dir) / "dataset.csv", sim.dataset);
    std::ofstream truth(std::filesystem::path(out_dir) / "truth.csv", std::ios::binary);
    write_truth_csv(truth, sim);
    if (sim.no_labeled_events) std::cerr << "warning: the dataset has no labeled events (s=1)\n";
    std::cout << "wrote " << sim.dataset.size() << " records (" << sim.dataset.labeled_count() << " labeled) to "
              << out_dir << "\n";
    return 0;
}

int run_fit(const std::string& data_path, const std::string& variant_name_arg, bool simultaneous) {
    const Dataset data = load_dataset(data_path);
    for (const Violation& v : validate_dataset(data)) {
        std::cerr << "invalid dataset: " << (v.record ? "record " + std::to_string(*v.record) + ": " : "") << v.rule
                  << "\n";
        return 1;
    }
    const ModelVariant variant = parse_variant(variant_name_arg);
    if (variant.censoring_mode != data.mode()) {
        std::cerr << "variant " << variant_name(variant) << " does not match the dataset's censoring mode\n";
        return 1;
    }
    const FitResult fit = simultaneous ? fit_simultaneous(data, variant) : fit_alternating(data, variant);
    ordered_json j;
    j["variant"] = variant_name(variant);
    j["method"] = simultaneous ? "simultaneous" : "alternating";
    j["converged"] = fit.converged;
    j["outer_iterations"] = fit.outer_iterations;
    j["inner_stalls"] = fit.inner_stalls;
    j["theta_t"] = to_json(fit.theta_t_hat);
    j["theta_c"] = to_json(fit.theta_c_hat);
    j["se_t"] = optional_json(fit.se_t);
    j["se_c"] = optional_json(fit.se_c);
    j["simd"] = kernels::to_string(kernels::active_simd_level());
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_fit_loss(const std::string& data_path, const std::string& loss, const std::vector<double>& theta_c,
                 std::size_t periods) {
    const Dataset data = load_dataset(data_path);
    KnownCensoringModel cm;
    cm.theta_c = Eigen::Map<const Vector>(theta_c.data(), static_cast<Eigen::Index>(theta_c.size()));
    LossFitOptions opts;
    opts.periods = periods;
    const LossKind kind = loss == "cox" ? LossKind::Cox : LossKind::Logit;
    const LossFit fit = fit_loss(data, kind, cm, opts);
    ordered_json j;
    j["loss"] = loss;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["value"] = fit.loss;
    if (kind == LossKind::Cox) {
        j["theta_t"] = to_json(fit.params);
    } else {
        const DiscreteHazardParams hp = fit.hazard(data.dimension);
        j["alpha"] = to_json(hp.alpha);
        j["beta"] = to_json(hp.beta);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_experiment(const std::string& config_path, const std::string& out_dir, std::optional<std::size_t> workers,
                   std::optional<std::size_t> replicates) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (workers) cfg.workers = *workers;
    if (replicates) cfg.replicates = *replicates;
    cfg.output_dir = out_dir;
    const ExperimentReport report = run_monte_carlo(cfg);
    for (ReportFormat f : {ReportFormat::Markdown, ReportFormat::Csv, ReportFormat::Json}) {
        for (const auto& path : emit_report(report, f, cfg.output_dir)) std::cout << "wrote " << path.string() << "\n";
    }
    for (const SizeReport& size : report.sizes) {
        for (const VariantSummary& vs : size.variants) {
            if (vs.excluded) {
                std::cerr << "n_raw=" << size.n_raw << " " << variant_name(vs.variant) << ": " << vs.excluded
                          << " replicate fits excluded\n";
            }
        }
    }
    return 0;
}

int run_check_gradients(std::uint64_t seed, std::size_t contexts) {
    const auto rows = check_gradients(seed, contexts);
    bool ok = true;
    std::cout << "variant      target   max_grad_rel_err  max_hess_rel_err\n";
    for (const auto& r : rows) {
        const bool pass = r.max_gradient_error <= 1e-6 && r.max_hessian_error <= 1e-4;
        ok = ok && pass;
        char line[160];
        std::snprintf(line, sizeof line, "%-12s %-8s %16.3e  %16.3e  %s\n", variant_name(r.variant).c_str(),
                      r.target == ObjectiveTarget::ThetaT ? "theta_t" : "theta_c", r.max_gradient_error,
                      r.max_hessian_error, pass ? "ok" : "FAIL");
        std::cout << line;
    }
    return ok ? 0 : 1;
}

int run_dp_sample(const std::string& config_path, std::optional<std::uint64_t> seed) {
    ConfigFile file = ConfigFile::load(config_path);
    const double alpha = file.real("dp_alpha").value_or(1.0);
    const auto truncation = static_cast<std::size_t>(file.integer("dp_truncation").value_or(20));
    BaseMeasure base;
    base.theta_mean = file.real("dp_theta_mean").value_or(base.theta_mean);
    base.theta_sd = file.real("dp_theta_sd").value_or(base.theta_sd);
    base.shape_log_mean = file.real("dp_shape_log_mean").value_or(base.shape_log_mean);
    base.shape_log_sd = file.real("dp_shape_log_sd").value_or(base.shape_log_sd);
    const std::size_t dimension = file.reals("x_mean").value_or(std::vector<double>{0.0, 0.0}).size();
    const auto draw_seed = seed.value_or(static_cast<std::uint64_t>(file.integer("dp_seed").value_or(1)));

    const PriorDraw draw = sample_prior(alpha, base, truncation, dimension, draw_seed);
    ordered_json j;
    j["alpha_dp"] = alpha;
    j["truncation"] = truncation;
    j["expected_unassigned_mass"] = expected_tail_mass(alpha, truncation - 1);
    j["base_measure"] = {{"theta_mean", base.theta_mean},
                         {"theta_sd", base.theta_sd},
                         {"shape_log_mean", base.shape_log_mean},
                         {"shape_log_sd", base.shape_log_sd}};
    j["weights"] = to_json(stick_weights(draw.sticks));
    ordered_json comps = ordered_json::array();
    for (std::size_t k = 0; k < draw.components.size(); ++k) {
        comps.push_back({{"shape", draw.components.shape[k]}, {"theta", to_json(draw.components.theta[k])}});
    }
    j["components"] = comps;
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive-unlabeled survival estimation"};
    app.require_subcommand(1);

    std::string config, out, data, variant = "pusa-cobs", loss;
    std::uint64_t seed = 1;
    std::size_t workers = 1, replicates = 0, n_raw = 0, contexts = 50, periods = 0;
    std::vector<double> theta_c;
    bool simultaneous = false;

    auto* simulate = app.add_subcommand("simulate", "Generate one synthetic PU dataset and its truth sidecar");
    simulate->add_option("--config", config, "Key-value config file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out, "Output directory")->required();
    auto* sim_seed = simulate->add_option("--seed", seed, "Override the config seed");
    auto* sim_n = simulate->add_option("--n-raw", n_raw, "Override the raw sample size");

    auto* fit = app.add_subcommand("fit", "Fit one model variant (or a PU loss) to a dataset");
    fit->add_option("--data", data, "Dataset (.csv or .json)")->required()->check(CLI::ExistingFile);
    fit->add_option("--variant", variant, "pusa-cobs, pusa-cunobs, conv-cobs or conv-cunobs");
    fit->add_flag("--simultaneous", simultaneous, "Joint BFGS instead of alternating blocks (experimental)");
    auto* loss_opt = fit->add_option("--loss", loss, "Fit a PU-weighted loss instead")->check(CLI::IsMember({"cox", "logit"}));
    fit->add_option("--theta-c", theta_c, "Known censoring coefficients for --loss")->delimiter(',');
    fit->add_option("--periods", periods, "Number of discrete periods J for --loss logit (default: max T)");

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo study over replicate datasets");
    experiment->add_option("--config", config, "Key-value config file")->required()->check(CLI::ExistingFile);
    experiment->add_option("--out", out, "Output directory")->required();
    auto* exp_workers = experiment->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    auto* exp_reps = experiment->add_option("--replicates", replicates, "Override the replicate count")->check(CLI::PositiveNumber);

    auto* gradients = app.add_subcommand("check-gradients", "Finite-difference audit of gradients and information");
    gradients->add_option("--seed", seed, "Seed for the random contexts");
    gradients->add_option("--contexts", contexts, "Random contexts per variant and block")->check(CLI::PositiveNumber);

    auto* dp = app.add_subcommand("dp-sample", "Draw stick-breaking weights and components from the prior");
    dp->add_option("--config", config, "Config file with dp_* keys")->required()->check(CLI::ExistingFile);
    auto* dp_seed = dp->add_option("--seed", seed, "Override dp_seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            return run_simulate(config, out, *sim_seed ? std::optional(seed) : std::nullopt,
                                *sim_n ? std::optional(n_raw) : std::nullopt);
        }
        if (*fit) {
            if (*loss_opt) {
                if (theta_c.empty()) throw std::invalid_argument("--loss needs --theta-c");
                return run_fit_loss(data, loss, theta_c, periods);
            }
            return run_fit(data, variant, simultaneous);
        }
        if (*experiment) {
            return run_experiment(config, out, *exp_workers ? std::optional(workers) : std::nullopt,
                                  *exp_reps ? std::optional(replicates) : std::nullopt);
        }
        if (*gradients) return run_check_gradients(seed, contexts);
        if (*dp) return run_dp_sample(config, *dp_seed ? std::optional(seed) : std::nullopt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
