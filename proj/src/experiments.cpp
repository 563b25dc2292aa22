#include "pusurv/experiments.hpp"

#include "pusurv/config.hpp"
#include "pusurv/dataset_io.hpp"
#include "pusurv/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pusurv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::string fixed(double v, int digits = 4) {
    if (!std::isfinite(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string level_label(double level) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%g%%", level * 100.0);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    dgp.validate();
    if (replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
    if (n_raw.empty()) throw std::invalid_argument("experiment: n_raw list is empty");
    for (double level : levels) normal_quantile_for_level(level);
    if (workers < 1) throw std::invalid_argument("experiment: workers must be >= 1");
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin) {
    ConfigFile file = ConfigFile::parse(text, origin);
    ExperimentConfig cfg;
    DgpConfig& dgp = cfg.dgp;

    if (auto v = file.text("rng"); v && *v != kRngAlgorithm) {
        throw ConfigError(origin + ": rng '" + *v + "' is not supported (this build implements " +
                          std::string(kRngAlgorithm) + ")");
    }
    if (auto v = file.reals("theta_t_true")) dgp.theta_t_true = to_vector(*v);
    if (auto v = file.reals("theta_c_true")) dgp.theta_c_true = to_vector(*v);
    if (auto v = file.reals("x_mean")) dgp.x_mean = to_vector(*v);
    if (auto v = file.reals("x_cov")) {
        const auto p = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v->size()))));
        if (p * p != static_cast<Eigen::Index>(v->size())) {
            throw ConfigError(origin + ": x_cov needs p*p comma-separated entries (row-major)");
        }
        dgp.x_cov = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v->data(), p, p);
    }
    if (auto v = file.reals("n_raw")) {
        cfg.n_raw.clear();
        for (double n : *v) {
            if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError(origin + ": n_raw entries must be positive integers");
            cfg.n_raw.push_back(static_cast<std::size_t>(n));
        }
        dgp.n_raw = cfg.n_raw.front();
    }
    if (auto v = file.real("label_fraction_d1")) dgp.label_fraction_d1 = *v;
    if (auto v = file.real("keep_fraction_d2")) dgp.keep_fraction_d2 = *v;
    if (auto v = file.real("split_fraction")) dgp.split_fraction = *v;
    if (auto v = file.boolean("c_observed_for_labeled")) dgp.c_observed_for_labeled = *v;
    if (auto v = file.integer("seed")) dgp.seed = static_cast<std::uint64_t>(*v);
    if (auto v = file.integer("replicates")) {
        if (*v < 1) throw ConfigError(origin + ": replicates must be >= 1");
        cfg.replicates = static_cast<std::size_t>(*v);
    }
    if (auto v = file.words("variants")) {
        cfg.variants.clear();
        for (const auto& name : *v) cfg.variants.push_back(parse_variant(name));
    }
    if (auto v = file.reals("levels")) cfg.levels = *v;
    if (auto v = file.integer("workers")) {
        if (*v < 1) throw ConfigError(origin + ": workers must be >= 1");
        cfg.workers = static_cast<std::size_t>(*v);
    }
    if (auto v = file.real("outer_tolerance")) cfg.fit.outer_tolerance = *v;
    if (auto v = file.integer("max_outer_iters")) cfg.fit.max_outer_iters = static_cast<int>(*v);
    if (auto v = file.text("output_dir")) cfg.output_dir = *v;
    // Keys read by other subcommands from the same file.
    for (const char* key : {"dp_alpha", "dp_truncation", "dp_theta_mean", "dp_theta_sd", "dp_shape_log_mean",
                            "dp_shape_log_sd", "dp_seed"}) {
        file.text(key);
    }
    file.require_all_used();
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str(), path.string());
}

std::vector<std::string> parameter_names(std::size_t dimension) {
    std::vector<std::string> names;
    for (const char* block : {"theta_t", "theta_c"}) {
        for (std::size_t k = 1; k <= dimension; ++k) names.push_back(block + std::to_string(k));
    }
    return names;
}

double rmse(const std::vector<double>& estimates, double truth) {
    if (estimates.empty()) throw std::invalid_argument("rmse: no estimates");
    double sum = 0.0;
    for (double e : estimates) sum += (e - truth) * (e - truth);
    return std::sqrt(sum / static_cast<double>(estimates.size()));
}

double coverage_rate(const std::vector<std::pair<double, double>>& intervals, double truth) {
    if (intervals.empty()) throw std::invalid_argument("coverage_rate: no intervals");
    std::size_t hits = 0;
    for (const auto& [lo, hi] : intervals) hits += (lo <= truth && truth <= hi) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(intervals.size());
}

double rmse_ratio(const Vector& pusa_rmse, const Vector& conventional_rmse) {
    if (pusa_rmse.size() != conventional_rmse.size()) throw std::invalid_argument("rmse_ratio: length mismatch");
    const double denom = conventional_rmse.norm();
    if (!(denom > 0.0)) throw std::invalid_argument("rmse_ratio: conventional RMSE is zero");
    return pusa_rmse.norm() / denom;
}

namespace {

ReplicateFit fit_one(const Dataset& data, ModelVariant variant, const FitOptions& opts) {
    ReplicateFit out;
    out.variant = variant;
    out.dataset_size = data.size();
    out.labeled = data.labeled_count();
    const std::size_t p = data.dimension;
    out.estimate = Vector::Constant(static_cast<Eigen::Index>(2 * p), kNaN);
    out.se = Vector::Constant(static_cast<Eigen::Index>(2 * p), kNaN);
    try {
        const FitResult fit = fit_alternating(data, variant, opts);
        out.estimate << fit.theta_t_hat, fit.theta_c_hat;
        if (fit.se_t) out.se.head(static_cast<Eigen::Index>(p)) = *fit.se_t;
        if (fit.se_c) out.se.tail(static_cast<Eigen::Index>(p)) = *fit.se_c;
        out.converged = fit.converged && fit.inner_stalls == 0;
        if (!out.estimate.allFinite()) {
            out.excluded = true;
            out.error = "non-finite estimate";
        }
    } catch (const std::exception& e) {
        out.excluded = true;
        out.error = e.what();
    }
    return out;
}

}  // namespace

ExperimentReport run_monte_carlo(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    report.seed = config.dgp.seed;
    report.replicates = config.replicates;
    report.levels = config.levels;
    report.parameter_names = parameter_names(static_cast<std::size_t>(config.dgp.x_mean.size()));
    report.theta_t_true = config.dgp.theta_t_true;
    report.theta_c_true = config.dgp.theta_c_true;
    report.variants = config.variants;

    const std::size_t nv = config.variants.size();
    const std::size_t tasks = config.n_raw.size() * config.replicates;
    report.fits.resize(tasks * nv);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            const std::size_t size_index = task / config.replicates;
            const std::size_t replicate = task % config.replicates;
            DgpConfig dgp = config.dgp;
            dgp.n_raw = config.n_raw[size_index];
            dgp.c_observed_for_labeled = true;
            dgp.seed = derive_seed(derive_seed(config.dgp.seed, dgp.n_raw), replicate);
            const SimulationOutput sim = generate(dgp);
            const Dataset hidden = hide_labeled_censoring(sim.dataset);
            for (std::size_t v = 0; v < nv; ++v) {
                const ModelVariant variant = config.variants[v];
                const Dataset& data = variant.censoring_mode == CensoringMode::CObserved ? sim.dataset : hidden;
                ReplicateFit fit = fit_one(data, variant, config.fit);
                fit.n_raw = dgp.n_raw;
                fit.replicate = replicate;
                report.fits[task * nv + v] = std::move(fit);
            }
        }
    };
    const std::size_t threads = std::min(config.workers, tasks);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t n : config.n_raw) {
        SizeReport size;
        size.n_raw = n;
        report.sizes.push_back(size);
    }
    aggregate(report);
    return report;
}

void aggregate(ExperimentReport& report) {
    const std::size_t p = static_cast<std::size_t>(report.theta_t_true.size());
    Vector truth(static_cast<Eigen::Index>(2 * p));
    truth << report.theta_t_true, report.theta_c_true;

    std::vector<const ReplicateFit*> ordered;
    for (const auto& f : report.fits) ordered.push_back(&f);
    std::sort(ordered.begin(), ordered.end(), [](const ReplicateFit* a, const ReplicateFit* b) {
        return a->replicate < b->replicate;
    });

    for (SizeReport& size : report.sizes) {
        size.variants.clear();
        size.ratios.clear();
        double total_size = 0.0, total_labeled = 0.0;
        std::size_t datasets = 0;

        for (std::size_t v = 0; v < report.variants.size(); ++v) {
            const ModelVariant variant = report.variants[v];
            VariantSummary vs;
            vs.variant = variant;
            std::vector<const ReplicateFit*> used;
            for (const ReplicateFit* f : ordered) {
                if (f->n_raw != size.n_raw || !(f->variant == variant)) continue;
                if (v == 0) {
                    total_size += static_cast<double>(f->dataset_size);
                    total_labeled += static_cast<double>(f->labeled);
                    ++datasets;
                }
                if (f->excluded) {
                    ++vs.excluded;
                    continue;
                }
                if (!f->converged) ++vs.non_converged;
                used.push_back(f);
            }
            vs.average_coverage.assign(report.levels.size(), 0.0);
            for (std::size_t k = 0; k < 2 * p; ++k) {
                ParameterSummary ps;
                ps.name = report.parameter_names[k];
                ps.truth = truth[static_cast<Eigen::Index>(k)];
                ps.used = used.size();
                ps.coverage.assign(report.levels.size(), kNaN);
                if (!used.empty()) {
                    std::vector<double> est;
                    double se_sum = 0.0;
                    std::size_t se_count = 0;
                    for (const ReplicateFit* f : used) {
                        est.push_back(f->estimate[static_cast<Eigen::Index>(k)]);
                        const double se = f->se[static_cast<Eigen::Index>(k)];
                        if (std::isfinite(se)) {
                            se_sum += se;
                            ++se_count;
                        }
                    }
                    double sum = 0.0;
                    for (double e : est) sum += e;
                    ps.mean = sum / static_cast<double>(est.size());
                    ps.mean_se = se_count ? se_sum / static_cast<double>(se_count) : kNaN;
                    ps.missing_se = used.size() - se_count;
                    ps.rmse = rmse(est, ps.truth);
                    for (std::size_t l = 0; l < report.levels.size(); ++l) {
                        std::vector<std::pair<double, double>> intervals;
                        for (const ReplicateFit* f : used) {
                            const double se = f->se[static_cast<Eigen::Index>(k)];
                            const double est_k = f->estimate[static_cast<Eigen::Index>(k)];
                            if (std::isfinite(se) && se > 0.0) {
                                intervals.push_back(confidence_interval(est_k, se, report.levels[l]));
                            } else {
                                intervals.emplace_back(kNaN, kNaN);
                            }
                        }
                        ps.coverage[l] = coverage_rate(intervals, ps.truth);
                    }
                } else {
                    ps.mean = ps.mean_se = ps.rmse = kNaN;
                }
                for (std::size_t l = 0; l < report.levels.size(); ++l) {
                    vs.average_coverage[l] += ps.coverage[l] / static_cast<double>(2 * p);
                }
                vs.parameters.push_back(std::move(ps));
            }
            size.variants.push_back(std::move(vs));
        }
        if (datasets) {
            size.mean_dataset_size = total_size / static_cast<double>(datasets);
            size.mean_labeled = total_labeled / static_cast<double>(datasets);
        }

        for (const VariantSummary& a : size.variants) {
            if (a.variant.estimator != Estimator::Pusa) continue;
            for (const VariantSummary& b : size.variants) {
                if (b.variant.estimator != Estimator::Conventional ||
                    b.variant.censoring_mode != a.variant.censoring_mode) {
                    continue;
                }
                for (char block : {'t', 'c'}) {
                    const std::size_t off = block == 't' ? 0 : p;
                    Vector ra(static_cast<Eigen::Index>(p)), rb(static_cast<Eigen::Index>(p));
                    for (std::size_t k = 0; k < p; ++k) {
                        ra[static_cast<Eigen::Index>(k)] = a.parameters[off + k].rmse;
                        rb[static_cast<Eigen::Index>(k)] = b.parameters[off + k].rmse;
                    }
                    RmseRatio r;
                    r.pusa = a.variant;
                    r.conventional = b.variant;
                    r.block = block;
                    if (ra.allFinite() && rb.allFinite() && rb.norm() > 0.0) {
                        r.ratio_of_norms = rmse_ratio(ra, rb);
                        r.mean_of_ratios = (ra.array() / rb.array()).mean();
                        r.ratio_of_sums = ra.sum() / rb.sum();
                    } else {
                        r.ratio_of_norms = r.mean_of_ratios = r.ratio_of_sums = kNaN;
                    }
                    size.ratios.push_back(r);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_estimates_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "n_raw,replicate,variant,parameter,truth,estimate,se";
    for (double level : report.levels) out << ",lo_" << fixed(level, 2) << ",hi_" << fixed(level, 2);
    out << ",converged,excluded,error\n";
    const std::size_t p = static_cast<std::size_t>(report.theta_t_true.size());
    for (const ReplicateFit& f : report.fits) {
        for (std::size_t k = 0; k < 2 * p; ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            const double truth = k < p ? report.theta_t_true[i] : report.theta_c_true[i - static_cast<Eigen::Index>(p)];
            out << f.n_raw << ',' << f.replicate << ',' << variant_name(f.variant) << ','
                << report.parameter_names[k] << ',' << format_double(truth) << ',';
            out << (std::isfinite(f.estimate[i]) ? format_double(f.estimate[i]) : "") << ',';
            out << (std::isfinite(f.se[i]) ? format_double(f.se[i]) : "");
            for (double level : report.levels) {
                if (std::isfinite(f.se[i]) && f.se[i] > 0.0 && std::isfinite(f.estimate[i])) {
                    const auto [lo, hi] = confidence_interval(f.estimate[i], f.se[i], level);
                    out << ',' << format_double(lo) << ',' << format_double(hi);
                } else {
                    out << ",,";
                }
            }
            std::string error = f.error;
            for (char& c : error) {
                if (c == ',' || c == '\n' || c == '"') c = ' ';
            }
            out << ',' << (f.converged ? 1 : 0) << ',' << (f.excluded ? 1 : 0) << ',' << error << '\n';
        }
    }
    return out.str();
}

std::string render_summary_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "n_raw,variant,parameter,truth,mean,mean_se,rmse";
    for (double level : report.levels) out << ",coverage_" << fixed(level, 2);
    out << ",used,missing_se,excluded,non_converged\n";
    for (const SizeReport& size : report.sizes) {
        for (const VariantSummary& vs : size.variants) {
            for (const ParameterSummary& ps : vs.parameters) {
                out << size.n_raw << ',' << variant_name(vs.variant) << ',' << ps.name << ',' << fixed(ps.truth, 6)
                    << ',' << fixed(ps.mean, 6) << ',' << fixed(ps.mean_se, 6) << ',' << fixed(ps.rmse, 6);
                for (double c : ps.coverage) out << ',' << fixed(c, 6);
                out << ',' << ps.used << ',' << ps.missing_se << ',' << vs.excluded << ',' << vs.non_converged << '\n';
            }
        }
    }
    return out.str();
}

namespace {

std::string column_title(ModelVariant v) {
    std::string s = v.estimator == Estimator::Pusa ? "PUSA" : "Conventional";
    s += v.censoring_mode == CensoringMode::CObserved ? " (c observable)" : " (c unobservable)";
    return s;
}

void header_row(std::ostringstream& out, const ExperimentReport& report) {
    out << "| block | quantity | parameter |";
    for (ModelVariant v : report.variants) out << ' ' << column_title(v) << " |";
    out << "\n|---|---|---|";
    for (std::size_t i = 0; i < report.variants.size(); ++i) out << "---|";
    out << '\n';
}

const RmseRatio* find_ratio(const SizeReport& size, ModelVariant pusa, char block) {
    for (const RmseRatio& r : size.ratios) {
        if (r.pusa == pusa && r.block == block) return &r;
    }
    return nullptr;
}

}  // namespace

std::string render_table_markdown(const ExperimentReport& report) {
    std::ostringstream out;
    const std::size_t p = static_cast<std::size_t>(report.theta_t_true.size());
    for (const SizeReport& size : report.sizes) {
        out << "## Estimated results (n_raw = " << size.n_raw << ", replicates = " << report.replicates
            << ", mean dataset size = " << fixed(size.mean_dataset_size, 3) << ")\n\n";
        header_row(out, report);
        for (char block : {'t', 'c'}) {
            const std::size_t off = block == 't' ? 0 : p;
            const std::string block_name = block == 't' ? "theta_t" : "theta_c";
            struct Row {
                const char* label;
                double ParameterSummary::*field;
            };
            for (const Row row : {Row{"True Value", &ParameterSummary::truth}, Row{"Mean Value", &ParameterSummary::mean},
                                  Row{"Asymptotic SE", &ParameterSummary::mean_se}, Row{"RMSE", &ParameterSummary::rmse}}) {
                for (std::size_t k = 0; k < p; ++k) {
                    out << "| " << block_name << " | " << row.label << " | " << report.parameter_names[off + k] << " |";
                    for (const VariantSummary& vs : size.variants) out << ' ' << fixed(vs.parameters[off + k].*row.field, 3) << " |";
                    out << '\n';
                }
            }
            out << "| " << block_name << " | RMSE Ratio | |";
            for (const VariantSummary& vs : size.variants) {
                const RmseRatio* r = vs.variant.estimator == Estimator::Pusa ? find_ratio(size, vs.variant, block) : nullptr;
                out << ' ' << (r ? fixed(r->ratio_of_norms, 3) : "-") << " |";
            }
            out << '\n';
        }
        out << "| | Excluded fits | |";
        for (const VariantSummary& vs : size.variants) out << ' ' << vs.excluded << " |";
        out << "\n| | Non-converged fits | |";
        for (const VariantSummary& vs : size.variants) out << ' ' << vs.non_converged << " |";
        out << "\n\n";
        if (!size.ratios.empty()) {
            out << "RMSE ratio aggregations (PUSA over conventional, same censoring mode):\n\n";
            out << "| PUSA variant | block | ratio of norms | mean of ratios | ratio of sums |\n|---|---|---|---|---|\n";
            for (const RmseRatio& r : size.ratios) {
                out << "| " << variant_name(r.pusa) << " | theta_" << r.block << " | " << fixed(r.ratio_of_norms, 4)
                    << " | " << fixed(r.mean_of_ratios, 4) << " | " << fixed(r.ratio_of_sums, 4) << " |\n";
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string render_coverage_markdown(const ExperimentReport& report) {
    std::ostringstream out;
    for (const SizeReport& size : report.sizes) {
        out << "## Coverage (n_raw = " << size.n_raw << ", replicates = " << report.replicates << ")\n\n";
        header_row(out, report);
        for (std::size_t l = 0; l < report.levels.size(); ++l) {
            const std::string label = level_label(report.levels[l]) + " Coverage Rate";
            for (std::size_t k = 0; k < report.parameter_names.size(); ++k) {
                const std::string& name = report.parameter_names[k];
                out << "| " << name.substr(0, 7) << " | " << label << " | " << name << " |";
                for (const VariantSummary& vs : size.variants) out << ' ' << fixed(vs.parameters[k].coverage[l], 3) << " |";
                out << '\n';
            }
            out << "| | " << level_label(report.levels[l]) << " Average Coverage Rate | |";
            for (const VariantSummary& vs : size.variants) out << ' ' << fixed(vs.average_coverage[l], 5) << " |";
            out << '\n';
        }
        out << '\n';
    }
    return out.str();
}

std::string render_json(const ExperimentReport& report) {
    using nlohmann::ordered_json;
    auto num = [](double v) -> ordered_json { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    ordered_json j;
    j["seed"] = report.seed;
    j["rng"] = kRngAlgorithm;
    j["replicates"] = report.replicates;
    j["levels"] = report.levels;
    j["parameters"] = report.parameter_names;
    j["theta_t_true"] = std::vector<double>(report.theta_t_true.begin(), report.theta_t_true.end());
    j["theta_c_true"] = std::vector<double>(report.theta_c_true.begin(), report.theta_c_true.end());
    ordered_json variants = ordered_json::array();
    for (ModelVariant v : report.variants) variants.push_back(variant_name(v));
    j["variants"] = variants;
    j["rmse_ratio_aggregation"] = "ratio_of_norms = ||rmse_pusa||_2 / ||rmse_conventional||_2 per block; "
                                  "mean_of_ratios and ratio_of_sums reported alongside";
    j["coverage_missing_se"] = "fits without a positive-definite information matrix count as not covering";
    ordered_json sizes = ordered_json::array();
    for (const SizeReport& size : report.sizes) {
        ordered_json s;
        s["n_raw"] = size.n_raw;
        s["mean_dataset_size"] = size.mean_dataset_size;
        s["mean_labeled"] = size.mean_labeled;
        ordered_json vlist = ordered_json::array();
        for (const VariantSummary& vs : size.variants) {
            ordered_json v;
            v["variant"] = variant_name(vs.variant);
            v["excluded"] = vs.excluded;
            v["non_converged"] = vs.non_converged;
            ordered_json avg = ordered_json::array();
            for (double c : vs.average_coverage) avg.push_back(num(c));
            v["average_coverage"] = avg;
            ordered_json params = ordered_json::array();
            for (const ParameterSummary& ps : vs.parameters) {
                ordered_json pj;
                pj["name"] = ps.name;
                pj["truth"] = ps.truth;
                pj["mean"] = num(ps.mean);
                pj["mean_se"] = num(ps.mean_se);
                pj["rmse"] = num(ps.rmse);
                ordered_json cov = ordered_json::array();
                for (double c : ps.coverage) cov.push_back(num(c));
                pj["coverage"] = cov;
                pj["used"] = ps.used;
                pj["missing_se"] = ps.missing_se;
                params.push_back(pj);
            }
            v["parameters"] = params;
            vlist.push_back(v);
        }
        s["variants"] = vlist;
        ordered_json ratios = ordered_json::array();
        for (const RmseRatio& r : size.ratios) {
            ordered_json rj;
            rj["pusa"] = variant_name(r.pusa);
            rj["conventional"] = variant_name(r.conventional);
            rj["block"] = std::string("theta_") + r.block;
            rj["ratio_of_norms"] = num(r.ratio_of_norms);
            rj["mean_of_ratios"] = num(r.mean_of_ratios);
            rj["ratio_of_sums"] = num(r.ratio_of_sums);
            ratios.push_back(rj);
        }
        s["rmse_ratios"] = ratios;
        sizes.push_back(s);
    }
    j["sizes"] = sizes;
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::string, std::string>> files;
    switch (format) {
        case ReportFormat::Csv:
            files = {{"estimates.csv", render_estimates_csv(report)}, {"summary.csv", render_summary_csv(report)}};
            break;
        case ReportFormat::Markdown:
            files = {{"table.md", render_table_markdown(report)}, {"coverage.md", render_coverage_markdown(report)}};
            break;
        case ReportFormat::Json:
            files = {{"report.json", render_json(report)}};
            break;
    }
    std::vector<std::filesystem::path> written;
    for (const auto& [name, body] : files) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << body;
        written.push_back(path);
    }
    return written;
}

}  // namespace pusurv
