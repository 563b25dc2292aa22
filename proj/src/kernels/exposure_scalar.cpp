#include "pusurv/kernels/exposure.hpp"

#include "neumaier.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pusurv::kernels {

void ExposureProblem::reserve(std::size_t rows) {
    nu.reserve(rows);
    a.reserve(rows);
    b.reserve(rows);
    w.reserve(rows);
    source_index.reserve(rows);
}

RecordTerms record_terms(double eta, double nu, double a, double b, double w) {
    const double d = eta - nu;
    const double e = std::exp(-std::abs(d));
    const double log_sum = std::max(eta, nu) + std::log1p(e);
    const double inv = 1.0 / (1.0 + e);
    const double share = d >= 0.0 ? inv : e * inv;  // exp(eta) / (exp(eta) + exp(nu))
    const double share_var = e * inv * inv;         // share * (1 - share)
    const double lambda = std::exp(eta);
    const double exposure = w == 0.0 ? 0.0 : lambda * w;
    return {a * log_sum + b * eta - exposure, a * share + b - exposure, exposure - a * share_var};
}

namespace detail {

std::size_t output_size(std::size_t p) { return 1 + p + p * (p + 1) / 2; }

void exposure_scalar(const ExposureProblem& pr, const double* theta, Want want, double* out) {
    const std::size_t n = pr.n;
    const std::size_t p = pr.p;
    std::vector<Neumaier> acc(output_size(p));
    std::vector<double> xi(p);

    for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
            xi[k] = pr.x[k * n + i];
            eta += xi[k] * theta[k];
        }
        const RecordTerms t = record_terms(eta, pr.nu[i], pr.a[i], pr.b[i], pr.w[i]);
        acc[0].add(t.loglik);
        if (want == Want::Value) continue;
        for (std::size_t k = 0; k < p; ++k) acc[1 + k].add(xi[k] * t.score);
        if (want != Want::Information) continue;
        std::size_t slot = 1 + p;
        for (std::size_t k = 0; k < p; ++k) {
            const double xk_h = xi[k] * t.information;
            for (std::size_t l = k; l < p; ++l) acc[slot++].add(xk_h * xi[l]);
        }
    }
    for (std::size_t j = 0; j < acc.size(); ++j) out[j] = acc[j].result();
}

}  // namespace detail
}  // namespace pusurv::kernels
