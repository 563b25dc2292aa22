#pragma once

// Batched log-likelihood kernel shared by every exponential PU likelihood.
//
// Each record contributes, as a function of its linear predictor eta = x' theta,
//
//     l_i(eta) = a_i log(exp(eta) + exp(nu_i)) + b_i eta - exp(eta) w_i
//
// where nu_i is the (fixed) linear predictor of the other parameter block. With
// A_i = exp(eta) / (exp(eta) + exp(nu_i)) the derivatives are
//
//     dl/deta   = a_i A_i + b_i - exp(eta) w_i
//     -d2l/deta2 = exp(eta) w_i - a_i A_i (1 - A_i)
//
// The kernel returns sum_i l_i, its gradient sum_i x_i dl/deta, and the observed
// information sum_i x_i x_i' (-d2l/deta2). Sums are Neumaier-compensated.
//
// There is a scalar reference implementation and an AVX2/FMA implementation; the
// active one is picked at runtime from the CPU features and can be overridden
// with set_simd_level() or the PUSURV_SIMD environment variable (scalar|avx2).

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pusurv::kernels {

struct ExposureProblem {
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<double> x;  // column-major, x[k * n + i]
    std::vector<double> nu;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> w;
    std::vector<std::size_t> source_index;  // dataset row of each record, for diagnostics

    void reserve(std::size_t rows);
};

enum class Want { Value, Gradient, Information };

struct ExposureSums {
    double loglik = 0.0;
    Eigen::VectorXd gradient;     // of loglik; filled for Want::Gradient and up
    Eigen::MatrixXd information;  // -Hessian of loglik; filled for Want::Information
};

enum class SimdLevel { Scalar, Avx2 };

std::string to_string(SimdLevel level);
SimdLevel detected_simd_level();
SimdLevel active_simd_level();
/// Throws std::invalid_argument if the level is not supported by this build or CPU.
void set_simd_level(SimdLevel level);
bool simd_level_available(SimdLevel level);

ExposureSums evaluate(const ExposureProblem& problem, std::span<const double> theta, Want want);
ExposureSums evaluate(const ExposureProblem& problem, std::span<const double> theta, Want want, SimdLevel level);

/// Single-record contribution (value, dl/deta, -d2l/deta2), scalar reference path.
struct RecordTerms {
    double loglik, score, information;
};
RecordTerms record_terms(double eta, double nu, double a, double b, double w);

namespace detail {
// Output layout: [loglik, grad(p), info upper triangle row-major (p(p+1)/2)].
std::size_t output_size(std::size_t p);
void exposure_scalar(const ExposureProblem& problem, const double* theta, Want want, double* out);
#if defined(PUSURV_HAVE_AVX2_KERNEL)
void exposure_avx2(const ExposureProblem& problem, const double* theta, Want want, double* out);
#endif
}  // namespace detail

}  // namespace pusurv::kernels
