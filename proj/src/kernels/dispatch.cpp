#include "pusurv/kernels/exposure.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace pusurv::kernels {

std::string to_string(SimdLevel level) { return level == SimdLevel::Avx2 ? "avx2" : "scalar"; }

SimdLevel detected_simd_level() {
#if defined(PUSURV_HAVE_AVX2_KERNEL)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return SimdLevel::Avx2;
#endif
    return SimdLevel::Scalar;
}

bool simd_level_available(SimdLevel level) {
    return level == SimdLevel::Scalar || detected_simd_level() == SimdLevel::Avx2;
}

namespace {

SimdLevel initial_level() {
    const SimdLevel detected = detected_simd_level();
    if (const char* env = std::getenv("PUSURV_SIMD")) {
        const std::string_view v(env);
        if (v == "scalar") return SimdLevel::Scalar;
        if (v == "avx2" && detected == SimdLevel::Avx2) return SimdLevel::Avx2;
    }
    return detected;
}

std::atomic<SimdLevel>& level_slot() {
    static std::atomic<SimdLevel> slot{initial_level()};
    return slot;
}

}  // namespace

SimdLevel active_simd_level() { return level_slot().load(std::memory_order_relaxed); }

void set_simd_level(SimdLevel level) {
    if (!simd_level_available(level)) {
        throw std::invalid_argument("SIMD level " + to_string(level) + " is not available on this machine");
    }
    level_slot().store(level, std::memory_order_relaxed);
}

ExposureSums evaluate(const ExposureProblem& problem, std::span<const double> theta, Want want) {
    return evaluate(problem, theta, want, active_simd_level());
}

ExposureSums evaluate(const ExposureProblem& problem, std::span<const double> theta, Want want, SimdLevel level) {
    if (theta.size() != problem.p) throw std::invalid_argument("exposure kernel: parameter length mismatch");
    std::vector<double> out(detail::output_size(problem.p), 0.0);
#if defined(PUSURV_HAVE_AVX2_KERNEL)
    if (level == SimdLevel::Avx2) {
        if (!simd_level_available(level)) throw std::invalid_argument("AVX2 kernel requested on a CPU without AVX2");
        detail::exposure_avx2(problem, theta.data(), want, out.data());
    } else {
        detail::exposure_scalar(problem, theta.data(), want, out.data());
    }
#else
    if (level != SimdLevel::Scalar) throw std::invalid_argument("this build has no AVX2 kernel");
    detail::exposure_scalar(problem, theta.data(), want, out.data());
#endif

    const auto p = static_cast<Eigen::Index>(problem.p);
    ExposureSums sums;
    sums.loglik = out[0];
    if (want != Want::Value) {
        sums.gradient = Eigen::Map<const Eigen::VectorXd>(out.data() + 1, p);
    }
    if (want == Want::Information) {
        sums.information.resize(p, p);
        std::size_t slot = 1 + problem.p;
        for (Eigen::Index k = 0; k < p; ++k) {
            for (Eigen::Index l = k; l < p; ++l) {
                sums.information(k, l) = out[slot];
                sums.information(l, k) = out[slot];
                ++slot;
            }
        }
    }
    return sums;
}

}  // namespace pusurv::kernels
