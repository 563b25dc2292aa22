#pragma once

// Portable random streams. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; every transform to uniforms and other distributions
// is written out here (no std:: distributions, whose algorithms are unspecified),
// so a seed reproduces the same draws on any conforming implementation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace pusurv {

inline constexpr const char* kRngAlgorithm = "mt19937_64/polar-normal/v1";

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the `index`-th independent stream under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    double normal();
    double exponential(double rate);
    /// Beta(1, b) by inversion.
    double beta_one(double b);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// k distinct elements of `items`, in their original relative order.
    template <class T>
    std::vector<T> sample(const std::vector<T>& items, std::size_t k);

    void shuffle_indices(std::vector<std::size_t>& v);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

template <class T>
std::vector<T> Rng::sample(const std::vector<T>& items, std::size_t k) {
    std::vector<std::size_t> idx(items.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (k > idx.size()) k = idx.size();
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(below(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    std::vector<T> out;
    out.reserve(k);
    for (std::size_t i : idx) out.push_back(items[i]);
    return out;
}

}  // namespace pusurv
