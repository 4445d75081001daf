#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lcp {

/// Raised for malformed or inconsistent input data (files, records, dimensions).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

/// Derives a named sub-seed from a run seed ("split", "shuffle", "kmeans", "mask", ...).
std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view name);

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; identical across standard libraries.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(Rng& rng);

/// Fisher-Yates with uniform_below.
template <class T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

/// Returns `count` distinct indices in [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng);

/// Pairwise summation; result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. fn must write only to slot i.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);

}  // namespace lcp
