#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lcp {

struct KMeansResult {
    std::vector<Eigen::VectorXd> centroids;  // unit norm (zero only for all-zero clusters)
    std::vector<std::size_t> assignment;     // point -> centroid
    std::size_t iterations = 0;
};

/// Spherical k-means: seeded k-means++ initialisation on cosine distance, then
/// Lloyd iterations assigning to the highest-cosine centroid and re-centring on
/// the renormalised mean. With fewer points than k, each point is its own centroid.
KMeansResult cluster_cosine_kmeans(const std::vector<Eigen::VectorXd>& points, std::size_t k, std::uint64_t seed,
                                   std::size_t max_iter = 100);

/// Cosine similarity clamped to [-1, 1]; 0 when either vector is zero.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace lcp
