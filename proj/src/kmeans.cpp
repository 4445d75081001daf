#include "lcp/kmeans.hpp"

#include <algorithm>
#include <stdexcept>

#include "lcp/util.hpp"

namespace lcp {
namespace {

Eigen::VectorXd unit(const Eigen::VectorXd& v) {
    const double n = v.norm();
    return n > 0.0 ? Eigen::VectorXd(v / n) : v;
}

std::size_t nearest(const std::vector<Eigen::VectorXd>& centroids, const Eigen::VectorXd& u) {
    std::size_t best = 0;
    double best_sim = -2.0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double s = centroids[c].dot(u);
        if (s > best_sim) {
            best_sim = s;
            best = c;
        }
    }
    return best;
}

}  // namespace

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

KMeansResult cluster_cosine_kmeans(const std::vector<Eigen::VectorXd>& points, std::size_t k, std::uint64_t seed,
                                   std::size_t max_iter) {
    if (points.empty()) throw std::invalid_argument("cluster_cosine_kmeans: no points");
    if (k == 0) throw std::invalid_argument("cluster_cosine_kmeans: k must be positive");
    const std::size_t n = points.size();
    std::vector<Eigen::VectorXd> units;
    units.reserve(n);
    for (const auto& p : points) units.push_back(unit(p));

    KMeansResult result;
    if (n < k) {
        result.centroids = units;
        result.assignment.resize(n);
        for (std::size_t i = 0; i < n; ++i) result.assignment[i] = i;
        return result;
    }

    // k-means++ seeding with cosine distance 1 - cos
    Rng rng(seed);
    std::vector<std::size_t> chosen{static_cast<std::size_t>(uniform_below(rng, n))};
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = std::max(0.0, 1.0 - units[i].dot(units[chosen[0]]));
    while (chosen.size() < k) {
        const double total = pairwise_sum(dist);
        std::size_t pick = n;
        if (total > 0.0) {
            double target = uniform_unit(rng) * total;
            for (std::size_t i = 0; i < n; ++i) {
                if (dist[i] <= 0.0) continue;
                pick = i;
                target -= dist[i];
                if (target < 0.0) break;
            }
        }
        if (pick == n) {
            // all remaining points coincide with chosen centres
            for (std::size_t i = 0; i < n && pick == n; ++i) {
                if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) pick = i;
            }
        }
        chosen.push_back(pick);
        for (std::size_t i = 0; i < n; ++i) dist[i] = std::min(dist[i], std::max(0.0, 1.0 - units[i].dot(units[pick])));
    }
    for (auto idx : chosen) result.centroids.push_back(units[idx]);

    result.assignment.assign(n, k);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = nearest(result.centroids, units[i]);
            if (c != result.assignment[i]) {
                result.assignment[i] = c;
                changed = true;
            }
        }
        result.iterations = iter + 1;
        if (!changed) break;
        const auto dim = units.front().size();
        std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(dim));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[result.assignment[i]] += units[i];
            ++counts[result.assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) result.centroids[c] = unit(sums[c]);
        }
    }
    return result;
}

}  // namespace lcp
