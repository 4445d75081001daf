#include <doctest.h>

#include <set>

#include "lcp/kmeans.hpp"
#include "lcp/util.hpp"

using namespace lcp;

namespace {

std::vector<Eigen::VectorXd> blobs(std::size_t per, std::uint64_t seed) {
    const std::vector<Eigen::Vector3d> centres = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Rng rng(seed);
    std::vector<Eigen::VectorXd> pts;
    for (const auto& c : centres) {
        for (std::size_t i = 0; i < per; ++i) {
            Eigen::Vector3d p = c;
            for (int d = 0; d < 3; ++d) p(d) += 0.1 * (uniform_unit(rng) - 0.5);
            pts.push_back(p * (1.0 + uniform_unit(rng)));  // scale must not matter
        }
    }
    return pts;
}

}  // namespace

TEST_SUITE("kmeans") {

TEST_CASE("cosine helper") {
    CHECK(cosine(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 3)) == doctest::Approx(0.0));
    CHECK(cosine(Eigen::Vector2d(2, 2), Eigen::Vector2d(1, 1)) == doctest::Approx(1.0));
    CHECK(cosine(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)) == 0.0);
    CHECK(cosine(Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0)) == -1.0);
}

TEST_CASE("separated directions are recovered") {
    const auto pts = blobs(10, 4);
    const auto r = cluster_cosine_kmeans(pts, 3, 99);
    REQUIRE(r.centroids.size() == 3);
    for (std::size_t b = 0; b < 3; ++b) {
        std::set<std::size_t> ids;
        for (std::size_t i = 0; i < 10; ++i) ids.insert(r.assignment[b * 10 + i]);
        CHECK(ids.size() == 1);
    }
    std::set<std::size_t> all(r.assignment.begin(), r.assignment.end());
    CHECK(all.size() == 3);
    for (const auto& c : r.centroids) CHECK(c.norm() == doctest::Approx(1.0));
}

TEST_CASE("same seed, same result") {
    const auto pts = blobs(15, 8);
    const auto a = cluster_cosine_kmeans(pts, 4, 5);
    const auto b = cluster_cosine_kmeans(pts, 4, 5);
    CHECK(a.assignment == b.assignment);
    for (std::size_t c = 0; c < 4; ++c) CHECK(a.centroids[c] == b.centroids[c]);
}

TEST_CASE("fewer points than k gives one centroid per point") {
    std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(3, 4), Eigen::Vector2d(0, 2)};
    const auto r = cluster_cosine_kmeans(pts, 5, 1);
    REQUIRE(r.centroids.size() == 2);
    CHECK(r.centroids[0].isApprox(Eigen::Vector2d(0.6, 0.8)));
    CHECK(r.assignment == std::vector<std::size_t>{0, 1});
}

TEST_CASE("duplicate points do not stall seeding") {
    std::vector<Eigen::VectorXd> pts(6, Eigen::Vector2d(1, 1));
    const auto r = cluster_cosine_kmeans(pts, 3, 2);
    CHECK(r.centroids.size() == 3);
    CHECK(r.assignment.size() == 6);
}

TEST_CASE("bad arguments") {
    CHECK_THROWS(cluster_cosine_kmeans({}, 2, 0));
    CHECK_THROWS(cluster_cosine_kmeans({Eigen::Vector2d(1, 0)}, 0, 0));
}

}
