#include <doctest.h>

#include "lcp/kmeans.hpp"
#include "lcp/prototypes.hpp"
#include "lcp/util.hpp"

using namespace lcp;

namespace {

struct Instance {
    std::vector<Embedding> embeddings;
    std::vector<std::string> ids;
    std::vector<LabelVector> labels;
    std::size_t label_count = 0;
};

Instance random_instance(std::uint64_t seed, std::size_t n, std::size_t labels, std::size_t dim) {
    Rng rng(seed);
    Instance in;
    in.label_count = labels;
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
        for (Eigen::Index d = 0; d < v.size(); ++d) v(d) = uniform_unit(rng) - 0.5;
        in.embeddings.push_back({v / v.norm(), true});
        in.ids.push_back("s" + std::to_string(i));
        LabelVector y(labels, 0);
        y[uniform_below(rng, labels)] = 1;
        if (uniform_unit(rng) < 0.3) y[uniform_below(rng, labels)] = 1;
        in.labels.push_back(y);
    }
    return in;
}

}  // namespace

TEST_SUITE("prototypes") {

TEST_CASE("snapped prototypes equal an exhaustive nearest-by-cosine search") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto in = random_instance(seed, 20, 2, 5);
        const std::size_t k = 2;
        const auto result = discover_prototypes(in.embeddings, in.ids, in.labels, in.label_count, k, -1.0, seed);
        std::size_t next = 0;
        for (std::size_t l = 0; l < in.label_count; ++l) {
            std::vector<std::size_t> members;
            std::vector<Eigen::VectorXd> pts;
            for (std::size_t i = 0; i < in.labels.size(); ++i) {
                if (in.labels[i][l]) {
                    members.push_back(i);
                    pts.push_back(in.embeddings[i].vector);
                }
            }
            const auto clusters = cluster_cosine_kmeans(pts, k, derive_seed(seed, "label:" + std::to_string(l)));
            for (std::size_t j = 0; j < clusters.centroids.size(); ++j) {
                // oracle: scan every positive, keep the first maximum of the cosine
                std::size_t best = 0;
                for (std::size_t m = 1; m < pts.size(); ++m) {
                    const double cm = pts[m].dot(clusters.centroids[j]) / pts[m].norm();
                    const double cb = pts[best].dot(clusters.centroids[j]) / pts[best].norm();
                    if (cm > cb) best = m;
                }
                REQUIRE(next < result.prototypes.size());
                const auto& p = result.prototypes[next++];
                CHECK(p.label_index == l);
                CHECK(p.slot == j);
                CHECK(p.kind == PrototypeKind::precedent);
                CHECK(p.source == in.ids[members[best]]);
                CHECK(p.vector.vector == in.embeddings[members[best]].vector);
            }
        }
        CHECK(next == result.prototypes.size());
    }
}

TEST_CASE("s_min above every cosine keeps raw centroids") {
    const auto in = random_instance(3, 20, 2, 5);
    const auto r = discover_prototypes(in.embeddings, in.ids, in.labels, 2, 2, 1.0, 3);
    for (const auto& p : r.prototypes) {
        CHECK(p.source == kCentroidSource);
        CHECK(p.vector.vector.norm() == doctest::Approx(1.0));
    }
}

TEST_CASE("labels without positives are reported") {
    auto in = random_instance(4, 10, 2, 3);
    for (auto& y : in.labels) y = {1, 0, 0};
    const auto r = discover_prototypes(in.embeddings, in.ids, in.labels, 3, 3, -1.0, 0);
    CHECK(r.labels_without_positives == std::vector<std::size_t>{1, 2});
    CHECK(r.prototypes.size() == 3);
    CHECK_THROWS_AS(discover_prototypes(in.embeddings, {}, in.labels, 3, 3, -1.0, 0), DataError);
}

TEST_CASE("discovery does not depend on the number of jobs") {
    const auto in = random_instance(5, 40, 4, 6);
    const auto a = discover_prototypes(in.embeddings, in.ids, in.labels, 4, 3, -1.0, 9, 1);
    const auto b = discover_prototypes(in.embeddings, in.ids, in.labels, 4, 3, -1.0, 9, 4);
    REQUIRE(a.prototypes.size() == b.prototypes.size());
    for (std::size_t j = 0; j < a.prototypes.size(); ++j) {
        CHECK(a.prototypes[j].source == b.prototypes[j].source);
        CHECK(a.prototypes[j].vector.vector == b.prototypes[j].vector.vector);
    }
}

TEST_CASE("provision prototypes from text and from a table") {
    LabelSet ls({CitationRef{42, "1983", std::nullopt}, CitationRef{11, "523", "a"}});
    const auto enc = EncoderParams::initialize(128, 4, 2);
    CHECK_THROWS_WITH_AS(encode_provision_prototypes(ls, enc), doctest::Contains("42 \xC2\xA7" "1983"), DataError);
    ls.set_provision_text(0, "Every person who deprives another of rights.");
    ls.set_provision_text(1, "A discharge does not discharge a debtor from debt for fraud.");
    const auto ps = encode_provision_prototypes(ls, enc);
    REQUIRE(ps.size() == 2);
    CHECK(ps[1].kind == PrototypeKind::provision);
    CHECK(ps[1].source == "11 \xC2\xA7" "523(a)");
    CHECK(ps[1].vector.vector == encode_text(ls.provision_text(1), enc).vector);

    EmbeddingTable table;
    table[provision_record_id(ls.at(0))] = ps[0].vector;
    CHECK_THROWS_AS(provision_prototypes_from_table(ls, table), DataError);
    table[provision_record_id(ls.at(1))] = ps[1].vector;
    CHECK(provision_prototypes_from_table(ls, table)[1].vector.vector == ps[1].vector.vector);
    CHECK(provision_record_id(ls.at(0)) == "provision:42 \xC2\xA7" "1983");
}

TEST_CASE("prototype dump round-trips") {
    std::vector<Prototype> ps = {
        {0, PrototypeKind::precedent, 1, {Eigen::Vector3d(0.6, 0.8, 0.0), true}, "doc#2"},
        {1, PrototypeKind::provision, 0, {Eigen::Vector3d(0.1, 0.2, 0.3), false}, "11 \xC2\xA7" "523(a)"},
    };
    const auto back = parse_prototype_dump(format_prototype_dump(ps));
    REQUIRE(back.size() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(back[j].label_index == ps[j].label_index);
        CHECK(back[j].kind == ps[j].kind);
        CHECK(back[j].slot == ps[j].slot);
        CHECK(back[j].source == ps[j].source);
        CHECK(back[j].vector.vector == ps[j].vector.vector);
        CHECK(back[j].vector.normalized == ps[j].vector.normalized);
    }
    CHECK_THROWS_AS(parse_prototype_dump("{\"label\": 0, \"kind\": \"other\", \"source\": \"x\", \"vector\": []}"),
                    DataError);
}

}
