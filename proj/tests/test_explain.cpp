#include <doctest.h>

#include "lcp/explain.hpp"
#include "lcp/util.hpp"

using namespace lcp;

namespace {

Prototype proto(std::size_t label, PrototypeKind kind, std::string source) {
    return {label, kind, 0, {Eigen::Vector2d(1, 0), true}, std::move(source)};
}

}  // namespace

TEST_SUITE("explain") {

TEST_CASE("evidence is ranked by similarity with ties by source") {
    const std::vector<Prototype> ps = {proto(0, PrototypeKind::precedent, "b"), proto(0, PrototypeKind::precedent, "a"),
                                       proto(0, PrototypeKind::provision, "42 \xC2\xA7" "1983"),
                                       proto(1, PrototypeKind::precedent, "z")};
    PredictionResult r;
    r.scores = Eigen::Vector2d(0.9, 0.1);
    r.predicted = {1, 0};
    r.similarities = Eigen::Vector4d(3.0, 3.0, 5.0, 9.0);
    const auto ex = explain(r, ps, 5);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].label == 0);
    REQUIRE(ex[0].evidence.size() == 3);
    CHECK(ex[0].evidence[0].kind == PrototypeKind::provision);
    CHECK(ex[0].evidence[1].source == "a");
    CHECK(ex[0].evidence[2].source == "b");
    CHECK(explain(r, ps, 1)[0].evidence.size() == 1);
}

TEST_CASE("a label with one prototype returns it") {
    const std::vector<Prototype> ps = {proto(0, PrototypeKind::precedent, "x")};
    PredictionResult r;
    r.scores = Eigen::VectorXd::Constant(1, 0.8);
    r.predicted = {1};
    r.similarities = Eigen::VectorXd::Constant(1, 2.0);
    const auto ex = explain(r, ps, 3);
    REQUIRE(ex.size() == 1);
    REQUIRE(ex[0].evidence.size() == 1);
    CHECK(ex[0].evidence[0].source == "x");
    r.similarities = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(explain(r, ps, 3), DataError);
}

}
