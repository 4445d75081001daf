#include <doctest.h>

#include <cstring>

#include "lcp/pcem.hpp"
#include "test_support.hpp"

using namespace lcp;

namespace {

// little-endian bytes written by hand, independent of the library's writer
void le32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void le64(std::string& s, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void lef32(std::string& s, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    le32(s, bits);
}

std::string header(std::uint32_t version, std::uint32_t dim, std::uint64_t count) {
    std::string s = "PCEM";
    le32(s, version);
    le32(s, dim);
    le64(s, count);
    return s;
}

PcemError::Kind kind_of(const std::string& bytes) {
    try {
        decode_pcem(bytes);
    } catch (const PcemError& e) {
        return e.kind();
    }
    FAIL("decode_pcem accepted malformed bytes");
    return PcemError::Kind::bad_magic;
}

}  // namespace

TEST_SUITE("pcem") {

TEST_CASE("encoding matches the documented byte layout") {
    std::string expect = header(1, 2, 2);
    le32(expect, 1);
    expect += "a";
    lef32(expect, 0.5f);
    lef32(expect, -1.25f);
    le32(expect, 3);
    expect += "bcd";
    lef32(expect, 3.0f);
    lef32(expect, 1e-30f);
    const std::vector<PcemRecord> recs = {{"a", {0.5f, -1.25f}}, {"bcd", {3.0f, 1e-30f}}};
    CHECK(encode_pcem(recs, 2) == expect);
    std::uint32_t dim = 0;
    CHECK(decode_pcem(expect, &dim) == recs);
    CHECK(dim == 2);
}

TEST_CASE("empty file is valid") {
    const auto bytes = encode_pcem({}, 0);
    CHECK(bytes.size() == 20);
    CHECK(decode_pcem(bytes).empty());
    TempDir dir("pcem_empty");
    write_embedding_file(dir.file("e.pcem"), {});
    CHECK(read_embedding_file(dir.file("e.pcem"), 768).empty());
}

TEST_CASE("header and body mutations are rejected with the right kind") {
    const std::vector<PcemRecord> recs = {{"x", {1.0f, 2.0f, 3.0f}}, {"y", {4.0f, 5.0f, 6.0f}}};
    const auto good = encode_pcem(recs, 3);

    auto bad_magic = good;
    bad_magic[0] = 'Q';
    CHECK(kind_of(bad_magic) == PcemError::Kind::bad_magic);
    CHECK(kind_of("PC") == PcemError::Kind::bad_magic);

    auto bad_version = good;
    bad_version[4] = 2;
    CHECK(kind_of(bad_version) == PcemError::Kind::version_mismatch);

    CHECK(kind_of(good.substr(0, 10)) == PcemError::Kind::truncated);
    for (std::size_t cut = 21; cut < good.size(); cut += 3) {
        CAPTURE(cut);
        CHECK(kind_of(good.substr(0, cut)) == PcemError::Kind::truncated);
    }

    auto big_count = good;
    big_count[12] = 9;
    CHECK(kind_of(big_count) == PcemError::Kind::truncated);

    auto huge_count = good;
    huge_count[19] = 0x7f;
    CHECK(kind_of(huge_count) == PcemError::Kind::truncated);

    CHECK(kind_of(good + "z") == PcemError::Kind::trailing_data);

    auto small_count = good;
    small_count[12] = 1;
    CHECK(kind_of(small_count) == PcemError::Kind::trailing_data);

    auto zero_dim = header(1, 0, 1);
    le32(zero_dim, 1);
    zero_dim += "q";
    CHECK(kind_of(zero_dim) == PcemError::Kind::dimension_mismatch);

    std::string bad_id = header(1, 1, 1);
    le32(bad_id, 1);
    bad_id += "\xff";
    lef32(bad_id, 1.0f);
    CHECK(kind_of(bad_id) == PcemError::Kind::invalid_id);

    CHECK_THROWS_AS(encode_pcem({{"x", {1.0f}}}, 2), PcemError);
    CHECK_THROWS_AS(write_embedding_file("/tmp/unused.pcem", {{"x", {1.0f}}, {"y", {1.0f, 2.0f}}}), PcemError);
}

TEST_CASE("reader checks the expected dimension") {
    TempDir dir("pcem_dim");
    write_embedding_file(dir.file("d.pcem"), {{"x", {1.0f, 2.0f}}});
    CHECK_NOTHROW(read_embedding_file(dir.file("d.pcem"), 2));
    try {
        read_embedding_file(dir.file("d.pcem"), 768);
        FAIL("expected a dimension mismatch");
    } catch (const PcemError& e) {
        CHECK(e.kind() == PcemError::Kind::dimension_mismatch);
    }
}

TEST_CASE("10000 x 768 file round-trips bit-exactly") {
    const std::uint32_t dim = 768;
    std::vector<PcemRecord> recs(10000);
    std::uint64_t state = 12345;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        recs[i].id = "span-" + std::to_string(i) + (i % 7 == 0 ? "-\xC2\xA7" : "");
        recs[i].values.resize(dim);
        for (auto& v : recs[i].values) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            std::uint32_t bits = static_cast<std::uint32_t>(state >> 32);
            bits &= 0xbfffffffu;  // keep the exponent below inf/nan
            std::memcpy(&v, &bits, 4);
        }
    }
    TempDir dir("pcem_big");
    write_embedding_file(dir.file("big.pcem"), recs);
    const auto back = read_embedding_file(dir.file("big.pcem"), dim);
    REQUIRE(back.size() == recs.size());

    // FNV-1a over ids and raw float bits on both sides
    auto checksum = [](const std::vector<PcemRecord>& rs) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&](const void* p, std::size_t n) {
            const auto* b = static_cast<const unsigned char*>(p);
            for (std::size_t i = 0; i < n; ++i) h = (h ^ b[i]) * 0x100000001b3ULL;
        };
        for (const auto& r : rs) {
            mix(r.id.data(), r.id.size());
            mix(r.values.data(), r.values.size() * 4);
        }
        return h;
    };
    CHECK(checksum(back) == checksum(recs));
    std::size_t expected_size = 20;
    for (const auto& r : recs) expected_size += 4 + r.id.size() + 4 * dim;
    CHECK(std::filesystem::file_size(dir.file("big.pcem")) == expected_size);
}

TEST_CASE("table conversion") {
    const auto table = to_table({{"a", {0.6f, 0.8f}}, {"b", {1.0f, 1.0f}}});
    CHECK(table.at("a").normalized);
    CHECK(!table.at("b").normalized);
    CHECK_THROWS_AS(to_table({{"a", {1.0f}}, {"a", {1.0f}}}), DataError);
    Embedding e{Eigen::Vector2d(0.25, -0.5), false};
    CHECK(to_record("r", e).values == std::vector<float>{0.25f, -0.5f});
}

}
