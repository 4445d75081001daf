#include <doctest.h>

#include "lcp/dataset_io.hpp"
#include "lcp/util.hpp"
#include "test_support.hpp"

using namespace lcp;

TEST_SUITE("dataset_io") {

TEST_CASE("corpus lines parse and extract citations") {
    const std::string text =
        "{\"id\": \"d1\", \"text\": \"Relief under 42 U.S.C. \\u00a7 1983 was denied.\"}\n"
        "\n"
        "{\"id\": \"d2\", \"text\": \"No citations.\"}\n";
    const auto corpus = parse_corpus_jsonl(text);
    REQUIRE(corpus.size() == 2);
    REQUIRE(corpus[0].citations.size() == 1);
    CHECK(corpus[0].citations[0].ref.key() == "42 \xC2\xA7" "1983");
    CHECK(corpus[0].citations[0].offset == 13);
    CHECK(parse_corpus_jsonl(format_corpus_jsonl(corpus))[0].text == corpus[0].text);
}

TEST_CASE("trusted citation arrays override extraction") {
    const auto corpus = parse_corpus_jsonl(
        "{\"id\": \"d\", \"text\": \"See the statute.\", \"citations\": [\"11 \\u00a7523(a)\", {\"key\": \"42 "
        "\\u00a71983\", \"offset\": 4}]}\n");
    REQUIRE(corpus[0].citations.size() == 2);
    CHECK(corpus[0].citations[0].ref.key() == "11 \xC2\xA7" "523(a)");
    CHECK(corpus[0].citations[1].offset == 4);
}

TEST_CASE("malformed corpus lines are data errors") {
    CHECK_THROWS_AS(parse_corpus_jsonl("{not json}\n"), DataError);
    CHECK_THROWS_AS(parse_corpus_jsonl("{\"id\": 3, \"text\": \"x\"}\n"), DataError);
    CHECK_THROWS_AS(parse_corpus_jsonl("{\"id\": \"a\", \"text\": \"x\"}\n{\"id\": \"a\", \"text\": \"y\"}\n"), DataError);
    CHECK_THROWS_AS(parse_corpus_jsonl("{\"id\": \"a\", \"text\": \"x\", \"citations\": [\"bogus\"]}\n"), DataError);
}

TEST_CASE("spans round trip") {
    std::vector<ContextSpan> spans(2);
    spans[0] = {"d#0", "d", {"One.", "Two <mask>."}, {1, 0, 1}};
    spans[1] = {"e#0", "e", {"Three."}, {0, 0, 0}};
    const auto back = parse_spans_jsonl(format_spans_jsonl(spans), 3);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].id == spans[i].id);
        CHECK(back[i].doc_id == spans[i].doc_id);
        CHECK(back[i].sentences == spans[i].sentences);
        CHECK(back[i].labels == spans[i].labels);
    }
    CHECK_THROWS_AS(parse_spans_jsonl(format_spans_jsonl(spans), 2), DataError);
    CHECK_THROWS_AS(parse_spans_jsonl("{\"id\": \"x\"}\n", 2), DataError);
}

TEST_CASE("label files resolve provision paths relative to themselves") {
    TempDir dir("labels");
    std::filesystem::create_directories(dir.path / "prov");
    write_file(dir.file("prov/a.txt"), "Every person who deprives another.");
    LabelSet ls({CitationRef{42, "1983", std::nullopt}, CitationRef{11, "523", "a"}});
    ls.set_procedural(1, true);
    write_label_set(dir.file("labels.tsv"), ls, {"prov/a.txt", ""});
    const auto back = read_label_set(dir.file("labels.tsv"));
    REQUIRE(back.size() == 2);
    CHECK(back.at(1) == ls.at(1));
    CHECK(back.procedural(1));
    CHECK(!back.procedural(0));
    CHECK(back.provision_text(0) == "Every person who deprives another.");
    CHECK(back.missing_provisions() == std::vector<std::size_t>{1});

    write_file(dir.file("bad.tsv"), "42 \xC2\xA7" "1983\t2\n");
    CHECK_THROWS_AS(read_label_set(dir.file("bad.tsv")), DataError);
    write_file(dir.file("missing.tsv"), "42 \xC2\xA7" "1983\t0\tnope.txt\n");
    CHECK_THROWS_AS(read_label_set(dir.file("missing.tsv")), DataError);
    CHECK_NOTHROW(read_label_set(dir.file("missing.tsv"), false));
}

TEST_CASE("key lists and slugs") {
    TempDir dir("keys");
    write_file(dir.file("k.txt"), "# procedural\n42 \xC2\xA7" "1988\n\n28 \xC2\xA7" "1920\n");
    const auto keys = read_key_list(dir.file("k.txt"));
    REQUIRE(keys.size() == 2);
    CHECK(keys[1].key() == "28 \xC2\xA7" "1920");
    CHECK(key_slug(CitationRef{11, "523", "a"}) == "11_523_a");
    CHECK(key_slug(CitationRef{42, "2000e-5", std::nullopt}) == "42_2000e-5");
}

}
