#include <doctest.h>

#include <algorithm>

#include "lcp/keywords.hpp"

using namespace lcp;

namespace {

bool contains(const std::vector<Keyword>& ks, const std::string& text) {
    return std::any_of(ks.begin(), ks.end(), [&](const Keyword& k) { return k.text == text; });
}

const char* kFeeProvision =
    "In any action or proceeding to enforce a provision of sections 1981, 1982 and 1983 of this title, "
    "the court, in its discretion, may allow the prevailing party, other than the United States, a "
    "reasonable attorney's fee as part of the costs. In awarding an attorney's fee the court may include "
    "expert fees as part of the attorney's fee. No attorney's fee shall be awarded against a judicial officer "
    "for any act or omission taken in such officer's judicial capacity.";

}  // namespace

TEST_SUITE("keywords") {

TEST_CASE("one repeated token ranks first") {
    const auto ks = extract_keywords("discharge discharge discharge discharge");
    REQUIRE_FALSE(ks.empty());
    CHECK(ks[0].text == "discharge");
}

TEST_CASE("a recurring bigram is extracted") {
    const auto ks = extract_keywords(kFeeProvision, 20, 2);
    CHECK(ks.size() <= 20);
    CHECK(contains(ks, "attorney's fee"));
    // frequency oracle: the bigram is the most repeated adjacent pair of content words
    std::size_t count = 0;
    for (std::string s = kFeeProvision; s.find("attorney's fee") != std::string::npos;
         s = s.substr(s.find("attorney's fee") + 1))
        ++count;
    CHECK(count == 4);
}

TEST_CASE("ranking is deterministic and sorted") {
    const auto a = extract_keywords(kFeeProvision);
    const auto b = extract_keywords(kFeeProvision);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].text == b[i].text);
        CHECK(a[i].score == b[i].score);
        if (i > 0) {
            const bool ordered = a[i - 1].score < a[i].score ||
                                 (a[i - 1].score == a[i].score && a[i - 1].text < a[i].text);
            CHECK(ordered);
        }
    }
}

TEST_CASE("stopwords never appear as unigrams or at bigram edges") {
    for (const auto& k : extract_keywords(kFeeProvision, 50, 2)) {
        const auto space = k.text.find(' ');
        const auto first = k.text.substr(0, space);
        const auto last = space == std::string::npos ? first : k.text.substr(space + 1);
        CHECK_FALSE(is_stopword(first));
        CHECK_FALSE(is_stopword(last));
    }
    CHECK(is_stopword("the"));
    CHECK_FALSE(is_stopword("discharge"));
}

TEST_CASE("short and empty texts") {
    CHECK(extract_keywords("").empty());
    CHECK(extract_keywords("the of and").empty());
    CHECK(extract_keywords("wages", 20, 1).size() == 1);
}

}
