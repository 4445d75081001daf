#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lcp {

struct Keyword {
    std::string text;  // lowercased, single-space separated
    double score = 0.0;  // lower is more relevant
};

/// Unsupervised statistical keyphrase ranking in the style of YAKE: per-term
/// casing, position, frequency, relatedness and sentence-spread features,
/// combined over unigrams and bigrams of non-stopword terms.
std::vector<Keyword> extract_keywords(std::string_view text, std::size_t count = 20, std::size_t max_ngram = 2);

bool is_stopword(std::string_view lower_word);

}  // namespace lcp
