#include "lcp/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "lcp/text.hpp"

namespace lcp {
namespace {

const std::unordered_set<std::string_view>& stopwords() {
    static const std::unordered_set<std::string_view> words = {
        "a",       "about",  "above",   "after",   "again",  "against", "all",    "also",   "am",     "an",
        "and",     "any",    "are",     "as",      "at",     "be",      "because", "been",  "before", "being",
        "below",   "between", "both",   "but",     "by",     "can",     "could",  "did",    "do",     "does",
        "doing",   "down",   "during",  "each",    "either", "few",     "for",    "from",   "further", "had",
        "has",     "have",   "having",  "he",      "her",    "here",    "hers",   "him",    "his",    "how",
        "i",       "if",     "in",      "into",    "is",     "it",      "its",    "itself", "may",    "me",
        "might",   "more",   "most",    "must",    "my",     "no",      "nor",    "not",    "of",     "off",
        "on",      "once",   "only",    "or",      "other",  "our",     "ours",   "out",    "over",   "own",
        "same",    "shall",  "she",     "should",  "so",     "some",    "such",   "than",   "that",   "the",
        "their",   "theirs", "them",    "then",    "there",  "these",   "they",   "this",   "those",  "through",
        "to",      "too",    "under",   "until",   "up",     "upon",    "very",   "was",    "we",     "were",
        "what",    "when",   "where",   "which",   "while",  "who",     "whom",   "why",    "will",   "with",
        "within",  "without", "would",  "you",     "your",   "yours",   "thereof", "therein", "hereby", "herein",
        "whether", "any",    "every",   "whose",   "per",    "via",     "unless", "except", "subsection",
        "section", "paragraph", "title", "chapter", "clause"};
    return words;
}

struct TermStats {
    std::size_t tf = 0;
    std::size_t tf_upper = 0;
    std::size_t tf_acronym = 0;
    std::vector<std::size_t> sentence_ids;
    std::map<std::string, std::size_t> left, right;
    double score = 0.0;
};

bool candidate_term(std::string_view lower) {
    if (lower.size() < 3) return false;
    if (std::all_of(lower.begin(), lower.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return false;
    }
    return !is_stopword(lower);
}

double median(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? static_cast<double>(v[n / 2]) : 0.5 * static_cast<double>(v[n / 2 - 1] + v[n / 2]);
}

std::size_t total(const std::map<std::string, std::size_t>& m) {
    std::size_t t = 0;
    for (const auto& [_, c] : m) t += c;
    return t;
}

}  // namespace

bool is_stopword(std::string_view lower_word) { return stopwords().contains(lower_word); }

std::vector<Keyword> extract_keywords(std::string_view text, std::size_t count, std::size_t max_ngram) {
    const auto sentences = split_sentences(text);
    std::map<std::string, TermStats> terms;
    // per sentence: lowered tokens and whether each is a valid candidate term
    std::vector<std::vector<std::pair<std::string, bool>>> tokens_by_sentence;
    std::map<std::string, std::size_t> bigram_tf;

    for (std::size_t si = 0; si < sentences.size(); ++si) {
        const auto& sentence = sentences[si];
        std::vector<std::pair<std::string, bool>> toks;
        const auto raw_tokens = tokenize(sentence);
        for (std::size_t ti = 0; ti < raw_tokens.size(); ++ti) {
            const auto& t = raw_tokens[ti];
            if (t.is_mask) {
                toks.emplace_back(std::string(kMaskToken), false);
                continue;
            }
            const std::string_view word(sentence.data() + t.begin, t.end - t.begin);
            std::string lower = to_lower(word);
            const bool valid = candidate_term(lower);
            if (valid) {
                auto& s = terms[lower];
                ++s.tf;
                s.sentence_ids.push_back(si);
                const bool upper_start = std::isupper(static_cast<unsigned char>(word[0])) != 0;
                const bool all_caps =
                    word.size() > 1 && std::none_of(word.begin(), word.end(), [](char c) {
                        return std::islower(static_cast<unsigned char>(c));
                    });
                if (all_caps) {
                    ++s.tf_acronym;
                } else if (upper_start && ti > 0) {
                    ++s.tf_upper;
                }
            }
            toks.emplace_back(std::move(lower), valid);
        }
        // co-occurrence with adjacent candidate terms
        for (std::size_t ti = 0; ti < toks.size(); ++ti) {
            if (!toks[ti].second) continue;
            auto& s = terms[toks[ti].first];
            if (ti > 0 && toks[ti - 1].second) ++s.left[toks[ti - 1].first];
            if (ti + 1 < toks.size() && toks[ti + 1].second) ++s.right[toks[ti + 1].first];
            if (max_ngram >= 2 && ti + 1 < toks.size() && toks[ti + 1].second && toks[ti + 1].first != toks[ti].first) {
                ++bigram_tf[toks[ti].first + " " + toks[ti + 1].first];
            }
        }
        tokens_by_sentence.push_back(std::move(toks));
    }
    if (terms.empty()) return {};

    double mean_tf = 0.0, max_tf = 0.0;
    for (const auto& [_, s] : terms) {
        mean_tf += static_cast<double>(s.tf);
        max_tf = std::max(max_tf, static_cast<double>(s.tf));
    }
    mean_tf /= static_cast<double>(terms.size());
    double var = 0.0;
    for (const auto& [_, s] : terms) var += std::pow(static_cast<double>(s.tf) - mean_tf, 2);
    const double std_tf = std::sqrt(var / static_cast<double>(terms.size()));
    const double n_sentences = static_cast<double>(std::max<std::size_t>(1, sentences.size()));

    for (auto& [_, s] : terms) {
        const double tf = static_cast<double>(s.tf);
        const double t_case = static_cast<double>(std::max(s.tf_upper, s.tf_acronym)) / (1.0 + std::log(tf));
        const double t_pos = std::log(std::log(3.0 + median(s.sentence_ids)));
        const double t_freq = tf / (mean_tf + std_tf);
        const auto dl = s.left.empty() ? 0.0 : static_cast<double>(s.left.size()) / static_cast<double>(total(s.left));
        const auto dr = s.right.empty() ? 0.0 : static_cast<double>(s.right.size()) / static_cast<double>(total(s.right));
        const double t_rel = 1.0 + (dl + dr) * tf / max_tf;
        const std::set<std::size_t> distinct(s.sentence_ids.begin(), s.sentence_ids.end());
        const double t_sent = static_cast<double>(distinct.size()) / n_sentences;
        s.score = (t_rel * t_pos) / (t_case + t_freq / t_rel + t_sent / t_rel);
    }

    std::vector<Keyword> ranked;
    for (const auto& [word, s] : terms) {
        ranked.push_back({word, s.score / (static_cast<double>(s.tf) * (1.0 + s.score))});
    }
    for (const auto& [phrase, tf] : bigram_tf) {
        const auto space = phrase.find(' ');
        const double a = terms.at(phrase.substr(0, space)).score;
        const double b = terms.at(phrase.substr(space + 1)).score;
        ranked.push_back({phrase, (a * b) / (static_cast<double>(tf) * (1.0 + a + b))});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Keyword& x, const Keyword& y) {
        if (x.score != y.score) return x.score < y.score;
        return x.text < y.text;
    });
    if (ranked.size() > count) ranked.resize(count);
    return ranked;
}

}  // namespace lcp
