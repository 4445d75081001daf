#include "lcp/masking.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lcp/keywords.hpp"
#include "lcp/text.hpp"
#include "lcp/util.hpp"

namespace lcp {
namespace {

bool only_spaces_between(const std::string& s, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
        if (s[i] != ' ' && s[i] != '\t') return false;
    }
    return from < to;
}

struct Replacement {
    std::size_t begin, end;
};

std::string replace_ranges(const std::string& s, std::vector<Replacement> reps) {
    std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) { return a.begin < b.begin; });
    std::string out;
    std::size_t pos = 0;
    for (const auto& r : reps) {
        out.append(s, pos, r.begin - pos);
        out.append(kMaskToken);
        pos = r.end;
    }
    out.append(s, pos, std::string::npos);
    return out;
}

}  // namespace

std::vector<ContextSpan> keyword_mask(const std::vector<ContextSpan>& spans, const std::vector<std::string>& keywords) {
    std::set<std::string> unigrams;
    std::set<std::pair<std::string, std::string>> bigrams;
    for (const auto& kw : keywords) {
        const auto lower = to_lower(kw);
        const auto toks = tokenize(lower);
        if (toks.size() == 1 && !toks[0].is_mask) {
            unigrams.insert(lower.substr(toks[0].begin, toks[0].end - toks[0].begin));
        } else if (toks.size() == 2 && !toks[0].is_mask && !toks[1].is_mask) {
            bigrams.emplace(lower.substr(toks[0].begin, toks[0].end - toks[0].begin),
                            lower.substr(toks[1].begin, toks[1].end - toks[1].begin));
        }
    }

    std::vector<ContextSpan> out = spans;
    for (auto& span : out) {
        for (auto& sentence : span.sentences) {
            const auto toks = tokenize(sentence);
            std::vector<std::string> lower;
            lower.reserve(toks.size());
            for (const auto& t : toks) lower.push_back(to_lower(std::string_view(sentence).substr(t.begin, t.end - t.begin)));
            std::vector<Replacement> reps;
            for (std::size_t i = 0; i < toks.size();) {
                if (toks[i].is_mask) {
                    ++i;
                    continue;
                }
                if (i + 1 < toks.size() && !toks[i + 1].is_mask && bigrams.contains({lower[i], lower[i + 1]}) &&
                    only_spaces_between(sentence, toks[i].end, toks[i + 1].begin)) {
                    reps.push_back({toks[i].begin, toks[i + 1].end});
                    i += 2;
                    continue;
                }
                if (unigrams.contains(lower[i])) reps.push_back({toks[i].begin, toks[i].end});
                ++i;
            }
            if (!reps.empty()) sentence = replace_ranges(sentence, std::move(reps));
        }
    }
    return out;
}

std::vector<ContextSpan> random_mask(const std::vector<ContextSpan>& spans, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("random_mask: rate must lie in [0, 1]");
    std::vector<ContextSpan> out = spans;
    for (auto& span : out) {
        // (sentence, token) for every unmasked word token
        std::vector<std::pair<std::size_t, Token>> positions;
        for (std::size_t s = 0; s < span.sentences.size(); ++s) {
            for (const auto& t : tokenize(span.sentences[s])) {
                if (!t.is_mask) positions.emplace_back(s, t);
            }
        }
        const auto count = static_cast<std::size_t>(std::floor(rate * static_cast<double>(positions.size())));
        if (count == 0) continue;
        Rng rng(splitmix64(seed ^ fnv1a64(span.id)));
        const auto picked = sample_without_replacement(positions.size(), count, rng);
        std::vector<std::vector<Replacement>> per_sentence(span.sentences.size());
        for (auto idx : picked) {
            const auto& [s, t] = positions[idx];
            per_sentence[s].push_back({t.begin, t.end});
        }
        for (std::size_t s = 0; s < span.sentences.size(); ++s) {
            if (!per_sentence[s].empty()) span.sentences[s] = replace_ranges(span.sentences[s], std::move(per_sentence[s]));
        }
    }
    return out;
}

std::vector<std::string> pooled_provision_keywords(const LabelSet& labels, std::size_t count, std::size_t max_ngram) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t l = 0; l < labels.size(); ++l) {
        for (const auto& kw : extract_keywords(labels.provision_text(l), count, max_ngram)) {
            if (seen.insert(kw.text).second) out.push_back(kw.text);
        }
    }
    return out;
}

}  // namespace lcp
