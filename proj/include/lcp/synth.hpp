#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcp/corpus.hpp"

namespace lcp {

struct SynthConfig {
    std::size_t documents = 300;
    std::size_t labels = 3;
    std::size_t keywords_per_label = 8;
    std::size_t sentences_per_document = 7;
    double multi_label_rate = 0.2;  // share of documents citing a second label
    std::uint64_t seed = 0;
};

struct SynthCorpus {
    std::vector<Document> documents;
    LabelSet labels;                              // provision texts filled in
    std::vector<std::vector<std::string>> keywords;  // per label, disjoint
};

/// Keyword-driven corpus: every document cites its labels once, in a middle
/// sentence, and its neighbouring sentences draw words from those labels'
/// private vocabularies. Provision texts are written from the same vocabularies.
SynthCorpus generate_synthetic(const SynthConfig& config);

}  // namespace lcp
