#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcp/corpus.hpp"

namespace lcp {

/// Replaces every case-insensitive occurrence of a keyword (one or two words,
/// longest match first) with kMaskToken. Other characters are untouched.
std::vector<ContextSpan> keyword_mask(const std::vector<ContextSpan>& spans, const std::vector<std::string>& keywords);

/// Masks floor(rate * tokens) word tokens per span, positions drawn without
/// replacement from a per-span stream of `seed`.
std::vector<ContextSpan> random_mask(const std::vector<ContextSpan>& spans, double rate, std::uint64_t seed);

/// Union of the top `count` keywords of every label's provision text, in label order.
std::vector<std::string> pooled_provision_keywords(const LabelSet& labels, std::size_t count = 20,
                                                   std::size_t max_ngram = 2);

}  // namespace lcp
