#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lcp/citation.hpp"

namespace lcp {

/// Placeholder written over removed target citations and masked tokens.
inline constexpr std::string_view kMaskToken = "<mask>";

enum class MaskPolicy {
    strip,     // citation strings are deleted
    sentinel,  // target citations become kMaskToken, others are deleted
};

/// Decides whether a citation is a prediction target; empty means "every citation".
using TargetPredicate = std::function<bool(const CitationRef&)>;

struct CleanedText {
    std::string text;
    /// offset_map[i] is the cleaned-text offset corresponding to raw byte i
    /// (size raw.size() + 1).
    std::vector<std::size_t> offset_map;
};

/// Removes HTML tags, URLs, U.S. Code and Supreme Court citations and non-ASCII
/// bytes, then collapses whitespace runs to one space and trims.
CleanedText clean_text_mapped(std::string_view raw, MaskPolicy policy, const TargetPredicate& is_target = {});

std::string clean_text(std::string_view raw, MaskPolicy policy, const TargetPredicate& is_target = {});

struct SentenceRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
};

/// Rule-based segmentation on . ! ? with an abbreviation guard list and
/// single-letter initials ("A.") treated as non-terminal.
std::vector<SentenceRange> sentence_ranges(std::string_view text);

std::vector<std::string> split_sentences(std::string_view text);

struct Token {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool is_mask = false;
};

/// Word tokens: runs of ASCII letters/digits with internal apostrophes
/// ("attorney's"); kMaskToken is a single special token.
std::vector<Token> tokenize(std::string_view text);

std::string to_lower(std::string_view s);

}  // namespace lcp
