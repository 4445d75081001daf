#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcp {

/// A U.S. Code citation: title, section and an optional first-level subsection.
struct CitationRef {
    int title = 0;
    std::string section;
    std::optional<std::string> subsection;

    /// Canonical label key, e.g. "42 §1983" or "11 §523(a)".
    std::string key() const;

    /// Citation text in the reporter form, e.g. "11 U.S.C. § 523(a)".
    std::string render() const;

    /// Inverse of key(); throws DataError on malformed keys.
    static CitationRef parse_key(std::string_view key);

    auto operator<=>(const CitationRef&) const = default;
    bool operator==(const CitationRef&) const = default;
};

struct CitationMatch {
    CitationRef ref;
    std::size_t offset = 0;  // byte offset of the title's first digit
    std::size_t length = 0;  // bytes covered by the citation string
};

/// Scans left to right for non-overlapping U.S. Code citations. Accepted spellings
/// of the code are "U.S.C.", "U. S. C.", "U.S. Code" and "USC", with "§" or "§§"
/// and optional whitespace around the section sign.
std::vector<CitationMatch> extract_citations(std::string_view text);

/// Recognises a citation starting exactly at `pos`.
std::optional<CitationMatch> match_citation_at(std::string_view text, std::size_t pos);

/// Recognises a Supreme Court reporter citation ("556 U.S. 662", "129 S. Ct. 1937",
/// "173 L. Ed. 2d 868") starting at `pos`; returns its byte length.
std::optional<std::size_t> match_reporter_at(std::string_view text, std::size_t pos);

}  // namespace lcp
