#include "lcp/citation.hpp"

#include <cctype>
#include <charconv>

#include "lcp/util.hpp"

namespace lcp {
namespace {

constexpr std::string_view kSectionSign = "\xC2\xA7";

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return is_digit(c) || is_alpha(c); }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

struct Cursor {
    std::string_view s;
    std::size_t i;

    bool done() const { return i >= s.size(); }
    char peek() const { return done() ? '\0' : s[i]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++i;
        return true;
    }
    bool eat(std::string_view lit) {
        if (s.substr(i, lit.size()) != lit) return false;
        i += lit.size();
        return true;
    }
    std::size_t skip_spaces() {
        const std::size_t start = i;
        while (!done() && is_space(s[i])) ++i;
        return i - start;
    }
    std::string_view digits() {
        const std::size_t start = i;
        while (!done() && is_digit(s[i])) ++i;
        return s.substr(start, i - start);
    }
};

// "U.S.C." | "U.S.C" | "U. S. C." | "U.S. Code" | "USC"
bool eat_code_name(Cursor& c) {
    if (!c.eat('U')) return false;
    const bool dotted = c.eat('.');
    if (dotted) c.skip_spaces();
    if (!c.eat('S')) return false;
    if (dotted) {
        if (!c.eat('.')) return false;
        c.skip_spaces();
    }
    if (c.eat("Code")) {
        if (!dotted) return false;
    } else if (c.eat('C')) {
        if (dotted) c.eat('.');
    } else {
        return false;
    }
    return !is_alpha(c.peek());
}

}  // namespace

std::string CitationRef::key() const {
    std::string out = std::to_string(title) + " \xC2\xA7" + section;
    if (subsection) out += "(" + *subsection + ")";
    return out;
}

std::string CitationRef::render() const {
    std::string out = std::to_string(title) + " U.S.C. \xC2\xA7 " + section;
    if (subsection) out += "(" + *subsection + ")";
    return out;
}

CitationRef CitationRef::parse_key(std::string_view key) {
    Cursor c{key, 0};
    const auto title = c.digits();
    CitationRef ref;
    if (title.empty() ||
        std::from_chars(title.data(), title.data() + title.size(), ref.title).ec != std::errc{} ||
        ref.title <= 0) {
        throw DataError("malformed citation key: " + std::string(key));
    }
    c.skip_spaces();
    if (!c.eat(kSectionSign)) throw DataError("malformed citation key: " + std::string(key));
    c.skip_spaces();
    const std::size_t start = c.i;
    while (!c.done() && c.peek() != '(') ++c.i;
    ref.section = trim(key.substr(start, c.i - start));
    if (ref.section.empty()) throw DataError("malformed citation key: " + std::string(key));
    if (c.eat('(')) {
        const std::size_t sub_start = c.i;
        while (!c.done() && c.peek() != ')') ++c.i;
        if (!c.eat(')') || c.i - 1 == sub_start || !c.done()) {
            throw DataError("malformed citation key: " + std::string(key));
        }
        ref.subsection = std::string(key.substr(sub_start, c.i - 1 - sub_start));
    }
    return ref;
}

std::optional<CitationMatch> match_citation_at(std::string_view text, std::size_t pos) {
    if (pos >= text.size() || !is_digit(text[pos])) return std::nullopt;
    if (pos > 0 && is_alnum(text[pos - 1])) return std::nullopt;

    Cursor c{text, pos};
    const auto title_digits = c.digits();
    CitationRef ref;
    if (std::from_chars(title_digits.data(), title_digits.data() + title_digits.size(), ref.title).ec !=
            std::errc{} ||
        ref.title <= 0) {
        return std::nullopt;
    }
    if (c.skip_spaces() == 0) return std::nullopt;
    if (!eat_code_name(c)) return std::nullopt;
    c.skip_spaces();
    if (!c.eat(kSectionSign)) return std::nullopt;
    c.eat(kSectionSign);
    c.skip_spaces();

    // Section: digits, then letters/digits, then an optional "-suffix" (e.g. 2000e-5).
    const std::size_t section_start = c.i;
    if (c.digits().empty()) return std::nullopt;
    while (!c.done() && is_alnum(c.peek())) ++c.i;
    if (c.peek() == '-' && c.i + 1 < text.size() && is_alnum(text[c.i + 1])) {
        ++c.i;
        while (!c.done() && is_alnum(c.peek())) ++c.i;
    }
    ref.section = std::string(text.substr(section_start, c.i - section_start));

    if (c.peek() == '(') {
        std::size_t j = c.i + 1;
        while (j < text.size() && is_alnum(text[j])) ++j;
        if (j < text.size() && text[j] == ')' && j > c.i + 1) {
            ref.subsection = std::string(text.substr(c.i + 1, j - c.i - 1));
            c.i = j + 1;
        }
    }
    return CitationMatch{std::move(ref), pos, c.i - pos};
}

std::vector<CitationMatch> extract_citations(std::string_view text) {
    std::vector<CitationMatch> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (auto m = match_citation_at(text, i)) {
            i += m->length;
            out.push_back(std::move(*m));
        } else {
            ++i;
        }
    }
    return out;
}

std::optional<std::size_t> match_reporter_at(std::string_view text, std::size_t pos) {
    if (pos >= text.size() || !is_digit(text[pos])) return std::nullopt;
    if (pos > 0 && is_alnum(text[pos - 1])) return std::nullopt;
    Cursor c{text, pos};
    c.digits();
    if (c.skip_spaces() == 0) return std::nullopt;
    const bool reporter = c.eat("U.S.") || c.eat("S. Ct.") || c.eat("S.Ct.") || c.eat("L. Ed.") ||
                          c.eat("L.Ed.");
    if (!reporter) return std::nullopt;
    const std::size_t after_reporter = c.i;
    c.skip_spaces();
    if (c.eat("2d") || c.eat("3d")) c.skip_spaces();
    if (c.i == after_reporter) return std::nullopt;
    if (c.digits().empty()) return std::nullopt;
    if (is_alpha(c.peek())) return std::nullopt;
    return c.i - pos;
}

}  // namespace lcp
