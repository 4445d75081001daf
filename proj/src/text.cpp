#include "lcp/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace lcp {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_alnum_ascii(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Length of an HTML tag / comment starting at pos, or 0.
std::size_t html_tag_length(std::string_view s, std::size_t pos) {
    if (s[pos] != '<' || pos + 1 >= s.size()) return 0;
    if (s.substr(pos, kMaskToken.size()) == kMaskToken) return 0;
    if (s.substr(pos, 4) == "<!--") {
        const auto end = s.find("-->", pos + 4);
        return end == std::string_view::npos ? 0 : end + 3 - pos;
    }
    const char next = s[pos + 1];
    if (!(std::isalpha(static_cast<unsigned char>(next)) || next == '/' || next == '!')) return 0;
    for (std::size_t j = pos + 1; j < s.size(); ++j) {
        if (s[j] == '>') return j + 1 - pos;
        if (s[j] == '<') return 0;
    }
    return 0;
}

std::size_t url_length(std::string_view s, std::size_t pos) {
    const bool starts = s.substr(pos, 7) == "http://" || s.substr(pos, 8) == "https://" ||
                        s.substr(pos, 4) == "www.";
    if (!starts) return 0;
    if (pos > 0 && is_alnum_ascii(s[pos - 1])) return 0;
    std::size_t j = pos;
    while (j < s.size() && !is_space(s[j]) && s[j] != '<' && s[j] != '"') ++j;
    return j - pos;
}

class Builder {
public:
    explicit Builder(std::size_t raw_size) { map_.resize(raw_size + 1, 0); }

    void emit(char c) {
        if (is_space(c)) {
            pending_space_ = true;
            return;
        }
        flush_space();
        out_.push_back(c);
    }
    void emit_token(std::string_view tok) {
        flush_space();
        out_.append(tok);
    }
    void separator() { pending_space_ = true; }
    void mark(std::size_t raw_pos) { map_[raw_pos] = out_.size() + ((pending_space_ && !out_.empty()) ? 1 : 0); }

    CleanedText finish(std::size_t raw_size) {
        map_[raw_size] = out_.size();
        for (auto& m : map_) m = std::min(m, out_.size());
        return CleanedText{std::move(out_), std::move(map_)};
    }

private:
    void flush_space() {
        if (pending_space_ && !out_.empty()) out_.push_back(' ');
        pending_space_ = false;
    }

    std::string out_;
    std::vector<std::size_t> map_;
    bool pending_space_ = false;
};

}  // namespace

CleanedText clean_text_mapped(std::string_view raw, MaskPolicy policy, const TargetPredicate& is_target) {
    Builder b(raw.size());
    std::size_t i = 0;
    auto mark_span = [&](std::size_t from, std::size_t to) {
        for (std::size_t j = from; j < to; ++j) b.mark(j);
    };
    while (i < raw.size()) {
        b.mark(i);
        if (raw.substr(i, kMaskToken.size()) == kMaskToken) {
            b.emit_token(kMaskToken);
            mark_span(i + 1, i + kMaskToken.size());
            i += kMaskToken.size();
            continue;
        }
        if (auto m = match_citation_at(raw, i)) {
            const bool target = !is_target || is_target(m->ref);
            if (policy == MaskPolicy::sentinel && target) {
                b.emit_token(kMaskToken);
            } else {
                b.separator();
            }
            mark_span(i + 1, i + m->length);
            i += m->length;
            continue;
        }
        if (auto len = match_reporter_at(raw, i)) {
            b.separator();
            mark_span(i + 1, i + *len);
            i += *len;
            continue;
        }
        if (const auto len = html_tag_length(raw, i)) {
            b.separator();
            mark_span(i + 1, i + len);
            i += len;
            continue;
        }
        if (const auto len = url_length(raw, i)) {
            b.separator();
            mark_span(i + 1, i + len);
            i += len;
            continue;
        }
        const auto byte = static_cast<unsigned char>(raw[i]);
        if (byte < 0x80) b.emit(raw[i]);
        ++i;
    }
    return b.finish(raw.size());
}

std::string clean_text(std::string_view raw, MaskPolicy policy, const TargetPredicate& is_target) {
    return clean_text_mapped(raw, policy, is_target).text;
}

namespace {

constexpr std::array<std::string_view, 52> kAbbreviations = {
    "v",     "vs",    "u.s",   "fed",  "no",   "nos",  "inc",  "corp", "co",    "ltd",  "mr",
    "mrs",   "ms",    "dr",    "ct",   "app",  "cir",  "supp", "id",   "cal",   "stat", "pub",
    "ed",    "sec",   "jr",    "sr",   "st",   "art",  "am",   "rev",  "ann",   "gen",  "dist",
    "bankr", "cong",  "reg",   "civ",  "crim", "evid", "e.g",  "i.e",  "cf",    "ex",   "n",
    "p",     "pp",    "para",  "ch",   "cl",   "amend", "assn", "ass'n"};

bool is_guarded_word(std::string_view word) {
    if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) return true;
    const std::string lower = to_lower(word);
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

}  // namespace

std::vector<SentenceRange> sentence_ranges(std::string_view text) {
    std::vector<SentenceRange> out;
    std::size_t start = 0;
    auto push = [&](std::size_t b, std::size_t e) {
        while (b < e && is_space(text[b])) ++b;
        while (e > b && is_space(text[e - 1])) --e;
        if (e > b) out.push_back({b, e});
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // absorb runs of terminal punctuation and closing quotes/brackets
        std::size_t end = i + 1;
        while (end < text.size() && (text[end] == '.' || text[end] == '!' || text[end] == '?')) ++end;
        while (end < text.size() && (text[end] == '"' || text[end] == '\'' || text[end] == ')' || text[end] == ']')) ++end;
        if (end < text.size() && !is_space(text[end])) continue;
        if (c == '.') {
            // word preceding the period, including internal periods ("U.S", "e.g")
            std::size_t wb = i;
            while (wb > start && !is_space(text[wb - 1]) && text[wb - 1] != '(' && text[wb - 1] != '"') --wb;
            if (is_guarded_word(text.substr(wb, i - wb))) continue;
        }
        push(start, end);
        start = end;
        i = end - 1;
    }
    push(start, text.size());
    return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& r : sentence_ranges(text)) out.emplace_back(text.substr(r.begin, r.end - r.begin));
    return out;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.substr(i, kMaskToken.size()) == kMaskToken) {
            out.push_back({i, i + kMaskToken.size(), true});
            i += kMaskToken.size();
            continue;
        }
        if (!is_alnum_ascii(text[i])) {
            ++i;
            continue;
        }
        const std::size_t b = i;
        while (i < text.size()) {
            if (is_alnum_ascii(text[i])) {
                ++i;
            } else if (text[i] == '\'' && i + 1 < text.size() && is_alnum_ascii(text[i + 1]) && i > b) {
                ++i;
            } else {
                break;
            }
        }
        out.push_back({b, i, false});
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace lcp
