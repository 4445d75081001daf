#include "lcp/synth.hpp"

#include <algorithm>
#include <set>

#include "lcp/util.hpp"

namespace lcp {
namespace {

const std::vector<std::vector<std::string>> kVocabularies = {
    {"officer", "arrest", "excessive", "force", "custody", "warrant", "deprivation", "municipal", "police", "detention"},
    {"debtor", "discharge", "creditor", "bankruptcy", "fraudulent", "nondischargeable", "trustee", "estate", "insolvency", "lien"},
    {"overtime", "wages", "employer", "employee", "hours", "liquidated", "payroll", "salary", "workweek", "timesheet"},
    {"jurisdiction", "federal", "diversity", "removal", "remand", "citizenship", "forum", "venue", "domicile", "amount"},
    {"discrimination", "retaliation", "harassment", "hostile", "promotion", "termination", "gender", "race", "charge", "eeoc"},
    {"collector", "consumer", "validation", "dunning", "harassing", "misleading", "collection", "letter", "furnisher", "verification"},
};

const std::vector<std::string> kFiller = {
    "court", "plaintiff", "defendant", "claim", "motion", "record", "evidence", "argument", "party", "ruling",
    "judgment", "appeal", "matter", "issue", "review", "standard", "counsel", "hearing", "opinion", "briefing",
    "complaint", "answer", "discovery", "trial", "judge", "panel", "decision", "order", "filing", "response",
    "testimony", "witness", "exhibit", "deadline", "schedule", "notice", "request", "objection", "transcript", "docket",
};

const std::vector<std::string> kGlue = {"the", "a", "of", "and", "that", "in", "to", "for", "on", "with", "was", "is"};

const std::vector<CitationRef> kRefs = {
    {42, "1983", std::nullopt}, {11, "523", "a"},  {29, "216", "b"},
    {28, "1332", std::nullopt}, {42, "2000e-5", std::nullopt}, {15, "1692g", std::nullopt},
};

std::string pseudo_word(Rng& rng) {
    static const char* syllables[] = {"ka", "ro", "ven", "dal", "mi", "tor", "su", "lex", "qua", "ber", "nos", "fi"};
    std::string w;
    const auto n = 3 + uniform_below(rng, 2);
    for (std::uint64_t i = 0; i < n; ++i) w += syllables[uniform_below(rng, 12)];
    return w;
}

const std::string& pick(const std::vector<std::string>& words, Rng& rng) {
    return words[uniform_below(rng, words.size())];
}

std::string sentence(std::vector<std::string> words) {
    std::string s;
    for (const auto& w : words) {
        if (!s.empty()) s += ' ';
        s += w;
    }
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s + ".";
}

// 6-9 filler/glue words with `inject` spliced in at random positions
std::vector<std::string> filler_words(Rng& rng, const std::vector<std::string>& inject) {
    std::vector<std::string> words;
    const auto n = 6 + uniform_below(rng, 4);
    // ends on a filler word; a trailing "a." would read as an initial
    for (std::uint64_t i = 0; i < n; ++i) words.push_back(i % 2 == n % 2 ? pick(kGlue, rng) : pick(kFiller, rng));
    for (const auto& w : inject) {
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(1 + uniform_below(rng, words.size())), w);
    }
    return words;
}

std::string provision_text(const std::vector<std::string>& kw, Rng& rng) {
    static const std::vector<std::vector<std::string>> frames = {
        {"any", "#", "shall", "be", "liable", "for", "the", "#", "of", "a", "#"},
        {"no", "#", "may", "be", "subject", "to", "#", "under", "this", "section"},
        {"the", "#", "of", "any", "#", "shall", "include", "the", "#"},
        {"a", "#", "is", "not", "entitled", "to", "#", "except", "as", "provided", "by", "#"},
    };
    std::string text;
    for (std::size_t round = 0; round < 3; ++round) {
        for (const auto& frame : frames) {
            std::vector<std::string> words;
            for (const auto& f : frame) words.push_back(f == "#" ? pick(kw, rng) : f);
            text += (text.empty() ? "" : " ") + sentence(words);
        }
    }
    // every keyword at least once
    std::vector<std::string> all(kw);
    all.insert(all.begin(), "this section covers");
    return text + " " + sentence(all);
}

}  // namespace

SynthCorpus generate_synthetic(const SynthConfig& config) {
    if (config.labels == 0 || config.documents == 0) throw DataError("synth: labels and documents must be positive");
    if (config.keywords_per_label == 0) throw DataError("synth: keywords_per_label must be positive");
    if (config.sentences_per_document < 5) throw DataError("synth: need at least 5 sentences per document");
    if (config.multi_label_rate < 0.0 || config.multi_label_rate > 1.0) {
        throw DataError("synth: multi_label_rate must lie in [0, 1]");
    }

    SynthCorpus out;
    Rng vocab_rng(derive_seed(config.seed, "vocabulary"));
    std::set<std::string> used(kFiller.begin(), kFiller.end());
    used.insert(kGlue.begin(), kGlue.end());
    std::vector<CitationRef> refs;
    for (std::size_t l = 0; l < config.labels; ++l) {
        refs.push_back(l < kRefs.size() ? kRefs[l] : CitationRef{18, std::to_string(1000 + l), std::nullopt});
        std::vector<std::string> kw;
        if (l < kVocabularies.size()) {
            for (const auto& w : kVocabularies[l]) {
                if (kw.size() < config.keywords_per_label) kw.push_back(w);
            }
        }
        while (kw.size() < config.keywords_per_label) {
            auto w = pseudo_word(vocab_rng);
            if (used.count(w) || std::find(kw.begin(), kw.end(), w) != kw.end()) continue;
            kw.push_back(std::move(w));
        }
        used.insert(kw.begin(), kw.end());
        out.keywords.push_back(std::move(kw));
    }
    out.labels = LabelSet(refs);
    for (std::size_t l = 0; l < config.labels; ++l) {
        Rng rng(derive_seed(config.seed, "provision:" + std::to_string(l)));
        out.labels.set_provision_text(l, provision_text(out.keywords[l], rng));
    }

    const std::size_t n = config.sentences_per_document;
    const std::size_t cite_at = n / 2;
    const std::size_t width = std::to_string(config.documents).size();
    for (std::size_t d = 0; d < config.documents; ++d) {
        std::string id = std::to_string(d);
        id = "synth-" + std::string(width - id.size(), '0') + id;
        Rng rng(derive_seed(config.seed, "doc:" + id));
        std::vector<std::size_t> cited = {d % config.labels};
        if (config.labels > 1 && uniform_unit(rng) < config.multi_label_rate) {
            cited.push_back((cited[0] + 1 + uniform_below(rng, config.labels - 1)) % config.labels);
        }
        std::string text;
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::string> inject;
            const bool near = s + 2 >= cite_at && s <= cite_at + 2;
            if (near) {
                for (auto l : cited) {
                    const auto count = s == cite_at ? 1 : 1 + uniform_below(rng, 2);
                    for (std::uint64_t i = 0; i < count; ++i) inject.push_back(pick(out.keywords[l], rng));
                }
            }
            auto words = filler_words(rng, inject);
            if (s == cite_at) {
                words.push_back("under");
                for (std::size_t c = 0; c < cited.size(); ++c) {
                    if (c > 0) words.push_back("and");
                    words.push_back(refs[cited[c]].render());
                }
            }
            text += (text.empty() ? "" : " ") + sentence(words);
        }
        out.documents.push_back(Document::from_text(std::move(id), std::move(text)));
    }
    return out;
}

}  // namespace lcp
