#include "lcp/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lcp/util.hpp"

namespace lcp {

Document Document::from_text(std::string id, std::string text) {
    Document doc{std::move(id), std::move(text), {}};
    doc.citations = extract_citations(doc.text);
    return doc;
}

void validate_corpus(const std::vector<Document>& corpus) {
    std::unordered_set<std::string> seen;
    for (const auto& doc : corpus) {
        if (!seen.insert(doc.id).second) throw DataError("duplicate document id: " + doc.id);
        if (doc.text.empty()) throw DataError("empty document text: " + doc.id);
        for (const auto& c : doc.citations) {
            if (c.offset >= doc.text.size()) {
                throw DataError("citation offset out of bounds in document " + doc.id);
            }
        }
    }
}

LabelSet::LabelSet(std::vector<CitationRef> labels)
    : labels_(std::move(labels)), provision_texts_(labels_.size()), procedural_(labels_.size(), 0) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (!by_key_.emplace(labels_[i].key(), i).second) {
            throw DataError("duplicate label: " + labels_[i].key());
        }
    }
}

std::optional<std::size_t> LabelSet::index_of(const CitationRef& ref) const { return index_of_key(ref.key()); }

std::optional<std::size_t> LabelSet::index_of_key(const std::string& key) const {
    const auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> LabelSet::missing_provisions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < provision_texts_.size(); ++i) {
        if (trim(provision_texts_[i]).empty()) out.push_back(i);
    }
    return out;
}

std::string ContextSpan::joined() const {
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out.push_back(' ');
        out += s;
    }
    return out;
}

LabelSet build_label_set(const std::vector<Document>& corpus, std::size_t top_k,
                         const std::vector<CitationRef>& exclude) {
    std::map<std::string, std::pair<std::size_t, CitationRef>> counts;
    for (const auto& doc : corpus) {
        std::set<std::string> keys;
        for (const auto& c : doc.citations) {
            auto key = c.ref.key();
            if (keys.insert(key).second) {
                auto& slot = counts.try_emplace(key, 0, c.ref).first->second;
                ++slot.first;
            }
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked;
    ranked.reserve(counts.size());
    for (const auto& [key, value] : counts) ranked.emplace_back(key, value.first);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > top_k) ranked.resize(top_k);

    std::set<std::string> excluded;
    for (const auto& e : exclude) excluded.insert(e.key());
    std::vector<CitationRef> labels;
    for (const auto& [key, count] : ranked) {
        if (!excluded.contains(key)) labels.push_back(counts.at(key).second);
    }
    if (labels.empty()) throw DataError("label set is empty after exclusion");
    return LabelSet(std::move(labels));
}

PreparedDocument prepare_document(const Document& doc, const LabelSet& labels) {
    const auto is_target = [&](const CitationRef& ref) { return labels.index_of(ref).has_value(); };
    const auto cleaned = clean_text_mapped(doc.text, MaskPolicy::sentinel, is_target);
    const auto ranges = sentence_ranges(cleaned.text);

    PreparedDocument out;
    out.doc_id = doc.id;
    out.sentences.reserve(ranges.size());
    for (const auto& r : ranges) out.sentences.emplace_back(cleaned.text.substr(r.begin, r.end - r.begin));

    for (const auto& c : doc.citations) {
        const auto label = labels.index_of(c.ref);
        if (!label || ranges.empty()) continue;
        const std::size_t pos = cleaned.offset_map.at(std::min(c.offset, doc.text.size()));
        // first sentence whose end lies beyond the mapped offset
        auto it = std::upper_bound(ranges.begin(), ranges.end(), pos,
                                   [](std::size_t p, const SentenceRange& r) { return p < r.end; });
        if (it == ranges.end()) it = std::prev(ranges.end());
        out.sites.emplace_back(static_cast<std::size_t>(it - ranges.begin()), *label);
    }
    std::sort(out.sites.begin(), out.sites.end());
    out.sites.erase(std::unique(out.sites.begin(), out.sites.end()), out.sites.end());
    return out;
}

std::vector<ContextSpan> extract_context_spans(const PreparedDocument& doc, std::size_t label_count,
                                               std::size_t window, std::uint64_t seed) {
    std::vector<ContextSpan> spans;
    const std::size_t n = doc.sentences.size();
    if (n == 0) return spans;

    auto make_span = [&](std::vector<std::size_t> indices) {
        ContextSpan span;
        span.id = doc.doc_id + "#" + std::to_string(spans.size());
        span.doc_id = doc.doc_id;
        span.labels.assign(label_count, 0);
        for (auto i : indices) span.sentences.push_back(doc.sentences[i]);
        for (const auto& [sentence, label] : doc.sites) {
            if (std::binary_search(indices.begin(), indices.end(), sentence)) span.labels.at(label) = 1;
        }
        spans.push_back(std::move(span));
    };

    if (doc.sites.empty()) {
        Rng rng(splitmix64(seed ^ fnv1a64(doc.doc_id)));
        auto picked = sample_without_replacement(n, kFallbackSentences, rng);
        std::sort(picked.begin(), picked.end());
        make_span(std::move(picked));
        return spans;
    }

    // sites are sorted by sentence, so windows arrive in order
    std::size_t lo = 0, hi = 0;
    bool open = false;
    for (const auto& site : doc.sites) {
        const std::size_t s = site.first;
        const std::size_t b = s > window ? s - window : 0;
        const std::size_t e = std::min(n - 1, s + window);
        if (open && b <= hi) {
            hi = std::max(hi, e);
            continue;
        }
        if (open) {
            std::vector<std::size_t> idx(hi - lo + 1);
            std::iota(idx.begin(), idx.end(), lo);
            make_span(std::move(idx));
        }
        lo = b;
        hi = e;
        open = true;
    }
    std::vector<std::size_t> idx(hi - lo + 1);
    std::iota(idx.begin(), idx.end(), lo);
    make_span(std::move(idx));
    return spans;
}

std::vector<ContextSpan> extract_context_spans(const Document& doc, const LabelSet& labels, std::size_t window,
                                               std::uint64_t seed) {
    return extract_context_spans(prepare_document(doc, labels), labels.size(), window, seed);
}

std::map<std::string, std::string> assign_partitions(const std::vector<std::string>& doc_ids, SplitRatios ratios,
                                                     std::uint64_t seed) {
    const double total = ratios.train + ratios.validation + ratios.test;
    if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 || std::abs(total - 1.0) > 1e-9) {
        throw DataError("split ratios must be non-negative and sum to 1");
    }
    std::vector<std::string> ids(doc_ids);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    // order by a seeded per-id hash so membership does not depend on input order
    std::vector<std::pair<std::uint64_t, std::string>> keyed;
    keyed.reserve(ids.size());
    for (auto& id : ids) keyed.emplace_back(splitmix64(seed ^ fnv1a64(id)), std::move(id));
    std::sort(keyed.begin(), keyed.end());

    const auto n = static_cast<double>(keyed.size());
    const auto n_train = static_cast<std::size_t>(std::llround(ratios.train * n));
    const auto n_val = static_cast<std::size_t>(std::llround(ratios.validation * n));
    if (n_train == 0 || n_val == 0 || n_train + n_val >= keyed.size()) {
        throw DataError("split leaves an empty partition (" + std::to_string(keyed.size()) + " documents)");
    }
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        const char* part = i < n_train ? "train" : (i < n_train + n_val ? "validation" : "test");
        out.emplace(keyed[i].second, part);
    }
    return out;
}

DatasetSplit split_dataset(const std::vector<ContextSpan>& spans, SplitRatios ratios, std::uint64_t seed) {
    std::vector<std::string> ids;
    ids.reserve(spans.size());
    for (const auto& s : spans) ids.push_back(s.doc_id);
    const auto parts = assign_partitions(ids, ratios, seed);
    DatasetSplit out;
    for (const auto& s : spans) {
        const auto& p = parts.at(s.doc_id);
        if (p == "train") {
            out.train.push_back(s);
        } else if (p == "validation") {
            out.validation.push_back(s);
        } else {
            out.test.push_back(s);
        }
    }
    return out;
}

CorpusStats corpus_stats(const std::vector<Document>& corpus, const LabelSet& labels) {
    CorpusStats stats;
    if (corpus.empty()) return stats;
    std::vector<CorpusStats::LabelRow> rows(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) rows[i].key = labels.at(i).key();

    double total_distinct = 0.0;
    for (const auto& doc : corpus) {
        std::set<std::string> all;
        std::set<std::size_t> targets;
        for (const auto& c : doc.citations) {
            all.insert(c.ref.key());
            if (auto idx = labels.index_of(c.ref)) {
                ++rows[*idx].citations;
                targets.insert(*idx);
            }
        }
        for (auto idx : targets) ++rows[idx].documents;
        stats.documents.push_back({doc.id, targets.size(), all.size()});
        total_distinct += static_cast<double>(all.size());
    }
    stats.mean_citations_per_document = total_distinct / static_cast<double>(corpus.size());

    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.documents != b.documents) return a.documents > b.documents;
        return a.key < b.key;
    });
    stats.labels = std::move(rows);
    std::stable_sort(stats.documents.begin(), stats.documents.end(), [](const auto& a, const auto& b) {
        if (a.distinct_targets != b.distinct_targets) return a.distinct_targets > b.distinct_targets;
        return a.doc_id < b.doc_id;
    });
    return stats;
}

std::string CorpusStats::to_tsv() const {
    std::ostringstream out;
    out << "# labels\nkey\tdocuments\tcitations\n";
    for (const auto& r : labels) out << r.key << '\t' << r.documents << '\t' << r.citations << '\n';
    out << "# documents\ndoc_id\tdistinct_targets\tdistinct_citations\n";
    for (const auto& r : documents) {
        out << r.doc_id << '\t' << r.distinct_targets << '\t' << r.distinct_citations << '\n';
    }
    out << "# summary\nmean_citations_per_document\t" << mean_citations_per_document << '\n';
    return out.str();
}

}  // namespace lcp
