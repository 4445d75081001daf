#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcp/citation.hpp"
#include "lcp/text.hpp"

namespace lcp {

struct Document {
    std::string id;
    std::string text;
    std::vector<CitationMatch> citations;  // offsets into `text`

    /// Builds a document, extracting citations from the text.
    static Document from_text(std::string id, std::string text);
};

/// Checks id uniqueness, non-empty text and citation offset bounds.
void validate_corpus(const std::vector<Document>& corpus);

using LabelVector = std::vector<std::uint8_t>;

/// The ordered target citations L; index order is fixed for an experiment.
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(std::vector<CitationRef> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<CitationRef>& labels() const { return labels_; }
    const CitationRef& at(std::size_t i) const { return labels_.at(i); }
    std::optional<std::size_t> index_of(const CitationRef& ref) const;
    std::optional<std::size_t> index_of_key(const std::string& key) const;

    const std::string& provision_text(std::size_t i) const { return provision_texts_.at(i); }
    void set_provision_text(std::size_t i, std::string text) { provision_texts_.at(i) = std::move(text); }
    bool procedural(std::size_t i) const { return procedural_.at(i) != 0; }
    void set_procedural(std::size_t i, bool flag) { procedural_.at(i) = flag ? 1 : 0; }

    /// Labels whose provision text is empty.
    std::vector<std::size_t> missing_provisions() const;

private:
    std::vector<CitationRef> labels_;
    std::map<std::string, std::size_t> by_key_;
    std::vector<std::string> provision_texts_;
    std::vector<std::uint8_t> procedural_;
};

struct ContextSpan {
    std::string id;  // "<doc_id>#<ordinal>"
    std::string doc_id;
    std::vector<std::string> sentences;
    LabelVector labels;

    std::string joined() const;
};

/// Top `top_k` citation keys by citing-document count (ties by key), minus `exclude`.
/// Throws DataError when nothing survives.
LabelSet build_label_set(const std::vector<Document>& corpus, std::size_t top_k,
                         const std::vector<CitationRef>& exclude);

/// A cleaned document with target citation sites located by sentence.
struct PreparedDocument {
    std::string doc_id;
    std::vector<std::string> sentences;
    /// (sentence index, label index) for every target citation occurrence.
    std::vector<std::pair<std::size_t, std::size_t>> sites;
};

/// Cleans with the sentinel policy (targets only), segments sentences and places
/// each target citation in its sentence.
PreparedDocument prepare_document(const Document& doc, const LabelSet& labels);

inline constexpr std::size_t kFallbackSentences = 15;

/// Context windows of +-window sentences around citation sentences, merged when
/// they overlap; documents without targets get a seeded sample of up to 15 sentences.
std::vector<ContextSpan> extract_context_spans(const PreparedDocument& doc, std::size_t label_count,
                                               std::size_t window, std::uint64_t seed);

std::vector<ContextSpan> extract_context_spans(const Document& doc, const LabelSet& labels, std::size_t window,
                                               std::uint64_t seed);

struct SplitRatios {
    double train = 0.8;
    double validation = 0.05;
    double test = 0.15;
};

struct DatasetSplit {
    std::vector<ContextSpan> train;
    std::vector<ContextSpan> validation;
    std::vector<ContextSpan> test;
};

/// Partition id for each document ("train" / "validation" / "test").
std::map<std::string, std::string> assign_partitions(const std::vector<std::string>& doc_ids, SplitRatios ratios,
                                                     std::uint64_t seed);

/// Document-level split; throws DataError if any partition would be empty.
DatasetSplit split_dataset(const std::vector<ContextSpan>& spans, SplitRatios ratios, std::uint64_t seed);

struct CorpusStats {
    struct LabelRow {
        std::string key;
        std::size_t documents = 0;
        std::size_t citations = 0;
    };
    struct DocumentRow {
        std::string doc_id;
        std::size_t distinct_targets = 0;
        std::size_t distinct_citations = 0;
    };
    std::vector<LabelRow> labels;        // descending by documents
    std::vector<DocumentRow> documents;  // descending by distinct_targets
    double mean_citations_per_document = 0.0;

    std::string to_tsv() const;
};

CorpusStats corpus_stats(const std::vector<Document>& corpus, const LabelSet& labels);

}  // namespace lcp
