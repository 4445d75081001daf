#pragma once

#include <string>
#include <vector>

#include "lcp/corpus.hpp"

namespace lcp {

/// One JSON object per line: {"id", "text"} with an optional trusted "citations"
/// array whose items are {"key": "42 §1983", "offset": 17} objects or key strings.
std::vector<Document> read_corpus_jsonl(const std::string& path);
std::vector<Document> parse_corpus_jsonl(const std::string& contents);
std::string format_corpus_jsonl(const std::vector<Document>& corpus);

/// {"id", "doc_id", "sentences": [...], "labels": [label indices]} per line.
std::string format_spans_jsonl(const std::vector<ContextSpan>& spans);
std::vector<ContextSpan> parse_spans_jsonl(const std::string& contents, std::size_t label_count);
void write_spans_jsonl(const std::string& path, const std::vector<ContextSpan>& spans);
std::vector<ContextSpan> read_spans_jsonl(const std::string& path, std::size_t label_count);

/// Tab-separated rows: canonical key, procedural flag (0/1), provision text path.
/// Relative provision paths resolve against the label file's directory.
LabelSet read_label_set(const std::string& path, bool load_provisions = true);
void write_label_set(const std::string& path, const LabelSet& labels,
                     const std::vector<std::string>& provision_paths);

/// Plain-text list of canonical keys, one per line; '#' starts a comment.
std::vector<CitationRef> read_key_list(const std::string& path);

/// File-name-safe form of a key: "11 §523(a)" -> "11_523_a".
std::string key_slug(const CitationRef& ref);

}  // namespace lcp
