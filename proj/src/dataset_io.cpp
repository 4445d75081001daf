#include "lcp/dataset_io.hpp"

#include <cctype>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "lcp/util.hpp"

namespace lcp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class Fn>
void for_each_line(const std::string& contents, Fn&& fn) {
    std::istringstream in(contents);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) continue;
        fn(line, number);
    }
}

json parse_line(const std::string& line, std::size_t number) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw DataError("line " + std::to_string(number) + ": invalid JSON: " + e.what());
    }
}

}  // namespace

std::vector<Document> parse_corpus_jsonl(const std::string& contents) {
    std::vector<Document> corpus;
    for_each_line(contents, [&](const std::string& line, std::size_t number) {
        const json record = parse_line(line, number);
        if (!record.is_object() || !record.contains("id") || !record.contains("text") ||
            !record["id"].is_string() || !record["text"].is_string()) {
            throw DataError("line " + std::to_string(number) + ": expected {\"id\": string, \"text\": string}");
        }
        if (!record.contains("citations")) {
            corpus.push_back(Document::from_text(record["id"].get<std::string>(), record["text"].get<std::string>()));
            return;
        }
        Document doc{record["id"].get<std::string>(), record["text"].get<std::string>(), {}};
        for (const auto& item : record["citations"]) {
            CitationMatch m;
            if (item.is_string()) {
                m.ref = CitationRef::parse_key(item.get<std::string>());
            } else if (item.is_object() && item.contains("key")) {
                m.ref = CitationRef::parse_key(item["key"].get<std::string>());
                m.offset = item.value("offset", std::size_t{0});
            } else {
                throw DataError("line " + std::to_string(number) + ": malformed citation entry");
            }
            doc.citations.push_back(std::move(m));
        }
        corpus.push_back(std::move(doc));
    });
    validate_corpus(corpus);
    return corpus;
}

std::vector<Document> read_corpus_jsonl(const std::string& path) { return parse_corpus_jsonl(read_file(path)); }

std::string format_corpus_jsonl(const std::vector<Document>& corpus) {
    std::string out;
    for (const auto& doc : corpus) {
        json record = {{"id", doc.id}, {"text", doc.text}};
        out += record.dump() + "\n";
    }
    return out;
}

std::string format_spans_jsonl(const std::vector<ContextSpan>& spans) {
    std::string out;
    for (const auto& span : spans) {
        json labels = json::array();
        for (std::size_t i = 0; i < span.labels.size(); ++i) {
            if (span.labels[i]) labels.push_back(i);
        }
        json record = {{"id", span.id}, {"doc_id", span.doc_id}, {"sentences", span.sentences}, {"labels", labels}};
        out += record.dump() + "\n";
    }
    return out;
}

std::vector<ContextSpan> parse_spans_jsonl(const std::string& contents, std::size_t label_count) {
    std::vector<ContextSpan> spans;
    for_each_line(contents, [&](const std::string& line, std::size_t number) {
        const json record = parse_line(line, number);
        try {
            ContextSpan span;
            span.doc_id = record.at("doc_id").get<std::string>();
            span.id = record.contains("id") ? record["id"].get<std::string>()
                                            : span.doc_id + "#" + std::to_string(spans.size());
            span.sentences = record.at("sentences").get<std::vector<std::string>>();
            span.labels.assign(label_count, 0);
            for (const auto& l : record.at("labels")) {
                const auto idx = l.get<std::size_t>();
                if (idx >= label_count) {
                    throw DataError("line " + std::to_string(number) + ": label index " + std::to_string(idx) +
                                    " out of range");
                }
                span.labels[idx] = 1;
            }
            spans.push_back(std::move(span));
        } catch (const json::exception& e) {
            throw DataError("line " + std::to_string(number) + ": " + e.what());
        }
    });
    return spans;
}

void write_spans_jsonl(const std::string& path, const std::vector<ContextSpan>& spans) {
    write_file(path, format_spans_jsonl(spans));
}

std::vector<ContextSpan> read_spans_jsonl(const std::string& path, std::size_t label_count) {
    return parse_spans_jsonl(read_file(path), label_count);
}

LabelSet read_label_set(const std::string& path, bool load_provisions) {
    const std::string contents = read_file(path);
    std::vector<CitationRef> refs;
    std::vector<bool> flags;
    std::vector<std::string> paths;
    for_each_line(contents, [&](const std::string& line, std::size_t number) {
        if (line[0] == '#') return;
        auto cols = split(line, '\t');
        if (cols.size() < 2 || cols.size() > 3) {
            throw DataError(path + ":" + std::to_string(number) + ": expected key<TAB>flag<TAB>path");
        }
        refs.push_back(CitationRef::parse_key(cols[0]));
        const auto flag = trim(cols[1]);
        if (flag != "0" && flag != "1") throw DataError(path + ":" + std::to_string(number) + ": flag must be 0/1");
        flags.push_back(flag == "1");
        paths.push_back(cols.size() == 3 ? trim(cols[2]) : std::string());
    });
    LabelSet labels(std::move(refs));
    const fs::path base = fs::path(path).parent_path();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels.set_procedural(i, flags[i]);
        if (load_provisions && !paths[i].empty()) {
            fs::path p(paths[i]);
            if (p.is_relative()) p = base / p;
            labels.set_provision_text(i, read_file(p.string()));
        }
    }
    return labels;
}

void write_label_set(const std::string& path, const LabelSet& labels,
                     const std::vector<std::string>& provision_paths) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out += labels.at(i).key() + "\t" + (labels.procedural(i) ? "1" : "0") + "\t" +
               (i < provision_paths.size() ? provision_paths[i] : std::string()) + "\n";
    }
    write_file(path, out);
}

std::vector<CitationRef> read_key_list(const std::string& path) {
    std::vector<CitationRef> out;
    for_each_line(read_file(path), [&](const std::string& line, std::size_t) {
        const auto t = trim(line);
        if (!t.empty() && t[0] != '#') out.push_back(CitationRef::parse_key(t));
    });
    return out;
}

std::string key_slug(const CitationRef& ref) {
    std::string out = std::to_string(ref.title) + "_";
    for (char c : ref.section) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    if (ref.subsection) out += "_" + *ref.subsection;
    return out;
}

}  // namespace lcp
