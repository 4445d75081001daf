#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcp/corpus.hpp"
#include "lcp/dataset_io.hpp"
#include "lcp/explain.hpp"
#include "lcp/masking.hpp"
#include "lcp/pcem.hpp"
#include "lcp/projection.hpp"
#include "lcp/synth.hpp"
#include "lcp/trainer.hpp"
#include "lcp/util.hpp"

#ifndef LCP_VERSION
#define LCP_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lcp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Written with status "running" before any output, rewritten once the run ends.
class RunManifest {
public:
    RunManifest(const RunManifest&) = delete;
    RunManifest& operator=(const RunManifest&) = delete;
    ~RunManifest() {
        // still open here means the run threw
        try {
            finish("failed");
        } catch (const std::exception&) {
        }
    }

    RunManifest(std::string subcommand, std::uint64_t seed) : start_(std::chrono::steady_clock::now()) {
        doc_["subcommand"] = std::move(subcommand);
        doc_["tool_version"] = LCP_VERSION;
        doc_["seed"] = seed;
        doc_["seeds"] = json::object();
        doc_["config"] = json::object();
        doc_["inputs"] = json::object();
        doc_["outputs"] = json::object();
    }

    void seed(const std::string& name, std::uint64_t value) { doc_["seeds"][name] = value; }
    void config(const std::string& key, json value) { doc_["config"][key] = std::move(value); }
    void input(const std::string& name, const std::string& path) { doc_["inputs"][name] = path; }
    void output(const std::string& name, const std::string& path) { doc_["outputs"][name] = path; }

    void open(const std::string& path) {
        path_ = path;
        doc_["started_at"] = utc_now();
        doc_["status"] = "running";
        flush();
    }

    void finish(const std::string& status) {
        if (path_.empty()) return;
        doc_["status"] = status;
        doc_["finished_at"] = utc_now();
        doc_["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        flush();
        path_.clear();
    }

private:
    void flush() const { write_file(path_, doc_.dump(2) + "\n"); }

    json doc_;
    std::string path_;
    std::chrono::steady_clock::time_point start_;
};

struct Common {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string manifest;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
};

void add_common(CLI::App* app, Common& c) {
    c.seed_opt = app->add_option("--seed", c.seed, "Run seed; every random stream derives from it");
    c.jobs_opt = app->add_option("--jobs", c.jobs, "Worker threads for internal fan-out");
    app->add_option("--manifest", c.manifest, "Run manifest path (defaults next to the primary output)");
}

RunManifest& start_manifest(RunManifest& m, const Common& c, const std::string& fallback_path) {
    const std::string path = !c.manifest.empty() ? c.manifest : fallback_path;
    if (!path.empty()) m.open(path);
    return m;
}

void end_manifest(RunManifest& m) { m.finish("ok"); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

// Writes provision texts under <dir>/provisions and returns paths relative to dir.
std::vector<std::string> write_provisions(const std::string& dir, const LabelSet& labels) {
    std::vector<std::string> paths(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels.provision_text(i).empty()) continue;
        ensure_dir(join_path(dir, "provisions"));
        paths[i] = "provisions/" + key_slug(labels.at(i)) + ".txt";
        write_file(join_path(dir, paths[i]), labels.provision_text(i) + "\n");
    }
    return paths;
}

LabelSet resolve_labels(const std::vector<Document>& corpus, const std::string& labels_path, std::size_t top_k,
                        const std::string& exclude_path) {
    if (!labels_path.empty()) return read_label_set(labels_path);
    std::vector<CitationRef> exclude;
    if (!exclude_path.empty()) exclude = read_key_list(exclude_path);
    return build_label_set(corpus, top_k, exclude);
}

std::optional<EmbeddingTable> load_table(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return to_table(read_embedding_file(path));
}

std::vector<ContextSpan> read_spans_for(const Checkpoint& c, const std::string& path) {
    return read_spans_jsonl(path, c.model.label_keys.size());
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
}

// ---- subcommands ----

struct IngestArgs {
    Common common;
    std::string corpus, out, labels, exclude;
    std::size_t top_k = 20;
    std::size_t window = 2;
    SplitRatios ratios;
};

void run_ingest(const IngestArgs& a) {
    RunManifest m("ingest", a.common.seed);
    const auto spans_seed = derive_seed(a.common.seed, "spans");
    const auto split_seed = derive_seed(a.common.seed, "split");
    m.seed("spans", spans_seed);
    m.seed("split", split_seed);
    m.config("top_k", a.top_k);
    m.config("window", a.window);
    m.config("train_ratio", a.ratios.train);
    m.config("validation_ratio", a.ratios.validation);
    m.config("test_ratio", a.ratios.test);
    m.input("corpus", a.corpus);
    if (!a.labels.empty()) m.input("labels", a.labels);
    if (!a.exclude.empty()) m.input("exclude", a.exclude);
    for (const char* name : {"labels.tsv", "spans.jsonl", "train.jsonl", "validation.jsonl", "test.jsonl"}) {
        m.output(name, join_path(a.out, name));
    }
    ensure_dir(a.out);
    start_manifest(m, a.common, join_path(a.out, "manifest.json"));

    const auto corpus = read_corpus_jsonl(a.corpus);
    validate_corpus(corpus);
    const LabelSet labels = resolve_labels(corpus, a.labels, a.top_k, a.exclude);
    std::vector<PreparedDocument> prepared(corpus.size());
    parallel_for(corpus.size(), a.common.jobs, [&](std::size_t i) { prepared[i] = prepare_document(corpus[i], labels); });
    std::vector<ContextSpan> spans;
    for (const auto& doc : prepared) {
        for (auto& s : extract_context_spans(doc, labels.size(), a.window, spans_seed)) spans.push_back(std::move(s));
    }
    const auto split = split_dataset(spans, a.ratios, split_seed);

    write_label_set(join_path(a.out, "labels.tsv"), labels, write_provisions(a.out, labels));
    write_spans_jsonl(join_path(a.out, "spans.jsonl"), spans);
    write_spans_jsonl(join_path(a.out, "train.jsonl"), split.train);
    write_spans_jsonl(join_path(a.out, "validation.jsonl"), split.validation);
    write_spans_jsonl(join_path(a.out, "test.jsonl"), split.test);
    std::printf("labels %zu  spans %zu  train %zu  validation %zu  test %zu\n", labels.size(), spans.size(),
                split.train.size(), split.validation.size(), split.test.size());
    end_manifest(m);
}

struct StatsArgs {
    Common common;
    std::string corpus, labels, exclude, out;
    std::size_t top_k = 20;
};

void run_stats(const StatsArgs& a) {
    RunManifest m("stats", a.common.seed);
    m.input("corpus", a.corpus);
    m.config("top_k", a.top_k);
    if (!a.out.empty()) m.output("stats", a.out);
    start_manifest(m, a.common, a.out.empty() ? "" : a.out + ".manifest.json");
    const auto corpus = read_corpus_jsonl(a.corpus);
    validate_corpus(corpus);
    const auto labels = resolve_labels(corpus, a.labels, a.top_k, a.exclude);
    emit(a.out, corpus_stats(corpus, labels).to_tsv());
    end_manifest(m);
}

struct SynthArgs {
    Common common;
    std::string out;
    SynthConfig config;
};

void run_synth(SynthArgs a) {
    a.config.seed = derive_seed(a.common.seed, "synth");
    RunManifest m("synth", a.common.seed);
    m.seed("synth", a.config.seed);
    m.config("documents", a.config.documents);
    m.config("labels", a.config.labels);
    m.config("keywords_per_label", a.config.keywords_per_label);
    m.config("sentences_per_document", a.config.sentences_per_document);
    m.config("multi_label_rate", a.config.multi_label_rate);
    m.output("corpus", join_path(a.out, "corpus.jsonl"));
    m.output("labels", join_path(a.out, "labels.tsv"));
    ensure_dir(a.out);
    start_manifest(m, a.common, join_path(a.out, "manifest.json"));

    const auto syn = generate_synthetic(a.config);
    write_file(join_path(a.out, "corpus.jsonl"), format_corpus_jsonl(syn.documents));
    write_label_set(join_path(a.out, "labels.tsv"), syn.labels, write_provisions(a.out, syn.labels));
    std::printf("documents %zu  labels %zu\n", syn.documents.size(), syn.labels.size());
    end_manifest(m);
}

struct TrainArgs {
    Common common;
    std::string train, validation, labels, out, log, embeddings, config_file;
    std::map<std::string, std::string> flags;  // config keys given on the command line
    std::map<std::string, CLI::Option*> flag_opts;
};

void run_train(const TrainArgs& a) {
    TrainConfig config;
    if (!a.config_file.empty()) apply_config(config, parse_key_value_text(read_file(a.config_file)));
    std::map<std::string, std::string> overrides;
    for (const auto& [key, opt] : a.flag_opts) {
        if (opt->count() > 0) overrides[key] = a.flags.at(key);
    }
    if (a.common.seed_opt->count() > 0) overrides["seed"] = std::to_string(a.common.seed);
    if (a.common.jobs_opt->count() > 0) overrides["jobs"] = std::to_string(a.common.jobs);
    apply_config(config, overrides);
    config.validate();

    RunManifest m("train", config.seed);
    for (const auto& [k, v] : to_key_values(config)) m.config(k, v);
    for (const char* name : {"shuffle", "encoder"}) m.seed(name, derive_seed(config.seed, name));
    m.seed("kmeans", derive_seed(config.seed, "kmeans:0"));
    m.input("train", a.train);
    m.input("validation", a.validation);
    m.input("labels", a.labels);
    if (!a.config_file.empty()) m.input("config", a.config_file);
    if (!a.embeddings.empty()) m.input("embeddings", a.embeddings);
    const std::string log_path = a.log.empty() ? a.out + ".log.tsv" : a.log;
    m.output("checkpoint", a.out);
    m.output("log", log_path);
    start_manifest(m, a.common, a.out + ".manifest.json");

    const auto labels = read_label_set(a.labels);
    const auto train_spans = read_spans_jsonl(a.train, labels.size());
    const auto val_spans = read_spans_jsonl(a.validation, labels.size());
    const auto table = load_table(a.embeddings);
    if (config.mode == TrainMode::frozen && !table) throw DataError("frozen mode requires --embeddings");

    const auto result = train(config, train_spans, val_spans, labels, table ? &*table : nullptr);
    save_checkpoint(a.out, result.best);
    write_file(log_path, result.log_tsv());
    for (auto l : result.labels_without_positives) {
        std::fprintf(stderr, "warning: label %s has no training positives\n", labels.at(l).key().c_str());
    }
    std::printf("best epoch %zu  validation macro-F1 %.4f\n", result.best.epoch, result.best.validation_macro_f1);
    end_manifest(m);
}

struct EvalArgs {
    Common common;
    std::string checkpoint, spans, embeddings, out;
};

void run_eval(const EvalArgs& a) {
    RunManifest m("eval", a.common.seed);
    m.input("checkpoint", a.checkpoint);
    m.input("spans", a.spans);
    if (!a.out.empty()) m.output("report", a.out);
    start_manifest(m, a.common, a.out.empty() ? "" : a.out + ".manifest.json");
    const auto checkpoint = load_checkpoint(a.checkpoint);
    const auto spans = read_spans_for(checkpoint, a.spans);
    const auto table = load_table(a.embeddings);
    const auto report = evaluate(checkpoint.model, spans, table ? &*table : nullptr, a.common.jobs);
    emit(a.out, report.to_tsv(checkpoint.model.label_keys));
    end_manifest(m);
}

struct PerturbArgs {
    Common common;
    std::string spans, labels, out, kind = "keyword";
    double rate = 0.15;
    std::size_t keywords = 20;
};

void run_perturb(const PerturbArgs& a) {
    RunManifest m("perturb", a.common.seed);
    const auto mask_seed = derive_seed(a.common.seed, "mask");
    m.seed("mask", mask_seed);
    m.config("kind", a.kind);
    m.config("rate", a.rate);
    m.config("keywords", a.keywords);
    m.input("spans", a.spans);
    m.input("labels", a.labels);
    m.output("spans", a.out);
    start_manifest(m, a.common, a.out + ".manifest.json");
    const auto labels = read_label_set(a.labels);
    const auto spans = read_spans_jsonl(a.spans, labels.size());
    std::vector<ContextSpan> masked;
    if (a.kind == "keyword") {
        const auto kw = pooled_provision_keywords(labels, a.keywords);
        if (kw.empty()) throw DataError("perturb: no keywords could be extracted from the provision texts");
        masked = keyword_mask(spans, kw);
    } else {
        if (a.rate < 0.0 || a.rate > 1.0) throw DataError("perturb: rate must lie in [0, 1]");
        masked = random_mask(spans, a.rate, mask_seed);
    }
    write_spans_jsonl(a.out, masked);
    end_manifest(m);
}

struct ProjectArgs {
    Common common;
    std::string checkpoint, spans, embeddings, out;
};

void run_project(const ProjectArgs& a) {
    RunManifest m("project", a.common.seed);
    m.input("checkpoint", a.checkpoint);
    m.input("spans", a.spans);
    m.output("projection", a.out);
    start_manifest(m, a.common, a.out.empty() ? "" : a.out + ".manifest.json");
    const auto checkpoint = load_checkpoint(a.checkpoint);
    const auto spans = read_spans_for(checkpoint, a.spans);
    const auto table = load_table(a.embeddings);
    std::vector<Eigen::VectorXd> embeddings(spans.size());
    parallel_for(spans.size(), a.common.jobs, [&](std::size_t i) {
        embeddings[i] = embed(checkpoint.model, spans[i], table ? &*table : nullptr).vector;
    });
    std::vector<std::string> ids;
    std::vector<LabelVector> golds;
    for (const auto& s : spans) {
        ids.push_back(s.id);
        golds.push_back(s.labels);
    }
    const auto projection = project_2d(embeddings, ids, golds, checkpoint.model.prototypes);
    if (projection.rank_deficient) std::fprintf(stderr, "warning: embeddings are rank deficient, second axis zeroed\n");
    emit(a.out, projection.to_csv());
    end_manifest(m);
}

struct ExplainArgs {
    Common common;
    std::string checkpoint, spans, embeddings, out;
    std::size_t top_k = 3;
};

void run_explain(const ExplainArgs& a) {
    RunManifest m("explain", a.common.seed);
    m.input("checkpoint", a.checkpoint);
    m.input("spans", a.spans);
    m.config("top_k", a.top_k);
    if (!a.out.empty()) m.output("explanations", a.out);
    start_manifest(m, a.common, a.out.empty() ? "" : a.out + ".manifest.json");
    const auto checkpoint = load_checkpoint(a.checkpoint);
    const auto& model = checkpoint.model;
    const auto spans = read_spans_for(checkpoint, a.spans);
    const auto table = load_table(a.embeddings);
    const auto results = predict_all(model, spans, table ? &*table : nullptr, a.common.jobs);
    std::string out;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        json row;
        row["id"] = spans[i].id;
        row["predictions"] = json::array();
        for (const auto& e : explain(results[i], model.prototypes, a.top_k)) {
            json item;
            item["label"] = model.label_keys.at(e.label);
            item["score"] = e.score;
            item["evidence"] = json::array();
            for (const auto& ev : e.evidence) {
                item["evidence"].push_back(
                    {{"kind", to_string(ev.kind)}, {"source", ev.source}, {"similarity", ev.similarity}});
            }
            row["predictions"].push_back(std::move(item));
        }
        out += row.dump() + "\n";
    }
    emit(a.out, out);
    end_manifest(m);
}

struct PrototypesArgs {
    Common common;
    std::string checkpoint, out;
};

void run_prototypes(const PrototypesArgs& a) {
    RunManifest m("prototypes", a.common.seed);
    m.input("checkpoint", a.checkpoint);
    if (!a.out.empty()) m.output("dump", a.out);
    start_manifest(m, a.common, a.out.empty() ? "" : a.out + ".manifest.json");
    const auto checkpoint = load_checkpoint(a.checkpoint);
    const auto& model = checkpoint.model;
    if (!a.out.empty()) {
        write_file(a.out, format_prototype_dump(model.prototypes));
    } else {
        std::printf("index\tlabel\tkind\tslot\tsource\tnorm\n");
        for (std::size_t j = 0; j < model.prototypes.size(); ++j) {
            const auto& p = model.prototypes[j];
            std::printf("%zu\t%s\t%s\t%zu\t%s\t%.6f\n", j, model.label_keys.at(p.label_index).c_str(), to_string(p.kind),
                        p.slot, p.source.c_str(), p.vector.vector.norm());
        }
    }
    end_manifest(m);
}

struct EmbedArgs {
    Common common;
    std::vector<std::string> spans;
    std::string labels, checkpoint, out;
    std::size_t hash_dim = 4096;
    std::size_t embed_dim = 32;
    double init_scale = 0.1;
};

void run_embed(const EmbedArgs& a) {
    RunManifest m("embed", a.common.seed);
    const auto encoder_seed = derive_seed(a.common.seed, "encoder");
    for (std::size_t i = 0; i < a.spans.size(); ++i) m.input("spans" + std::to_string(i), a.spans[i]);
    m.input("labels", a.labels);
    if (!a.checkpoint.empty()) {
        m.input("checkpoint", a.checkpoint);
    } else {
        m.seed("encoder", encoder_seed);
        m.config("hash_dim", a.hash_dim);
        m.config("embed_dim", a.embed_dim);
        m.config("init_scale", a.init_scale);
    }
    m.output("embeddings", a.out);
    start_manifest(m, a.common, a.out + ".manifest.json");

    EncoderParams encoder;
    if (!a.checkpoint.empty()) {
        encoder = load_checkpoint(a.checkpoint).model.encoder;
    } else {
        encoder = EncoderParams::initialize(a.hash_dim, a.embed_dim, encoder_seed, a.init_scale);
    }
    encoder.validate();
    const auto labels = read_label_set(a.labels);
    std::vector<ContextSpan> spans;
    for (const auto& path : a.spans) {
        for (auto& s : read_spans_jsonl(path, labels.size())) spans.push_back(std::move(s));
    }
    std::vector<PcemRecord> records(spans.size());
    parallel_for(spans.size(), a.common.jobs,
                 [&](std::size_t i) { records[i] = to_record(spans[i].id, encode(spans[i], encoder)); });
    for (std::size_t l = 0; l < labels.size(); ++l) {
        if (labels.provision_text(l).empty()) continue;
        records.push_back(to_record(provision_record_id(labels.at(l)), encode_text(labels.provision_text(l), encoder)));
    }
    write_embedding_file(a.out, records);
    std::printf("records %zu  dim %zu\n", records.size(), encoder.embed_dim());
    end_manifest(m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Citation prediction with precedent and provision prototypes"};
    app.set_version_flag("--version", std::string(LCP_VERSION));
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Corpus to context spans, label set and document-level splits");
    add_common(c_ingest, ingest.common);
    c_ingest->add_option("--corpus", ingest.corpus, "Corpus JSONL")->required();
    c_ingest->add_option("--out", ingest.out, "Output directory")->required();
    c_ingest->add_option("--top-k,--top_k", ingest.top_k, "Number of target citations");
    c_ingest->add_option("--window", ingest.window, "Sentences kept on each side of a citation");
    c_ingest->add_option("--labels", ingest.labels, "Use this label file instead of top-k selection");
    c_ingest->add_option("--exclude", ingest.exclude, "Key list of citations to drop (e.g. procedural)");
    c_ingest->add_option("--train-ratio", ingest.ratios.train);
    c_ingest->add_option("--validation-ratio", ingest.ratios.validation);
    c_ingest->add_option("--test-ratio", ingest.ratios.test);

    StatsArgs stats;
    auto* c_stats = app.add_subcommand("stats", "Label and document citation counts");
    add_common(c_stats, stats.common);
    c_stats->add_option("--corpus", stats.corpus, "Corpus JSONL")->required();
    c_stats->add_option("--labels", stats.labels);
    c_stats->add_option("--exclude", stats.exclude);
    c_stats->add_option("--top-k,--top_k", stats.top_k);
    c_stats->add_option("--out", stats.out, "TSV output (stdout when omitted)");

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Generate the synthetic keyword-driven corpus");
    add_common(c_synth, synth.common);
    c_synth->add_option("--out", synth.out, "Output directory")->required();
    c_synth->add_option("--documents", synth.config.documents);
    c_synth->add_option("--labels", synth.config.labels);
    c_synth->add_option("--keywords", synth.config.keywords_per_label, "Private keywords per label");
    c_synth->add_option("--sentences", synth.config.sentences_per_document);
    c_synth->add_option("--multi-label-rate", synth.config.multi_label_rate);

    TrainArgs tr;
    auto* c_train = app.add_subcommand("train", "Train a model and keep the best validation checkpoint");
    add_common(c_train, tr.common);
    c_train->add_option("--train", tr.train, "Training spans JSONL")->required();
    c_train->add_option("--validation", tr.validation, "Validation spans JSONL")->required();
    c_train->add_option("--labels", tr.labels, "Label file")->required();
    c_train->add_option("--out", tr.out, "Checkpoint path")->required();
    c_train->add_option("--log", tr.log, "Per-epoch loss log (default <out>.log.tsv)");
    c_train->add_option("--embeddings", tr.embeddings, "PCEM file for frozen mode");
    c_train->add_option("--config", tr.config_file, "key = value file; flags win");
    for (const auto& [key, value] : to_key_values(TrainConfig{})) {
        if (key == "seed" || key == "jobs") continue;
        tr.flags[key];
        std::string names = "--" + key;
        if (key.find('_') != std::string::npos) {
            std::string dashed = key;
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            names += ",--" + dashed;
        }
        tr.flag_opts[key] = c_train->add_option(names, tr.flags[key], "default " + value);
    }

    EvalArgs ev;
    auto* c_eval = app.add_subcommand("eval", "Macro/micro F1 of a checkpoint on a span file");
    add_common(c_eval, ev.common);
    c_eval->add_option("--checkpoint", ev.checkpoint)->required();
    c_eval->add_option("--spans", ev.spans)->required();
    c_eval->add_option("--embeddings", ev.embeddings, "PCEM file (required for frozen checkpoints)");
    c_eval->add_option("--out", ev.out, "TSV report (stdout when omitted)");

    PerturbArgs pe;
    auto* c_perturb = app.add_subcommand("perturb", "Keyword or random masking of a span file");
    add_common(c_perturb, pe.common);
    c_perturb->add_option("--spans", pe.spans)->required();
    c_perturb->add_option("--labels", pe.labels, "Label file with provision texts")->required();
    c_perturb->add_option("--out", pe.out)->required();
    c_perturb->add_option("--kind", pe.kind)->check(CLI::IsMember({"keyword", "random"}));
    c_perturb->add_option("--rate", pe.rate, "Random masking rate");
    c_perturb->add_option("--keywords", pe.keywords, "Keywords taken from each provision");

    ProjectArgs pr;
    auto* c_project = app.add_subcommand("project", "2D PCA of span embeddings and prototypes as CSV");
    add_common(c_project, pr.common);
    c_project->add_option("--checkpoint", pr.checkpoint)->required();
    c_project->add_option("--spans", pr.spans)->required();
    c_project->add_option("--embeddings", pr.embeddings);
    c_project->add_option("--out", pr.out, "CSV output (stdout when omitted)");

    ExplainArgs ex;
    auto* c_explain = app.add_subcommand("explain", "Most similar prototypes behind each predicted label");
    add_common(c_explain, ex.common);
    c_explain->add_option("--checkpoint", ex.checkpoint)->required();
    c_explain->add_option("--spans", ex.spans)->required();
    c_explain->add_option("--embeddings", ex.embeddings);
    c_explain->add_option("--top-k,--top_k", ex.top_k);
    c_explain->add_option("--out", ex.out, "JSONL output (stdout when omitted)");

    PrototypesArgs pt;
    auto* c_protos = app.add_subcommand("prototypes", "Dump (with --out) or list the prototypes of a checkpoint");
    add_common(c_protos, pt.common);
    c_protos->add_option("--checkpoint", pt.checkpoint)->required();
    c_protos->add_option("--out", pt.out, "JSONL dump");

    EmbedArgs em;
    auto* c_embed = app.add_subcommand("embed", "Write span and provision embeddings to a PCEM file");
    add_common(c_embed, em.common);
    c_embed->add_option("--spans", em.spans, "Span files (repeatable)")->required();
    c_embed->add_option("--labels", em.labels, "Label file with provision texts")->required();
    c_embed->add_option("--out", em.out)->required();
    c_embed->add_option("--checkpoint", em.checkpoint, "Use this model's encoder instead of a fresh one");
    c_embed->add_option("--hash-dim,--hash_dim", em.hash_dim);
    c_embed->add_option("--embed-dim,--embed_dim", em.embed_dim);
    c_embed->add_option("--init-scale,--init_scale", em.init_scale);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_ingest) run_ingest(ingest);
        else if (*c_stats) run_stats(stats);
        else if (*c_synth) run_synth(synth);
        else if (*c_train) run_train(tr);
        else if (*c_eval) run_eval(ev);
        else if (*c_perturb) run_perturb(pe);
        else if (*c_project) run_project(pr);
        else if (*c_explain) run_explain(ex);
        else if (*c_protos) run_prototypes(pt);
        else if (*c_embed) run_embed(em);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitOk;
}
