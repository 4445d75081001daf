// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "lcp/gradcheck.hpp"
#include "lcp/kmeans.hpp"
#include "lcp/masking.hpp"
#include "lcp/metrics.hpp"
#include "lcp/pcem.hpp"
#include "lcp/protoloss.hpp"
#include "lcp/synth.hpp"
#include "lcp/trainer.hpp"
#include "lcp/util.hpp"

using namespace lcp;

namespace {

using clock_type = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Eigen::VectorXd random_unit(Rng& rng, std::size_t dim) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index d = 0; d < v.size(); ++d) v(d) = uniform_unit(rng) - 0.5;
    return v / v.norm();
}

LabelVector random_labels(Rng& rng, std::size_t n) {
    LabelVector y(n, 0);
    y[uniform_below(rng, n)] = 1;
    if (uniform_unit(rng) < 0.3) y[uniform_below(rng, n)] = 1;
    return y;
}

// ---- gradient fidelity ----

void gradient_fidelity() {
    const auto t0 = clock_type::now();
    double worst = 0.0;
    const char* blocks[] = {"encoder", "head", "precedent prototypes"};
    double worst_block[3] = {0, 0, 0};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        const std::size_t H = 64, D = 6, L = 3, B = 6;
        const auto enc = EncoderParams::initialize(H, D, seed, 0.5);
        std::vector<Prototype> protos;
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t s = 0; s < 2; ++s) protos.push_back({l, PrototypeKind::precedent, s, {random_unit(rng, D), true}, "x"});
        for (std::size_t l = 0; l < L; ++l) protos.push_back({l, PrototypeKind::provision, 0, {random_unit(rng, D), true}, "p"});
        LossConfig cfg;
        cfg.weights.lambda1 = 0.3;
        cfg.weights.lambda2 = 0.2;
        cfg.weights.lambda3 = 0.1;
        cfg.weights.s_max = -0.5;
        auto head = ClassifierHead::zeros(L, head_columns(protos, true).size());
        for (Eigen::Index i = 0; i < head.weight.size(); ++i) head.weight.data()[i] = 0.4 * (uniform_unit(rng) - 0.5);
        for (Eigen::Index i = 0; i < head.bias.size(); ++i) head.bias(i) = 0.2 * (uniform_unit(rng) - 0.5);
        const std::vector<std::string> words = {"officer", "arrest", "debtor", "discharge", "wages", "overtime",
                                                "court", "the", "<mask>", "fraud"};
        std::vector<SparseFeatures> batch;
        std::vector<LabelVector> labels;
        for (std::size_t i = 0; i < B; ++i) {
            std::string text;
            for (int w = 0; w < 6; ++w) text += words[uniform_below(rng, words.size())] + " ";
            batch.push_back(hash_text_features(text, H));
            labels.push_back(random_labels(rng, L));
        }

        // each block is checked on its own so a block's error is not hidden by another's scale
        for (int block = 0; block < 3; ++block) {
            auto get = [&](EncoderParams& e, ClassifierHead& h, std::vector<Prototype>& ps) {
                std::vector<double*> out;
                if (block == 0) {
                    for (Eigen::Index i = 0; i < e.weight.size(); ++i) out.push_back(e.weight.data() + i);
                    for (Eigen::Index i = 0; i < e.bias.size(); ++i) out.push_back(e.bias.data() + i);
                } else if (block == 1) {
                    for (Eigen::Index i = 0; i < h.weight.size(); ++i) out.push_back(h.weight.data() + i);
                    for (Eigen::Index i = 0; i < h.bias.size(); ++i) out.push_back(h.bias.data() + i);
                } else {
                    for (auto& q : ps)
                        if (q.kind == PrototypeKind::precedent)
                            for (Eigen::Index i = 0; i < q.vector.vector.size(); ++i) out.push_back(q.vector.vector.data() + i);
                }
                return out;
            };
            EncoderParams e0 = enc;
            ClassifierHead h0 = head;
            auto p0 = protos;
            std::vector<double> x;
            for (double* p : get(e0, h0, p0)) x.push_back(*p);
            const Objective f = [&](std::span<const double> v, std::vector<double>* grad) {
                EncoderParams e = enc;
                ClassifierHead h = head;
                auto ps = protos;
                const auto slots = get(e, h, ps);
                for (std::size_t i = 0; i < slots.size(); ++i) *slots[i] = v[i];
                FullGradients g;
                const double value = loss_gradients(batch, labels, e, ps, h, cfg, grad ? &g : nullptr).total;
                if (grad) {
                    EncoderParams ge{H, g.encoder.weight, g.encoder.bias, 0};
                    auto gp = ps;
                    for (std::size_t j = 0; j < ps.size(); ++j) gp[j].vector.vector = g.prototypes[j];
                    grad->clear();
                    for (double* p : get(ge, g.head, gp)) grad->push_back(*p);
                }
                return value;
            };
            // cube root of machine epsilon balances truncation against cancellation in central differences
            const auto r = finite_diff_check(f, x, std::cbrt(std::numeric_limits<double>::epsilon()), x.size(), seed);
            worst_block[block] = std::max(worst_block[block], r.max_relative_error);
            worst = std::max(worst, r.max_relative_error);
        }
    }
    const double secs = seconds_since(t0);
    std::string detail = fmt("max rel err %.2e", worst);
    for (int b = 0; b < 3; ++b) detail += std::string(" | ") + blocks[b] + fmt(" %.2e", worst_block[b]);
    detail += fmt(" | %.1fs", secs);
    report("gradient fidelity", worst <= 1e-4 && secs < 60.0, detail);
}

// ---- similarity law ----

void similarity_law() {
    bool ok = true;
    double worst_zero = 0.0;
    for (double eps : {1e-4, 1e-2}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 1000; ++i) {
            const double d2 = 4.0 * i / 999.0;
            const double s = similarity_score(d2, eps);
            ok = ok && s >= 0.0 && s < prev;
            prev = s;
        }
        worst_zero = std::max(worst_zero, std::abs(similarity_score(0.0, eps) - 2.0 * std::log(1.0 / eps)));
    }
    report("similarity score law", ok && worst_zero <= 1e-9,
           fmt("monotone+nonneg on 1000 points, |s(0) - 2ln(1/eps)| = %.1e", worst_zero));
}

// ---- prototype discovery ----

void discovery_oracle() {
    std::size_t mismatches = 0, non_sample = 0, checked = 0;
    for (std::uint64_t inst = 0; inst < 20; ++inst) {
        Rng rng(1000 + inst);
        const std::size_t n = 10 + uniform_below(rng, 41);
        const std::size_t L = 1 + uniform_below(rng, 4);
        const std::size_t k = 1 + uniform_below(rng, 3);
        const std::size_t D = 3 + uniform_below(rng, 6);
        std::vector<Embedding> emb;
        std::vector<std::string> ids;
        std::vector<LabelVector> labels;
        for (std::size_t i = 0; i < n; ++i) {
            emb.push_back({random_unit(rng, D), true});
            ids.push_back("train-" + std::to_string(i));
            labels.push_back(random_labels(rng, L));
        }
        const auto r = discover_prototypes(emb, ids, labels, L, k, -1.0, inst);
        std::size_t next = 0;
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<std::size_t> members;
            std::vector<Eigen::VectorXd> pts;
            for (std::size_t i = 0; i < n; ++i)
                if (labels[i][l]) {
                    members.push_back(i);
                    pts.push_back(emb[i].vector);
                }
            if (pts.empty()) continue;
            const auto km = cluster_cosine_kmeans(pts, k, derive_seed(inst, "label:" + std::to_string(l)));
            for (const auto& c : km.centroids) {
                // exhaustive: every positive, first strict maximum of the cosine
                std::size_t best = 0;
                double best_cos = -std::numeric_limits<double>::infinity();
                for (std::size_t m = 0; m < pts.size(); ++m) {
                    const double cos = pts[m].dot(c) / (pts[m].norm() * c.norm());
                    if (cos > best_cos) {
                        best_cos = cos;
                        best = m;
                    }
                }
                ++checked;
                if (next >= r.prototypes.size() || r.prototypes[next].source != ids[members[best]] ||
                    r.prototypes[next].vector.vector != emb[members[best]].vector)
                    ++mismatches;
                ++next;
            }
        }
        if (next != r.prototypes.size()) ++mismatches;
        const std::set<std::string> idset(ids.begin(), ids.end());
        for (const auto& p : r.prototypes) non_sample += idset.count(p.source) == 0;
    }
    report("prototype discovery oracle", mismatches == 0 && non_sample == 0 && checked > 0,
           fmt("%.0f prototypes on 20 instances, %.0f mismatches, %.0f non-sample sources", double(checked),
               double(mismatches), double(non_sample)));
}

// ---- term isolation ----

void term_isolation() {
    Rng rng(42);
    const std::size_t D = 5, L = 3, B = 8;
    std::vector<Prototype> protos;
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t s = 0; s < 2; ++s) protos.push_back({l, PrototypeKind::precedent, s, {random_unit(rng, D), true}, "x"});
    for (std::size_t l = 0; l < L; ++l) protos.push_back({l, PrototypeKind::provision, 0, protos[2 * l].vector, "p"});
    std::vector<Eigen::VectorXd> emb;
    std::vector<LabelVector> labels;
    for (std::size_t i = 0; i < B; ++i) {
        const std::size_t l = i % L;
        LabelVector y(L, 0);
        y[l] = 1;
        labels.push_back(y);
        emb.push_back(protos[2 * l].vector.vector);
    }
    auto head = ClassifierHead::zeros(L, head_columns(protos, true).size());
    for (Eigen::Index i = 0; i < head.weight.size(); ++i) head.weight.data()[i] = uniform_unit(rng) - 0.5;
    LossConfig cfg;
    cfg.weights.lambda1 = 0.7;
    cfg.weights.delta = 0.5;
    const auto placed = total_loss(emb, labels, protos, head, cfg);

    // random embeddings, all prototype weights zeroed
    std::vector<Eigen::VectorXd> other;
    for (std::size_t i = 0; i < B; ++i) other.push_back(random_unit(rng, D));
    LossConfig zero = cfg;
    zero.weights.lambda1 = zero.weights.lambda2 = zero.weights.lambda3 = zero.weights.delta = 0.0;
    const auto z = total_loss(other, labels, protos, head, zero);
    const bool ok = z.total == z.bce && placed.preced.attract == 0.0 && placed.provis == 0.0;
    report("term isolation", ok,
           fmt("zeroed: total-bce = %.1e; placed: lambda1 term %.1e, d_provis %.1e", z.total - z.bce,
               placed.preced.attract, placed.provis));
}

// ---- context spans ----

std::string sentences(std::size_t count, std::set<std::size_t> citing) {
    static const char* names[] = {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                                  "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen",
                                  "eighteen", "nineteen", "twenty"};
    std::string text;
    for (std::size_t i = 1; i <= count; ++i) {
        text += std::string("Sentence ") + names[i - 1] + " is here";
        if (citing.count(i)) text += " under 42 U.S.C. \xC2\xA7 1983";
        text += ". ";
    }
    return text;
}

void context_spans() {
    const LabelSet labels({CitationRef{42, "1983", std::nullopt}});
    const auto single = extract_context_spans(Document::from_text("a", sentences(7, {4})), labels, 2, 1);
    const bool single_ok = single.size() == 1 && single[0].sentences.size() == 5 &&
                           single[0].sentences.front().rfind("Sentence two", 0) == 0 &&
                           single[0].sentences.back().rfind("Sentence six", 0) == 0 &&
                           single[0].sentences[2].find("<mask>") != std::string::npos;
    const auto merged = extract_context_spans(Document::from_text("b", sentences(12, {3, 6})), labels, 2, 1);
    const bool merged_ok = merged.size() == 1 && merged[0].sentences.size() == 8 &&
                           merged[0].sentences.front().rfind("Sentence one", 0) == 0 &&
                           merged[0].sentences.back().rfind("Sentence eight", 0) == 0;
    const auto apart = extract_context_spans(Document::from_text("c", sentences(20, {3, 15})), labels, 2, 1);
    const bool apart_ok = apart.size() == 2;
    const auto long_none = extract_context_spans(Document::from_text("d", sentences(20, {})), labels, 2, 1);
    const auto short_none = extract_context_spans(Document::from_text("e", sentences(4, {})), labels, 2, 1);
    const bool none_ok = long_none.size() == 1 && long_none[0].sentences.size() == 15 && short_none.size() == 1 &&
                         short_none[0].sentences.size() == 4 &&
                         std::all_of(long_none[0].labels.begin(), long_none[0].labels.end(), [](auto v) { return v == 0; });
    report("context span contract", single_ok && merged_ok && apart_ok && none_ok,
           fmt("4 of 7 -> %.0f sentences; overlap merged %.0f; no citation 20 -> %.0f, 4 -> %.0f",
               single.empty() ? 0.0 : double(single[0].sentences.size()), merged_ok ? 1.0 : 0.0,
               long_none.empty() ? 0.0 : double(long_none[0].sentences.size()),
               short_none.empty() ? 0.0 : double(short_none[0].sentences.size())));
}

// ---- synthetic experiments ----

struct Synthetic {
    SynthCorpus corpus;
    DatasetSplit split;
};

Synthetic make_synthetic(std::uint64_t seed) {
    Synthetic s;
    SynthConfig sc;
    sc.documents = 300;
    sc.seed = derive_seed(seed, "synth");
    s.corpus = generate_synthetic(sc);
    std::vector<ContextSpan> spans;
    for (const auto& d : s.corpus.documents)
        for (auto& span : extract_context_spans(d, s.corpus.labels, 2, derive_seed(seed, "spans"))) spans.push_back(span);
    s.split = split_dataset(spans, {200.0 / 300, 50.0 / 300, 50.0 / 300}, derive_seed(seed, "split"));
    return s;
}

TrainConfig synthetic_config(TrainMode mode, std::uint64_t seed) {
    TrainConfig c;
    c.mode = mode;
    c.epochs = 20;
    c.learning_rate = 0.2;
    c.seed = seed;
    c.jobs = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    return c;
}

double test_f1(const TrainConfig& c, const DatasetSplit& split, const LabelSet& labels,
               const EmbeddingTable* table = nullptr, TrainResult* out = nullptr) {
    auto r = train(c, split.train, split.validation, labels, table);
    const double f1 = evaluate(r.best.model, split.test, table, c.jobs).macro_f1;
    if (out) *out = std::move(r);
    return f1;
}

DatasetSplit mask_all(const DatasetSplit& s, const std::function<std::vector<ContextSpan>(const std::vector<ContextSpan>&)>& f) {
    return {f(s.train), f(s.validation), f(s.test)};
}

}  // namespace

int main(int argc, char** argv) {
    std::printf("acceptance criteria\n");
    gradient_fidelity();
    similarity_law();
    discovery_oracle();
    term_isolation();
    context_spans();

    const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 7;
    const auto syn = make_synthetic(seed);
    const auto& labels = syn.corpus.labels;

    // end-to-end parity
    auto t0 = clock_type::now();
    const double vanilla = test_f1(synthetic_config(TrainMode::vanilla, seed), syn.split, labels);
    TrainResult full_run;
    const double full = test_f1(synthetic_config(TrainMode::preced_provis, seed), syn.split, labels, nullptr, &full_run);
    const double e2e_secs = seconds_since(t0);
    report("synthetic end-to-end", vanilla >= 0.95 && std::abs(full - vanilla) <= 0.05 && e2e_secs < 300.0,
           fmt("train %.0f test %.0f | vanilla %.4f, preced+provis %.4f", double(syn.split.train.size()),
               double(syn.split.test.size()), vanilla, full) +
               fmt(" (20 epochs, %.1fs)", e2e_secs));

    // masking at train, validation and test time
    const auto keywords = pooled_provision_keywords(labels);
    const auto mask_seed = derive_seed(seed, "mask");
    const auto kw = mask_all(syn.split, [&](const auto& s) { return keyword_mask(s, keywords); });
    const auto rnd = mask_all(syn.split, [&](const auto& s) { return random_mask(s, 0.15, mask_seed); });
    const double kw_f1 = test_f1(synthetic_config(TrainMode::preced_provis, seed), kw, labels);
    const double rnd_f1 = test_f1(synthetic_config(TrainMode::preced_provis, seed), rnd, labels);
    const double kw_drop = full - kw_f1, rnd_drop = full - rnd_f1;
    report("perturbation direction", kw_drop >= 0.20 && rnd_drop <= 0.05,
           fmt("keyword masking %+.1f points, random 15%% %+.1f points (base %.4f)", -100 * kw_drop, -100 * rnd_drop,
               full));

    // frozen encoder: untrained encoder embeddings through a PCEM round trip
    {
        const auto base_cfg = synthetic_config(TrainMode::frozen, seed);
        const auto enc = EncoderParams::initialize(base_cfg.hash_dim, base_cfg.embed_dim, derive_seed(seed, "base"),
                                                   base_cfg.init_scale);
        std::vector<PcemRecord> records;
        for (const auto* part : {&syn.split.train, &syn.split.validation, &syn.split.test})
            for (const auto& s : *part) records.push_back(to_record(s.id, encode(s, enc)));
        for (const auto& p : encode_provision_prototypes(labels, enc))
            records.push_back(to_record(provision_record_id(labels.at(p.label_index)), p.vector));
        const auto table = to_table(decode_pcem(encode_pcem(records, static_cast<std::uint32_t>(base_cfg.embed_dim))));
        const double frozen = test_f1(base_cfg, syn.split, labels, &table);
        report("frozen-encoder direction", frozen <= full, fmt("frozen %.4f <= preced+provis %.4f", frozen, full));
    }

    // determinism and round trips
    {
        TrainResult again;
        test_f1(synthetic_config(TrainMode::preced_provis, seed), syn.split, labels, nullptr, &again);
        auto single = synthetic_config(TrainMode::preced_provis, seed);
        single.jobs = 1;
        TrainResult serial;
        test_f1(single, syn.split, labels, nullptr, &serial);
        const auto bytes = encode_checkpoint(full_run.best);
        const bool repeat_ok = bytes == encode_checkpoint(again.best) && full_run.log_tsv() == again.log_tsv() &&
                               bytes == encode_checkpoint(serial.best) && full_run.log_tsv() == serial.log_tsv();
        const bool ckpt_ok = encode_checkpoint(decode_checkpoint(bytes)) == bytes;

        std::vector<PcemRecord> records;
        Rng rng(3);
        for (int i = 0; i < 50; ++i) {
            PcemRecord r{"span-" + std::to_string(i), std::vector<float>(32)};
            for (auto& v : r.values) v = static_cast<float>(uniform_unit(rng) * 2 - 1);
            records.push_back(r);
        }
        const auto pcem = encode_pcem(records, 32);
        const bool pcem_ok = decode_pcem(pcem) == records && encode_pcem(decode_pcem(pcem), 32) == pcem;

        const std::vector<LabelVector> gold = {{1, 1, 0}, {0, 0, 0}, {0, 0, 1}};
        const std::vector<LabelVector> pred = {{1, 1, 0}, {0, 1, 0}, {0, 0, 0}};
        const auto f1 = f1_report(pred, gold);
        const bool f1_ok = std::abs(f1.macro_f1 - (1.0 + 2.0 / 3.0) / 3.0) <= 1e-9 &&
                           std::abs(f1.micro_f1 - 2.0 / 3.0) <= 1e-9;
        report("determinism and round trips", repeat_ok && ckpt_ok && pcem_ok && f1_ok,
               std::string("repeat ") + (repeat_ok ? "identical" : "DIFFERS") + ", checkpoint " +
                   (ckpt_ok ? "bit-exact" : "DIFFERS") + ", pcem " + (pcem_ok ? "bit-exact" : "DIFFERS") +
                   fmt(", F1 hand case macro %.10f micro %.10f", f1.macro_f1, f1.micro_f1));
    }

    // explanation quality on the same run (module-level check)
    {
        const auto& model = full_run.best.model;
        std::size_t correct = 0, hits = 0;
        for (const auto& span : syn.split.test) {
            const auto p = predict(model, embed(model, span));
            if (p.predicted != span.labels) continue;
            ++correct;
            Eigen::Index top = 0;
            p.similarities.maxCoeff(&top);
            hits += span.labels[model.prototypes[static_cast<std::size_t>(top)].label_index] != 0;
        }
        const double share = correct ? static_cast<double>(hits) / static_cast<double>(correct) : 0.0;
        std::printf("%s  %-28s %s\n", share >= 0.9 ? "ok  " : "low ", "explanation evidence",
                    fmt("top prototype has a gold label in %.1f%% of %.0f correct test spans", 100 * share,
                        double(correct)).c_str());
    }

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
