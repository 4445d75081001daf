#include "lcp/trainer.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include "lcp/util.hpp"

namespace lcp {
namespace {

LossConfig loss_config_for(const TrainConfig& c) {
    LossConfig lc;
    lc.weights = c.weights;
    switch (c.mode) {
        case TrainMode::vanilla:
            lc.head_input = HeadInput::embedding;
            lc.head_uses_provisions = false;
            lc.weights.lambda1 = lc.weights.lambda2 = lc.weights.lambda3 = lc.weights.delta = 0.0;
            break;
        case TrainMode::preced:
            lc.head_uses_provisions = false;
            lc.weights.delta = 0.0;
            break;
        case TrainMode::preced_provis:
        case TrainMode::frozen:
            lc.head_uses_provisions = c.head_uses_provisions;
            break;
    }
    return lc;
}

const Embedding& lookup(const EmbeddingTable& table, const std::string& id) {
    const auto it = table.find(id);
    if (it == table.end()) throw DataError("embedding table has no record for '" + id + "'");
    return it->second;
}

std::size_t head_feature_count(const Model& m) {
    if (m.loss.head_input == HeadInput::embedding) return m.encoder.embed_dim();
    return head_columns(m.prototypes, m.loss.head_uses_provisions).size();
}

using ColumnKey = std::tuple<int, std::size_t, std::size_t>;  // kind, label, slot

std::vector<ColumnKey> column_keys(const Model& m) {
    std::vector<ColumnKey> keys;
    for (auto j : head_columns(m.prototypes, m.loss.head_uses_provisions)) {
        const auto& p = m.prototypes[j];
        keys.emplace_back(static_cast<int>(p.kind), p.label_index, p.slot);
    }
    return keys;
}

class Trainer {
public:
    Trainer(const TrainConfig& config, const std::vector<ContextSpan>& train, const std::vector<ContextSpan>& val,
            const LabelSet& labels, const EmbeddingTable* table)
        : config_(config), train_(train), val_(val), labels_(labels), table_(table) {}

    TrainResult run() {
        config_.validate();
        if (train_.empty() || val_.empty()) throw DataError("train: training and validation splits must be non-empty");
        for (const auto* split : {&train_, &val_}) {
            for (const auto& s : *split) {
                if (s.labels.size() != labels_.size()) throw DataError("train: span label vector length mismatch");
            }
        }
        frozen_ = config_.mode == TrainMode::frozen;
        if (frozen_ && !table_) throw DataError("frozen mode requires an embedding file");
        if (config_.mode == TrainMode::preced_provis) {
            std::string missing;
            for (auto i : labels_.missing_provisions()) missing += (missing.empty() ? "" : ", ") + labels_.at(i).key();
            if (!missing.empty()) throw DataError("missing provision text for: " + missing);
        }

        init_model();
        train_labels_.reserve(train_.size());
        for (const auto& s : train_) train_labels_.push_back(s.labels);
        if (!frozen_) {
            features_.resize(train_.size());
            parallel_for(train_.size(), config_.jobs,
                         [&](std::size_t i) { features_[i] = hash_features(train_[i], config_.hash_dim); });
        }
        if (model_.mode != TrainMode::vanilla) refresh_prototypes(0);
        model_.head = ClassifierHead::zeros(labels_.size(), head_feature_count(model_));

        TrainResult result;
        EpochLog initial = loss_over_training_set();
        initial.epoch = 0;
        initial.validation_macro_f1 = evaluate(model_, val_, table_, config_.jobs).macro_f1;
        initial.reclustered = model_.mode != TrainMode::vanilla;
        result.log.push_back(initial);
        result.best = Checkpoint{model_, 0, initial.validation_macro_f1};

        Rng shuffle_rng(derive_seed(config_.seed, "shuffle"));
        for (std::size_t epoch = 1; epoch <= config_.epochs; ++epoch) {
            EpochLog row;
            row.epoch = epoch;
            const bool recluster = !frozen_ && model_.mode != TrainMode::vanilla && epoch > 1 &&
                                   (epoch - 1) % config_.recluster_every == 0;
            if (recluster) {
                refresh_prototypes(epoch);
                row.reclustered = true;
            }
            std::vector<std::size_t> order(train_.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            shuffle_in_place(order, shuffle_rng);

            std::vector<double> bce, preced, provis, total;
            for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
                const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                     order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), start + config_.batch_size)));
                LossBreakdown loss;
                try {
                    loss = step(batch);
                } catch (const NonFiniteLoss& e) {
                    throw TrainingDiverged(epoch, e.term());
                }
                bce.push_back(loss.bce);
                preced.push_back(loss.preced.value);
                provis.push_back(loss.provis);
                total.push_back(loss.total);
            }
            const double batches = static_cast<double>(total.size());
            row.bce = pairwise_sum(bce) / batches;
            row.d_preced = pairwise_sum(preced) / batches;
            row.d_provis = pairwise_sum(provis) / batches;
            row.total = pairwise_sum(total) / batches;
            if (!std::isfinite(row.total)) throw TrainingDiverged(epoch, "total");
            if (!model_.encoder.weight.allFinite() || !model_.head.weight.allFinite()) {
                throw TrainingDiverged(epoch, "parameters");
            }
            row.validation_macro_f1 = evaluate(model_, val_, table_, config_.jobs).macro_f1;
            if (row.validation_macro_f1 > result.best.validation_macro_f1) {
                result.best = Checkpoint{model_, epoch, row.validation_macro_f1};
            }
            result.log.push_back(row);
        }
        result.labels_without_positives = labels_without_positives_;
        return result;
    }

private:
    void init_model() {
        model_.mode = config_.mode;
        model_.loss = loss_config_for(config_);
        model_.label_keys.clear();
        for (const auto& l : labels_.labels()) model_.label_keys.push_back(l.key());
        std::size_t embed_dim = config_.embed_dim;
        std::size_t hash_dim = config_.hash_dim;
        if (frozen_) {
            if (table_->empty()) throw DataError("frozen mode: embedding table is empty");
            embed_dim = static_cast<std::size_t>(table_->begin()->second.vector.size());
            hash_dim = std::max(hash_dim, embed_dim);
        }
        model_.encoder = EncoderParams::initialize(hash_dim, embed_dim, derive_seed(config_.seed, "encoder"),
                                                   config_.init_scale);
    }

    std::vector<Embedding> train_embeddings() const {
        std::vector<Embedding> out(train_.size());
        if (frozen_) {
            for (std::size_t i = 0; i < train_.size(); ++i) out[i] = lookup(*table_, train_[i].id);
        } else {
            parallel_for(train_.size(), config_.jobs, [&](std::size_t i) { out[i] = encode(features_[i], model_.encoder); });
        }
        return out;
    }

    void refresh_prototypes(std::size_t epoch) {
        const auto old_keys = column_keys(model_);
        const Model before = model_;

        std::vector<std::string> ids;
        ids.reserve(train_.size());
        for (const auto& s : train_) ids.push_back(s.id);
        auto discovered = discover_prototypes(train_embeddings(), ids, train_labels_, labels_.size(), config_.k,
                                              model_.loss.weights.s_min,
                                              derive_seed(config_.seed, "kmeans:" + std::to_string(epoch)), config_.jobs);
        labels_without_positives_ = discovered.labels_without_positives;
        model_.prototypes = std::move(discovered.prototypes);
        if (model_.mode == TrainMode::preced_provis) {
            for (auto& p : encode_provision_prototypes(labels_, model_.encoder)) model_.prototypes.push_back(std::move(p));
        } else if (model_.mode == TrainMode::frozen) {
            bool complete = true;
            for (const auto& l : labels_.labels()) complete = complete && table_->contains(provision_record_id(l));
            if (complete) {
                for (auto& p : provision_prototypes_from_table(labels_, *table_)) model_.prototypes.push_back(std::move(p));
            } else {
                model_.loss.head_uses_provisions = false;
            }
        }

        if (before.head.weight.size() == 0) return;
        // carry head columns over by (kind, label, slot)
        const auto new_keys = column_keys(model_);
        std::map<ColumnKey, Eigen::Index> old_index;
        for (std::size_t c = 0; c < old_keys.size(); ++c) old_index[old_keys[c]] = static_cast<Eigen::Index>(c);
        ClassifierHead head = ClassifierHead::zeros(labels_.size(), new_keys.size());
        head.bias = before.head.bias;
        for (std::size_t c = 0; c < new_keys.size(); ++c) {
            const auto it = old_index.find(new_keys[c]);
            if (it != old_index.end()) head.weight.col(static_cast<Eigen::Index>(c)) = before.head.weight.col(it->second);
        }
        model_.head = std::move(head);
    }

    EpochLog loss_over_training_set() const {
        std::vector<Eigen::VectorXd> embeddings;
        for (const auto& e : train_embeddings()) embeddings.push_back(e.vector);
        const auto loss = total_loss(embeddings, train_labels_, model_.prototypes, model_.head, model_.loss);
        EpochLog row;
        row.bce = loss.bce;
        row.d_preced = loss.preced.value;
        row.d_provis = loss.provis;
        row.total = loss.total;
        return row;
    }

    LossBreakdown step(const std::vector<std::size_t>& batch) {
        std::vector<LabelVector> labels;
        labels.reserve(batch.size());
        for (auto i : batch) labels.push_back(train_labels_[i]);
        const double lr = config_.learning_rate;
        const double decay = 1.0 - lr * config_.weight_decay;

        if (frozen_) {
            std::vector<Eigen::VectorXd> embeddings;
            for (auto i : batch) embeddings.push_back(lookup(*table_, train_[i].id).vector);
            LossGradients g;
            const auto loss = total_loss(embeddings, labels, model_.prototypes, model_.head, model_.loss, &g);
            model_.head.weight = decay * model_.head.weight - lr * g.head.weight;
            model_.head.bias -= lr * g.head.bias;
            return loss;
        }

        std::vector<SparseFeatures> feats;
        feats.reserve(batch.size());
        for (auto i : batch) feats.push_back(features_[i]);
        FullGradients g;
        const auto loss =
            loss_gradients(feats, labels, model_.encoder, model_.prototypes, model_.head, model_.loss, &g);
        model_.encoder.weight = decay * model_.encoder.weight - lr * g.encoder.weight;
        model_.encoder.bias -= lr * g.encoder.bias;
        model_.head.weight = decay * model_.head.weight - lr * g.head.weight;
        model_.head.bias -= lr * g.head.bias;
        for (std::size_t j = 0; j < model_.prototypes.size(); ++j) {
            auto& p = model_.prototypes[j];
            if (p.kind != PrototypeKind::precedent) continue;
            p.vector.vector -= lr * g.prototypes[j];
            p.vector.normalized = std::abs(p.vector.vector.norm() - 1.0) <= 1e-6;
        }
        return loss;
    }

    TrainConfig config_;
    const std::vector<ContextSpan>& train_;
    const std::vector<ContextSpan>& val_;
    const LabelSet& labels_;
    const EmbeddingTable* table_;
    bool frozen_ = false;
    Model model_;
    std::vector<SparseFeatures> features_;
    std::vector<LabelVector> train_labels_;
    std::vector<std::size_t> labels_without_positives_;
};

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

TrainResult train(const TrainConfig& config, const std::vector<ContextSpan>& train_spans,
                  const std::vector<ContextSpan>& validation_spans, const LabelSet& labels,
                  const EmbeddingTable* frozen_embeddings) {
    return Trainer(config, train_spans, validation_spans, labels, frozen_embeddings).run();
}

std::string TrainResult::log_tsv() const {
    std::ostringstream out;
    out << std::setprecision(10);
    out << "epoch\tbce\td_preced\td_provis\ttotal\tval_macro_f1\n";
    for (const auto& r : log) {
        out << r.epoch << '\t' << r.bce << '\t' << r.d_preced << '\t' << r.d_provis << '\t' << r.total << '\t'
            << r.validation_macro_f1 << '\n';
    }
    return out.str();
}

Embedding embed(const Model& model, const ContextSpan& span, const EmbeddingTable* table) {
    if (model.mode == TrainMode::frozen) {
        if (!table) throw DataError("frozen model needs an embedding file to embed spans");
        return lookup(*table, span.id);
    }
    if (table) {
        if (const auto it = table->find(span.id); it != table->end()) return it->second;
    }
    return encode(span, model.encoder);
}

PredictionResult predict(const Model& model, const Embedding& embedding) {
    const auto& h = embedding.vector;
    const auto n = static_cast<std::size_t>(model.head.weight.rows());
    if (model.label_keys.size() != n) throw DataError("predict: model label count mismatch");
    for (const auto& p : model.prototypes) {
        if (p.vector.vector.size() != h.size()) throw DataError("predict: embedding dimension mismatch");
    }
    PredictionResult r;
    std::vector<std::size_t> all(model.prototypes.size());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    r.similarities = similarity_vector(h, model.prototypes, all, model.loss.weights.epsilon);

    Eigen::VectorXd x;
    if (model.loss.head_input == HeadInput::embedding) {
        x = h;
    } else {
        const auto cols = head_columns(model.prototypes, model.loss.head_uses_provisions);
        x.resize(static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) x(static_cast<Eigen::Index>(c)) = r.similarities(static_cast<Eigen::Index>(cols[c]));
    }
    if (x.size() != model.head.weight.cols()) throw DataError("predict: head input dimension mismatch");
    const Eigen::VectorXd z = model.head.weight * x + model.head.bias;
    r.scores.resize(z.size());
    r.predicted.assign(n, 0);
    for (Eigen::Index l = 0; l < z.size(); ++l) {
        r.scores(l) = sigmoid(z(l));
        r.predicted[static_cast<std::size_t>(l)] = r.scores(l) >= 0.5 ? 1 : 0;
    }
    return r;
}

PredictionResult predict(const Checkpoint& checkpoint, const ContextSpan& span, const EmbeddingTable* table) {
    if (span.labels.size() != checkpoint.model.label_keys.size() && !span.labels.empty()) {
        throw DataError("predict: span label dimension does not match checkpoint");
    }
    return predict(checkpoint.model, embed(checkpoint.model, span, table));
}

std::vector<PredictionResult> predict_all(const Model& model, const std::vector<ContextSpan>& spans,
                                          const EmbeddingTable* table, unsigned jobs) {
    std::vector<PredictionResult> out(spans.size());
    parallel_for(spans.size(), jobs, [&](std::size_t i) { out[i] = predict(model, embed(model, spans[i], table)); });
    return out;
}

EvalReport evaluate(const Model& model, const std::vector<ContextSpan>& spans, const EmbeddingTable* table,
                    unsigned jobs) {
    const auto results = predict_all(model, spans, table, jobs);
    std::vector<LabelVector> predictions, golds;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        predictions.push_back(results[i].predicted);
        golds.push_back(spans[i].labels);
    }
    return f1_report(predictions, golds);
}

}  // namespace lcp
