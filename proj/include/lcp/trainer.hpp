#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcp/corpus.hpp"
#include "lcp/encoder.hpp"
#include "lcp/metrics.hpp"
#include "lcp/pcem.hpp"
#include "lcp/protoloss.hpp"
#include "lcp/prototypes.hpp"

namespace lcp {

enum class TrainMode { vanilla, preced, preced_provis, frozen };

const char* to_string(TrainMode mode);
TrainMode parse_train_mode(const std::string& name);

struct TrainConfig {
    TrainMode mode = TrainMode::preced_provis;
    std::size_t epochs = 20;
    std::size_t batch_size = 8;
    double learning_rate = 2e-5;
    double weight_decay = 0.01;
    std::size_t recluster_every = 5;
    std::size_t k = 5;
    LossWeights weights;
    std::uint64_t seed = 0;
    std::size_t hash_dim = 4096;
    std::size_t embed_dim = 32;
    double init_scale = 0.1;
    bool head_uses_provisions = true;
    unsigned jobs = 1;

    void validate() const;
};

/// Applies key=value pairs (keys as in to_key_values); unknown keys throw DataError.
void apply_config(TrainConfig& config, const std::map<std::string, std::string>& values);
std::map<std::string, std::string> to_key_values(const TrainConfig& config);

/// Flat "key = value" text, '#' comments.
std::map<std::string, std::string> parse_key_value_text(const std::string& text);

struct Model {
    TrainMode mode = TrainMode::preced_provis;
    LossConfig loss;
    EncoderParams encoder;
    ClassifierHead head;
    std::vector<Prototype> prototypes;  // precedents label-major, then provisions
    std::vector<std::string> label_keys;
};

struct Checkpoint {
    Model model;
    std::size_t epoch = 0;
    double validation_macro_f1 = 0.0;
};

struct EpochLog {
    std::size_t epoch = 0;
    double bce = 0.0;
    double d_preced = 0.0;
    double d_provis = 0.0;
    double total = 0.0;
    double validation_macro_f1 = 0.0;
    bool reclustered = false;
};

struct TrainResult {
    Checkpoint best;
    std::vector<EpochLog> log;
    std::vector<std::size_t> labels_without_positives;

    /// Tab-separated: epoch, bce, d_preced, d_provis, total, val_macro_f1.
    std::string log_tsv() const;
};

class TrainingDiverged : public std::runtime_error {
public:
    TrainingDiverged(std::size_t epoch, std::string term)
        : std::runtime_error("training diverged at epoch " + std::to_string(epoch) + " in term " + term),
          epoch_(epoch), term_(std::move(term)) {}
    std::size_t epoch() const { return epoch_; }
    const std::string& term() const { return term_; }

private:
    std::size_t epoch_;
    std::string term_;
};

/// Gradient descent with decoupled weight decay on the mode's objective; the
/// checkpoint with the best validation macro-F1 (earliest on ties) is returned.
/// Frozen mode reads every embedding (spans by id, provisions as
/// "provision:<key>") from `frozen_embeddings` and only updates the head.
TrainResult train(const TrainConfig& config, const std::vector<ContextSpan>& train_spans,
                  const std::vector<ContextSpan>& validation_spans, const LabelSet& labels,
                  const EmbeddingTable* frozen_embeddings = nullptr);

/// Embedding of a span under the model: the encoder, or a table lookup for frozen models.
Embedding embed(const Model& model, const ContextSpan& span, const EmbeddingTable* table = nullptr);

PredictionResult predict(const Model& model, const Embedding& embedding);
PredictionResult predict(const Checkpoint& checkpoint, const ContextSpan& span, const EmbeddingTable* table = nullptr);

std::vector<PredictionResult> predict_all(const Model& model, const std::vector<ContextSpan>& spans,
                                          const EmbeddingTable* table = nullptr, unsigned jobs = 1);

EvalReport evaluate(const Model& model, const std::vector<ContextSpan>& spans, const EmbeddingTable* table = nullptr,
                    unsigned jobs = 1);

/// Versioned single-file binary snapshot; doubles stored verbatim.
std::string encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(std::string_view bytes);
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace lcp
