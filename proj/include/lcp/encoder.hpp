#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lcp/corpus.hpp"

namespace lcp {

struct Embedding {
    Eigen::VectorXd vector;
    bool normalized = false;
};

/// Sparse signed token counts, sorted by bucket, no zero entries.
using SparseFeatures = std::vector<std::pair<std::uint32_t, double>>;

/// Bucket reserved for kMaskToken.
inline constexpr std::uint32_t kMaskBucket = 0;

/// Lowercased tokens hashed into `hash_dim` buckets with a hash-derived sign.
SparseFeatures hash_text_features(std::string_view text, std::size_t hash_dim);
SparseFeatures hash_features(const ContextSpan& span, std::size_t hash_dim);

/// Single tanh layer standing in for the language-model encoder.
struct EncoderParams {
    std::size_t hash_dim = 4096;
    Eigen::MatrixXd weight;  // embed_dim x hash_dim
    Eigen::VectorXd bias;    // embed_dim
    std::uint64_t seed = 0;

    std::size_t embed_dim() const { return static_cast<std::size_t>(weight.rows()); }

    /// Gaussian weights with standard deviation `scale`, zero bias.
    static EncoderParams initialize(std::size_t hash_dim, std::size_t embed_dim, std::uint64_t seed,
                                    double scale = 0.1);

    /// Throws DataError unless finite with embed_dim >= 2 and hash_dim >= embed_dim.
    void validate() const;
};

/// Intermediate values kept for the backward pass.
struct EncodeTrace {
    SparseFeatures features;
    Eigen::VectorXd activation;  // tanh output before normalization
    double norm = 0.0;
    Embedding output;
};

Embedding encode(const SparseFeatures& features, const EncoderParams& params, EncodeTrace* trace = nullptr);
Embedding encode(const ContextSpan& span, const EncoderParams& params);
Embedding encode_text(std::string_view text, const EncoderParams& params);

struct EncoderGradient {
    Eigen::MatrixXd weight;
    Eigen::VectorXd bias;

    static EncoderGradient zeros_like(const EncoderParams& params);
};

/// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(embedding).
void encode_backward(const EncodeTrace& trace, const Eigen::VectorXd& grad_embedding, EncoderGradient& grad);

}  // namespace lcp
