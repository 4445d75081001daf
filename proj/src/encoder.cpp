#include "lcp/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lcp/util.hpp"

namespace lcp {

SparseFeatures hash_text_features(std::string_view text, std::size_t hash_dim) {
    if (hash_dim == 0) throw std::invalid_argument("hash_dim must be positive");
    std::map<std::uint32_t, double> acc;
    for (const auto& tok : tokenize(text)) {
        if (tok.is_mask || hash_dim == 1) {
            acc[kMaskBucket] += 1.0;
            continue;
        }
        const std::uint64_t h = fnv1a64(to_lower(text.substr(tok.begin, tok.end - tok.begin)));
        const auto bucket = static_cast<std::uint32_t>(1 + (h & 0x7fffffffffffffffULL) % (hash_dim - 1));
        acc[bucket] += (h >> 63) ? -1.0 : 1.0;
    }
    SparseFeatures out;
    out.reserve(acc.size());
    for (const auto& [bucket, value] : acc) {
        if (value != 0.0) out.emplace_back(bucket, value);
    }
    return out;
}

SparseFeatures hash_features(const ContextSpan& span, std::size_t hash_dim) {
    std::map<std::uint32_t, double> acc;
    for (const auto& sentence : span.sentences) {
        for (const auto& [bucket, value] : hash_text_features(sentence, hash_dim)) acc[bucket] += value;
    }
    SparseFeatures out;
    for (const auto& [bucket, value] : acc) {
        if (value != 0.0) out.emplace_back(bucket, value);
    }
    return out;
}

EncoderParams EncoderParams::initialize(std::size_t hash_dim, std::size_t embed_dim, std::uint64_t seed,
                                        double scale) {
    EncoderParams p;
    p.hash_dim = hash_dim;
    p.seed = seed;
    p.weight.resize(static_cast<Eigen::Index>(embed_dim), static_cast<Eigen::Index>(hash_dim));
    p.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(embed_dim));
    // Box-Muller on uniform_unit: std::normal_distribution differs between standard libraries
    Rng rng(seed);
    constexpr double two_pi = 6.283185307179586476925;
    for (Eigen::Index c = 0; c < p.weight.cols(); ++c) {
        for (Eigen::Index r = 0; r < p.weight.rows(); ++r) {
            const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
            const double u2 = uniform_unit(rng);
            p.weight(r, c) = scale * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        }
    }
    p.validate();
    return p;
}

void EncoderParams::validate() const {
    if (weight.rows() < 2) throw DataError("encoder embed_dim must be >= 2");
    if (static_cast<std::size_t>(weight.cols()) != hash_dim) throw DataError("encoder weight/hash_dim mismatch");
    if (hash_dim < embed_dim()) throw DataError("encoder hash_dim must be >= embed_dim");
    if (bias.size() != weight.rows()) throw DataError("encoder bias dimension mismatch");
    if (!weight.allFinite() || !bias.allFinite()) throw DataError("encoder parameters are not finite");
}

Embedding encode(const SparseFeatures& features, const EncoderParams& params, EncodeTrace* trace) {
    Eigen::VectorXd pre = params.bias;
    for (const auto& [bucket, value] : features) {
        if (bucket >= params.hash_dim) throw DataError("feature bucket exceeds encoder hash_dim");
        pre.noalias() += value * params.weight.col(bucket);
    }
    Eigen::VectorXd act = pre.array().tanh().matrix();
    const double norm = act.norm();
    Embedding out;
    if (norm > 0.0) {
        out.vector = act / norm;
        out.normalized = true;
    } else {
        out.vector = act;
        out.normalized = false;
    }
    if (trace) {
        trace->features = features;
        trace->activation = std::move(act);
        trace->norm = norm;
        trace->output = out;
    }
    return out;
}

Embedding encode(const ContextSpan& span, const EncoderParams& params) {
    return encode(hash_features(span, params.hash_dim), params);
}

Embedding encode_text(std::string_view text, const EncoderParams& params) {
    return encode(hash_text_features(text, params.hash_dim), params);
}

EncoderGradient EncoderGradient::zeros_like(const EncoderParams& params) {
    return {Eigen::MatrixXd::Zero(params.weight.rows(), params.weight.cols()),
            Eigen::VectorXd::Zero(params.bias.size())};
}

void encode_backward(const EncodeTrace& trace, const Eigen::VectorXd& grad_embedding, EncoderGradient& grad) {
    Eigen::VectorXd grad_act;
    if (trace.output.normalized) {
        // d(a/|a|)/da = (I - u u^T) / |a|
        const auto& u = trace.output.vector;
        grad_act = (grad_embedding - u * u.dot(grad_embedding)) / trace.norm;
    } else {
        grad_act = grad_embedding;
    }
    const Eigen::VectorXd grad_pre =
        grad_act.array() * (1.0 - trace.activation.array().square());
    grad.bias += grad_pre;
    for (const auto& [bucket, value] : trace.features) grad.weight.col(bucket) += value * grad_pre;
}

}  // namespace lcp
