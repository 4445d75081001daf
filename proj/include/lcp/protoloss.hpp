#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcp/corpus.hpp"
#include "lcp/encoder.hpp"
#include "lcp/prototypes.hpp"

namespace lcp {

struct LossWeights {
    double lambda1 = 0.10;   // pull toward nearest own-class precedent
    double lambda2 = 0.0005; // push from nearest other-class precedent
    double lambda3 = 0.001;  // same-class prototype diversity hinge
    double delta = 0.10;     // provision attraction
    double epsilon = 1e-4;
    double s_max = 0.3;
    double s_min = -1.0;

    void validate() const;
};

/// Linear map from head features (similarities or the raw embedding) to n logits.
struct ClassifierHead {
    Eigen::MatrixXd weight;  // n x m
    Eigen::VectorXd bias;    // n

    static ClassifierHead zeros(std::size_t labels, std::size_t features);
};

/// 2 * ln((d2 + 1) / (d2 + epsilon)): non-negative for epsilon < 1, decreasing in d2.
double similarity_score(double squared_distance, double epsilon);
double similarity_score(const Eigen::VectorXd& prototype, const Eigen::VectorXd& embedding, double epsilon);
/// d(similarity_score)/d(squared_distance)
double similarity_score_slope(double squared_distance, double epsilon);

enum class HeadInput {
    similarities,  // prototype network: head reads similarity scores
    embedding,     // vanilla: head reads the embedding directly
};

struct LossConfig {
    LossWeights weights;
    HeadInput head_input = HeadInput::similarities;
    bool head_uses_provisions = true;
};

/// Prototype indices feeding the head, in dump order.
std::vector<std::size_t> head_columns(const std::vector<Prototype>& prototypes, bool include_provisions);

Eigen::VectorXd similarity_vector(const Eigen::VectorXd& embedding, const std::vector<Prototype>& prototypes,
                                  const std::vector<std::size_t>& columns, double epsilon);

struct LossDiagnostics {
    std::size_t samples_without_own_prototypes = 0;   // excluded from the lambda1 term
    std::size_t samples_without_other_prototypes = 0; // excluded from the lambda2 term
    std::size_t samples_without_labels = 0;           // contribute 0 to d_provis
};

struct PrecedentTerms {
    double attract = 0.0;    // mean min squared distance to own-class precedents
    double repel = 0.0;      // mean min squared distance to other-class precedents
    double diversity = 0.0;  // sum of hinge(cos - s_max) over ordered same-class pairs
    double value = 0.0;      // lambda1 * attract - lambda2 * repel + lambda3 * diversity
};

PrecedentTerms d_preced(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                        const std::vector<Prototype>& prototypes, const LossWeights& weights,
                        LossDiagnostics* diagnostics = nullptr);

/// Mean over the batch of the min squared distance to provision prototypes of the
/// sample's positive labels (unweighted by delta).
double d_provis(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                const std::vector<Prototype>& prototypes, LossDiagnostics* diagnostics = nullptr);

struct LossBreakdown {
    double bce = 0.0;
    PrecedentTerms preced;
    double provis = 0.0;
    double total = 0.0;
    LossDiagnostics diagnostics;
};

struct LossGradients {
    std::vector<Eigen::VectorXd> embeddings;  // per sample
    ClassifierHead head;
    std::vector<Eigen::VectorXd> prototypes;  // provision rows stay zero
};

class NonFiniteLoss : public std::runtime_error {
public:
    explicit NonFiniteLoss(std::string term)
        : std::runtime_error("non-finite loss term: " + term), term_(std::move(term)) {}
    const std::string& term() const { return term_; }

private:
    std::string term_;
};

/// Mean multi-label BCE on head logits + d_preced + delta * d_provis. Prototype
/// terms are skipped (zero) when the head reads embeddings and no prototypes exist.
LossBreakdown total_loss(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                         const std::vector<Prototype>& prototypes, const ClassifierHead& head,
                         const LossConfig& config, LossGradients* gradients = nullptr);

struct FullGradients {
    EncoderGradient encoder;
    ClassifierHead head;
    std::vector<Eigen::VectorXd> prototypes;
};

/// Runs the encoder on a batch of hashed spans, evaluates total_loss and
/// back-propagates to encoder parameters, head and precedent prototype vectors.
LossBreakdown loss_gradients(const std::vector<SparseFeatures>& batch, const std::vector<LabelVector>& labels,
                             const EncoderParams& encoder, const std::vector<Prototype>& prototypes,
                             const ClassifierHead& head, const LossConfig& config, FullGradients* gradients);

}  // namespace lcp
