#include "lcp/protoloss.hpp"

#include <cmath>
#include <limits>

#include "lcp/util.hpp"

namespace lcp {
namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void require_finite(double v, const char* term) {
    if (!std::isfinite(v)) throw NonFiniteLoss(term);
}

bool owns(const LabelVector& y, const Prototype& p) { return y.at(p.label_index) != 0; }

struct Nearest {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    double d2 = std::numeric_limits<double>::infinity();
    bool found() const { return index != std::numeric_limits<std::size_t>::max(); }
};

template <class Pred>
Nearest nearest_where(const Eigen::VectorXd& h, const std::vector<Prototype>& prototypes, Pred&& pred) {
    Nearest best;
    for (std::size_t j = 0; j < prototypes.size(); ++j) {
        if (!pred(prototypes[j])) continue;
        const double d2 = (h - prototypes[j].vector.vector).squaredNorm();
        if (d2 < best.d2) {
            best.d2 = d2;
            best.index = j;
        }
    }
    return best;
}

bool is_precedent(const Prototype& p) { return p.kind == PrototypeKind::precedent; }

// Accumulates the lambda terms and their gradients; shared by d_preced/total_loss.
PrecedentTerms preced_impl(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                           const std::vector<Prototype>& prototypes, const LossWeights& w,
                           LossDiagnostics* diag, LossGradients* grads) {
    const std::size_t batch = embeddings.size();
    const double inv_b = 1.0 / static_cast<double>(batch);
    std::vector<double> attract(batch, 0.0), repel(batch, 0.0);
    for (std::size_t i = 0; i < batch; ++i) {
        const auto& h = embeddings[i];
        const auto& y = labels[i];
        const auto own = nearest_where(h, prototypes, [&](const Prototype& p) { return is_precedent(p) && owns(y, p); });
        const auto other =
            nearest_where(h, prototypes, [&](const Prototype& p) { return is_precedent(p) && !owns(y, p); });
        if (own.found()) {
            attract[i] = own.d2;
            if (grads && w.lambda1 != 0.0) {
                const Eigen::VectorXd g = (2.0 * w.lambda1 * inv_b) * (h - prototypes[own.index].vector.vector);
                grads->embeddings[i] += g;
                grads->prototypes[own.index] -= g;
            }
        } else if (diag) {
            ++diag->samples_without_own_prototypes;
        }
        if (other.found()) {
            repel[i] = other.d2;
            if (grads && w.lambda2 != 0.0) {
                const Eigen::VectorXd g = (-2.0 * w.lambda2 * inv_b) * (h - prototypes[other.index].vector.vector);
                grads->embeddings[i] += g;
                grads->prototypes[other.index] -= g;
            }
        } else if (diag) {
            ++diag->samples_without_other_prototypes;
        }
    }

    std::vector<double> hinges;
    for (std::size_t a = 0; a < prototypes.size(); ++a) {
        if (!is_precedent(prototypes[a])) continue;
        for (std::size_t b = a + 1; b < prototypes.size(); ++b) {
            if (!is_precedent(prototypes[b]) || prototypes[b].label_index != prototypes[a].label_index) continue;
            const auto& pa = prototypes[a].vector.vector;
            const auto& pb = prototypes[b].vector.vector;
            const double na = pa.norm(), nb = pb.norm();
            if (na == 0.0 || nb == 0.0) continue;
            const double c = pa.dot(pb) / (na * nb);
            const double excess = c - w.s_max;
            if (excess <= 0.0) continue;
            // (a, b) and (b, a) are both counted
            hinges.push_back(2.0 * excess);
            if (grads && w.lambda3 != 0.0) {
                const double scale = 2.0 * w.lambda3;
                grads->prototypes[a] += scale * (pb / (na * nb) - c * pa / (na * na));
                grads->prototypes[b] += scale * (pa / (na * nb) - c * pb / (nb * nb));
            }
        }
    }

    PrecedentTerms t;
    t.attract = pairwise_sum(attract) * inv_b;
    t.repel = pairwise_sum(repel) * inv_b;
    t.diversity = pairwise_sum(hinges);
    t.value = w.lambda1 * t.attract - w.lambda2 * t.repel + w.lambda3 * t.diversity;
    return t;
}

double provis_impl(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                   const std::vector<Prototype>& prototypes, double grad_scale, LossDiagnostics* diag,
                   LossGradients* grads) {
    const std::size_t batch = embeddings.size();
    const double inv_b = 1.0 / static_cast<double>(batch);
    std::vector<double> per_sample(batch, 0.0);
    for (std::size_t i = 0; i < batch; ++i) {
        const auto& h = embeddings[i];
        const auto best = nearest_where(
            h, prototypes, [&](const Prototype& p) { return p.kind == PrototypeKind::provision && owns(labels[i], p); });
        if (!best.found()) {
            if (diag) ++diag->samples_without_labels;
            continue;
        }
        per_sample[i] = best.d2;
        if (grads && grad_scale != 0.0) {
            grads->embeddings[i] += (2.0 * grad_scale * inv_b) * (h - prototypes[best.index].vector.vector);
        }
    }
    return pairwise_sum(per_sample) * inv_b;
}

void check_batch(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels) {
    if (embeddings.empty()) throw DataError("loss: empty batch");
    if (embeddings.size() != labels.size()) throw DataError("loss: embeddings and labels differ in length");
}

}  // namespace

void LossWeights::validate() const {
    if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0 || delta < 0) throw DataError("loss weights must be non-negative");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DataError("epsilon must lie in (0, 1)");
    if (s_max < -1.0 || s_max > 1.0 || s_min < -1.0 || s_min > 1.0) throw DataError("s_max/s_min must lie in [-1, 1]");
}

ClassifierHead ClassifierHead::zeros(std::size_t labels, std::size_t features) {
    return {Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels), static_cast<Eigen::Index>(features)),
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(labels))};
}

double similarity_score(double squared_distance, double epsilon) {
    return 2.0 * std::log((squared_distance + 1.0) / (squared_distance + epsilon));
}

double similarity_score(const Eigen::VectorXd& prototype, const Eigen::VectorXd& embedding, double epsilon) {
    if (prototype.size() != embedding.size()) throw DataError("similarity_score: dimension mismatch");
    return similarity_score((prototype - embedding).squaredNorm(), epsilon);
}

double similarity_score_slope(double squared_distance, double epsilon) {
    return 2.0 * (1.0 / (squared_distance + 1.0) - 1.0 / (squared_distance + epsilon));
}

std::vector<std::size_t> head_columns(const std::vector<Prototype>& prototypes, bool include_provisions) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < prototypes.size(); ++j) {
        if (include_provisions || prototypes[j].kind == PrototypeKind::precedent) cols.push_back(j);
    }
    return cols;
}

Eigen::VectorXd similarity_vector(const Eigen::VectorXd& embedding, const std::vector<Prototype>& prototypes,
                                  const std::vector<std::size_t>& columns, double epsilon) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        s(static_cast<Eigen::Index>(c)) = similarity_score(prototypes.at(columns[c]).vector.vector, embedding, epsilon);
    }
    return s;
}

PrecedentTerms d_preced(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                        const std::vector<Prototype>& prototypes, const LossWeights& weights,
                        LossDiagnostics* diagnostics) {
    check_batch(embeddings, labels);
    return preced_impl(embeddings, labels, prototypes, weights, diagnostics, nullptr);
}

double d_provis(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                const std::vector<Prototype>& prototypes, LossDiagnostics* diagnostics) {
    check_batch(embeddings, labels);
    return provis_impl(embeddings, labels, prototypes, 0.0, diagnostics, nullptr);
}

LossBreakdown total_loss(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<LabelVector>& labels,
                         const std::vector<Prototype>& prototypes, const ClassifierHead& head,
                         const LossConfig& config, LossGradients* gradients) {
    check_batch(embeddings, labels);
    const auto& w = config.weights;
    const std::size_t batch = embeddings.size();
    const auto n_labels = static_cast<std::size_t>(head.weight.rows());
    const auto dim = embeddings.front().size();
    const bool vanilla = config.head_input == HeadInput::embedding;
    const auto columns = head_columns(prototypes, config.head_uses_provisions);
    const auto features = vanilla ? static_cast<std::size_t>(dim) : columns.size();
    if (static_cast<std::size_t>(head.weight.cols()) != features || static_cast<std::size_t>(head.bias.size()) != n_labels) {
        throw DataError("loss: head shape " + std::to_string(head.weight.rows()) + "x" +
                        std::to_string(head.weight.cols()) + " does not match " + std::to_string(features) +
                        " features");
    }
    for (std::size_t i = 0; i < batch; ++i) {
        if (embeddings[i].size() != dim) throw DataError("loss: embedding dimension mismatch");
        if (labels[i].size() != n_labels) throw DataError("loss: label vector length mismatch");
    }
    for (const auto& p : prototypes) {
        if (p.vector.vector.size() != dim) throw DataError("loss: prototype dimension mismatch");
        if (p.label_index >= n_labels) throw DataError("loss: prototype label out of range");
    }

    if (gradients) {
        gradients->embeddings.assign(batch, Eigen::VectorXd::Zero(dim));
        gradients->head = ClassifierHead::zeros(n_labels, features);
        gradients->prototypes.assign(prototypes.size(), Eigen::VectorXd::Zero(dim));
    }

    const double inv_bn = 1.0 / (static_cast<double>(batch) * static_cast<double>(n_labels));
    std::vector<double> bce_terms(batch, 0.0);
    for (std::size_t i = 0; i < batch; ++i) {
        const auto& h = embeddings[i];
        std::vector<double> d2(columns.size());
        Eigen::VectorXd x;
        if (vanilla) {
            x = h;
        } else {
            x.resize(static_cast<Eigen::Index>(columns.size()));
            for (std::size_t c = 0; c < columns.size(); ++c) {
                d2[c] = (h - prototypes[columns[c]].vector.vector).squaredNorm();
                x(static_cast<Eigen::Index>(c)) = similarity_score(d2[c], w.epsilon);
            }
        }
        const Eigen::VectorXd z = head.weight * x + head.bias;
        Eigen::VectorXd dz(static_cast<Eigen::Index>(n_labels));
        double sum = 0.0;
        for (std::size_t l = 0; l < n_labels; ++l) {
            const auto li = static_cast<Eigen::Index>(l);
            const double y = labels[i][l] ? 1.0 : 0.0;
            sum += softplus(z(li)) - y * z(li);
            dz(li) = (sigmoid(z(li)) - y) * inv_bn;
        }
        bce_terms[i] = sum;
        if (!gradients) continue;
        gradients->head.weight.noalias() += dz * x.transpose();
        gradients->head.bias += dz;
        const Eigen::VectorXd dx = head.weight.transpose() * dz;
        if (vanilla) {
            gradients->embeddings[i] += dx;
        } else {
            for (std::size_t c = 0; c < columns.size(); ++c) {
                const double g = dx(static_cast<Eigen::Index>(c)) * similarity_score_slope(d2[c], w.epsilon) * 2.0;
                const Eigen::VectorXd diff = h - prototypes[columns[c]].vector.vector;
                gradients->embeddings[i] += g * diff;
                if (prototypes[columns[c]].kind == PrototypeKind::precedent) gradients->prototypes[columns[c]] -= g * diff;
            }
        }
    }

    LossBreakdown out;
    out.bce = pairwise_sum(bce_terms) * inv_bn;
    require_finite(out.bce, "bce");
    out.preced = preced_impl(embeddings, labels, prototypes, w, &out.diagnostics, gradients);
    require_finite(out.preced.value, "d_preced");
    out.provis = provis_impl(embeddings, labels, prototypes, w.delta, &out.diagnostics, gradients);
    require_finite(out.provis, "d_provis");
    out.total = out.bce + out.preced.value + w.delta * out.provis;
    require_finite(out.total, "total");
    return out;
}

LossBreakdown loss_gradients(const std::vector<SparseFeatures>& batch, const std::vector<LabelVector>& labels,
                             const EncoderParams& encoder, const std::vector<Prototype>& prototypes,
                             const ClassifierHead& head, const LossConfig& config, FullGradients* gradients) {
    std::vector<EncodeTrace> traces(batch.size());
    std::vector<Eigen::VectorXd> embeddings;
    embeddings.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) embeddings.push_back(encode(batch[i], encoder, &traces[i]).vector);

    if (!gradients) return total_loss(embeddings, labels, prototypes, head, config, nullptr);

    LossGradients lg;
    auto result = total_loss(embeddings, labels, prototypes, head, config, &lg);
    gradients->encoder = EncoderGradient::zeros_like(encoder);
    for (std::size_t i = 0; i < batch.size(); ++i) encode_backward(traces[i], lg.embeddings[i], gradients->encoder);
    gradients->head = std::move(lg.head);
    gradients->prototypes = std::move(lg.prototypes);
    return result;
}

}  // namespace lcp
