#include "lcp/explain.hpp"

#include <algorithm>

#include "lcp/util.hpp"

namespace lcp {

std::vector<LabelExplanation> explain(const PredictionResult& result, const std::vector<Prototype>& prototypes,
                                      std::size_t top_k) {
    if (static_cast<std::size_t>(result.similarities.size()) != prototypes.size()) {
        throw DataError("explain: similarity vector does not match prototype count");
    }
    std::vector<LabelExplanation> out;
    for (std::size_t l = 0; l < result.predicted.size(); ++l) {
        if (!result.predicted[l]) continue;
        LabelExplanation ex;
        ex.label = l;
        ex.score = result.scores(static_cast<Eigen::Index>(l));
        for (std::size_t j = 0; j < prototypes.size(); ++j) {
            if (prototypes[j].label_index != l) continue;
            ex.evidence.push_back({j, prototypes[j].kind, prototypes[j].source,
                                   result.similarities(static_cast<Eigen::Index>(j))});
        }
        std::stable_sort(ex.evidence.begin(), ex.evidence.end(), [](const Evidence& a, const Evidence& b) {
            if (a.similarity != b.similarity) return a.similarity > b.similarity;
            return a.source < b.source;
        });
        if (ex.evidence.size() > top_k) ex.evidence.resize(top_k);
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace lcp
