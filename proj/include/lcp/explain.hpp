#pragma once

#include <string>
#include <vector>

#include "lcp/metrics.hpp"
#include "lcp/prototypes.hpp"

namespace lcp {

struct Evidence {
    std::size_t prototype_index = 0;
    PrototypeKind kind = PrototypeKind::precedent;
    std::string source;  // training sample id, "centroid", or provision key
    double similarity = 0.0;
};

struct LabelExplanation {
    std::size_t label = 0;
    double score = 0.0;
    std::vector<Evidence> evidence;  // descending similarity, ties by source
};

/// For each predicted label, its `top_k` most similar prototypes.
std::vector<LabelExplanation> explain(const PredictionResult& result, const std::vector<Prototype>& prototypes,
                                      std::size_t top_k);

}  // namespace lcp
