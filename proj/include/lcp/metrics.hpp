#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcp/corpus.hpp"

namespace lcp {

struct PredictionResult {
    Eigen::VectorXd scores;        // per-label sigmoid
    LabelVector predicted;         // scores >= 0.5
    Eigen::VectorXd similarities;  // one per prototype, dump order (empty for vanilla)
};

struct LabelScore {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    std::size_t support = 0;  // gold positives
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
    std::size_t samples = 0;
    std::vector<LabelScore> per_label;

    /// Per-label table followed by a summary line; `keys` names the rows when given.
    std::string to_tsv(const std::vector<std::string>& keys = {}) const;
};

/// Ratio with the 0/0 := 0 convention.
double safe_ratio(double num, double den);

/// Per-label P/R/F1, macro = mean per-label F1, micro = F1 of pooled counts.
/// Throws DataError on empty input or mismatched shapes.
EvalReport f1_report(const std::vector<LabelVector>& predictions, const std::vector<LabelVector>& golds);

}  // namespace lcp
