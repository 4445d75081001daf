#include "lcp/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "lcp/util.hpp"

namespace lcp {

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

EvalReport f1_report(const std::vector<LabelVector>& predictions, const std::vector<LabelVector>& golds) {
    if (predictions.empty()) throw DataError("f1_report: empty input");
    if (predictions.size() != golds.size()) throw DataError("f1_report: predictions and golds differ in length");
    const std::size_t n = golds.front().size();
    EvalReport report;
    report.samples = predictions.size();
    report.per_label.resize(n);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].size() != n || golds[i].size() != n) throw DataError("f1_report: label dimension mismatch");
        for (std::size_t l = 0; l < n; ++l) {
            const bool p = predictions[i][l] != 0;
            const bool g = golds[i][l] != 0;
            auto& s = report.per_label[l];
            if (g) ++s.support;
            if (p && g) ++s.true_positives;
            if (p && !g) ++s.false_positives;
            if (!p && g) ++s.false_negatives;
        }
    }
    double tp = 0, fp = 0, fn = 0, f1_sum = 0;
    for (auto& s : report.per_label) {
        s.precision = safe_ratio(static_cast<double>(s.true_positives),
                                 static_cast<double>(s.true_positives + s.false_positives));
        s.recall = safe_ratio(static_cast<double>(s.true_positives),
                              static_cast<double>(s.true_positives + s.false_negatives));
        s.f1 = safe_ratio(2.0 * static_cast<double>(s.true_positives),
                          2.0 * static_cast<double>(s.true_positives) + static_cast<double>(s.false_positives) +
                              static_cast<double>(s.false_negatives));
        tp += static_cast<double>(s.true_positives);
        fp += static_cast<double>(s.false_positives);
        fn += static_cast<double>(s.false_negatives);
        f1_sum += s.f1;
    }
    report.macro_f1 = n == 0 ? 0.0 : f1_sum / static_cast<double>(n);
    report.micro_f1 = safe_ratio(2.0 * tp, 2.0 * tp + fp + fn);
    return report;
}

std::string EvalReport::to_tsv(const std::vector<std::string>& keys) const {
    std::ostringstream out;
    out << std::setprecision(6) << std::fixed;
    out << "label\tsupport\ttp\tfp\tfn\tprecision\trecall\tf1\n";
    for (std::size_t l = 0; l < per_label.size(); ++l) {
        const auto& s = per_label[l];
        out << (l < keys.size() ? keys[l] : std::to_string(l)) << '\t' << s.support << '\t' << s.true_positives
            << '\t' << s.false_positives << '\t' << s.false_negatives << '\t' << s.precision << '\t' << s.recall
            << '\t' << s.f1 << '\n';
    }
    out << "# samples=" << samples << "\tmacro_f1=" << macro_f1 << "\tmicro_f1=" << micro_f1 << '\n';
    return out.str();
}

}  // namespace lcp
