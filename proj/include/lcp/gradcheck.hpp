#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lcp {

/// Objective returning f(x); when `grad` is non-null it also fills the analytic gradient.
using Objective = std::function<double(std::span<const double> x, std::vector<double>* grad)>;

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::size_t worst_coordinate = 0;
    std::size_t coordinates_checked = 0;
};

/// Central differences on a seeded random subset of at least `min_coords`
/// coordinates (all when fewer exist). Relative error per coordinate is
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-12).
GradCheckResult finite_diff_check(const Objective& objective, std::span<const double> x, double step,
                                  std::size_t min_coords = 64, std::uint64_t seed = 0);

/// Same, comparing against a caller-supplied analytic gradient.
GradCheckResult finite_diff_check(const std::function<double(std::span<const double>)>& f,
                                  std::span<const double> x, std::span<const double> analytic, double step,
                                  std::size_t min_coords = 64, std::uint64_t seed = 0);

}  // namespace lcp
