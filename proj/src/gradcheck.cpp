#include "lcp/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lcp/util.hpp"

namespace lcp {

GradCheckResult finite_diff_check(const std::function<double(std::span<const double>)>& f,
                                  std::span<const double> x, std::span<const double> analytic, double step,
                                  std::size_t min_coords, std::uint64_t seed) {
    if (!(step > 0.0)) throw std::invalid_argument("finite_diff_check: step must be positive");
    if (analytic.size() != x.size()) throw std::invalid_argument("finite_diff_check: gradient size mismatch");

    std::vector<std::size_t> coords;
    if (x.size() <= min_coords) {
        coords.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) coords[i] = i;
    } else {
        Rng rng(seed);
        coords = sample_without_replacement(x.size(), min_coords, rng);
        std::sort(coords.begin(), coords.end());
    }

    std::vector<double> probe(x.begin(), x.end());
    GradCheckResult result;
    result.coordinates_checked = coords.size();
    for (auto i : coords) {
        const double saved = probe[i];
        probe[i] = saved + step;
        const double up = f(probe);
        probe[i] = saved - step;
        const double down = f(probe);
        probe[i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-12});
        const double err = std::abs(analytic[i] - numeric) / denom;
        if (err > result.max_relative_error || (std::isnan(err) && !std::isnan(result.max_relative_error))) {
            result.max_relative_error = err;
            result.worst_coordinate = i;
        }
    }
    return result;
}

GradCheckResult finite_diff_check(const Objective& objective, std::span<const double> x, double step,
                                  std::size_t min_coords, std::uint64_t seed) {
    std::vector<double> grad;
    objective(x, &grad);
    return finite_diff_check([&](std::span<const double> p) { return objective(p, nullptr); }, x, grad, step,
                             min_coords, seed);
}

}  // namespace lcp
