#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcp/corpus.hpp"
#include "lcp/prototypes.hpp"

namespace lcp {

struct PrincipalAxes {
    Eigen::VectorXd mean;
    Eigen::MatrixXd axes;       // d x 2, unit columns (second zero when rank deficient)
    Eigen::Vector2d variances;  // along each axis
    Eigen::MatrixXd coordinates;  // N x 2
    bool rank_deficient = false;
};

/// Top two principal components of the rows of `data` by power iteration with
/// deflation. Each axis is signed so its largest-magnitude entry is positive.
PrincipalAxes principal_axes_2d(const Eigen::MatrixXd& data, std::size_t max_iter = 100000, double tol = 1e-15);

enum class PointKind { sample, precedent, provision };

struct ProjectedPoint {
    double x = 0.0;
    double y = 0.0;
    PointKind kind = PointKind::sample;
    long label = -1;  // first positive label for samples; -1 when none
    std::string id;
};

struct Projection {
    std::vector<ProjectedPoint> points;
    bool rank_deficient = false;

    /// "x,y,kind,label,id" rows with a header line.
    std::string to_csv() const;
};

/// Projects sample embeddings together with prototypes; throws DataError for
/// fewer than 3 points.
Projection project_2d(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<std::string>& ids,
                      const std::vector<LabelVector>& labels, const std::vector<Prototype>& prototypes);

}  // namespace lcp
