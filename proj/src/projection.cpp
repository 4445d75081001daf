#include "lcp/projection.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "lcp/util.hpp"

namespace lcp {
namespace {

Eigen::VectorXd dominant(const Eigen::MatrixXd& cov, std::size_t max_iter, double tol) {
    const auto d = cov.rows();
    Eigen::VectorXd v(d);
    Rng rng(0x5eed);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = uniform_unit(rng) + 0.5;
    v.normalize();
    for (std::size_t it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = cov * v;
        const double norm = next.norm();
        if (norm == 0.0) return Eigen::VectorXd::Zero(d);
        next /= norm;
        if (next.dot(v) < 0) next = -next;
        const double change = (next - v).norm();
        v = std::move(next);
        if (change < tol) break;
    }
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    return v;
}

}  // namespace

PrincipalAxes principal_axes_2d(const Eigen::MatrixXd& data, std::size_t max_iter, double tol) {
    if (data.rows() < 3) throw DataError("projection needs at least 3 points");
    PrincipalAxes out;
    out.mean = data.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.rowwise() - out.mean.transpose();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(data.rows() - 1);
    const double scale = cov.trace();

    out.axes = Eigen::MatrixXd::Zero(data.cols(), 2);
    const Eigen::VectorXd v1 = dominant(cov, max_iter, tol);
    const double l1 = v1.dot(cov * v1);
    out.axes.col(0) = v1;
    cov -= l1 * v1 * v1.transpose();
    Eigen::VectorXd v2 = dominant(cov, max_iter, tol);
    double l2 = v2.dot(cov * v2);
    if (!(l2 > 1e-12 * std::max(scale, 1e-300)) || data.cols() < 2) {
        v2.setZero();
        l2 = 0.0;
        out.rank_deficient = true;
    }
    out.axes.col(1) = v2;
    out.variances = Eigen::Vector2d(l1, l2);
    out.coordinates = centered * out.axes;
    return out;
}

Projection project_2d(const std::vector<Eigen::VectorXd>& embeddings, const std::vector<std::string>& ids,
                      const std::vector<LabelVector>& labels, const std::vector<Prototype>& prototypes) {
    const std::size_t n = embeddings.size() + prototypes.size();
    if (n < 3) throw DataError("projection needs at least 3 points");
    const auto dim = !embeddings.empty() ? embeddings.front().size() : prototypes.front().vector.vector.size();
    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), dim);
    Projection proj;
    std::size_t row = 0;
    for (std::size_t i = 0; i < embeddings.size(); ++i, ++row) {
        if (embeddings[i].size() != dim) throw DataError("projection: dimension mismatch");
        data.row(static_cast<Eigen::Index>(row)) = embeddings[i].transpose();
        ProjectedPoint p;
        p.kind = PointKind::sample;
        p.id = i < ids.size() ? ids[i] : std::to_string(i);
        if (i < labels.size()) {
            for (std::size_t l = 0; l < labels[i].size(); ++l) {
                if (labels[i][l]) {
                    p.label = static_cast<long>(l);
                    break;
                }
            }
        }
        proj.points.push_back(std::move(p));
    }
    for (const auto& proto : prototypes) {
        if (proto.vector.vector.size() != dim) throw DataError("projection: dimension mismatch");
        data.row(static_cast<Eigen::Index>(row++)) = proto.vector.vector.transpose();
        ProjectedPoint p;
        p.kind = proto.kind == PrototypeKind::precedent ? PointKind::precedent : PointKind::provision;
        p.label = static_cast<long>(proto.label_index);
        p.id = proto.source;
        proj.points.push_back(std::move(p));
    }
    const auto axes = principal_axes_2d(data);
    proj.rank_deficient = axes.rank_deficient;
    for (std::size_t i = 0; i < n; ++i) {
        proj.points[i].x = axes.coordinates(static_cast<Eigen::Index>(i), 0);
        proj.points[i].y = axes.coordinates(static_cast<Eigen::Index>(i), 1);
    }
    return proj;
}

std::string Projection::to_csv() const {
    std::ostringstream out;
    out << std::setprecision(9);
    out << "x,y,kind,label,id\n";
    for (const auto& p : points) {
        const char* kind = p.kind == PointKind::sample ? "sample" : p.kind == PointKind::precedent ? "precedent" : "provision";
        out << p.x << ',' << p.y << ',' << kind << ',' << p.label << ',';
        // quote ids containing separators
        if (p.id.find_first_of(",\"") != std::string::npos) {
            out << '"';
            for (char c : p.id) out << (c == '"' ? "\"\"" : std::string(1, c));
            out << '"';
        } else {
            out << p.id;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace lcp
