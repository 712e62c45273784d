// Copyright 2026 The evcorner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evcorner/homography.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "evcorner/error.hpp"

namespace evcorner {
namespace {

// Similarity moving the centroid to the origin and the mean distance to
// sqrt(2).
Eigen::Matrix3d normalizer(std::span<const Point2> pts) {
  double cx = 0.0, cy = 0.0;
  for (const Point2& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double mean = 0.0;
  for (const Point2& p : pts) mean += std::hypot(p.x - cx, p.y - cy);
  mean /= static_cast<double>(pts.size());
  if (!(mean > 0.0)) throw EstimationError("all points coincide");
  const double s = std::sqrt(2.0) / mean;
  Eigen::Matrix3d t;
  t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
  return t;
}

}  // namespace

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Homography::Homography() : m_(Eigen::Matrix3d::Identity()) {}

Homography::Homography(const Eigen::Matrix3d& m) : m_(m) {
  if (m_(2, 2) != 0.0) m_ /= m_(2, 2);
}

Point2 Homography::apply(const Point2& p) const {
  const double w = m_(2, 0) * p.x + m_(2, 1) * p.y + m_(2, 2);
  return {(m_(0, 0) * p.x + m_(0, 1) * p.y + m_(0, 2)) / w,
          (m_(1, 0) * p.x + m_(1, 1) * p.y + m_(1, 2)) / w};
}

bool Homography::invertible() const {
  return std::abs(m_.determinant()) > 1e-12 * std::pow(m_.norm(), 3);
}

Homography Homography::inverse() const {
  if (!invertible()) throw EstimationError("singular homography");
  return Homography(Eigen::Matrix3d(m_.inverse()));
}

bool has_collinear_triple(std::span<const Point2> points, double tol) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Point2& a = points[i];
        const Point2& b = points[j];
        const Point2& c = points[k];
        const double cross =
            (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        const double scale = std::max({(b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y),
                                       (c.x - a.x) * (c.x - a.x) + (c.y - a.y) * (c.y - a.y),
                                       (c.x - b.x) * (c.x - b.x) + (c.y - b.y) * (c.y - b.y)});
        if (scale == 0.0 || std::abs(cross) <= tol * scale) return true;
      }
    }
  }
  return false;
}

Homography fit_homography_dlt(std::span<const Point2> src,
                              std::span<const Point2> dst) {
  if (src.size() != dst.size()) {
    throw EstimationError("source and destination sizes differ");
  }
  if (src.size() < 4) throw EstimationError("need at least 4 correspondences");
  const Eigen::Matrix3d ts = normalizer(src);
  const Eigen::Matrix3d td = normalizer(dst);

  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d p = ts * Eigen::Vector3d(src[i].x, src[i].y, 1.0);
    const Eigen::Vector3d q = td * Eigen::Vector3d(dst[i].x, dst[i].y, 1.0);
    const double x = p.x(), y = p.y(), u = q.x(), v = q.y();
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d m = td.inverse() * hn * ts;
  if (!std::isfinite(m.sum()) || m.norm() == 0.0) {
    throw EstimationError("DLT produced a degenerate matrix");
  }
  Homography result(m);
  if (!result.invertible()) throw EstimationError("DLT solution is singular");
  return result;
}

}  // namespace evcorner
