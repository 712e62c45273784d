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

#pragma once

#include <span>

#include <Eigen/Core>

namespace evcorner {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(const Point2& a, const Point2& b);

// Planar projective map, stored with H(2,2) = 1 whenever that entry is
// nonzero.
class Homography {
 public:
  Homography();  // identity
  explicit Homography(const Eigen::Matrix3d& m);

  static Homography identity() { return Homography(); }

  Point2 apply(const Point2& p) const;
  // Throws EstimationError for a singular matrix.
  Homography inverse() const;
  bool invertible() const;
  double determinant() const { return m_.determinant(); }
  const Eigen::Matrix3d& matrix() const { return m_; }

  friend Homography operator*(const Homography& a, const Homography& b) {
    return Homography(a.m_ * b.m_);
  }

 private:
  Eigen::Matrix3d m_;
};

// Least-squares DLT on Hartley-normalized points; dst ~ H * src. Needs at
// least 4 pairs; throws EstimationError on degenerate input.
Homography fit_homography_dlt(std::span<const Point2> src,
                              std::span<const Point2> dst);

// True when some three of the points are collinear within `tol` (area of
// the triangle relative to its squared longest side).
bool has_collinear_triple(std::span<const Point2> points, double tol = 1e-9);

}  // namespace evcorner
