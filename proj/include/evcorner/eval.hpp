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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evcorner/homography.hpp"
#include "evcorner/tracker.hpp"
#include "evcorner/trajectory.hpp"

namespace evcorner {

struct Correspondence {
  int track_id = 0;
  Point2 reference;  // last detection in the window at t1
  Point2 current;    // last detection in the window at t2
  Timestamp t_reference = 0;
  Timestamp t_current = 0;
};

// Tracks with a detection in both [t1, t1 + window) and [t2, t2 + window),
// each represented by its last detection in the window. Sorted by track id.
std::vector<Correspondence> snapshot_correspondences(
    std::span<const Track> tracks, Timestamp t1, Timestamp t2,
    Timestamp window = 5000);

struct RansacConfig {
  int iterations = 1000;
  // Symmetric transfer distance (mean of forward and backward), pixels.
  double inlier_tol = 2.0;
  std::size_t min_inliers = 4;
  std::uint64_t seed = 0;
};

struct RansacResult {
  Homography h;  // dst ~ h * src
  std::vector<bool> inliers;
  std::size_t inlier_count = 0;
};

double symmetric_transfer_error(const Homography& h, const Homography& h_inv,
                                const Point2& src, const Point2& dst);

// Minimal 4-point hypotheses (samples with a collinear triple are skipped),
// best by inlier count, then a normalized-DLT refit on the inliers. Throws
// EstimationError with fewer than 4 pairs or when no hypothesis reaches
// min_inliers.
RansacResult ransac_homography(std::span<const Point2> src,
                               std::span<const Point2> dst,
                               const RansacConfig& config);
// Maps the t2 points onto the t1 points.
RansacResult ransac_homography(std::span<const Correspondence> pairs,
                               const RansacConfig& config);

enum class HomographySource { kEstimated, kGroundTruth };

struct EvalConfig {
  std::vector<double> dt_grid_ms{25.0, 50.0, 100.0};
  // Spacing of reference times t1 along the sequence.
  Timestamp cadence = 100000;
  Timestamp window = 5000;
  RansacConfig ransac;
  HomographySource source = HomographySource::kEstimated;
  double valid_threshold = 5.0;
};

struct ErrorRow {
  double dt_ms = 0.0;
  // NaN when no snapshot pair produced an estimate.
  double mean_error = 0.0;
  std::size_t pairs = 0;
  std::size_t tracks = 0;
  // NaN without ground truth.
  double valid_pct = 0.0;
};

struct EvalReport {
  HomographySource source = HomographySource::kEstimated;
  std::vector<ErrorRow> rows;

  // "dt_ms,mean_error_px,n_pairs,n_tracks,valid_pct" table, preceded by a
  // "# homography=..." comment.
  void write(std::ostream& out) const;
};

// Mean distance between t1 points and the t2 points mapped to t1, for one
// snapshot pair. Points off the pattern are dropped first when ground truth
// is given. Returns NaN when the pair cannot be evaluated.
double pair_reprojection_error(std::span<const Correspondence> pairs,
                               const SampledTrajectory* ground_truth,
                               HomographySource source,
                               const RansacConfig& ransac,
                               std::size_t* used = nullptr);

// Averages pair errors over reference times spaced `cadence` apart, for
// every dt in the grid. `ground_truth` may be null for the estimated path.
EvalReport reprojection_error(std::span<const Track> tracks,
                              const SampledTrajectory* ground_truth,
                              const EvalConfig& config);

// Mean ground-truth transfer error of a track's detections against its first
// detection; 0 for single-detection tracks.
double track_error(const Track& track, const SampledTrajectory& ground_truth);

// Percentage of multi-detection tracks whose track_error is below
// `threshold` pixels (0 when there are none).
double valid_track_fraction(std::span<const Track> tracks,
                            const SampledTrajectory& ground_truth,
                            double threshold = 5.0);

}  // namespace evcorner
