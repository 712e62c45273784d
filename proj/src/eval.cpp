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

#include "evcorner/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "evcorner/error.hpp"
#include "evcorner/random.hpp"

namespace evcorner {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Point2 to_point(const Event& e) {
  return {static_cast<double>(e.x), static_cast<double>(e.y)};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::fixed, 4);
  return std::string(buf, res.ptr);
}

std::size_t count_inliers(const Homography& h, std::span<const Point2> src,
                          std::span<const Point2> dst, double tol,
                          std::vector<bool>* mask) {
  if (!h.invertible()) return 0;
  const Homography inv = h.inverse();
  std::size_t count = 0;
  if (mask) mask->assign(src.size(), false);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (symmetric_transfer_error(h, inv, src[i], dst[i]) <= tol) {
      ++count;
      if (mask) (*mask)[i] = true;
    }
  }
  return count;
}

}  // namespace

std::vector<Correspondence> snapshot_correspondences(
    std::span<const Track> tracks, Timestamp t1, Timestamp t2,
    Timestamp window) {
  if (t1 >= t2) throw ConfigError("snapshot times must satisfy t1 < t2");
  auto last_in = [window](const Track& t, Timestamp from) -> const Event* {
    const Event* found = nullptr;
    for (const CornerEvent& c : t.detections) {
      if (c.event.t >= from + window) break;
      if (c.event.t >= from) found = &c.event;
    }
    return found;
  };
  std::vector<Correspondence> out;
  for (const Track& t : tracks) {
    const Event* a = last_in(t, t1);
    if (!a) continue;
    const Event* b = last_in(t, t2);
    if (!b) continue;
    out.push_back({t.id, to_point(*a), to_point(*b), a->t, b->t});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.track_id < y.track_id; });
  return out;
}

double symmetric_transfer_error(const Homography& h, const Homography& h_inv,
                                const Point2& src, const Point2& dst) {
  return 0.5 * (distance(h.apply(src), dst) + distance(h_inv.apply(dst), src));
}

RansacResult ransac_homography(std::span<const Point2> src,
                               std::span<const Point2> dst,
                               const RansacConfig& config) {
  if (src.size() != dst.size()) {
    throw EstimationError("source and destination sizes differ");
  }
  const std::size_t n = src.size();
  if (n < 4) {
    throw EstimationError("need at least 4 correspondences, got " +
                          std::to_string(n));
  }
  Rng rng(config.seed);
  std::size_t best_count = 0;
  Homography best;
  std::array<std::size_t, 4> pick{};
  std::array<Point2, 4> s{}, d{};
  for (int it = 0; it < config.iterations; ++it) {
    for (std::size_t k = 0; k < 4; ++k) {
      std::size_t idx;
      do {
        idx = static_cast<std::size_t>(uniform_index(rng, n));
      } while (std::find(pick.begin(), pick.begin() + k, idx) != pick.begin() + k);
      pick[k] = idx;
      s[k] = src[idx];
      d[k] = dst[idx];
    }
    if (has_collinear_triple(s, 1e-6) || has_collinear_triple(d, 1e-6)) continue;
    Homography h;
    try {
      h = fit_homography_dlt(s, d);
    } catch (const EstimationError&) {
      continue;
    }
    const std::size_t count = count_inliers(h, src, dst, config.inlier_tol, nullptr);
    if (count > best_count) {
      best_count = count;
      best = h;
    }
  }
  if (best_count < std::max<std::size_t>(config.min_inliers, 4)) {
    throw EstimationError("no homography with at least " +
                          std::to_string(std::max<std::size_t>(config.min_inliers, 4)) +
                          " inliers");
  }

  RansacResult result;
  count_inliers(best, src, dst, config.inlier_tol, &result.inliers);
  std::vector<Point2> in_src, in_dst;
  for (std::size_t i = 0; i < n; ++i) {
    if (result.inliers[i]) {
      in_src.push_back(src[i]);
      in_dst.push_back(dst[i]);
    }
  }
  result.h = best;
  try {
    const Homography refit = fit_homography_dlt(in_src, in_dst);
    std::vector<bool> mask;
    const std::size_t count = count_inliers(refit, src, dst, config.inlier_tol, &mask);
    if (count >= best_count) {
      result.h = refit;
      result.inliers = std::move(mask);
    }
  } catch (const EstimationError&) {
    // Keep the minimal-sample model.
  }
  result.inlier_count = static_cast<std::size_t>(
      std::count(result.inliers.begin(), result.inliers.end(), true));
  return result;
}

RansacResult ransac_homography(std::span<const Correspondence> pairs,
                               const RansacConfig& config) {
  std::vector<Point2> src, dst;
  for (const Correspondence& c : pairs) {
    src.push_back(c.current);
    dst.push_back(c.reference);
  }
  return ransac_homography(src, dst, config);
}

double pair_reprojection_error(std::span<const Correspondence> pairs,
                               const SampledTrajectory* ground_truth,
                               HomographySource source,
                               const RansacConfig& ransac, std::size_t* used) {
  if (used) *used = 0;
  if (source == HomographySource::kGroundTruth && !ground_truth) {
    throw ConfigError("ground-truth evaluation needs a trajectory");
  }
  std::vector<Correspondence> kept;
  for (const Correspondence& c : pairs) {
    if (ground_truth && (!ground_truth->on_pattern(c.reference, c.t_reference) ||
                         !ground_truth->on_pattern(c.current, c.t_current))) {
      continue;
    }
    kept.push_back(c);
  }
  if (kept.empty()) return kNaN;
  // Order by position so the estimate does not depend on track numbering.
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return std::tie(a.reference.x, a.reference.y, a.current.x, a.current.y) <
           std::tie(b.reference.x, b.reference.y, b.current.x, b.current.y);
  });

  double sum = 0.0;
  if (source == HomographySource::kGroundTruth) {
    for (const Correspondence& c : kept) {
      sum += distance(ground_truth->transfer(c.current, c.t_current, c.t_reference),
                      c.reference);
    }
  } else {
    if (kept.size() < 4) return kNaN;
    RansacResult fit;
    try {
      fit = ransac_homography(kept, ransac);
    } catch (const EstimationError&) {
      return kNaN;
    }
    for (const Correspondence& c : kept) {
      sum += distance(fit.h.apply(c.current), c.reference);
    }
  }
  if (used) *used = kept.size();
  return sum / static_cast<double>(kept.size());
}

EvalReport reprojection_error(std::span<const Track> tracks,
                              const SampledTrajectory* ground_truth,
                              const EvalConfig& config) {
  if (config.cadence <= 0) throw ConfigError("pair cadence must be > 0");
  EvalReport report;
  report.source = config.source;

  Timestamp t_min = std::numeric_limits<Timestamp>::max();
  Timestamp t_max = std::numeric_limits<Timestamp>::min();
  for (const Track& t : tracks) {
    if (t.detections.empty()) continue;
    t_min = std::min(t_min, t.birth());
    t_max = std::max(t_max, t.last_update());
  }
  const double valid = ground_truth
                           ? valid_track_fraction(tracks, *ground_truth,
                                                  config.valid_threshold)
                           : kNaN;

  for (double dt_ms : config.dt_grid_ms) {
    ErrorRow row;
    row.dt_ms = dt_ms;
    row.valid_pct = valid;
    const auto dt = static_cast<Timestamp>(std::llround(dt_ms * 1000.0));
    double sum = 0.0;
    std::set<int> used_tracks;
    if (dt > 0 && t_min <= t_max) {
      for (Timestamp t1 = t_min; t1 + dt + config.window <= t_max + 1;
           t1 += config.cadence) {
        const auto pairs = snapshot_correspondences(tracks, t1, t1 + dt, config.window);
        std::size_t used = 0;
        const double e = pair_reprojection_error(pairs, ground_truth, config.source,
                                                 config.ransac, &used);
        if (std::isnan(e)) continue;
        sum += e;
        ++row.pairs;
        for (const auto& c : pairs) used_tracks.insert(c.track_id);
      }
    }
    row.tracks = used_tracks.size();
    row.mean_error = row.pairs ? sum / static_cast<double>(row.pairs) : kNaN;
    report.rows.push_back(row);
  }
  return report;
}

void EvalReport::write(std::ostream& out) const {
  out << "# homography="
      << (source == HomographySource::kEstimated ? "estimated" : "ground-truth")
      << '\n'
      << "dt_ms,mean_error_px,n_pairs,n_tracks,valid_pct\n";
  for (const ErrorRow& r : rows) {
    out << format_double(r.dt_ms) << ',' << format_double(r.mean_error) << ','
        << r.pairs << ',' << r.tracks << ',' << format_double(r.valid_pct)
        << '\n';
  }
}

double track_error(const Track& track, const SampledTrajectory& ground_truth) {
  if (track.detections.size() < 2) return 0.0;
  const Event& first = track.detections.front().event;
  const Point2 ref = to_point(first);
  double sum = 0.0;
  for (std::size_t i = 1; i < track.detections.size(); ++i) {
    const Event& e = track.detections[i].event;
    sum += distance(ground_truth.transfer(to_point(e), e.t, first.t), ref);
  }
  return sum / static_cast<double>(track.detections.size() - 1);
}

double valid_track_fraction(std::span<const Track> tracks,
                            const SampledTrajectory& ground_truth,
                            double threshold) {
  std::size_t total = 0, valid = 0;
  for (const Track& t : tracks) {
    if (t.detections.size() < 2) continue;
    ++total;
    if (track_error(t, ground_truth) < threshold) ++valid;
  }
  return total ? 100.0 * static_cast<double>(valid) / static_cast<double>(total)
               : 0.0;
}

}  // namespace evcorner
