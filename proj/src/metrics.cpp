// src/metrics.cpp

// Copyright 2026  the tdsv authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tdsv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tdsv::metrics {

void ScoreSet::validate() const {
  if (targets.empty())
    throw Error(ErrorKind::kBadConfig, "score set has no target scores");
  if (nontargets.empty())
    throw Error(ErrorKind::kBadConfig, "score set has no nontarget scores");
  for (double s : targets)
    if (!is_finite(s))
      throw Error(ErrorKind::kBadConfig, "non-finite target score");
  for (double s : nontargets)
    if (!is_finite(s))
      throw Error(ErrorKind::kBadConfig, "non-finite nontarget score");
}

void DcfParams::validate() const {
  if (!is_finite(p_target) || p_target <= 0.0 || p_target >= 1.0)
    throw Error(ErrorKind::kBadConfig, "p_target must lie in (0, 1)");
  if (!is_finite(c_miss) || c_miss < 0.0 || !is_finite(c_fa) || c_fa < 0.0)
    throw Error(ErrorKind::kBadConfig, "detection costs must be finite and >= 0");
  if (c_miss == 0.0 && c_fa == 0.0)
    throw Error(ErrorKind::kBadConfig, "at least one detection cost must be positive");
}

std::vector<DetPoint> det_points(const ScoreSet& s) {
  s.validate();

  std::vector<double> tar = s.targets;
  std::vector<double> non = s.nontargets;
  std::sort(tar.begin(), tar.end());
  std::sort(non.begin(), non.end());

  std::vector<double> thresholds;
  thresholds.reserve(tar.size() + non.size());
  thresholds.insert(thresholds.end(), tar.begin(), tar.end());
  thresholds.insert(thresholds.end(), non.begin(), non.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double inf = std::numeric_limits<double>::infinity();
  const double n_tar = static_cast<double>(tar.size());
  const double n_non = static_cast<double>(non.size());

  std::vector<DetPoint> points;
  points.reserve(thresholds.size() + 2);
  points.push_back({-inf, 1.0, 0.0});  // accept everything
  for (double thr : thresholds) {
    auto non_accepted =
        non.end() - std::lower_bound(non.begin(), non.end(), thr);
    auto tar_rejected =
        std::lower_bound(tar.begin(), tar.end(), thr) - tar.begin();
    points.push_back({thr, static_cast<double>(non_accepted) / n_non,
                      static_cast<double>(tar_rejected) / n_tar});
  }
  points.push_back({inf, 0.0, 1.0});  // reject everything
  return points;
}

double eer(const ScoreSet& s) {
  std::vector<DetPoint> points = det_points(s);

  // frr - far is non-decreasing along the list, from -1 to +1; locate the
  // sign change and interpolate on the bracketing segment.
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double d0 = points[i].frr - points[i].far;
    if (d0 == 0.0) return points[i].far;
    double d1 = points[i + 1].frr - points[i + 1].far;
    if (d0 < 0.0 && d1 >= 0.0) {
      if (d1 == 0.0) return points[i + 1].far;
      double t = d0 / (d0 - d1);
      double far = points[i].far + t * (points[i + 1].far - points[i].far);
      double frr = points[i].frr + t * (points[i + 1].frr - points[i].frr);
      return 0.5 * (far + frr);
    }
  }
  return points.back().far;  // unreachable: the final point has frr - far = 1
}

double min_dcf(const ScoreSet& s, const DcfParams& p) {
  p.validate();

  const double miss_weight = p.c_miss * p.p_target;
  const double fa_weight = p.c_fa * (1.0 - p.p_target);
  const double denom = std::min(miss_weight, fa_weight);
  if (denom <= 0.0)
    throw Error(ErrorKind::kBadConfig,
                "normalized DCF undefined: one cost term is zero");

  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint& pt : det_points(s)) {
    double cost = miss_weight * pt.frr + fa_weight * pt.far;
    best = std::min(best, cost);
  }
  return best / denom;
}

}  // namespace tdsv::metrics
