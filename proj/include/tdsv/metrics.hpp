// include/tdsv/metrics.hpp

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

#ifndef TDSV_METRICS_HPP_
#define TDSV_METRICS_HPP_

#include <vector>

#include "tdsv/common.hpp"

namespace tdsv::metrics {

struct ScoreSet {
  std::vector<double> targets;
  std::vector<double> nontargets;

  void validate() const;  // both non-empty, all finite
};

struct DcfParams {
  double p_target = 0.01;
  double c_miss = 10.0;
  double c_fa = 1.0;

  void validate() const;  // 0 < p_target < 1, costs >= 0, not both zero
};

struct DetPoint {
  double threshold = 0.0;  // accept iff score >= threshold
  double far = 0.0;        // fraction of nontargets accepted
  double frr = 0.0;        // fraction of targets rejected
};

/// One point per distinct score plus accept-all / reject-all sentinels,
/// ordered by threshold ascending. FAR is non-increasing and FRR
/// non-decreasing along the list.
std::vector<DetPoint> det_points(const ScoreSet& s);

/// Rate where FAR = FRR, linearly interpolated between the DET points that
/// bracket the sign change of (FRR - FAR). In [0, 1].
double eer(const ScoreSet& s);

/// min over DET points of c_miss*p_target*FRR + c_fa*(1-p_target)*FAR,
/// divided by min(c_miss*p_target, c_fa*(1-p_target)).
double min_dcf(const ScoreSet& s, const DcfParams& p);

}  // namespace tdsv::metrics

#endif  // TDSV_METRICS_HPP_
