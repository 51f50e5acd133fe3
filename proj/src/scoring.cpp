// src/scoring.cpp

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

#include "tdsv/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tdsv/metrics.hpp"

namespace tdsv::scoring {

void PhrasePosterior::validate() const {
  if (probs.empty())
    throw Error(ErrorKind::kBadConfig, "phrase posterior is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!is_finite(p) || p < 0.0)
      throw Error(ErrorKind::kBadConfig, "phrase posterior entry must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw Error(ErrorKind::kBadConfig, "phrase posterior must sum to 1");
}

void CohortSet::validate() const {
  if (entries.empty())
    throw Error(ErrorKind::kBadConfig, "cohort set is empty");
  int dim = entries.front().embedding.dim();
  for (const CohortEntry& e : entries)
    if (e.embedding.dim() != dim)
      throw Error(ErrorKind::kDimMismatch, "cohort embedding dims differ");
}

void AsNormConfig::validate() const {
  if (top_n < 2)
    throw Error(ErrorKind::kBadConfig, "AS-Norm top_n must be >= 2");
}

void CompensationConfig::validate() const {
  if (!is_finite(alpha) || alpha < 0.0)
    throw Error(ErrorKind::kBadConfig, "alpha must be finite and >= 0");
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.dim() == 0 || a.dim() != b.dim())
    throw Error(ErrorKind::kDimMismatch, "cosine: embedding dims differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0)
    throw Error(ErrorKind::kZeroNorm, "cosine undefined for an all-zero embedding");
  // sqrt(na*nb) rather than sqrt(na)*sqrt(nb): round-to-nearest then gives
  // exactly 1 for a == b
  double c = dot / std::sqrt(na * nb);
  return std::clamp(c, -1.0, 1.0);
}

std::vector<double> cohort_scores(const Embedding& e, const CohortSet& cohort) {
  cohort.validate();
  std::vector<double> scores;
  scores.reserve(cohort.entries.size());
  for (const CohortEntry& entry : cohort.entries)
    scores.push_back(cosine(e, entry.embedding));
  return scores;
}

NormStats asnorm_stats(const std::vector<double>& scores, const AsNormConfig& cfg) {
  cfg.validate();
  if (scores.size() < 2)
    throw Error(ErrorKind::kSmallCohort, "need at least two cohort scores");

  std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.top_n),
                                        scores.size());
  std::vector<double> selected = scores;
  std::partial_sort(selected.begin(), selected.begin() + n, selected.end(),
                    std::greater<double>());
  selected.resize(n);

  double mean = 0.0;
  for (double s : selected) mean += s;
  mean /= static_cast<double>(n);

  double var = 0.0;
  for (double s : selected) var += (s - mean) * (s - mean);
  var /= static_cast<double>(n);

  double stddev = std::sqrt(var);
  if (stddev == 0.0)
    throw Error(ErrorKind::kDegenerateCohort,
                "zero variance in the selected cohort subset");
  return {mean, stddev};
}

double asnorm_apply(double raw, const NormStats& enroll, const NormStats& test) {
  return 0.5 * ((raw - enroll.mean) / enroll.stddev +
                (raw - test.mean) / test.stddev);
}

double asnorm(double raw, const std::vector<double>& enroll_cohort_scores,
              const std::vector<double>& test_cohort_scores,
              const AsNormConfig& cfg) {
  return asnorm_apply(raw, asnorm_stats(enroll_cohort_scores, cfg),
                      asnorm_stats(test_cohort_scores, cfg));
}

double phrase_similarity(const PhrasePosterior& a, const PhrasePosterior& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::kDimMismatch, "phrase posterior sizes differ");
  a.validate();
  b.validate();
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s += a.probs[j] * b.probs[j];
  return s;
}

double total_score(double spk_norm, double phr, const CompensationConfig& cfg) {
  cfg.validate();
  if (!is_finite(spk_norm) || !is_finite(phr))
    throw Error(ErrorKind::kBadConfig, "total_score inputs must be finite");
  return spk_norm + cfg.alpha * phr;
}

std::vector<double> fuse(const std::vector<std::vector<double>>& score_lists) {
  if (score_lists.empty())
    throw Error(ErrorKind::kBadConfig, "fuse needs at least one score list");
  std::size_t len = score_lists.front().size();
  for (const auto& list : score_lists)
    if (list.size() != len)
      throw Error(ErrorKind::kDimMismatch, "fuse: score list lengths differ");

  std::vector<double> fused(len, 0.0);
  for (const auto& list : score_lists)
    for (std::size_t i = 0; i < len; ++i) fused[i] += list[i];
  return fused;
}

double grid_search_alpha(const std::vector<double>& spk_norm,
                         const std::vector<double>& phr,
                         const std::vector<bool>& is_target,
                         const std::vector<double>& alpha_grid) {
  if (alpha_grid.empty())
    throw Error(ErrorKind::kBadConfig, "empty alpha grid");
  if (spk_norm.size() != phr.size() || spk_norm.size() != is_target.size())
    throw Error(ErrorKind::kDimMismatch, "grid_search_alpha: length mismatch");

  double best_alpha = alpha_grid.front();
  double best_eer = std::numeric_limits<double>::infinity();
  for (double alpha : alpha_grid) {
    CompensationConfig cfg{alpha};
    metrics::ScoreSet set;
    for (std::size_t i = 0; i < spk_norm.size(); ++i) {
      double s = total_score(spk_norm[i], phr[i], cfg);
      (is_target[i] ? set.targets : set.nontargets).push_back(s);
    }
    double e = metrics::eer(set);
    if (e < best_eer) {
      best_eer = e;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

}  // namespace tdsv::scoring
