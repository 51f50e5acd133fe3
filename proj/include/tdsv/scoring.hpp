// include/tdsv/scoring.hpp

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

#ifndef TDSV_SCORING_HPP_
#define TDSV_SCORING_HPP_

#include <string>
#include <vector>

#include "tdsv/common.hpp"
#include "tdsv/pooling.hpp"

namespace tdsv::scoring {

using pooling::Embedding;

/// Probability distribution over the M pass-phrase types.
struct PhrasePosterior {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  void validate() const;  // entries >= 0, sum = 1 within 1e-6
};

struct CohortEntry {
  std::string id;  // encodes (speaker, phrase)
  Embedding embedding;
};

struct CohortSet {
  std::vector<CohortEntry> entries;

  int size() const { return static_cast<int>(entries.size()); }
  void validate() const;  // non-empty, equal dims
};

struct AsNormConfig {
  int top_n = 300;

  void validate() const;  // top_n >= 2
};

struct CompensationConfig {
  double alpha = 1.0;

  void validate() const;  // finite, >= 0
};

struct ScoreTriple {
  double spk_norm = 0.0;  // normalized speaker score
  double phr = 0.0;       // compensation factor
  double total = 0.0;     // spk_norm + alpha * phr
};

/// Cosine similarity, clamped to [-1, 1]. Throws on dim mismatch or an
/// all-zero input.
double cosine(const Embedding& a, const Embedding& b);

/// Cosine of e against every cohort entry, cohort order preserved.
std::vector<double> cohort_scores(const Embedding& e, const CohortSet& cohort);

/// Mean and population standard deviation of the top-N largest cohort scores
/// (all of them when fewer than N are available).
struct NormStats {
  double mean = 0.0;
  double stddev = 0.0;
};

NormStats asnorm_stats(const std::vector<double>& scores, const AsNormConfig& cfg);

/// 0.5 * ((raw - mu_e)/sigma_e + (raw - mu_t)/sigma_t).
double asnorm_apply(double raw, const NormStats& enroll, const NormStats& test);

/// Adaptive symmetric score normalization against the two cohort score lists.
double asnorm(double raw, const std::vector<double>& enroll_cohort_scores,
              const std::vector<double>& test_cohort_scores,
              const AsNormConfig& cfg);

/// Inner product of two phrase posteriors.
double phrase_similarity(const PhrasePosterior& a, const PhrasePosterior& b);

/// spk_norm + alpha * phr.
double total_score(double spk_norm, double phr, const CompensationConfig& cfg);

/// Element-wise equal-weighted sum over systems. Equivalent to the mean for
/// ranking metrics.
std::vector<double> fuse(const std::vector<std::vector<double>>& score_lists);

/// Picks the alpha from the grid minimizing EER of spk_norm + alpha * phr on
/// a held-out labeled score set. Ties resolve to the earliest grid entry.
double grid_search_alpha(const std::vector<double>& spk_norm,
                         const std::vector<double>& phr,
                         const std::vector<bool>& is_target,
                         const std::vector<double>& alpha_grid);

}  // namespace tdsv::scoring

#endif  // TDSV_SCORING_HPP_
