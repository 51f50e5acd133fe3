// include/tdsv/trials.hpp

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

#ifndef TDSV_TRIALS_HPP_
#define TDSV_TRIALS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdsv/common.hpp"
#include "tdsv/pooling.hpp"
#include "tdsv/scoring.hpp"

namespace tdsv::trials {

using pooling::Embedding;
using scoring::CohortSet;
using scoring::PhrasePosterior;

struct Utterance {
  std::string id;
  std::string speaker_id;
  std::string phrase_id;
  Embedding embedding;
  std::optional<PhrasePosterior> phrase_posterior;
};

/// Enrollment model built from exactly three utterances of one speaker
/// saying one phrase.
struct EnrollmentModel {
  std::string model_id;
  std::string speaker_id;
  std::string phrase_id;
  std::vector<std::string> utterance_ids;  // exactly 3
  Embedding embedding;
  std::optional<PhrasePosterior> phrase_posterior;
};

/// The four TD-SV trial types. Only TargetCorrect counts as a target; the
/// other three are scored as nontargets.
enum class TrialType {
  kTargetCorrect,
  kTargetWrong,
  kImpostorCorrect,
  kImpostorWrong,
  kUnknown,
};

bool is_target(TrialType t);
const char* to_string(TrialType t);
TrialType trial_type_from_string(const std::string& name);

struct Trial {
  std::string model_id;
  std::string test_id;
  TrialType truth = TrialType::kUnknown;
};

/// Synthetic speaker x phrase benchmark settings.
struct SynthConfig {
  int n_speakers = 20;
  int n_phrases = 10;
  int utts_per_pair = 5;  // test utterances per (speaker, phrase) pair
  int embed_dim = 32;
  double speaker_scale = 1.0;
  double phrase_scale = 1.0;
  double noise_scale = 0.5;
  double phrase_leak = 0.0;          // in [0, 1]
  double posterior_epsilon = 0.1;    // mass spread off the true phrase
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthData {
  std::vector<Utterance> enroll_utterances;  // 3 per (speaker, phrase) pair
  std::vector<Utterance> test_utterances;
  std::vector<EnrollmentModel> models;
  std::vector<Trial> trials;  // full models x test cross, truth labels set
};

/// Model embedding = L2-normalized mean of the three utterance embeddings;
/// model phrase posterior = renormalized mean (present only when all three
/// utterances carry one).
EnrollmentModel build_enrollment(const std::string& model_id,
                                 const std::vector<Utterance>& utts);

TrialType label_trial(const EnrollmentModel& model, const Utterance& test);

/// One unit-norm entry per (speaker, phrase) pair, mean of that pair's
/// utterance embeddings. Entry ids are "speaker|phrase".
CohortSet build_cohort(const std::vector<Utterance>& utts);

/// Deterministic synthetic benchmark: per-speaker and per-phrase Gaussian
/// vectors, utterance = speaker + phrase_leak * phrase + noise, phrase
/// posterior concentrated on the true phrase with (1 - epsilon) mass.
SynthData synth_generate(const SynthConfig& cfg);

}  // namespace tdsv::trials

#endif  // TDSV_TRIALS_HPP_
