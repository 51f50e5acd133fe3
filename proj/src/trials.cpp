// src/trials.cpp

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

#include "tdsv/trials.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace tdsv::trials {

bool is_target(TrialType t) { return t == TrialType::kTargetCorrect; }

const char* to_string(TrialType t) {
  switch (t) {
    case TrialType::kTargetCorrect: return "TargetCorrect";
    case TrialType::kTargetWrong: return "TargetWrong";
    case TrialType::kImpostorCorrect: return "ImpostorCorrect";
    case TrialType::kImpostorWrong: return "ImpostorWrong";
    case TrialType::kUnknown: return "Unknown";
  }
  return "?";
}

TrialType trial_type_from_string(const std::string& name) {
  if (name == "TargetCorrect") return TrialType::kTargetCorrect;
  if (name == "TargetWrong") return TrialType::kTargetWrong;
  if (name == "ImpostorCorrect") return TrialType::kImpostorCorrect;
  if (name == "ImpostorWrong") return TrialType::kImpostorWrong;
  if (name == "Unknown") return TrialType::kUnknown;
  throw Error(ErrorKind::kBadConfig, "unknown trial type: " + name);
}

void SynthConfig::validate() const {
  if (n_speakers < 1 || n_phrases < 1 || utts_per_pair < 1 || embed_dim < 1)
    throw Error(ErrorKind::kBadConfig, "synthetic counts must be >= 1");
  if (!(speaker_scale > 0.0) || !(phrase_scale > 0.0) || !(noise_scale > 0.0))
    throw Error(ErrorKind::kBadConfig, "synthetic scales must be > 0");
  if (!(phrase_leak >= 0.0) || !(phrase_leak <= 1.0))
    throw Error(ErrorKind::kBadConfig, "phrase_leak must lie in [0, 1]");
  if (!(posterior_epsilon >= 0.0) || !(posterior_epsilon < 1.0))
    throw Error(ErrorKind::kBadConfig, "posterior_epsilon must lie in [0, 1)");
}

namespace {

Embedding l2_normalized(const std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0)
    throw Error(ErrorKind::kZeroNorm, "cannot normalize an all-zero embedding");
  Embedding e;
  e.values.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e.values[i] = v[i] / norm;
  return e;
}

std::string format_id(const char* fmt, int a, int b = -1, int c = -1) {
  char buf[64];
  if (c >= 0)
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
  else if (b >= 0)
    std::snprintf(buf, sizeof buf, fmt, a, b);
  else
    std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

}  // namespace

EnrollmentModel build_enrollment(const std::string& model_id,
                                 const std::vector<Utterance>& utts) {
  if (utts.size() != 3)
    throw Error(ErrorKind::kBadConfig, "enrollment needs exactly three utterances");
  for (const Utterance& u : utts) {
    if (u.speaker_id != utts[0].speaker_id)
      throw Error(ErrorKind::kBadConfig, "mixed speaker ids in enrollment");
    if (u.phrase_id != utts[0].phrase_id)
      throw Error(ErrorKind::kBadConfig, "mixed phrase ids in enrollment");
    if (u.embedding.dim() != utts[0].embedding.dim())
      throw Error(ErrorKind::kDimMismatch, "enrollment embedding dims differ");
  }

  EnrollmentModel model;
  model.model_id = model_id;
  model.speaker_id = utts[0].speaker_id;
  model.phrase_id = utts[0].phrase_id;
  for (const Utterance& u : utts) model.utterance_ids.push_back(u.id);

  std::vector<double> mean(utts[0].embedding.dim(), 0.0);
  for (const Utterance& u : utts)
    for (int d = 0; d < u.embedding.dim(); ++d) mean[d] += u.embedding.values[d];
  for (double& v : mean) v /= 3.0;
  model.embedding = l2_normalized(mean);

  bool all_posteriors = true;
  for (const Utterance& u : utts)
    if (!u.phrase_posterior) all_posteriors = false;
  if (all_posteriors) {
    int m = utts[0].phrase_posterior->size();
    for (const Utterance& u : utts)
      if (u.phrase_posterior->size() != m)
        throw Error(ErrorKind::kDimMismatch, "enrollment posterior sizes differ");
    PhrasePosterior post;
    post.probs.assign(m, 0.0);
    for (const Utterance& u : utts)
      for (int j = 0; j < m; ++j) post.probs[j] += u.phrase_posterior->probs[j];
    double sum = 0.0;
    for (double p : post.probs) sum += p;
    if (sum <= 0.0)
      throw Error(ErrorKind::kBadConfig, "enrollment posterior mass is zero");
    for (double& p : post.probs) p /= sum;
    model.phrase_posterior = std::move(post);
  }
  return model;
}

TrialType label_trial(const EnrollmentModel& model, const Utterance& test) {
  bool speaker = model.speaker_id == test.speaker_id;
  bool phrase = model.phrase_id == test.phrase_id;
  if (speaker && phrase) return TrialType::kTargetCorrect;
  if (speaker) return TrialType::kTargetWrong;
  if (phrase) return TrialType::kImpostorCorrect;
  return TrialType::kImpostorWrong;
}

CohortSet build_cohort(const std::vector<Utterance>& utts) {
  if (utts.empty())
    throw Error(ErrorKind::kBadConfig, "cannot build a cohort from no utterances");

  // group by (speaker, phrase) in first-appearance order
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::vector<std::pair<std::string, std::string>> order;
  std::vector<std::vector<double>> sums;
  std::vector<int> counts;

  int dim = utts[0].embedding.dim();
  for (const Utterance& u : utts) {
    if (u.embedding.dim() != dim)
      throw Error(ErrorKind::kDimMismatch, "cohort utterance dims differ");
    auto key = std::make_pair(u.speaker_id, u.phrase_id);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, order.size());
      order.push_back(key);
      sums.emplace_back(dim, 0.0);
      counts.push_back(0);
      it = index.find(key);
    }
    std::vector<double>& sum = sums[it->second];
    for (int d = 0; d < dim; ++d) sum[d] += u.embedding.values[d];
    counts[it->second] += 1;
  }

  CohortSet cohort;
  cohort.entries.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::vector<double> mean = sums[i];
    for (double& v : mean) v /= counts[i];
    cohort.entries.push_back(
        {order[i].first + "|" + order[i].second, l2_normalized(mean)});
  }
  return cohort;
}

SynthData synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  const int dim = cfg.embed_dim;
  std::vector<std::vector<double>> speaker_vecs(cfg.n_speakers,
                                                std::vector<double>(dim));
  for (auto& v : speaker_vecs)
    for (double& x : v) x = rng.gauss() * cfg.speaker_scale;
  std::vector<std::vector<double>> phrase_vecs(cfg.n_phrases,
                                               std::vector<double>(dim));
  for (auto& v : phrase_vecs)
    for (double& x : v) x = rng.gauss() * cfg.phrase_scale;

  auto phrase_posterior = [&](int p) {
    PhrasePosterior post;
    if (cfg.n_phrases == 1) {
      post.probs = {1.0};
      return post;
    }
    post.probs.assign(cfg.n_phrases, cfg.posterior_epsilon / (cfg.n_phrases - 1));
    post.probs[p] = 1.0 - cfg.posterior_epsilon;
    return post;
  };

  auto draw_utterance = [&](int s, int p, const std::string& id) {
    Utterance u;
    u.id = id;
    u.speaker_id = format_id("s%03d", s);
    u.phrase_id = format_id("p%02d", p);
    u.embedding.values.resize(dim);
    for (int d = 0; d < dim; ++d)
      u.embedding.values[d] = speaker_vecs[s][d] +
                              cfg.phrase_leak * phrase_vecs[p][d] +
                              cfg.noise_scale * rng.gauss();
    u.phrase_posterior = phrase_posterior(p);
    return u;
  };

  SynthData data;
  for (int s = 0; s < cfg.n_speakers; ++s) {
    for (int p = 0; p < cfg.n_phrases; ++p) {
      std::vector<Utterance> enroll;
      for (int e = 0; e < 3; ++e) {
        enroll.push_back(draw_utterance(s, p, format_id("s%03d-p%02d-e%d", s, p, e)));
        data.enroll_utterances.push_back(enroll.back());
      }
      data.models.push_back(
          build_enrollment(format_id("m-s%03d-p%02d", s, p), enroll));
      for (int t = 0; t < cfg.utts_per_pair; ++t)
        data.test_utterances.push_back(
            draw_utterance(s, p, format_id("s%03d-p%02d-t%d", s, p, t)));
    }
  }

  data.trials.reserve(data.models.size() * data.test_utterances.size());
  for (const EnrollmentModel& model : data.models)
    for (const Utterance& test : data.test_utterances)
      data.trials.push_back({model.model_id, test.id, label_trial(model, test)});
  return data;
}

}  // namespace tdsv::trials
