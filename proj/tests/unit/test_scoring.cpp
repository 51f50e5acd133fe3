// tests/unit/test_scoring.cpp

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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tdsv/common.hpp"
#include "tdsv/scoring.hpp"

using namespace tdsv;
using pooling::Embedding;
using scoring::AsNormConfig;
using scoring::CohortSet;
using scoring::CompensationConfig;
using scoring::PhrasePosterior;

namespace {

Embedding emb(std::vector<double> v) { return Embedding{std::move(v)}; }

std::vector<double> random_scores(Rng& rng, int n) {
  std::vector<double> s(n);
  for (double& v : s) v = rng.gauss();
  return s;
}

PhrasePosterior random_simplex(Rng& rng, int m) {
  PhrasePosterior p;
  p.probs.resize(m);
  double sum = 0.0;
  for (double& v : p.probs) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (double& v : p.probs) v /= sum;
  return p;
}

}  // namespace

TEST_CASE("cosine: identity, orthogonal, antiparallel") {
  Embedding a = emb({1.0, 2.0, 3.0});
  CHECK(scoring::cosine(a, a) == 1.0);
  CHECK(scoring::cosine(emb({1.0, 0.0}), emb({0.0, 1.0})) == 0.0);
  Embedding neg = emb({-1.0, -2.0, -3.0});
  CHECK(scoring::cosine(a, neg) == -1.0);
}

TEST_CASE("cosine: scale invariance and error paths") {
  Embedding a = emb({0.3, -0.7, 2.0});
  Embedding scaled = emb({0.3 * 7.5, -0.7 * 7.5, 2.0 * 7.5});
  CHECK(scoring::cosine(a, scaled) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(scoring::cosine(a, emb({1.0, 2.0})), Error);
  try {
    scoring::cosine(a, emb({0.0, 0.0, 0.0}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kZeroNorm);
  }
}

TEST_CASE("cohort_scores: identity entry scores 1, order preserved") {
  Embedding e = emb({1.0, 1.0});
  CohortSet cohort;
  cohort.entries.push_back({"a", emb({1.0, -1.0})});
  cohort.entries.push_back({"b", e});
  auto scores = scoring::cohort_scores(e, cohort);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0] == 0.0);
  CHECK(scores[1] == 1.0);
}

TEST_CASE("cohort_scores match an element-wise loop oracle") {
  Rng rng(7);
  Embedding e;
  for (int d = 0; d < 8; ++d) e.values.push_back(rng.gauss());
  CohortSet cohort;
  for (int i = 0; i < 10; ++i) {
    Embedding c;
    for (int d = 0; d < 8; ++d) c.values.push_back(rng.gauss());
    cohort.entries.push_back({"c" + std::to_string(i), c});
  }
  auto scores = scoring::cohort_scores(e, cohort);
  for (int i = 0; i < 10; ++i)
    CHECK(scores[i] == scoring::cosine(e, cohort.entries[i].embedding));
}

TEST_CASE("asnorm: hand-derived z-norm value") {
  // enroll {0,2}: mu 1, population sigma 1; test {-1,1}: mu 0, sigma 1
  double s = scoring::asnorm(1.0, {0.0, 2.0}, {-1.0, 1.0}, {2});
  CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("asnorm: raw at both cohort means gives zero") {
  double s = scoring::asnorm(1.0, {0.0, 2.0}, {0.5, 1.5}, {300});
  CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("asnorm: common positive scaling cancels") {
  Rng rng(8);
  std::vector<double> enroll = random_scores(rng, 40);
  std::vector<double> test = random_scores(rng, 30);
  double raw = rng.gauss();
  double base = scoring::asnorm(raw, enroll, test, {10});

  for (double scale : {3.0, 0.25}) {
    std::vector<double> e2 = enroll, t2 = test;
    for (double& v : e2) v *= scale;
    for (double& v : t2) v *= scale;
    CHECK(scoring::asnorm(raw * scale, e2, t2, {10}) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("asnorm: symmetric in the two cohort lists") {
  Rng rng(9);
  std::vector<double> enroll = random_scores(rng, 25);
  std::vector<double> test = random_scores(rng, 35);
  double raw = 0.4;
  CHECK(scoring::asnorm(raw, enroll, test, {300}) ==
        scoring::asnorm(raw, test, enroll, {300}));
}

TEST_CASE("asnorm agrees with the sort-based oracle across cohort sizes") {
  Rng rng(10);
  AsNormConfig cfg{300};
  for (int n : {5, 50, 400}) {
    std::vector<double> enroll = random_scores(rng, n);
    std::vector<double> test = random_scores(rng, n);
    double raw = rng.gauss();
    double got = scoring::asnorm(raw, enroll, test, cfg);
    double want = oracles::asnorm_sorted(raw, enroll, test, cfg.top_n);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("asnorm error paths: degenerate and tiny cohorts") {
  try {
    scoring::asnorm(0.5, {1.0, 1.0, 1.0}, {0.0, 1.0}, {300});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateCohort);
  }
  try {
    scoring::asnorm(0.5, {1.0}, {0.0, 1.0}, {300});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSmallCohort);
  }
  AsNormConfig bad{1};
  CHECK_THROWS_AS(scoring::asnorm(0.5, {0.0, 1.0}, {0.0, 1.0}, bad), Error);
}

TEST_CASE("phrase_similarity: matched, disjoint and uniform posteriors") {
  PhrasePosterior one_hot_a;
  one_hot_a.probs = {1.0, 0.0, 0.0};
  PhrasePosterior one_hot_b;
  one_hot_b.probs = {0.0, 1.0, 0.0};
  CHECK(scoring::phrase_similarity(one_hot_a, one_hot_a) == 1.0);
  CHECK(scoring::phrase_similarity(one_hot_a, one_hot_b) == 0.0);

  PhrasePosterior uniform;
  uniform.probs.assign(10, 0.1);
  CHECK(scoring::phrase_similarity(uniform, uniform) ==
        doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(scoring::phrase_similarity(one_hot_a, uniform), Error);
}

TEST_CASE("phrase_similarity: symmetric and bounded on random simplex pairs") {
  Rng rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    PhrasePosterior a = random_simplex(rng, 10);
    PhrasePosterior b = random_simplex(rng, 10);
    double s = scoring::phrase_similarity(a, b);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(s == scoring::phrase_similarity(b, a));
  }
}

TEST_CASE("total_score: alpha scaling") {
  CHECK(scoring::total_score(0.7, 0.9, {0.0}) == 0.7);
  CHECK(scoring::total_score(0.5, 1.0, {2.0}) == 2.5);
  CHECK(scoring::total_score(0.5, 0.0, {123.0}) == 0.5);
}

TEST_CASE("total_score with fixed phr preserves ranking for any alpha") {
  Rng rng(13);
  CompensationConfig cfg{1.7};
  double phr = 0.42;
  for (int rep = 0; rep < 50; ++rep) {
    double a = rng.gauss(), b = rng.gauss();
    bool before = a < b;
    bool after = scoring::total_score(a, phr, cfg) < scoring::total_score(b, phr, cfg);
    CHECK(before == after);
  }
}

TEST_CASE("fuse: identity, cancellation and loop oracle") {
  std::vector<double> single{0.1, -0.2, 0.3};
  CHECK(scoring::fuse({single}) == single);

  std::vector<double> neg{-0.1, 0.2, -0.3};
  auto zeros = scoring::fuse({single, neg});
  for (double v : zeros) CHECK(v == 0.0);

  Rng rng(14);
  std::vector<std::vector<double>> lists(3, std::vector<double>(20));
  for (auto& list : lists)
    for (double& v : list) v = rng.gauss();
  auto fused = scoring::fuse(lists);
  for (int i = 0; i < 20; ++i)
    CHECK(fused[i] == lists[0][i] + lists[1][i] + lists[2][i]);

  CHECK_THROWS_AS(scoring::fuse({}), Error);
  CHECK_THROWS_AS(scoring::fuse({{1.0}, {1.0, 2.0}}), Error);
}

TEST_CASE("grid_search_alpha finds the separating weight") {
  // spk scores are uninformative; phr separates targets from nontargets
  std::vector<double> spk{0.0, 0.1, -0.1, 0.05, 0.0, 0.1};
  std::vector<double> phr{0.9, 0.8, 0.85, 0.1, 0.2, 0.15};
  std::vector<bool> target{true, true, true, false, false, false};
  double alpha = scoring::grid_search_alpha(spk, phr, target, {0.0, 0.5, 1.0, 2.0});
  CHECK(alpha > 0.0);
}
