// tests/unit/test_pooling.cpp

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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tdsv/common.hpp"
#include "tdsv/pooling.hpp"

using namespace tdsv;
using features::FrameMatrix;
using pooling::Activation;
using pooling::CharacterAggregate;
using pooling::CharPosteriorMatrix;
using pooling::CharsetSpec;
using pooling::Embedding;
using pooling::GvladParams;
using pooling::LocallyConnectedParams;
using pooling::PoolingConfig;
using pooling::PoolInputs;
using pooling::PoolMethod;
using pooling::SapParams;

namespace {

FrameMatrix make_frames(int t, int d, const std::vector<float>& values) {
  FrameMatrix fm;
  fm.rows = t;
  fm.cols = d;
  fm.data = values;
  return fm;
}

FrameMatrix random_frames(Rng& rng, int t, int d) {
  FrameMatrix fm;
  fm.rows = t;
  fm.cols = d;
  fm.data.resize(static_cast<std::size_t>(t) * d);
  for (float& v : fm.data) v = static_cast<float>(rng.gauss());
  return fm;
}

CharPosteriorMatrix random_posteriors(Rng& rng, int t, int k) {
  CharPosteriorMatrix post;
  post.rows = t;
  post.cols = k;
  post.charset = k == 29 ? CharsetSpec::ctc_english() : CharsetSpec::generic(k);
  post.data.resize(static_cast<std::size_t>(t) * k);
  for (int i = 0; i < t; ++i) {
    double sum = 0.0;
    std::vector<double> row(k);
    for (double& v : row) {
      v = -std::log(1.0 - rng.uniform());
      sum += v;
    }
    for (int j = 0; j < k; ++j)
      post.at(i, j) = static_cast<float>(row[j] / sum);
  }
  return post;
}

CharPosteriorMatrix one_hot_posteriors(int t, int k, int hot) {
  CharPosteriorMatrix post;
  post.rows = t;
  post.cols = k;
  post.charset = k == 29 ? CharsetSpec::ctc_english() : CharsetSpec::generic(k);
  post.data.assign(static_cast<std::size_t>(t) * k, 0.0f);
  for (int i = 0; i < t; ++i) post.at(i, hot) = 1.0f;
  return post;
}

}  // namespace

TEST_CASE("charset: default has 29 unique symbols with a trailing blank") {
  CharsetSpec spec = CharsetSpec::ctc_english();
  CHECK(spec.size() == 29);
  CHECK(spec.symbols.front() == "a");
  CHECK(spec.symbols.back() == "<blank>");
  spec.validate();
  spec.symbols.push_back("a");
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("statistics_pool: constant rows give mean = row, std = 0") {
  FrameMatrix fm = make_frames(3, 2, {4.0f, -1.0f, 4.0f, -1.0f, 4.0f, -1.0f});
  Embedding e = pooling::statistics_pool(fm);
  REQUIRE(e.dim() == 4);
  CHECK(e.values[0] == 4.0);
  CHECK(e.values[1] == -1.0);
  CHECK(e.values[2] == 0.0);
  CHECK(e.values[3] == 0.0);
}

TEST_CASE("statistics_pool: single frame has zero deviation") {
  FrameMatrix fm = make_frames(1, 3, {1.0f, 2.0f, 3.0f});
  Embedding e = pooling::statistics_pool(fm);
  CHECK(e.values == std::vector<double>{1.0, 2.0, 3.0, 0.0, 0.0, 0.0});
}

TEST_CASE("statistics_pool matches the two-pass oracle") {
  Rng rng(101);
  FrameMatrix fm = random_frames(rng, 10, 4);
  Embedding e = pooling::statistics_pool(fm);
  std::vector<double> ref = oracles::statistics_pool_two_pass(fm);
  REQUIRE(e.dim() == 8);
  for (int i = 0; i < 8; ++i)
    CHECK(e.values[i] == doctest::Approx(ref[i]).epsilon(1e-6));
}

TEST_CASE("self_attentive_pool: zero parameters give the frame mean") {
  Rng rng(102);
  FrameMatrix fm = random_frames(rng, 7, 5);
  SapParams p;
  p.proj_rows = 3;
  p.in_dim = 5;
  p.projection.assign(15, 0.0);
  p.bias.assign(3, 0.0);
  p.context.assign(3, 0.0);
  Embedding e = pooling::self_attentive_pool(fm, p);
  Embedding sp = pooling::statistics_pool(fm);
  for (int d = 0; d < 5; ++d)
    CHECK(e.values[d] == doctest::Approx(sp.values[d]).epsilon(1e-12));
}

TEST_CASE("self_attentive_pool: a dominant logit selects its frame") {
  FrameMatrix fm = make_frames(3, 1, {10.0f, -5.0f, 2.0f});
  // small projection keeps tanh near-linear; the large context spreads the
  // logits far enough apart (> 50) that softmax saturates onto frame 0
  SapParams p;
  p.proj_rows = 1;
  p.in_dim = 1;
  p.projection = {0.01};
  p.bias = {0.0};
  p.context = {1000.0};
  Embedding e = pooling::self_attentive_pool(fm, p);
  CHECK(e.values[0] == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("self_attentive_pool matches direct evaluation") {
  Rng rng(103);
  FrameMatrix fm = random_frames(rng, 12, 6);
  SapParams p = SapParams::random(6, 4, 900);
  Embedding e = pooling::self_attentive_pool(fm, p);
  std::vector<double> ref = oracles::sap_direct(fm, p);
  for (int d = 0; d < 6; ++d)
    CHECK(e.values[d] == doctest::Approx(ref[d]).epsilon(1e-9));
}

TEST_CASE("ghostvlad_pool: one cluster at the origin is the normalized frame sum") {
  Rng rng(104);
  FrameMatrix fm = random_frames(rng, 9, 4);
  GvladParams p;
  p.n_clusters = 1;
  p.n_ghost = 0;
  p.in_dim = 4;
  p.centers.assign(4, 0.0);
  p.assign_weights.assign(4, 0.0);

  std::vector<double> sum(4, 0.0);
  for (int t = 0; t < fm.rows; ++t)
    for (int d = 0; d < 4; ++d) sum[d] += fm.at(t, d);
  double norm = std::sqrt(std::inner_product(sum.begin(), sum.end(), sum.begin(), 0.0));

  Embedding e = pooling::ghostvlad_pool(fm, p);
  REQUIRE(e.dim() == 4);
  for (int d = 0; d < 4; ++d)
    CHECK(e.values[d] == doctest::Approx(sum[d] / norm).epsilon(1e-9));
}

TEST_CASE("ghostvlad_pool: zero residuals stay zero, no NaNs") {
  // every frame sits exactly on the single real center
  FrameMatrix fm = make_frames(4, 2, {1.0f, 2.0f, 1.0f, 2.0f, 1.0f, 2.0f, 1.0f, 2.0f});
  GvladParams p;
  p.n_clusters = 1;
  p.n_ghost = 1;
  p.in_dim = 2;
  p.centers = {1.0, 2.0, -50.0, -50.0};
  p.assign_weights = {10.0, 10.0, -10.0, -10.0};  // saturates onto the real center
  Embedding e = pooling::ghostvlad_pool(fm, p);
  REQUIRE(e.dim() == 2);
  CHECK(e.values[0] == 0.0);
  CHECK(e.values[1] == 0.0);
}

TEST_CASE("ghostvlad_pool matches the double-loop oracle") {
  Rng rng(105);
  FrameMatrix fm = random_frames(rng, 15, 5);
  GvladParams p = GvladParams::random(5, 4, 2, 901);
  Embedding e = pooling::ghostvlad_pool(fm, p);
  std::vector<double> ref = oracles::gvlad_double_loop(fm, p);
  REQUIRE(e.dim() == static_cast<int>(ref.size()));
  for (std::size_t i = 0; i < ref.size(); ++i)
    CHECK(e.values[i] == doctest::Approx(ref[i]).epsilon(1e-9));
}

TEST_CASE("clp_aggregate: one-hot posteriors force the analytic output") {
  const int t = 4, d = 3, k = 5, hot = 2;
  const double tau = 1e-3;
  Rng rng(106);
  FrameMatrix fm = random_frames(rng, t, d);
  CharPosteriorMatrix post = one_hot_posteriors(t, k, hot);

  CharacterAggregate agg = pooling::clp_aggregate(fm, post, {tau, PoolMethod::kClp});
  REQUIRE(agg.blocks() == k);
  for (int dd = 0; dd < d; ++dd) {
    double sum = 0.0;
    for (int tt = 0; tt < t; ++tt) sum += fm.at(tt, dd);
    CHECK(agg.per_char[hot][dd] ==
          doctest::Approx((sum + tau) / (t + tau)).epsilon(1e-9));
  }
  // every other character reduces to tau/tau = 1 per component
  for (int kk = 0; kk < k; ++kk) {
    if (kk == hot) continue;
    for (int dd = 0; dd < d; ++dd) CHECK(agg.per_char[kk][dd] == 1.0);
  }
}

TEST_CASE("clp_aggregate: uniform posteriors make all blocks identical") {
  const int t = 6, d = 4, k = 8;
  Rng rng(107);
  FrameMatrix fm = random_frames(rng, t, d);
  CharPosteriorMatrix post;
  post.rows = t;
  post.cols = k;
  post.charset = CharsetSpec::generic(k);
  post.data.assign(static_cast<std::size_t>(t) * k, 1.0f / k);

  CharacterAggregate agg = pooling::clp_aggregate(fm, post, {1e-3, PoolMethod::kClp});
  for (int kk = 1; kk < k; ++kk)
    for (int dd = 0; dd < d; ++dd)
      CHECK(agg.per_char[kk][dd] == agg.per_char[0][dd]);
}

TEST_CASE("clp_aggregate matches the double-loop oracle") {
  Rng rng(108);
  for (int rep = 0; rep < 5; ++rep) {
    int t = 2 + static_cast<int>(rng.below(6));
    FrameMatrix fm = random_frames(rng, t, 3);
    CharPosteriorMatrix post = random_posteriors(rng, t, 29);
    CharacterAggregate agg = pooling::clp_aggregate(fm, post, {1e-3, PoolMethod::kClp});
    auto ref = oracles::clp_double_loop(fm, post, 1e-3);
    for (int k = 0; k < 29; ++k)
      for (int d = 0; d < 3; ++d)
        CHECK(agg.per_char[k][d] == doctest::Approx(ref[k][d]).epsilon(1e-6));
  }
}

TEST_CASE("clp_aggregate: frame count mismatch is rejected") {
  Rng rng(109);
  FrameMatrix fm = random_frames(rng, 4, 3);
  CharPosteriorMatrix post = random_posteriors(rng, 5, 29);
  CHECK_THROWS_AS(pooling::clp_aggregate(fm, post, {1e-3, PoolMethod::kClp}), Error);
}

TEST_CASE("clp_aggregate: K=1 all-ones posteriors converge to the mean as tau -> 0") {
  Rng rng(110);
  FrameMatrix fm = random_frames(rng, 10, 4);
  CharPosteriorMatrix post;
  post.rows = 10;
  post.cols = 1;
  post.charset = CharsetSpec::generic(1);
  post.data.assign(10, 1.0f);

  CharacterAggregate agg = pooling::clp_aggregate(fm, post, {1e-8, PoolMethod::kClp});
  Embedding sp = pooling::statistics_pool(fm);
  for (int d = 0; d < 4; ++d)
    CHECK(std::abs(agg.per_char[0][d] - sp.values[d]) < 1e-5);
}

TEST_CASE("clp_aggregate: tau = 0 hook is exactly duplication invariant") {
  // dyadic values keep every accumulation exact, so the check can be bitwise
  FrameMatrix fm = make_frames(2, 2, {1.5f, -2.0f, 0.25f, 4.0f});
  CharPosteriorMatrix post;
  post.rows = 2;
  post.cols = 2;
  post.charset = CharsetSpec::generic(2);
  post.data = {0.75f, 0.25f, 0.5f, 0.5f};

  FrameMatrix fm2 = make_frames(4, 2, {1.5f, -2.0f, 0.25f, 4.0f, 1.5f, -2.0f, 0.25f, 4.0f});
  CharPosteriorMatrix post2;
  post2.rows = 4;
  post2.cols = 2;
  post2.charset = CharsetSpec::generic(2);
  post2.data = {0.75f, 0.25f, 0.5f, 0.5f, 0.75f, 0.25f, 0.5f, 0.5f};

  CharacterAggregate once = pooling::clp_aggregate_raw(fm, post, 0.0);
  CharacterAggregate twice = pooling::clp_aggregate_raw(fm2, post2, 0.0);
  for (int k = 0; k < 2; ++k)
    for (int d = 0; d < 2; ++d) CHECK(once.per_char[k][d] == twice.per_char[k][d]);
}

TEST_CASE("pooling is order invariant over frames") {
  Rng rng(111);
  FrameMatrix fm = random_frames(rng, 8, 3);
  CharPosteriorMatrix post = random_posteriors(rng, 8, 4);
  SapParams sap = SapParams::random(3, 2, 902);

  // reverse the frames (and their posterior rows)
  FrameMatrix rev = fm;
  CharPosteriorMatrix rev_post = post;
  for (int t = 0; t < 8; ++t)
    for (int d = 0; d < 3; ++d) rev.at(t, d) = fm.at(7 - t, d);
  for (int t = 0; t < 8; ++t)
    for (int k = 0; k < 4; ++k) rev_post.at(t, k) = post.at(7 - t, k);

  Embedding sp_a = pooling::statistics_pool(fm);
  Embedding sp_b = pooling::statistics_pool(rev);
  for (int i = 0; i < sp_a.dim(); ++i)
    CHECK(sp_a.values[i] == doctest::Approx(sp_b.values[i]).epsilon(1e-12));

  Embedding sap_a = pooling::self_attentive_pool(fm, sap);
  Embedding sap_b = pooling::self_attentive_pool(rev, sap);
  for (int i = 0; i < sap_a.dim(); ++i)
    CHECK(sap_a.values[i] == doctest::Approx(sap_b.values[i]).epsilon(1e-12));

  CharacterAggregate clp_a = pooling::clp_aggregate(fm, post, {1e-3, PoolMethod::kClp});
  CharacterAggregate clp_b = pooling::clp_aggregate(rev, rev_post, {1e-3, PoolMethod::kClp});
  for (int k = 0; k < 4; ++k)
    for (int d = 0; d < 3; ++d)
      CHECK(clp_a.per_char[k][d] == doctest::Approx(clp_b.per_char[k][d]).epsilon(1e-12));
}

TEST_CASE("locally_connected: identity weights reproduce the aggregate") {
  Rng rng(112);
  const int k = 3, d = 4;
  CharacterAggregate agg;
  for (int b = 0; b < k; ++b) {
    std::vector<double> v(d);
    for (double& x : v) x = rng.gauss();
    agg.per_char.push_back(v);
    agg.concatenated.insert(agg.concatenated.end(), v.begin(), v.end());
  }

  LocallyConnectedParams p;
  p.activation = Activation::kIdentity;
  for (int b = 0; b < k; ++b) {
    std::vector<double> w(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) w[static_cast<std::size_t>(i) * d + i] = 1.0;
    p.weights.push_back(w);
    p.biases.push_back(std::vector<double>(d, 0.0));
  }

  Embedding e = pooling::locally_connected(agg, p);
  REQUIRE(e.dim() == k * d);
  for (int i = 0; i < k * d; ++i) CHECK(e.values[i] == agg.concatenated[i]);
}

TEST_CASE("locally_connected: D2=20, K=29 gives a 580-dim embedding") {
  Rng rng(113);
  CharacterAggregate agg;
  for (int b = 0; b < 29; ++b) {
    std::vector<double> v(16);
    for (double& x : v) x = rng.gauss();
    agg.per_char.push_back(v);
    agg.concatenated.insert(agg.concatenated.end(), v.begin(), v.end());
  }
  LocallyConnectedParams p = LocallyConnectedParams::random(29, 16, 20, Activation::kRelu, 903);
  Embedding e = pooling::locally_connected(agg, p);
  CHECK(e.dim() == 580);
  for (double v : e.values) CHECK(v >= 0.0);  // relu

  std::vector<double> ref = oracles::locally_connected_direct(agg.per_char, p);
  for (int i = 0; i < e.dim(); ++i)
    CHECK(e.values[i] == doctest::Approx(ref[i]).epsilon(1e-9));
}

TEST_CASE("locally_connected: block k ignores every other block") {
  Rng rng(114);
  const int k = 4, d = 3;
  CharacterAggregate agg;
  for (int b = 0; b < k; ++b) {
    std::vector<double> v(d);
    for (double& x : v) x = rng.gauss();
    agg.per_char.push_back(v);
    agg.concatenated.insert(agg.concatenated.end(), v.begin(), v.end());
  }
  LocallyConnectedParams p = LocallyConnectedParams::random(k, d, 2, Activation::kTanh, 904);

  Embedding before = pooling::locally_connected(agg, p);
  CharacterAggregate perturbed = agg;
  for (double& x : perturbed.per_char[1]) x += 100.0;
  Embedding after = pooling::locally_connected(perturbed, p);
  // blocks 0, 2, 3 must be bit-identical
  for (int b = 0; b < k; ++b) {
    if (b == 1) continue;
    for (int r = 0; r < 2; ++r)
      CHECK(before.values[b * 2 + r] == after.values[b * 2 + r]);
  }
}

TEST_CASE("pool dispatch: dims and missing-input errors") {
  Rng rng(115);
  FrameMatrix fm = random_frames(rng, 10, 64);

  PoolingConfig sp_cfg{1e-3, PoolMethod::kSp};
  CHECK(pooling::pool(fm, sp_cfg, {}).dim() == 128);

  FrameMatrix small = random_frames(rng, 10, 8);
  CharPosteriorMatrix post = random_posteriors(rng, 10, 29);
  LocallyConnectedParams lc = LocallyConnectedParams::random(29, 8, 20, Activation::kRelu, 905);
  PoolingConfig clp_cfg{1e-3, PoolMethod::kClp};
  PoolInputs inputs;
  inputs.posteriors = &post;
  inputs.lc = &lc;
  CHECK(pooling::pool(small, clp_cfg, inputs).dim() == 580);

  PoolInputs missing;
  missing.lc = &lc;
  try {
    pooling::pool(small, clp_cfg, missing);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMissingInput);
  }
  CHECK_THROWS_AS(pooling::pool(small, {1e-3, PoolMethod::kSap}, {}), Error);
  CHECK_THROWS_AS(pooling::pool(small, {1e-3, PoolMethod::kGvp}, {}), Error);
}

TEST_CASE("all pooling outputs stay finite on random inputs") {
  Rng rng(116);
  FrameMatrix fm = random_frames(rng, 20, 6);
  CharPosteriorMatrix post = random_posteriors(rng, 20, 29);
  SapParams sap = SapParams::random(6, 4, 906);
  GvladParams gvlad = GvladParams::random(6, 8, 2, 907);
  LocallyConnectedParams lc = LocallyConnectedParams::random(29, 6, 20, Activation::kRelu, 908);

  pooling::statistics_pool(fm).validate();
  pooling::self_attentive_pool(fm, sap).validate();
  pooling::ghostvlad_pool(fm, gvlad).validate();
  PoolInputs inputs;
  inputs.posteriors = &post;
  inputs.lc = &lc;
  pooling::pool(fm, {1e-3, PoolMethod::kClp}, inputs).validate();
}

TEST_CASE("posterior validation rejects bad rows") {
  CharPosteriorMatrix post;
  post.rows = 1;
  post.cols = 2;
  post.charset = CharsetSpec::generic(2);
  post.data = {0.7f, 0.7f};  // sums to 1.4
  CHECK_THROWS_AS(post.validate(), Error);
  post.data = {-0.1f, 1.1f};
  CHECK_THROWS_AS(post.validate(), Error);
}
