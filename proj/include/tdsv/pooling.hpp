// include/tdsv/pooling.hpp

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

#ifndef TDSV_POOLING_HPP_
#define TDSV_POOLING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tdsv/common.hpp"
#include "tdsv/features.hpp"

namespace tdsv::pooling {

using features::FrameMatrix;

/// Ordered character label set. The default CTC English set has 29 symbols:
/// a-z, space, apostrophe and the CTC blank.
struct CharsetSpec {
  std::vector<std::string> symbols;

  static CharsetSpec ctc_english();
  static CharsetSpec generic(int k);

  int size() const { return static_cast<int>(symbols.size()); }
  void validate() const;  // labels unique, non-empty set
};

/// T x K per-frame character posteriors; each row is a probability simplex.
struct CharPosteriorMatrix {
  std::vector<float> data;  // row-major
  int rows = 0;  // T
  int cols = 0;  // K
  CharsetSpec charset;

  float at(int t, int k) const { return data[static_cast<std::size_t>(t) * cols + k]; }
  float& at(int t, int k) { return data[static_cast<std::size_t>(t) * cols + k]; }

  void validate() const;  // entries >= 0, rows sum to 1 within 1e-5
};

enum class PoolMethod { kSp, kSap, kGvp, kClp };

PoolMethod pool_method_from_string(const std::string& name);
const char* to_string(PoolMethod m);

struct PoolingConfig {
  double tau = 1e-3;  // divergence guard in the character aggregation
  PoolMethod method = PoolMethod::kSp;

  void validate() const;  // tau > 0
};

/// Fixed-dimension utterance vector.
struct Embedding {
  std::vector<double> values;

  int dim() const { return static_cast<int>(values.size()); }
  void validate() const;  // finite, dim > 0
};

/// Per-character aggregates v_k plus their concatenation in charset order.
struct CharacterAggregate {
  std::vector<std::vector<double>> per_char;  // K vectors of dim D1
  std::vector<double> concatenated;           // K * D1

  int blocks() const { return static_cast<int>(per_char.size()); }
  int block_dim() const { return per_char.empty() ? 0 : static_cast<int>(per_char[0].size()); }
};

enum class Activation { kRelu, kTanh, kIdentity };

Activation activation_from_string(const std::string& name);
const char* to_string(Activation a);

/// K independent affine blocks, one per character; no cross-block weights.
struct LocallyConnectedParams {
  std::vector<std::vector<double>> weights;  // K blocks, each D2 x D1 row-major
  std::vector<std::vector<double>> biases;   // K blocks, each dim D2
  Activation activation = Activation::kRelu;

  int blocks() const { return static_cast<int>(weights.size()); }
  int in_dim() const;   // D1
  int out_dim() const;  // D2
  void validate() const;

  static LocallyConnectedParams random(int k, int d1, int d2, Activation act,
                                       std::uint64_t seed);
};

struct SapParams {
  std::vector<double> projection;  // P x D row-major
  std::vector<double> bias;        // P
  std::vector<double> context;     // P
  int proj_rows = 0;  // P
  int in_dim = 0;     // D

  void validate() const;
  static SapParams random(int d, int proj_dim, std::uint64_t seed);
};

struct GvladParams {
  std::vector<double> centers;         // (C + G) x D row-major
  std::vector<double> assign_weights;  // (C + G) x D row-major
  int n_clusters = 0;  // C
  int n_ghost = 0;     // G
  int in_dim = 0;      // D

  int total_clusters() const { return n_clusters + n_ghost; }
  void validate() const;
  static GvladParams random(int d, int n_clusters, int n_ghost, std::uint64_t seed);
};

/// Mean concatenated with population standard deviation, dim 2*D.
Embedding statistics_pool(const FrameMatrix& fm);

/// Softmax-weighted frame average with logits a_i = context . tanh(W h_i + b).
Embedding self_attentive_pool(const FrameMatrix& fm, const SapParams& p);

/// Soft-assigned residual encoding over (C + G) centers; ghost clusters are
/// dropped, each surviving cluster vector is intra-normalized to unit L2
/// (zero vectors kept as zeros) and the concatenation is L2-normalized.
Embedding ghostvlad_pool(const FrameMatrix& fm, const GvladParams& p);

/// v_k = (sum_i pi_{k,i} h_i + tau * 1) / (sum_i pi_{k,i} + tau), with tau
/// added to every numerator component.
CharacterAggregate clp_aggregate(const FrameMatrix& fm,
                                 const CharPosteriorMatrix& post,
                                 const PoolingConfig& cfg);

/// Same aggregation without the tau > 0 check. Test hook for the tau = 0
/// duplication-invariance property; not part of the pipeline surface.
CharacterAggregate clp_aggregate_raw(const FrameMatrix& fm,
                                     const CharPosteriorMatrix& post,
                                     double tau);

/// e_k = f(W_k v_k + b_k) per block; output is the concatenation, dim D2 * K.
Embedding locally_connected(const CharacterAggregate& agg,
                            const LocallyConnectedParams& p);

/// Optional side inputs for pool(); the chosen method dictates which are
/// required.
struct PoolInputs {
  const CharPosteriorMatrix* posteriors = nullptr;
  const LocallyConnectedParams* lc = nullptr;
  const SapParams* sap = nullptr;
  const GvladParams* gvlad = nullptr;
};

/// Dispatch over the four pooling methods. CLP runs clp_aggregate followed by
/// locally_connected.
Embedding pool(const FrameMatrix& fm, const PoolingConfig& cfg,
               const PoolInputs& inputs);

}  // namespace tdsv::pooling

#endif  // TDSV_POOLING_HPP_
