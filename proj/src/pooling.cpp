// src/pooling.cpp

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

#include "tdsv/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tdsv::pooling {

CharsetSpec CharsetSpec::ctc_english() {
  CharsetSpec spec;
  spec.symbols.reserve(29);
  for (char c = 'a'; c <= 'z'; ++c) spec.symbols.emplace_back(1, c);
  spec.symbols.emplace_back(" ");
  spec.symbols.emplace_back("'");
  spec.symbols.emplace_back("<blank>");
  return spec;
}

CharsetSpec CharsetSpec::generic(int k) {
  if (k < 1) throw Error(ErrorKind::kBadConfig, "charset needs at least one symbol");
  CharsetSpec spec;
  spec.symbols.reserve(k);
  for (int i = 0; i < k; ++i) spec.symbols.push_back("c" + std::to_string(i));
  return spec;
}

void CharsetSpec::validate() const {
  if (symbols.empty())
    throw Error(ErrorKind::kBadConfig, "charset is empty");
  std::set<std::string> seen(symbols.begin(), symbols.end());
  if (seen.size() != symbols.size())
    throw Error(ErrorKind::kBadConfig, "charset labels must be unique");
}

void CharPosteriorMatrix::validate() const {
  if (rows < 1 || cols < 1)
    throw Error(ErrorKind::kBadConfig, "posterior matrix must be at least 1x1");
  if (data.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorKind::kBadConfig, "posterior matrix storage size mismatch");
  if (!charset.symbols.empty() && charset.size() != cols)
    throw Error(ErrorKind::kDimMismatch, "charset size does not match K");
  for (int t = 0; t < rows; ++t) {
    double sum = 0.0;
    for (int k = 0; k < cols; ++k) {
      float v = at(t, k);
      if (!std::isfinite(v) || v < 0.0f)
        throw Error(ErrorKind::kBadConfig, "posterior entries must be finite and >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-5)
      throw Error(ErrorKind::kBadConfig, "posterior row does not sum to 1");
  }
}

PoolMethod pool_method_from_string(const std::string& name) {
  if (name == "sp") return PoolMethod::kSp;
  if (name == "sap") return PoolMethod::kSap;
  if (name == "gvp") return PoolMethod::kGvp;
  if (name == "clp") return PoolMethod::kClp;
  throw Error(ErrorKind::kBadConfig, "unknown pooling method: " + name);
}

const char* to_string(PoolMethod m) {
  switch (m) {
    case PoolMethod::kSp: return "sp";
    case PoolMethod::kSap: return "sap";
    case PoolMethod::kGvp: return "gvp";
    case PoolMethod::kClp: return "clp";
  }
  return "?";
}

void PoolingConfig::validate() const {
  if (!is_finite(tau) || tau <= 0.0)
    throw Error(ErrorKind::kBadConfig, "tau must be > 0");
}

void Embedding::validate() const {
  if (values.empty())
    throw Error(ErrorKind::kBadConfig, "embedding is empty");
  for (double v : values)
    if (!is_finite(v))
      throw Error(ErrorKind::kBadConfig, "embedding has a non-finite value");
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw Error(ErrorKind::kBadConfig, "unknown activation: " + name);
}

const char* to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

int LocallyConnectedParams::in_dim() const {
  if (weights.empty() || biases.empty() || biases[0].empty()) return 0;
  return static_cast<int>(weights[0].size() / biases[0].size());
}

int LocallyConnectedParams::out_dim() const {
  return biases.empty() ? 0 : static_cast<int>(biases[0].size());
}

void LocallyConnectedParams::validate() const {
  if (weights.empty() || weights.size() != biases.size())
    throw Error(ErrorKind::kBadConfig, "locally-connected blocks inconsistent");
  std::size_t d2 = biases[0].size();
  if (d2 == 0) throw Error(ErrorKind::kBadConfig, "locally-connected D2 is zero");
  std::size_t wsize = weights[0].size();
  if (wsize == 0 || wsize % d2 != 0)
    throw Error(ErrorKind::kBadConfig, "locally-connected weight shape invalid");
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k].size() != wsize || biases[k].size() != d2)
      throw Error(ErrorKind::kBadConfig, "locally-connected block dims differ");
    for (double v : weights[k])
      if (!is_finite(v)) throw Error(ErrorKind::kBadConfig, "non-finite weight");
    for (double v : biases[k])
      if (!is_finite(v)) throw Error(ErrorKind::kBadConfig, "non-finite bias");
  }
}

LocallyConnectedParams LocallyConnectedParams::random(int k, int d1, int d2,
                                                      Activation act,
                                                      std::uint64_t seed) {
  if (k < 1 || d1 < 1 || d2 < 1)
    throw Error(ErrorKind::kBadConfig, "locally-connected dims must be >= 1");
  Rng rng(seed);
  LocallyConnectedParams p;
  p.activation = act;
  p.weights.resize(k);
  p.biases.resize(k);
  double w_scale = 1.0 / std::sqrt(static_cast<double>(d1));
  for (int b = 0; b < k; ++b) {
    p.weights[b].resize(static_cast<std::size_t>(d2) * d1);
    for (double& w : p.weights[b]) w = rng.gauss() * w_scale;
    p.biases[b].resize(d2);
    for (double& v : p.biases[b]) v = rng.gauss() * 0.1;
  }
  return p;
}

void SapParams::validate() const {
  if (proj_rows < 1 || in_dim < 1)
    throw Error(ErrorKind::kBadConfig, "SAP dims must be >= 1");
  if (projection.size() != static_cast<std::size_t>(proj_rows) * in_dim ||
      bias.size() != static_cast<std::size_t>(proj_rows) ||
      context.size() != static_cast<std::size_t>(proj_rows))
    throw Error(ErrorKind::kBadConfig, "SAP parameter shapes inconsistent");
  for (double v : projection)
    if (!is_finite(v)) throw Error(ErrorKind::kBadConfig, "non-finite SAP weight");
  for (double v : bias)
    if (!is_finite(v)) throw Error(ErrorKind::kBadConfig, "non-finite SAP bias");
  for (double v : context)
    if (!is_finite(v)) throw Error(ErrorKind::kBadConfig, "non-finite SAP context");
}

SapParams SapParams::random(int d, int proj_dim, std::uint64_t seed) {
  if (d < 1 || proj_dim < 1)
    throw Error(ErrorKind::kBadConfig, "SAP dims must be >= 1");
  Rng rng(seed);
  SapParams p;
  p.proj_rows = proj_dim;
  p.in_dim = d;
  p.projection.resize(static_cast<std::size_t>(proj_dim) * d);
  double w_scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& w : p.projection) w = rng.gauss() * w_scale;
  p.bias.resize(proj_dim);
  for (double& v : p.bias) v = rng.gauss() * 0.1;
  p.context.resize(proj_dim);
  double c_scale = 1.0 / std::sqrt(static_cast<double>(proj_dim));
  for (double& v : p.context) v = rng.gauss() * c_scale;
  return p;
}

void GvladParams::validate() const {
  if (n_clusters < 1 || n_ghost < 0 || in_dim < 1)
    throw Error(ErrorKind::kBadConfig, "GhostVLAD needs >= 1 cluster and >= 0 ghosts");
  std::size_t expected = static_cast<std::size_t>(total_clusters()) * in_dim;
  if (centers.size() != expected || assign_weights.size() != expected)
    throw Error(ErrorKind::kBadConfig, "GhostVLAD parameter shapes inconsistent");
  for (double v : centers)
    if (!is_finite(v)) throw Error(ErrorKind::kBadConfig, "non-finite center");
  for (double v : assign_weights)
    if (!is_finite(v)) throw Error(ErrorKind::kBadConfig, "non-finite assignment weight");
}

GvladParams GvladParams::random(int d, int n_clusters, int n_ghost,
                                std::uint64_t seed) {
  if (d < 1 || n_clusters < 1 || n_ghost < 0)
    throw Error(ErrorKind::kBadConfig, "GhostVLAD dims must be valid");
  Rng rng(seed);
  GvladParams p;
  p.n_clusters = n_clusters;
  p.n_ghost = n_ghost;
  p.in_dim = d;
  std::size_t total = static_cast<std::size_t>(n_clusters + n_ghost) * d;
  p.centers.resize(total);
  for (double& v : p.centers) v = rng.gauss();
  p.assign_weights.resize(total);
  double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& v : p.assign_weights) v = rng.gauss() * scale;
  return p;
}

Embedding statistics_pool(const FrameMatrix& fm) {
  fm.validate();
  const int t_count = fm.rows, d_count = fm.cols;

  std::vector<double> mean(d_count, 0.0);
  for (int t = 0; t < t_count; ++t)
    for (int d = 0; d < d_count; ++d) mean[d] += fm.at(t, d);
  for (double& m : mean) m /= t_count;

  std::vector<double> var(d_count, 0.0);
  for (int t = 0; t < t_count; ++t)
    for (int d = 0; d < d_count; ++d) {
      double dev = fm.at(t, d) - mean[d];
      var[d] += dev * dev;
    }

  Embedding e;
  e.values.resize(2 * d_count);
  for (int d = 0; d < d_count; ++d) {
    e.values[d] = mean[d];
    e.values[d_count + d] = std::sqrt(var[d] / t_count);
  }
  return e;
}

namespace {

// Softmax in place, max-shifted.
void softmax(std::vector<double>& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& l : logits) {
    l = std::exp(l - mx);
    sum += l;
  }
  for (double& l : logits) l /= sum;
}

}  // namespace

Embedding self_attentive_pool(const FrameMatrix& fm, const SapParams& p) {
  fm.validate();
  p.validate();
  if (p.in_dim != fm.cols)
    throw Error(ErrorKind::kDimMismatch, "SAP parameter dim does not match D");

  const int t_count = fm.rows, d_count = fm.cols, proj = p.proj_rows;
  std::vector<double> logits(t_count, 0.0);
  for (int t = 0; t < t_count; ++t) {
    double logit = 0.0;
    for (int r = 0; r < proj; ++r) {
      double z = p.bias[r];
      const double* w = &p.projection[static_cast<std::size_t>(r) * d_count];
      for (int d = 0; d < d_count; ++d) z += w[d] * fm.at(t, d);
      logit += p.context[r] * std::tanh(z);
    }
    logits[t] = logit;
  }
  softmax(logits);

  Embedding e;
  e.values.assign(d_count, 0.0);
  for (int t = 0; t < t_count; ++t)
    for (int d = 0; d < d_count; ++d) e.values[d] += logits[t] * fm.at(t, d);
  return e;
}

Embedding ghostvlad_pool(const FrameMatrix& fm, const GvladParams& p) {
  fm.validate();
  p.validate();
  if (p.in_dim != fm.cols)
    throw Error(ErrorKind::kDimMismatch, "GhostVLAD parameter dim does not match D");

  const int t_count = fm.rows, d_count = fm.cols;
  const int total = p.total_clusters(), real = p.n_clusters;

  std::vector<std::vector<double>> vlad(real, std::vector<double>(d_count, 0.0));
  std::vector<double> assign(total);
  for (int t = 0; t < t_count; ++t) {
    for (int c = 0; c < total; ++c) {
      const double* w = &p.assign_weights[static_cast<std::size_t>(c) * d_count];
      double s = 0.0;
      for (int d = 0; d < d_count; ++d) s += w[d] * fm.at(t, d);
      assign[c] = s;
    }
    softmax(assign);
    // ghost clusters soak up assignment mass but are not accumulated
    for (int c = 0; c < real; ++c) {
      const double* center = &p.centers[static_cast<std::size_t>(c) * d_count];
      for (int d = 0; d < d_count; ++d)
        vlad[c][d] += assign[c] * (fm.at(t, d) - center[d]);
    }
  }

  Embedding e;
  e.values.reserve(static_cast<std::size_t>(real) * d_count);
  for (int c = 0; c < real; ++c) {
    double norm = 0.0;
    for (double v : vlad[c]) norm += v * v;
    norm = std::sqrt(norm);
    for (double v : vlad[c]) e.values.push_back(norm > 0.0 ? v / norm : v);
  }
  double norm = 0.0;
  for (double v : e.values) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& v : e.values) v /= norm;
  return e;
}

CharacterAggregate clp_aggregate_raw(const FrameMatrix& fm,
                                     const CharPosteriorMatrix& post,
                                     double tau) {
  fm.validate();
  post.validate();
  if (fm.rows != post.rows)
    throw Error(ErrorKind::kDimMismatch,
                "frame matrix and posterior matrix disagree on T");

  const int t_count = fm.rows, d_count = fm.cols, k_count = post.cols;

  CharacterAggregate agg;
  agg.per_char.assign(k_count, std::vector<double>(d_count, 0.0));
  std::vector<double> mass(k_count, 0.0);
  for (int t = 0; t < t_count; ++t) {
    for (int k = 0; k < k_count; ++k) {
      double w = post.at(t, k);
      if (w == 0.0) continue;
      mass[k] += w;
      std::vector<double>& acc = agg.per_char[k];
      for (int d = 0; d < d_count; ++d) acc[d] += w * fm.at(t, d);
    }
  }

  agg.concatenated.reserve(static_cast<std::size_t>(k_count) * d_count);
  for (int k = 0; k < k_count; ++k) {
    double denom = mass[k] + tau;
    for (int d = 0; d < d_count; ++d) {
      double v = (agg.per_char[k][d] + tau) / denom;
      agg.per_char[k][d] = v;
      agg.concatenated.push_back(v);
    }
  }
  return agg;
}

CharacterAggregate clp_aggregate(const FrameMatrix& fm,
                                 const CharPosteriorMatrix& post,
                                 const PoolingConfig& cfg) {
  cfg.validate();
  return clp_aggregate_raw(fm, post, cfg.tau);
}

Embedding locally_connected(const CharacterAggregate& agg,
                            const LocallyConnectedParams& p) {
  p.validate();
  if (p.blocks() != agg.blocks() || p.in_dim() != agg.block_dim())
    throw Error(ErrorKind::kDimMismatch,
                "locally-connected block shape does not match the aggregate");
  for (const std::vector<double>& v : agg.per_char)
    if (static_cast<int>(v.size()) != agg.block_dim())
      throw Error(ErrorKind::kDimMismatch, "aggregate blocks have differing dims");

  const int d1 = p.in_dim(), d2 = p.out_dim(), k_count = p.blocks();
  Embedding e;
  e.values.reserve(static_cast<std::size_t>(d2) * k_count);
  for (int k = 0; k < k_count; ++k) {
    const std::vector<double>& v = agg.per_char[k];
    for (int r = 0; r < d2; ++r) {
      const double* w = &p.weights[k][static_cast<std::size_t>(r) * d1];
      double z = p.biases[k][r];
      for (int d = 0; d < d1; ++d) z += w[d] * v[d];
      switch (p.activation) {
        case Activation::kRelu: z = z > 0.0 ? z : 0.0; break;
        case Activation::kTanh: z = std::tanh(z); break;
        case Activation::kIdentity: break;
      }
      e.values.push_back(z);
    }
  }
  return e;
}

Embedding pool(const FrameMatrix& fm, const PoolingConfig& cfg,
               const PoolInputs& inputs) {
  switch (cfg.method) {
    case PoolMethod::kSp:
      return statistics_pool(fm);
    case PoolMethod::kSap:
      if (!inputs.sap)
        throw Error(ErrorKind::kMissingInput, "SAP pooling needs parameters");
      return self_attentive_pool(fm, *inputs.sap);
    case PoolMethod::kGvp:
      if (!inputs.gvlad)
        throw Error(ErrorKind::kMissingInput, "GhostVLAD pooling needs parameters");
      return ghostvlad_pool(fm, *inputs.gvlad);
    case PoolMethod::kClp:
      if (!inputs.posteriors)
        throw Error(ErrorKind::kMissingInput,
                    "character-level pooling needs character posteriors");
      if (!inputs.lc)
        throw Error(ErrorKind::kMissingInput,
                    "character-level pooling needs locally-connected parameters");
      return locally_connected(clp_aggregate(fm, *inputs.posteriors, cfg),
                               *inputs.lc);
  }
  throw Error(ErrorKind::kBadConfig, "unknown pooling method");
}

}  // namespace tdsv::pooling
