// bindings/module.cpp

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

// numpy-facing bindings for the core operations. Frame matrices are float32
// T x D arrays; embeddings, posteriors and scores are float64.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "tdsv/archshapes.hpp"
#include "tdsv/common.hpp"
#include "tdsv/features.hpp"
#include "tdsv/metrics.hpp"
#include "tdsv/pooling.hpp"
#include "tdsv/scoring.hpp"

namespace py = pybind11;
using namespace tdsv;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

features::FrameMatrix to_frame_matrix(const FloatArray& array) {
  if (array.ndim() != 2)
    throw Error(ErrorKind::kBadConfig, "expected a 2-d frame array (T x D)");
  features::FrameMatrix fm;
  fm.rows = static_cast<int>(array.shape(0));
  fm.cols = static_cast<int>(array.shape(1));
  fm.data.assign(array.data(), array.data() + array.size());
  return fm;
}

py::array_t<float> from_frame_matrix(const features::FrameMatrix& fm) {
  py::array_t<float> out({fm.rows, fm.cols});
  std::memcpy(out.mutable_data(), fm.data.data(), fm.data.size() * sizeof(float));
  return out;
}

pooling::CharPosteriorMatrix to_posterior_matrix(const FloatArray& array) {
  if (array.ndim() != 2)
    throw Error(ErrorKind::kBadConfig, "expected a 2-d posterior array (T x K)");
  pooling::CharPosteriorMatrix post;
  post.rows = static_cast<int>(array.shape(0));
  post.cols = static_cast<int>(array.shape(1));
  post.charset = post.cols == 29 ? pooling::CharsetSpec::ctc_english()
                                 : pooling::CharsetSpec::generic(post.cols);
  post.data.assign(array.data(), array.data() + array.size());
  return post;
}

pooling::Embedding to_embedding(const DoubleArray& array) {
  if (array.ndim() != 1)
    throw Error(ErrorKind::kBadConfig, "expected a 1-d embedding array");
  pooling::Embedding e;
  e.values.assign(array.data(), array.data() + array.size());
  return e;
}

std::vector<double> to_vector(const DoubleArray& array) {
  return std::vector<double>(array.data(), array.data() + array.size());
}

py::array_t<double> from_vector(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

scoring::PhrasePosterior to_posterior(const DoubleArray& array) {
  scoring::PhrasePosterior p;
  p.probs.assign(array.data(), array.data() + array.size());
  return p;
}

features::FeatureConfig make_config(double window_len, double hop_len, int n_fft,
                                    int n_mels, double log_floor) {
  features::FeatureConfig cfg;
  cfg.window_len = window_len;
  cfg.hop_len = hop_len;
  cfg.n_fft = n_fft;
  cfg.n_mels = n_mels;
  cfg.log_floor = log_floor;
  return cfg;
}

metrics::ScoreSet make_score_set(const DoubleArray& targets,
                                 const DoubleArray& nontargets) {
  metrics::ScoreSet s;
  s.targets = to_vector(targets);
  s.nontargets = to_vector(nontargets);
  return s;
}

py::list report_to_list(const archshapes::ShapeReport& report) {
  py::list out;
  for (const archshapes::LayerShape& l : report.layers)
    out.append(py::make_tuple(l.name, l.dims, l.symbolic));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "text-dependent speaker verification back-end";

  py::register_exception<Error>(m, "TdsvError");

  // features -----------------------------------------------------------------
  m.def(
      "read_wav",
      [](const std::string& path) {
        features::AudioClip clip = features::read_wav(path);
        py::array_t<float> samples(static_cast<py::ssize_t>(clip.samples.size()));
        std::memcpy(samples.mutable_data(), clip.samples.data(),
                    clip.samples.size() * sizeof(float));
        return py::make_tuple(samples, clip.sample_rate);
      },
      py::arg("path"), "Read a PCM16 mono WAV file; returns (samples, sample_rate).");

  m.def(
      "frame_count",
      [](std::size_t n_samples, int sample_rate, double window_len, double hop_len) {
        return features::frame_count(n_samples, make_config(window_len, hop_len, 512, 64, 1e-10),
                                     sample_rate);
      },
      py::arg("n_samples"), py::arg("sample_rate"), py::arg("window_len") = 0.020,
      py::arg("hop_len") = 0.010);

  m.def(
      "logmel_frames",
      [](const FloatArray& samples, int sample_rate, double window_len, double hop_len,
         int n_fft, int n_mels, double log_floor) {
        features::AudioClip clip;
        clip.sample_rate = sample_rate;
        clip.samples.assign(samples.data(), samples.data() + samples.size());
        return from_frame_matrix(features::logmel_frames(
            clip, make_config(window_len, hop_len, n_fft, n_mels, log_floor)));
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("window_len") = 0.020,
      py::arg("hop_len") = 0.010, py::arg("n_fft") = 512, py::arg("n_mels") = 64,
      py::arg("log_floor") = 1e-10);

  m.def(
      "stft_frames",
      [](const FloatArray& samples, int sample_rate, double window_len, double hop_len,
         int n_fft) {
        features::AudioClip clip;
        clip.sample_rate = sample_rate;
        clip.samples.assign(samples.data(), samples.data() + samples.size());
        return from_frame_matrix(features::stft_frames(
            clip, make_config(window_len, hop_len, n_fft, 64, 1e-10)));
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("window_len") = 0.020,
      py::arg("hop_len") = 0.010, py::arg("n_fft") = 512);

  m.def(
      "crop_frames",
      [](const FloatArray& frames, int min_rows, int max_rows, std::uint64_t seed) {
        return from_frame_matrix(
            features::crop_frames(to_frame_matrix(frames), min_rows, max_rows, seed));
      },
      py::arg("frames"), py::arg("min_rows"), py::arg("max_rows"), py::arg("seed") = 0);

  // pooling ------------------------------------------------------------------
  m.def(
      "statistics_pool",
      [](const FloatArray& frames) {
        return from_vector(pooling::statistics_pool(to_frame_matrix(frames)).values);
      },
      py::arg("frames"), "Mean + population std over frames, dim 2*D.");

  m.def(
      "self_attentive_pool",
      [](const FloatArray& frames, const DoubleArray& projection, const DoubleArray& bias,
         const DoubleArray& context) {
        if (projection.ndim() != 2)
          throw Error(ErrorKind::kBadConfig, "projection must be 2-d (P x D)");
        pooling::SapParams p;
        p.proj_rows = static_cast<int>(projection.shape(0));
        p.in_dim = static_cast<int>(projection.shape(1));
        p.projection = std::vector<double>(projection.data(),
                                           projection.data() + projection.size());
        p.bias = to_vector(bias);
        p.context = to_vector(context);
        return from_vector(
            pooling::self_attentive_pool(to_frame_matrix(frames), p).values);
      },
      py::arg("frames"), py::arg("projection"), py::arg("bias"), py::arg("context"));

  m.def(
      "ghostvlad_pool",
      [](const FloatArray& frames, const DoubleArray& centers,
         const DoubleArray& assign_weights, int n_ghost) {
        if (centers.ndim() != 2 || assign_weights.ndim() != 2)
          throw Error(ErrorKind::kBadConfig, "centers and weights must be 2-d");
        pooling::GvladParams p;
        p.n_ghost = n_ghost;
        p.n_clusters = static_cast<int>(centers.shape(0)) - n_ghost;
        p.in_dim = static_cast<int>(centers.shape(1));
        p.centers = std::vector<double>(centers.data(), centers.data() + centers.size());
        p.assign_weights = std::vector<double>(
            assign_weights.data(), assign_weights.data() + assign_weights.size());
        return from_vector(pooling::ghostvlad_pool(to_frame_matrix(frames), p).values);
      },
      py::arg("frames"), py::arg("centers"), py::arg("assign_weights"),
      py::arg("n_ghost") = 0);

  m.def(
      "clp_aggregate",
      [](const FloatArray& frames, const FloatArray& posteriors, double tau) {
        pooling::CharacterAggregate agg = pooling::clp_aggregate(
            to_frame_matrix(frames), to_posterior_matrix(posteriors),
            {tau, pooling::PoolMethod::kClp});
        py::array_t<double> out({agg.blocks(), agg.block_dim()});
        std::memcpy(out.mutable_data(), agg.concatenated.data(),
                    agg.concatenated.size() * sizeof(double));
        return out;
      },
      py::arg("frames"), py::arg("posteriors"), py::arg("tau") = 1e-3,
      "Per-character aggregates as a K x D matrix.");

  m.def(
      "locally_connected",
      [](const DoubleArray& aggregate, const py::array_t<double, py::array::c_style |
                                                                     py::array::forcecast>&
             weights,
         const DoubleArray& biases, const std::string& activation) {
        if (aggregate.ndim() != 2 || weights.ndim() != 3 || biases.ndim() != 2)
          throw Error(ErrorKind::kBadConfig,
                      "expected aggregate K x D1, weights K x D2 x D1, biases K x D2");
        const int k = static_cast<int>(aggregate.shape(0));
        const int d1 = static_cast<int>(aggregate.shape(1));
        const int d2 = static_cast<int>(weights.shape(1));

        pooling::CharacterAggregate agg;
        for (int b = 0; b < k; ++b) {
          const double* row = aggregate.data() + static_cast<std::size_t>(b) * d1;
          agg.per_char.emplace_back(row, row + d1);
          agg.concatenated.insert(agg.concatenated.end(), row, row + d1);
        }
        pooling::LocallyConnectedParams p;
        p.activation = pooling::activation_from_string(activation);
        for (int b = 0; b < k; ++b) {
          const double* w = weights.data() + static_cast<std::size_t>(b) * d2 * d1;
          p.weights.emplace_back(w, w + static_cast<std::size_t>(d2) * d1);
          const double* bias = biases.data() + static_cast<std::size_t>(b) * d2;
          p.biases.emplace_back(bias, bias + d2);
        }
        return from_vector(pooling::locally_connected(agg, p).values);
      },
      py::arg("aggregate"), py::arg("weights"), py::arg("biases"),
      py::arg("activation") = "relu");

  // scoring ------------------------------------------------------------------
  m.def(
      "cosine",
      [](const DoubleArray& a, const DoubleArray& b) {
        return scoring::cosine(to_embedding(a), to_embedding(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "cohort_scores",
      [](const DoubleArray& e, const DoubleArray& cohort) {
        if (cohort.ndim() != 2)
          throw Error(ErrorKind::kBadConfig, "cohort must be 2-d (N x D)");
        scoring::CohortSet set;
        const int n = static_cast<int>(cohort.shape(0));
        const int d = static_cast<int>(cohort.shape(1));
        for (int i = 0; i < n; ++i) {
          const double* row = cohort.data() + static_cast<std::size_t>(i) * d;
          pooling::Embedding emb;
          emb.values.assign(row, row + d);
          set.entries.push_back({std::to_string(i), std::move(emb)});
        }
        return from_vector(scoring::cohort_scores(to_embedding(e), set));
      },
      py::arg("embedding"), py::arg("cohort"));

  m.def(
      "asnorm",
      [](double raw, const DoubleArray& enroll, const DoubleArray& test, int top_n) {
        return scoring::asnorm(raw, to_vector(enroll), to_vector(test), {top_n});
      },
      py::arg("raw"), py::arg("enroll_cohort_scores"), py::arg("test_cohort_scores"),
      py::arg("top_n") = 300);

  m.def(
      "phrase_similarity",
      [](const DoubleArray& a, const DoubleArray& b) {
        return scoring::phrase_similarity(to_posterior(a), to_posterior(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "total_score",
      [](double spk_norm, double phr, double alpha) {
        return scoring::total_score(spk_norm, phr, {alpha});
      },
      py::arg("spk_norm"), py::arg("phr"), py::arg("alpha") = 1.0);

  m.def(
      "fuse",
      [](const std::vector<DoubleArray>& systems) {
        std::vector<std::vector<double>> lists;
        lists.reserve(systems.size());
        for (const DoubleArray& s : systems) lists.push_back(to_vector(s));
        return from_vector(scoring::fuse(lists));
      },
      py::arg("score_lists"), "Equal-weighted element-wise sum.");

  m.def(
      "grid_search_alpha",
      [](const DoubleArray& spk_norm, const DoubleArray& phr,
         const std::vector<bool>& is_target, const DoubleArray& alpha_grid) {
        return scoring::grid_search_alpha(to_vector(spk_norm), to_vector(phr),
                                          is_target, to_vector(alpha_grid));
      },
      py::arg("spk_norm"), py::arg("phr"), py::arg("is_target"), py::arg("alpha_grid"));

  // metrics ------------------------------------------------------------------
  m.def(
      "eer",
      [](const DoubleArray& targets, const DoubleArray& nontargets) {
        return metrics::eer(make_score_set(targets, nontargets));
      },
      py::arg("targets"), py::arg("nontargets"),
      "Equal error rate as a fraction in [0, 1].");

  m.def(
      "min_dcf",
      [](const DoubleArray& targets, const DoubleArray& nontargets, double p_target,
         double c_miss, double c_fa) {
        return metrics::min_dcf(make_score_set(targets, nontargets),
                                {p_target, c_miss, c_fa});
      },
      py::arg("targets"), py::arg("nontargets"), py::arg("p_target") = 0.01,
      py::arg("c_miss") = 10.0, py::arg("c_fa") = 1.0);

  m.def(
      "det_points",
      [](const DoubleArray& targets, const DoubleArray& nontargets) {
        auto points = metrics::det_points(make_score_set(targets, nontargets));
        py::array_t<double> out({static_cast<py::ssize_t>(points.size()),
                                 static_cast<py::ssize_t>(3)});
        double* data = out.mutable_data();
        for (std::size_t i = 0; i < points.size(); ++i) {
          data[3 * i] = points[i].threshold;
          data[3 * i + 1] = points[i].far;
          data[3 * i + 2] = points[i].frr;
        }
        return out;
      },
      py::arg("targets"), py::arg("nontargets"),
      "(threshold, FAR, FRR) rows, thresholds ascending.");

  // archshapes ---------------------------------------------------------------
  m.def(
      "tdnn_shapes",
      [](long frames, const std::string& variant, long n_classes) {
        archshapes::TdnnVariant v;
        if (variant == "clp")
          v = archshapes::TdnnVariant::kClpEmbedding;
        else if (variant == "phrase")
          v = archshapes::TdnnVariant::kPhraseClassifier;
        else
          throw Error(ErrorKind::kBadConfig, "variant must be clp or phrase");
        return report_to_list(archshapes::tdnn_shapes(frames, v, n_classes));
      },
      py::arg("frames"), py::arg("variant") = "clp", py::arg("n_classes") = 963,
      "(layer, dims, symbolic) tuples.");

  m.def(
      "resnet_shapes",
      [](long frames) { return report_to_list(archshapes::resnet_shapes(frames)); },
      py::arg("frames"));
}
