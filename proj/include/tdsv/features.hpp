// include/tdsv/features.hpp

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

#ifndef TDSV_FEATURES_HPP_
#define TDSV_FEATURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tdsv/common.hpp"

namespace tdsv::features {

enum class FeatureKind { kLogmel, kStftMag, kGeneric };

/// Mono PCM audio, samples in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = 0;

  void validate() const;  // non-empty, finite, sample_rate > 0
};

/// Framing and spectral analysis settings.
///
/// Conventions pinned here (and relied on by the reference tests):
///   - periodic Hann window over the analysis window, zero-padded to n_fft;
///   - no pre-emphasis, no dither;
///   - mel scale 2595*log10(1 + f/700), triangular filters equally spaced in
///     mel between 0 Hz and Nyquist, area-unnormalized;
///   - log-mel values are ln(max(energy, log_floor)) of the power spectrum
///     passed through the filterbank.
struct FeatureConfig {
  double window_len = 0.020;  // seconds
  double hop_len = 0.010;     // seconds
  int n_fft = 512;
  int n_mels = 64;
  double log_floor = 1e-10;

  int window_samples(int sample_rate) const;
  int hop_samples(int sample_rate) const;
  void validate(int sample_rate) const;
};

/// T x D frame-level feature sequence, row-major.
struct FrameMatrix {
  std::vector<float> data;
  int rows = 0;  // T
  int cols = 0;  // D
  double frame_hop = 0.0;  // seconds between consecutive frames
  FeatureKind kind = FeatureKind::kGeneric;

  float at(int t, int d) const { return data[static_cast<std::size_t>(t) * cols + d]; }
  float& at(int t, int d) { return data[static_cast<std::size_t>(t) * cols + d]; }

  void validate() const;  // T >= 1, D >= 1, all finite
};

/// Reads a RIFF/WAVE file containing 16-bit PCM mono audio. Samples are
/// scaled to [-1, 1] by dividing by 32768.
AudioClip read_wav(const std::string& path);

/// Number of full analysis windows: 1 + floor((n_samples - win) / hop).
/// Throws kShortClip when the clip is shorter than one window.
int frame_count(std::size_t n_samples, const FeatureConfig& cfg, int sample_rate);

/// Per-frame magnitude spectrum, D = n_fft/2 + 1 bins.
FrameMatrix stft_frames(const AudioClip& clip, const FeatureConfig& cfg);

/// Per-frame log mel-filterbank energies, D = n_mels.
FrameMatrix logmel_frames(const AudioClip& clip, const FeatureConfig& cfg);

/// Contiguous crop with seeded-random length in [min_rows, min(max_rows, T)]
/// and seeded-random offset. Inputs shorter than min_rows are wrap-padded by
/// repetition to exactly min_rows rows.
FrameMatrix crop_frames(const FrameMatrix& fm, int min_rows, int max_rows,
                        std::uint64_t seed);

}  // namespace tdsv::features

#endif  // TDSV_FEATURES_HPP_
