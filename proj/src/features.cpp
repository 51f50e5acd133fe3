// src/features.cpp

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

#include "tdsv/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>

namespace tdsv::features {

void AudioClip::validate() const {
  if (samples.empty())
    throw Error(ErrorKind::kBadConfig, "audio clip is empty");
  if (sample_rate <= 0)
    throw Error(ErrorKind::kBadConfig, "sample rate must be positive");
  for (float s : samples) {
    if (!std::isfinite(s))
      throw Error(ErrorKind::kBadConfig, "audio clip has a non-finite sample");
    if (s < -1.0f || s > 1.0f)
      throw Error(ErrorKind::kBadConfig, "audio sample outside [-1, 1]");
  }
}

int FeatureConfig::window_samples(int sample_rate) const {
  return static_cast<int>(std::lround(window_len * sample_rate));
}

int FeatureConfig::hop_samples(int sample_rate) const {
  return static_cast<int>(std::lround(hop_len * sample_rate));
}

void FeatureConfig::validate(int sample_rate) const {
  if (sample_rate <= 0)
    throw Error(ErrorKind::kBadConfig, "sample rate must be positive");
  int win = window_samples(sample_rate), hop = hop_samples(sample_rate);
  if (hop < 1 || hop > win)
    throw Error(ErrorKind::kBadConfig, "need 0 < hop_len <= window_len");
  if (n_fft < win)
    throw Error(ErrorKind::kBadConfig, "n_fft must cover the analysis window");
  if (n_mels < 1)
    throw Error(ErrorKind::kBadConfig, "n_mels must be >= 1");
  if (!(log_floor > 0.0) || !is_finite(log_floor))
    throw Error(ErrorKind::kBadConfig, "log_floor must be > 0");
}

void FrameMatrix::validate() const {
  if (rows < 1 || cols < 1)
    throw Error(ErrorKind::kBadConfig, "frame matrix must be at least 1x1");
  if (data.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorKind::kBadConfig, "frame matrix storage size mismatch");
  for (float v : data)
    if (!std::isfinite(v))
      throw Error(ErrorKind::kBadConfig, "frame matrix has a non-finite entry");
}

namespace {

std::uint32_t read_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw Error(ErrorKind::kMalformedFile, "truncated WAV header");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
}

std::uint16_t read_u16le(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  if (!in) throw Error(ErrorKind::kMalformedFile, "truncated WAV header");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw Error(ErrorKind::kMalformedFile, path + ": not a RIFF file");
  read_u32le(in);  // overall size, unused
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw Error(ErrorKind::kMalformedFile, path + ": not a WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  std::vector<char> payload;

  while (in.peek() != EOF) {
    in.read(tag, 4);
    if (!in) break;
    std::uint32_t size = read_u32le(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16)
        throw Error(ErrorKind::kMalformedFile, path + ": fmt chunk too small");
      format = read_u16le(in);
      channels = read_u16le(in);
      sample_rate = read_u32le(in);
      read_u32le(in);  // byte rate
      read_u16le(in);  // block align
      bits = read_u16le(in);
      in.ignore(size - 16 + (size & 1));
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt)
        throw Error(ErrorKind::kMalformedFile, path + ": data chunk before fmt");
      payload.resize(size);
      in.read(payload.data(), size);
      if (!in)
        throw Error(ErrorKind::kMalformedFile, path + ": truncated data chunk");
      break;
    } else {
      in.ignore(static_cast<std::streamsize>(size) + (size & 1));
      if (!in)
        throw Error(ErrorKind::kMalformedFile, path + ": truncated chunk");
    }
  }

  if (!have_fmt)
    throw Error(ErrorKind::kMalformedFile, path + ": missing fmt chunk");
  if (format != 1)
    throw Error(ErrorKind::kUnsupportedWav,
                path + ": unsupported encoding (want PCM)");
  if (channels != 1)
    throw Error(ErrorKind::kUnsupportedWav,
                path + ": unsupported channel count (want mono)");
  if (bits != 16)
    throw Error(ErrorKind::kUnsupportedWav,
                path + ": unsupported sample width (want 16-bit)");
  if (payload.size() < 2)
    throw Error(ErrorKind::kMalformedFile, path + ": empty data chunk");
  if (sample_rate == 0)
    throw Error(ErrorKind::kMalformedFile, path + ": zero sample rate");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  std::size_t n = payload.size() / 2;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int16_t v = static_cast<std::int16_t>(
        static_cast<unsigned char>(payload[2 * i]) |
        (static_cast<unsigned char>(payload[2 * i + 1]) << 8));
    clip.samples[i] = static_cast<float>(v) / 32768.0f;
  }
  return clip;
}

int frame_count(std::size_t n_samples, const FeatureConfig& cfg, int sample_rate) {
  cfg.validate(sample_rate);
  std::size_t win = static_cast<std::size_t>(cfg.window_samples(sample_rate));
  std::size_t hop = static_cast<std::size_t>(cfg.hop_samples(sample_rate));
  if (n_samples < win)
    throw Error(ErrorKind::kShortClip, "clip shorter than one analysis window");
  return static_cast<int>(1 + (n_samples - win) / hop);
}

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 FFT; length must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * M_PI / static_cast<double>(len);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// O(n^2) fallback for non-power-of-two transform sizes.
void dft_naive(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double ang = -2.0 * M_PI * static_cast<double>(k) *
                   static_cast<double>(i) / static_cast<double>(n);
      sum += a[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = sum;
  }
  a = std::move(out);
}

std::vector<double> hann_periodic(int win) {
  std::vector<double> w(win);
  for (int i = 0; i < win; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / win);
  return w;
}

// Windowed, zero-padded forward transform of one frame.
void frame_spectrum(const float* frame, int win, const std::vector<double>& window,
                    std::vector<std::complex<double>>& buf) {
  const std::size_t n_fft = buf.size();
  for (int i = 0; i < win; ++i)
    buf[i] = std::complex<double>(static_cast<double>(frame[i]) * window[i], 0.0);
  for (std::size_t i = win; i < n_fft; ++i) buf[i] = 0.0;
  if (is_pow2(static_cast<int>(n_fft)))
    fft_radix2(buf);
  else
    dft_naive(buf);
}

std::vector<double> mel_filterbank(int n_mels, int n_fft, int sample_rate) {
  auto hz_to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto mel_to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };

  const int n_bins = n_fft / 2 + 1;
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_mels + 2);
  for (int j = 0; j < n_mels + 2; ++j)
    edges[j] = mel_to_hz(mel_hi * j / (n_mels + 1));

  std::vector<double> filters(static_cast<std::size_t>(n_mels) * n_bins, 0.0);
  for (int m = 0; m < n_mels; ++m) {
    double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      double f = static_cast<double>(k) * sample_rate / n_fft;
      double w = 0.0;
      if (f > lo && f < hi)
        w = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
      filters[static_cast<std::size_t>(m) * n_bins + k] = w;
    }
  }
  return filters;
}

}  // namespace

FrameMatrix stft_frames(const AudioClip& clip, const FeatureConfig& cfg) {
  clip.validate();
  cfg.validate(clip.sample_rate);
  const int win = cfg.window_samples(clip.sample_rate);
  const int hop = cfg.hop_samples(clip.sample_rate);
  const int n_frames = frame_count(clip.samples.size(), cfg, clip.sample_rate);
  const int n_bins = cfg.n_fft / 2 + 1;

  std::vector<double> window = hann_periodic(win);
  std::vector<std::complex<double>> buf(cfg.n_fft);

  FrameMatrix fm;
  fm.rows = n_frames;
  fm.cols = n_bins;
  fm.frame_hop = static_cast<double>(hop) / clip.sample_rate;
  fm.kind = FeatureKind::kStftMag;
  fm.data.resize(static_cast<std::size_t>(n_frames) * n_bins);
  for (int t = 0; t < n_frames; ++t) {
    frame_spectrum(&clip.samples[static_cast<std::size_t>(t) * hop], win, window, buf);
    for (int k = 0; k < n_bins; ++k)
      fm.at(t, k) = static_cast<float>(std::abs(buf[k]));
  }
  return fm;
}

FrameMatrix logmel_frames(const AudioClip& clip, const FeatureConfig& cfg) {
  clip.validate();
  cfg.validate(clip.sample_rate);
  const int win = cfg.window_samples(clip.sample_rate);
  const int hop = cfg.hop_samples(clip.sample_rate);
  const int n_frames = frame_count(clip.samples.size(), cfg, clip.sample_rate);
  const int n_bins = cfg.n_fft / 2 + 1;

  std::vector<double> window = hann_periodic(win);
  std::vector<double> filters = mel_filterbank(cfg.n_mels, cfg.n_fft, clip.sample_rate);
  std::vector<std::complex<double>> buf(cfg.n_fft);
  std::vector<double> power(n_bins);

  FrameMatrix fm;
  fm.rows = n_frames;
  fm.cols = cfg.n_mels;
  fm.frame_hop = static_cast<double>(hop) / clip.sample_rate;
  fm.kind = FeatureKind::kLogmel;
  fm.data.resize(static_cast<std::size_t>(n_frames) * cfg.n_mels);
  for (int t = 0; t < n_frames; ++t) {
    frame_spectrum(&clip.samples[static_cast<std::size_t>(t) * hop], win, window, buf);
    for (int k = 0; k < n_bins; ++k) {
      double re = buf[k].real(), im = buf[k].imag();
      power[k] = re * re + im * im;
    }
    for (int m = 0; m < cfg.n_mels; ++m) {
      const double* w = &filters[static_cast<std::size_t>(m) * n_bins];
      double energy = 0.0;
      for (int k = 0; k < n_bins; ++k) energy += w[k] * power[k];
      fm.at(t, m) = static_cast<float>(std::log(std::max(energy, cfg.log_floor)));
    }
  }
  return fm;
}

FrameMatrix crop_frames(const FrameMatrix& fm, int min_rows, int max_rows,
                        std::uint64_t seed) {
  fm.validate();
  if (min_rows < 1 || min_rows > max_rows)
    throw Error(ErrorKind::kBadConfig, "need 1 <= min_rows <= max_rows");

  FrameMatrix out;
  out.cols = fm.cols;
  out.frame_hop = fm.frame_hop;
  out.kind = fm.kind;

  if (fm.rows < min_rows) {
    // wrap-pad by repetition up to min_rows
    out.rows = min_rows;
    out.data.resize(static_cast<std::size_t>(min_rows) * fm.cols);
    for (int t = 0; t < min_rows; ++t) {
      const float* src = &fm.data[static_cast<std::size_t>(t % fm.rows) * fm.cols];
      std::copy(src, src + fm.cols, &out.data[static_cast<std::size_t>(t) * fm.cols]);
    }
    return out;
  }

  Rng rng(seed);
  int hi = std::min(max_rows, fm.rows);
  int length = min_rows + static_cast<int>(rng.below(hi - min_rows + 1));
  int offset = static_cast<int>(rng.below(fm.rows - length + 1));

  out.rows = length;
  out.data.assign(fm.data.begin() + static_cast<std::size_t>(offset) * fm.cols,
                  fm.data.begin() + static_cast<std::size_t>(offset + length) * fm.cols);
  return out;
}

}  // namespace tdsv::features
