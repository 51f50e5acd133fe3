// tests/unit/test_features.cpp

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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tdsv/common.hpp"
#include "tdsv/features.hpp"

using namespace tdsv;
using features::AudioClip;
using features::FeatureConfig;
using features::FrameMatrix;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "tdsv_feature_tests";
  fs::create_directories(dir);
  return dir / name;
}

void append_u32(std::string& buf, std::uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
  buf.push_back(static_cast<char>((v >> 16) & 0xff));
  buf.push_back(static_cast<char>(v >> 24));
}

void append_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>(v >> 8));
}

fs::path write_wav(const std::string& name, const std::vector<std::int16_t>& samples,
                   int sample_rate, int channels = 1) {
  std::string data;
  for (std::int16_t s : samples)
    append_u16(data, static_cast<std::uint16_t>(s));

  std::string buf = "RIFF";
  append_u32(buf, static_cast<std::uint32_t>(36 + data.size()));
  buf += "WAVEfmt ";
  append_u32(buf, 16);
  append_u16(buf, 1);  // PCM
  append_u16(buf, static_cast<std::uint16_t>(channels));
  append_u32(buf, static_cast<std::uint32_t>(sample_rate));
  append_u32(buf, static_cast<std::uint32_t>(sample_rate * channels * 2));
  append_u16(buf, static_cast<std::uint16_t>(channels * 2));
  append_u16(buf, 16);  // bits
  buf += "data";
  append_u32(buf, static_cast<std::uint32_t>(data.size()));
  buf += data;

  fs::path path = temp_file(name);
  std::ofstream out(path, std::ios::binary);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  return path;
}

AudioClip sine_clip(double freq, int sample_rate, int n_samples, float amp = 0.5f) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(n_samples);
  for (int i = 0; i < n_samples; ++i)
    clip.samples[i] =
        amp * static_cast<float>(std::sin(2.0 * M_PI * freq * i / sample_rate));
  return clip;
}

AudioClip noise_clip(Rng& rng, int sample_rate, int n_samples, float amp = 0.2f) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(n_samples);
  for (float& s : clip.samples)
    s = std::clamp(static_cast<float>(amp * rng.gauss()), -4.0f * amp, 4.0f * amp);
  return clip;
}

}  // namespace

TEST_CASE("read_wav: silence, scaling endpoint and error kinds") {
  std::vector<std::int16_t> zeros(16000, 0);
  AudioClip clip = features::read_wav(write_wav("silence.wav", zeros, 16000).string());
  CHECK(clip.sample_rate == 16000);
  REQUIRE(clip.samples.size() == 16000);
  for (float s : clip.samples) CHECK(s == 0.0f);

  AudioClip endpoint =
      features::read_wav(write_wav("endpoint.wav", {-32768, 32767}, 8000).string());
  CHECK(endpoint.samples[0] == -1.0f);
  CHECK(endpoint.samples[1] == doctest::Approx(32767.0 / 32768.0));

  try {
    features::read_wav(write_wav("stereo.wav", {0, 0, 0, 0}, 16000, 2).string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnsupportedWav);
  }

  fs::path garbage = temp_file("garbage.wav");
  std::ofstream(garbage, std::ios::binary) << "not a wav at all";
  try {
    features::read_wav(garbage.string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMalformedFile);
  }

  try {
    features::read_wav((temp_file("nope") / "missing.wav").string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIoError);
  }
}

TEST_CASE("frame_count: reference arithmetic") {
  FeatureConfig cfg;  // 20 ms window, 10 ms hop
  CHECK(features::frame_count(16000, cfg, 16000) == 99);
  CHECK(features::frame_count(320, cfg, 16000) == 1);
  CHECK(features::frame_count(480, cfg, 16000) == 2);
  try {
    features::frame_count(319, cfg, 16000);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kShortClip);
  }
}

TEST_CASE("stft_frames: 257 bins, frame count, zero input") {
  FeatureConfig cfg;
  AudioClip clip = sine_clip(440.0, 16000, 8000);
  FrameMatrix fm = features::stft_frames(clip, cfg);
  CHECK(fm.cols == 257);
  CHECK(fm.rows == features::frame_count(clip.samples.size(), cfg, 16000));
  CHECK(fm.kind == features::FeatureKind::kStftMag);

  AudioClip silence;
  silence.sample_rate = 16000;
  silence.samples.assign(1600, 0.0f);
  FrameMatrix zeros = features::stft_frames(silence, cfg);
  for (float v : zeros.data) CHECK(v == 0.0f);
}

TEST_CASE("stft_frames: bin-center sinusoid peaks at its bin in every frame") {
  FeatureConfig cfg;
  const int sr = 16000, bin = 32;  // 32 * 16000/512 = 1000 Hz
  double freq = static_cast<double>(bin) * sr / cfg.n_fft;
  AudioClip clip = sine_clip(freq, sr, 4800);
  FrameMatrix fm = features::stft_frames(clip, cfg);

  const int win = cfg.window_samples(sr), hop = cfg.hop_samples(sr);
  for (int t = 0; t < fm.rows; ++t) {
    int argmax = 0;
    for (int k = 1; k < fm.cols; ++k)
      if (fm.at(t, k) > fm.at(t, argmax)) argmax = k;
    CHECK(argmax == bin);

    // magnitude at the peak matches a direct DFT evaluation
    std::vector<double> windowed(win);
    for (int i = 0; i < win; ++i) {
      double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / win);
      windowed[i] = clip.samples[static_cast<std::size_t>(t) * hop + i] * w;
    }
    double ref = oracles::goertzel_bin_magnitude(windowed, cfg.n_fft, bin);
    CHECK(std::abs(fm.at(t, bin) - ref) < 1e-5 * std::max(1.0, ref));
  }
}

TEST_CASE("logmel_frames: 64 bands, floor on silence") {
  FeatureConfig cfg;
  AudioClip silence;
  silence.sample_rate = 16000;
  silence.samples.assign(3200, 0.0f);
  FrameMatrix fm = features::logmel_frames(silence, cfg);
  CHECK(fm.cols == 64);
  CHECK(fm.rows == features::frame_count(3200, cfg, 16000));
  const float floor_value = static_cast<float>(std::log(cfg.log_floor));
  for (float v : fm.data) CHECK(v == floor_value);
}

TEST_CASE("logmel_frames match the naive reference implementation") {
  FeatureConfig cfg;
  Rng rng(500);
  for (int rep = 0; rep < 3; ++rep) {
    AudioClip clip = noise_clip(rng, 16000, 1600);
    FrameMatrix fm = features::logmel_frames(clip, cfg);
    auto ref = oracles::logmel_naive(clip.samples, 16000, 320, 160, cfg.n_fft,
                                     cfg.n_mels, cfg.log_floor);
    REQUIRE(fm.rows == static_cast<int>(ref.size()));
    for (int t = 0; t < fm.rows; ++t)
      for (int m = 0; m < fm.cols; ++m) {
        double got = fm.at(t, m), want = ref[t][m];
        CHECK(std::abs(got - want) <=
              1e-6 * std::max(1.0, std::abs(got) + std::abs(want)));
      }
  }
}

TEST_CASE("logmel is monotone under input gain") {
  FeatureConfig cfg;
  Rng rng(501);
  AudioClip clip = noise_clip(rng, 16000, 1600, 0.06f);  // headroom for the gain
  AudioClip louder = clip;
  for (float& s : louder.samples) s *= 4.0f;

  FrameMatrix quiet = features::logmel_frames(clip, cfg);
  FrameMatrix loud = features::logmel_frames(louder, cfg);
  for (std::size_t i = 0; i < quiet.data.size(); ++i)
    CHECK(loud.data[i] >= quiet.data[i]);
}

TEST_CASE("feature extraction is deterministic") {
  FeatureConfig cfg;
  Rng rng(502);
  AudioClip clip = noise_clip(rng, 16000, 2400);
  FrameMatrix a = features::logmel_frames(clip, cfg);
  FrameMatrix b = features::logmel_frames(clip, cfg);
  CHECK(a.data == b.data);
  FrameMatrix sa = features::stft_frames(clip, cfg);
  FrameMatrix sb = features::stft_frames(clip, cfg);
  CHECK(sa.data == sb.data);
}

TEST_CASE("crop_frames: seeded contiguous crop within the requested range") {
  Rng rng(503);
  FrameMatrix fm;
  fm.rows = 500;
  fm.cols = 3;
  fm.data.resize(1500);
  for (std::size_t i = 0; i < fm.data.size(); ++i)
    fm.data[i] = static_cast<float>(i);

  FrameMatrix cropped = features::crop_frames(fm, 200, 300, 42);
  CHECK(cropped.rows >= 200);
  CHECK(cropped.rows <= 300);
  CHECK(cropped.cols == 3);
  // rows form a contiguous slice: recover the offset from the first value
  int offset = static_cast<int>(cropped.at(0, 0)) / 3;
  for (int t = 0; t < cropped.rows; ++t)
    for (int d = 0; d < 3; ++d)
      CHECK(cropped.at(t, d) == fm.at(offset + t, d));

  FrameMatrix again = features::crop_frames(fm, 200, 300, 42);
  CHECK(again.rows == cropped.rows);
  CHECK(again.data == cropped.data);

  FrameMatrix other = features::crop_frames(fm, 200, 300, 43);
  bool differs = other.rows != cropped.rows || other.data != cropped.data;
  CHECK(differs);
}

TEST_CASE("crop_frames: short input is wrap-padded to min rows") {
  FrameMatrix fm;
  fm.rows = 100;
  fm.cols = 2;
  fm.data.resize(200);
  for (std::size_t i = 0; i < fm.data.size(); ++i)
    fm.data[i] = static_cast<float>(i);

  FrameMatrix padded = features::crop_frames(fm, 200, 300, 7);
  REQUIRE(padded.rows == 200);
  for (int t = 0; t < 200; ++t)
    for (int d = 0; d < 2; ++d)
      CHECK(padded.at(t, d) == fm.at(t % 100, d));
}

TEST_CASE("config validation rejects inconsistent settings") {
  FeatureConfig cfg;
  cfg.hop_len = 0.04;  // hop > window
  CHECK_THROWS_AS(features::frame_count(16000, cfg, 16000), Error);
  cfg = {};
  cfg.n_fft = 100;  // smaller than the 320-sample window
  CHECK_THROWS_AS(features::frame_count(16000, cfg, 16000), Error);
  cfg = {};
  cfg.log_floor = 0.0;
  CHECK_THROWS_AS(features::frame_count(16000, cfg, 16000), Error);
}
