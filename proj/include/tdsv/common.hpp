// include/tdsv/common.hpp

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

#ifndef TDSV_COMMON_HPP_
#define TDSV_COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace tdsv {

enum class ErrorKind {
  kIoError,           // file missing / unreadable / short read
  kMalformedFile,     // bad magic, truncated payload, unparsable text line
  kUnsupportedWav,    // valid RIFF but not PCM16 mono
  kShortClip,         // audio shorter than one analysis window
  kBadConfig,         // config violates its invariants
  kDimMismatch,       // incompatible vector/matrix dimensions
  kZeroNorm,          // all-zero embedding where a norm is required
  kSmallCohort,       // fewer than two cohort scores after top-N selection
  kDegenerateCohort,  // zero variance in a selected cohort subset
  kMissingInput,      // a required side input was not provided
  kUnresolvedId,      // id referenced by a trial/map is not present
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Deterministic random source used by all seeded operations.
///
/// Draws are hand-rolled on top of std::mt19937_64 (whose output sequence is
/// fixed by the standard) instead of the std <random> distributions, so that
/// identical seeds give identical streams on every platform and standard
/// library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::kBadConfig, "Rng::below: n must be > 0");
    std::uint64_t limit = UINT64_MAX / n * n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline bool is_finite(double x) { return std::isfinite(x); }

}  // namespace tdsv

#endif  // TDSV_COMMON_HPP_
