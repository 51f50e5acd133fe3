// include/tdsv/formats.hpp

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

// On-disk containers. All binary formats are little-endian:
//
//   FMX1  "FMX1" | u32 T | u32 D | T*D f32, row-major
//   CPM1  "CPM1" | u32 T | u32 K | T*K f32, row-major
//   EMB1  "EMB1" | u32 count | u32 dim | count * (u16 id_len | id | dim f32)
//   PPO1  "PPO1" | u32 count | u32 M   | count * (u16 id_len | id | M f32)
//   PRM1  "PRM1" | u32 count | count * (u16 name_len | name |
//                                       u32 rows | u32 cols | rows*cols f32)
//
// Text formats are tab-separated, one record per line:
//
//   scores       model-id <TAB> test-id <TAB> score [<TAB> extra...]
//   trial list   model-id <TAB> test-id
//   key          model-id <TAB> test-id <TAB> target|nontarget [<TAB> 4way]
//   enroll map   model-id <TAB> utt1,utt2,utt3

#ifndef TDSV_FORMATS_HPP_
#define TDSV_FORMATS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tdsv/common.hpp"
#include "tdsv/features.hpp"
#include "tdsv/pooling.hpp"
#include "tdsv/scoring.hpp"

namespace tdsv::formats {

void write_frame_matrix(const std::string& path, const features::FrameMatrix& fm);
features::FrameMatrix read_frame_matrix(const std::string& path);

void write_char_posteriors(const std::string& path,
                           const pooling::CharPosteriorMatrix& post);
pooling::CharPosteriorMatrix read_char_posteriors(const std::string& path);

struct EmbeddingRecord {
  std::string id;
  pooling::Embedding embedding;
};

void write_embeddings(const std::string& path,
                      const std::vector<EmbeddingRecord>& records);
std::vector<EmbeddingRecord> read_embeddings(const std::string& path);

struct PhrasePosteriorRecord {
  std::string id;
  scoring::PhrasePosterior posterior;
};

void write_phrase_posteriors(const std::string& path,
                             const std::vector<PhrasePosteriorRecord>& records);
std::vector<PhrasePosteriorRecord> read_phrase_posteriors(const std::string& path);

/// Named f32 matrix container backing the pooling parameter sets.
struct ParamBlock {
  std::string name;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> values;  // row-major, rows*cols
};

class ParamContainer {
 public:
  void add(ParamBlock block);
  bool has(const std::string& name) const;
  const ParamBlock& get(const std::string& name) const;  // throws kMissingInput
  const std::vector<ParamBlock>& blocks() const { return blocks_; }

 private:
  std::vector<ParamBlock> blocks_;
};

void write_params(const std::string& path, const ParamContainer& params);
ParamContainer read_params(const std::string& path);

// Block naming scheme used for the three pooling parameter sets:
//   lc.W.<k>, lc.b.<k>, lc.activation (1x1 code: 0 relu, 1 tanh, 2 identity)
//   sap.W, sap.b, sap.context
//   gvlad.centers, gvlad.assign, gvlad.n_ghost (1x1)
ParamContainer to_container(const pooling::LocallyConnectedParams& p);
ParamContainer to_container(const pooling::SapParams& p);
ParamContainer to_container(const pooling::GvladParams& p);
pooling::LocallyConnectedParams lc_from_container(const ParamContainer& c);
pooling::SapParams sap_from_container(const ParamContainer& c);
pooling::GvladParams gvlad_from_container(const ParamContainer& c);

struct ScoreRecord {
  std::string model_id;
  std::string test_id;
  double score = 0.0;
  std::vector<double> extras;  // optional diagnostic columns
};

/// Scores are rendered with %.17g so that parsing the file reproduces the
/// exact doubles that were written.
void write_scores(const std::string& path, const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> read_scores(const std::string& path);

struct TrialRecord {
  std::string model_id;
  std::string test_id;
};

void write_trial_list(const std::string& path, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trial_list(const std::string& path);

struct KeyRecord {
  std::string model_id;
  std::string test_id;
  bool target = false;
  std::string four_way;  // optional diagnostic label, may be empty
};

void write_key(const std::string& path, const std::vector<KeyRecord>& records);
std::vector<KeyRecord> read_key(const std::string& path);

struct EnrollmentRecord {
  std::string model_id;
  std::vector<std::string> utterance_ids;  // exactly 3
};

void write_enroll_map(const std::string& path,
                      const std::vector<EnrollmentRecord>& records);
std::vector<EnrollmentRecord> read_enroll_map(const std::string& path);

}  // namespace tdsv::formats

#endif  // TDSV_FORMATS_HPP_
