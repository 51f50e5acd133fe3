// src/formats.cpp

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

#include "tdsv/formats.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tdsv::formats {

namespace {

void put_u16(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

void put_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

std::uint16_t get_u16(std::istream& in, const std::string& path) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  if (!in) throw Error(ErrorKind::kMalformedFile, path + ": truncated file");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw Error(ErrorKind::kMalformedFile, path + ": truncated file");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
}

float get_f32(std::istream& in, const std::string& path) {
  std::uint32_t bits = get_u32(in, path);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path);
  return in;
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, magic, 4) != 0)
    throw Error(ErrorKind::kMalformedFile,
                path + ": bad magic (expected " + magic + ")");
}

void put_id(std::ostream& out, const std::string& id) {
  if (id.size() > 0xffff)
    throw Error(ErrorKind::kBadConfig, "record id longer than 65535 bytes");
  put_u16(out, static_cast<std::uint16_t>(id.size()));
  out.write(id.data(), static_cast<std::streamsize>(id.size()));
}

std::string get_id(std::istream& in, const std::string& path) {
  std::uint16_t len = get_u16(in, path);
  std::string id(len, '\0');
  in.read(id.data(), len);
  if (!in) throw Error(ErrorKind::kMalformedFile, path + ": truncated id");
  return id;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::kIoError, "write failed: " + path);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

double parse_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorKind::kMalformedFile, path + ": not a number: " + s);
  return v;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_frame_matrix(const std::string& path, const features::FrameMatrix& fm) {
  fm.validate();
  std::ofstream out = open_out(path);
  out.write("FMX1", 4);
  put_u32(out, static_cast<std::uint32_t>(fm.rows));
  put_u32(out, static_cast<std::uint32_t>(fm.cols));
  for (float v : fm.data) put_f32(out, v);
  finish_write(out, path);
}

features::FrameMatrix read_frame_matrix(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "FMX1", path);
  features::FrameMatrix fm;
  fm.rows = static_cast<int>(get_u32(in, path));
  fm.cols = static_cast<int>(get_u32(in, path));
  if (fm.rows < 1 || fm.cols < 1)
    throw Error(ErrorKind::kMalformedFile, path + ": empty frame matrix");
  fm.data.resize(static_cast<std::size_t>(fm.rows) * fm.cols);
  for (float& v : fm.data) v = get_f32(in, path);
  for (float v : fm.data)
    if (!std::isfinite(v))
      throw Error(ErrorKind::kMalformedFile, path + ": non-finite value");
  return fm;
}

void write_char_posteriors(const std::string& path,
                           const pooling::CharPosteriorMatrix& post) {
  post.validate();
  std::ofstream out = open_out(path);
  out.write("CPM1", 4);
  put_u32(out, static_cast<std::uint32_t>(post.rows));
  put_u32(out, static_cast<std::uint32_t>(post.cols));
  for (float v : post.data) put_f32(out, v);
  finish_write(out, path);
}

pooling::CharPosteriorMatrix read_char_posteriors(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "CPM1", path);
  pooling::CharPosteriorMatrix post;
  post.rows = static_cast<int>(get_u32(in, path));
  post.cols = static_cast<int>(get_u32(in, path));
  if (post.rows < 1 || post.cols < 1)
    throw Error(ErrorKind::kMalformedFile, path + ": empty posterior matrix");
  post.data.resize(static_cast<std::size_t>(post.rows) * post.cols);
  for (float& v : post.data) v = get_f32(in, path);
  post.charset = post.cols == 29 ? pooling::CharsetSpec::ctc_english()
                                 : pooling::CharsetSpec::generic(post.cols);
  try {
    post.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kMalformedFile, path + ": " + e.what());
  }
  return post;
}

void write_embeddings(const std::string& path,
                      const std::vector<EmbeddingRecord>& records) {
  if (records.empty())
    throw Error(ErrorKind::kBadConfig, "no embedding records to write");
  int dim = records.front().embedding.dim();
  for (const EmbeddingRecord& r : records)
    if (r.embedding.dim() != dim)
      throw Error(ErrorKind::kDimMismatch, "embedding record dims differ");

  std::ofstream out = open_out(path);
  out.write("EMB1", 4);
  put_u32(out, static_cast<std::uint32_t>(records.size()));
  put_u32(out, static_cast<std::uint32_t>(dim));
  for (const EmbeddingRecord& r : records) {
    put_id(out, r.id);
    for (double v : r.embedding.values) put_f32(out, static_cast<float>(v));
  }
  finish_write(out, path);
}

std::vector<EmbeddingRecord> read_embeddings(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "EMB1", path);
  std::uint32_t count = get_u32(in, path);
  std::uint32_t dim = get_u32(in, path);
  if (count == 0 || dim == 0)
    throw Error(ErrorKind::kMalformedFile, path + ": empty embedding file");
  std::vector<EmbeddingRecord> records(count);
  for (EmbeddingRecord& r : records) {
    r.id = get_id(in, path);
    r.embedding.values.resize(dim);
    for (double& v : r.embedding.values) {
      v = get_f32(in, path);
      if (!std::isfinite(v))
        throw Error(ErrorKind::kMalformedFile, path + ": non-finite value");
    }
  }
  return records;
}

void write_phrase_posteriors(const std::string& path,
                             const std::vector<PhrasePosteriorRecord>& records) {
  if (records.empty())
    throw Error(ErrorKind::kBadConfig, "no posterior records to write");
  int m = records.front().posterior.size();
  for (const PhrasePosteriorRecord& r : records) {
    if (r.posterior.size() != m)
      throw Error(ErrorKind::kDimMismatch, "posterior record sizes differ");
    r.posterior.validate();
  }

  std::ofstream out = open_out(path);
  out.write("PPO1", 4);
  put_u32(out, static_cast<std::uint32_t>(records.size()));
  put_u32(out, static_cast<std::uint32_t>(m));
  for (const PhrasePosteriorRecord& r : records) {
    put_id(out, r.id);
    for (double v : r.posterior.probs) put_f32(out, static_cast<float>(v));
  }
  finish_write(out, path);
}

std::vector<PhrasePosteriorRecord> read_phrase_posteriors(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "PPO1", path);
  std::uint32_t count = get_u32(in, path);
  std::uint32_t m = get_u32(in, path);
  if (count == 0 || m == 0)
    throw Error(ErrorKind::kMalformedFile, path + ": empty posterior file");
  std::vector<PhrasePosteriorRecord> records(count);
  for (PhrasePosteriorRecord& r : records) {
    r.id = get_id(in, path);
    r.posterior.probs.resize(m);
    for (double& v : r.posterior.probs) v = get_f32(in, path);
    try {
      r.posterior.validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::kMalformedFile, path + ": " + e.what());
    }
  }
  return records;
}

void ParamContainer::add(ParamBlock block) {
  if (block.values.size() !=
      static_cast<std::size_t>(block.rows) * block.cols)
    throw Error(ErrorKind::kBadConfig, "param block storage size mismatch");
  if (has(block.name))
    throw Error(ErrorKind::kBadConfig, "duplicate param block: " + block.name);
  blocks_.push_back(std::move(block));
}

bool ParamContainer::has(const std::string& name) const {
  for (const ParamBlock& b : blocks_)
    if (b.name == name) return true;
  return false;
}

const ParamBlock& ParamContainer::get(const std::string& name) const {
  for (const ParamBlock& b : blocks_)
    if (b.name == name) return b;
  throw Error(ErrorKind::kMissingInput, "param block not found: " + name);
}

void write_params(const std::string& path, const ParamContainer& params) {
  std::ofstream out = open_out(path);
  out.write("PRM1", 4);
  put_u32(out, static_cast<std::uint32_t>(params.blocks().size()));
  for (const ParamBlock& b : params.blocks()) {
    put_id(out, b.name);
    put_u32(out, b.rows);
    put_u32(out, b.cols);
    for (double v : b.values) put_f32(out, static_cast<float>(v));
  }
  finish_write(out, path);
}

ParamContainer read_params(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "PRM1", path);
  std::uint32_t count = get_u32(in, path);
  ParamContainer params;
  for (std::uint32_t i = 0; i < count; ++i) {
    ParamBlock b;
    b.name = get_id(in, path);
    b.rows = get_u32(in, path);
    b.cols = get_u32(in, path);
    b.values.resize(static_cast<std::size_t>(b.rows) * b.cols);
    for (double& v : b.values) v = get_f32(in, path);
    params.add(std::move(b));
  }
  return params;
}

namespace {

ParamBlock matrix_block(const std::string& name, std::uint32_t rows,
                        std::uint32_t cols, std::vector<double> values) {
  ParamBlock b;
  b.name = name;
  b.rows = rows;
  b.cols = cols;
  b.values = std::move(values);
  return b;
}

ParamBlock scalar_block(const std::string& name, double value) {
  return matrix_block(name, 1, 1, {value});
}

}  // namespace

ParamContainer to_container(const pooling::LocallyConnectedParams& p) {
  p.validate();
  ParamContainer c;
  std::uint32_t d2 = static_cast<std::uint32_t>(p.out_dim());
  std::uint32_t d1 = static_cast<std::uint32_t>(p.in_dim());
  for (int k = 0; k < p.blocks(); ++k) {
    c.add(matrix_block("lc.W." + std::to_string(k), d2, d1, p.weights[k]));
    c.add(matrix_block("lc.b." + std::to_string(k), 1, d2, p.biases[k]));
  }
  c.add(scalar_block("lc.activation", static_cast<double>(p.activation)));
  return c;
}

ParamContainer to_container(const pooling::SapParams& p) {
  p.validate();
  ParamContainer c;
  c.add(matrix_block("sap.W", static_cast<std::uint32_t>(p.proj_rows),
                     static_cast<std::uint32_t>(p.in_dim), p.projection));
  c.add(matrix_block("sap.b", 1, static_cast<std::uint32_t>(p.proj_rows), p.bias));
  c.add(matrix_block("sap.context", 1, static_cast<std::uint32_t>(p.proj_rows),
                     p.context));
  return c;
}

ParamContainer to_container(const pooling::GvladParams& p) {
  p.validate();
  ParamContainer c;
  c.add(matrix_block("gvlad.centers",
                     static_cast<std::uint32_t>(p.total_clusters()),
                     static_cast<std::uint32_t>(p.in_dim), p.centers));
  c.add(matrix_block("gvlad.assign",
                     static_cast<std::uint32_t>(p.total_clusters()),
                     static_cast<std::uint32_t>(p.in_dim), p.assign_weights));
  c.add(scalar_block("gvlad.n_ghost", static_cast<double>(p.n_ghost)));
  return c;
}

pooling::LocallyConnectedParams lc_from_container(const ParamContainer& c) {
  pooling::LocallyConnectedParams p;
  for (int k = 0;; ++k) {
    std::string wname = "lc.W." + std::to_string(k);
    if (!c.has(wname)) break;
    const ParamBlock& w = c.get(wname);
    const ParamBlock& b = c.get("lc.b." + std::to_string(k));
    if (b.cols != w.rows)
      throw Error(ErrorKind::kBadConfig, "lc block " + std::to_string(k) +
                                             ": bias does not match weight rows");
    p.weights.push_back(w.values);
    p.biases.push_back(b.values);
  }
  if (p.weights.empty())
    throw Error(ErrorKind::kMissingInput, "container has no lc.W.* blocks");
  int code = static_cast<int>(c.get("lc.activation").values.at(0));
  switch (code) {
    case 0: p.activation = pooling::Activation::kRelu; break;
    case 1: p.activation = pooling::Activation::kTanh; break;
    case 2: p.activation = pooling::Activation::kIdentity; break;
    default:
      throw Error(ErrorKind::kBadConfig, "unknown activation code");
  }
  p.validate();
  return p;
}

pooling::SapParams sap_from_container(const ParamContainer& c) {
  const ParamBlock& w = c.get("sap.W");
  pooling::SapParams p;
  p.proj_rows = static_cast<int>(w.rows);
  p.in_dim = static_cast<int>(w.cols);
  p.projection = w.values;
  p.bias = c.get("sap.b").values;
  p.context = c.get("sap.context").values;
  p.validate();
  return p;
}

pooling::GvladParams gvlad_from_container(const ParamContainer& c) {
  const ParamBlock& centers = c.get("gvlad.centers");
  pooling::GvladParams p;
  p.n_ghost = static_cast<int>(c.get("gvlad.n_ghost").values.at(0));
  p.n_clusters = static_cast<int>(centers.rows) - p.n_ghost;
  p.in_dim = static_cast<int>(centers.cols);
  p.centers = centers.values;
  p.assign_weights = c.get("gvlad.assign").values;
  p.validate();
  return p;
}

void write_scores(const std::string& path, const std::vector<ScoreRecord>& records) {
  std::ofstream out = open_out(path);
  for (const ScoreRecord& r : records) {
    out << r.model_id << '\t' << r.test_id << '\t' << format_g17(r.score);
    for (double extra : r.extras) out << '\t' << format_g17(extra);
    out << '\n';
  }
  finish_write(out, path);
}

std::vector<ScoreRecord> read_scores(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<ScoreRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 3)
      throw Error(ErrorKind::kMalformedFile, path + ": need at least 3 fields");
    ScoreRecord r;
    r.model_id = fields[0];
    r.test_id = fields[1];
    r.score = parse_double(fields[2], path);
    for (std::size_t i = 3; i < fields.size(); ++i)
      r.extras.push_back(parse_double(fields[i], path));
    records.push_back(std::move(r));
  }
  return records;
}

void write_trial_list(const std::string& path,
                      const std::vector<TrialRecord>& records) {
  std::ofstream out = open_out(path);
  for (const TrialRecord& r : records)
    out << r.model_id << '\t' << r.test_id << '\n';
  finish_write(out, path);
}

std::vector<TrialRecord> read_trial_list(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<TrialRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 2)
      throw Error(ErrorKind::kMalformedFile, path + ": need exactly 2 fields");
    records.push_back({fields[0], fields[1]});
  }
  return records;
}

void write_key(const std::string& path, const std::vector<KeyRecord>& records) {
  std::ofstream out = open_out(path);
  for (const KeyRecord& r : records) {
    out << r.model_id << '\t' << r.test_id << '\t'
        << (r.target ? "target" : "nontarget");
    if (!r.four_way.empty()) out << '\t' << r.four_way;
    out << '\n';
  }
  finish_write(out, path);
}

std::vector<KeyRecord> read_key(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<KeyRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3 && fields.size() != 4)
      throw Error(ErrorKind::kMalformedFile, path + ": need 3 or 4 fields");
    KeyRecord r;
    r.model_id = fields[0];
    r.test_id = fields[1];
    if (fields[2] == "target") r.target = true;
    else if (fields[2] == "nontarget") r.target = false;
    else
      throw Error(ErrorKind::kMalformedFile,
                  path + ": label must be target or nontarget, got " + fields[2]);
    if (fields.size() == 4) r.four_way = fields[3];
    records.push_back(std::move(r));
  }
  return records;
}

void write_enroll_map(const std::string& path,
                      const std::vector<EnrollmentRecord>& records) {
  std::ofstream out = open_out(path);
  for (const EnrollmentRecord& r : records) {
    if (r.utterance_ids.size() != 3)
      throw Error(ErrorKind::kBadConfig,
                  "enrollment record needs exactly 3 utterances");
    out << r.model_id << '\t' << r.utterance_ids[0] << ','
        << r.utterance_ids[1] << ',' << r.utterance_ids[2] << '\n';
  }
  finish_write(out, path);
}

std::vector<EnrollmentRecord> read_enroll_map(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<EnrollmentRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 2)
      throw Error(ErrorKind::kMalformedFile, path + ": need exactly 2 fields");
    EnrollmentRecord r;
    r.model_id = fields[0];
    std::stringstream ss(fields[1]);
    std::string utt;
    while (std::getline(ss, utt, ',')) r.utterance_ids.push_back(utt);
    if (r.utterance_ids.size() != 3)
      throw Error(ErrorKind::kMalformedFile,
                  path + ": enrollment needs exactly 3 utterance ids");
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace tdsv::formats
