// src/archshapes.cpp

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

#include "tdsv/archshapes.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tdsv::archshapes {

namespace {

long conv_out(long size, long kernel, long stride, long pad) {
  return (size + 2 * pad - kernel) / stride + 1;
}

std::string dims_string(const std::vector<long>& dims, char sep) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) {
      if (sep == 'x') s += "x";
      else s += " x ";
    }
    s += std::to_string(dims[i]);
  }
  return s;
}

}  // namespace

ShapeReport tdnn_shapes(long frames, TdnnVariant variant, long n_classes) {
  if (frames < 1)
    throw Error(ErrorKind::kBadConfig, "frame count must be >= 1");
  if (n_classes < 1)
    throw Error(ErrorKind::kBadConfig, "class count must be >= 1");

  const bool clp = variant == TdnnVariant::kClpEmbedding;
  const long widths[5] = {clp ? 512L : 1536L, 512, 512, clp ? 512L : 256L,
                          clp ? 1536L : 256L};
  const long spans[5] = {5, 5, 7, 1, 1};   // context extents [t-2:t+2] etc.
  const long strides[5] = {2, 1, 1, 1, 1};
  const char* names[5] = {"Frame1", "Frame2", "Frame3", "Frame4", "Frame5"};
  const char* class_sym = clp ? "N" : "M";

  ShapeReport report;
  report.layers.push_back({"Input", {64, frames}, "64 x T"});

  long cur = frames;
  for (int i = 0; i < 5; ++i) {
    if (cur < spans[i])
      throw Error(ErrorKind::kBadConfig,
                  std::string(names[i]) + ": context wider than the frame axis");
    if (strides[i] == 2) cur = (cur + 1) / 2;
    report.layers.push_back(
        {names[i], {widths[i], cur}, std::to_string(widths[i]) + " x T/2"});
  }

  long pooled = widths[4];
  report.layers.push_back({"Pooling",
                           {pooled * 29, 1},
                           "(" + std::to_string(pooled) + " x 29) x 1"});
  report.layers.push_back({"Segment1", {20 * 29, 1}, "(20 x 29) x 1"});
  report.layers.push_back({"Segment2", {512, 1}, "512 x 1"});
  report.layers.push_back(
      {"Softmax", {n_classes, 1}, std::string(class_sym) + " x 1"});
  return report;
}

ShapeReport resnet_shapes(long frames) {
  if (frames < 32)
    throw Error(ErrorKind::kBadConfig,
                "frame count must be >= 32 for the five stride-2 stages");

  ShapeReport report;
  report.layers.push_back({"Input", {257, frames, 1}, "257 x T x 1"});

  // 7x7 stem, stride 2. Pad 3 is what maps 257 -> 129; the remaining
  // convolutions use pad 1.
  long freq = conv_out(257, 7, 2, 3);
  long time = conv_out(frames, 7, 2, 3);
  report.layers.push_back({"Conv1", {freq, time, 16}, "129 x T/2 x 16"});

  freq = conv_out(freq, 3, 2, 1);
  time = conv_out(time, 3, 2, 1);
  report.layers.push_back({"Conv1-pool", {freq, time, 16}, "65 x T/4 x 16"});

  report.layers.push_back({"Conv2", {freq, time, 16}, "65 x T/4 x 16"});

  freq = conv_out(freq, 3, 2, 1);
  time = conv_out(time, 3, 2, 1);
  report.layers.push_back({"Conv3", {freq, time, 32}, "33 x T/8 x 32"});

  freq = conv_out(freq, 3, 2, 1);
  time = conv_out(time, 3, 2, 1);
  report.layers.push_back({"Conv4", {freq, time, 64}, "17 x T/16 x 64"});

  freq = conv_out(freq, 3, 2, 1);
  time = conv_out(time, 3, 2, 1);
  report.layers.push_back({"Conv5", {freq, time, 128}, "9 x T/32 x 128"});

  freq = conv_out(freq, 9, 1, 0);  // 9x1 kernel over the frequency axis
  report.layers.push_back({"FC", {freq, time, 512}, "1 x T/32 x 512"});
  return report;
}

std::string render_table(const ShapeReport& report) {
  std::size_t name_w = 0, dims_w = 0;
  std::vector<std::string> dims_col;
  dims_col.reserve(report.layers.size());
  for (const LayerShape& l : report.layers) {
    dims_col.push_back(dims_string(l.dims, ' '));
    name_w = std::max(name_w, l.name.size());
    dims_w = std::max(dims_w, dims_col.back().size());
  }

  std::ostringstream out;
  for (std::size_t i = 0; i < report.layers.size(); ++i) {
    const LayerShape& l = report.layers[i];
    out << l.name << std::string(name_w - l.name.size() + 2, ' ')
        << dims_col[i] << std::string(dims_w - dims_col[i].size() + 2, ' ')
        << l.symbolic << "\n";
  }
  return out.str();
}

std::vector<std::string> key_value_lines(const ShapeReport& report) {
  std::vector<std::string> lines;
  lines.reserve(report.layers.size());
  for (const LayerShape& l : report.layers) {
    std::string key;
    for (char c : l.name) {
      if (c == '-' || c == ' ') key += '_';
      else key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    lines.push_back(key + "=" + dims_string(l.dims, 'x'));
  }
  return lines;
}

}  // namespace tdsv::archshapes
