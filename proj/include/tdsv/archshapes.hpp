// include/tdsv/archshapes.hpp

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

#ifndef TDSV_ARCHSHAPES_HPP_
#define TDSV_ARCHSHAPES_HPP_

#include <string>
#include <vector>

#include "tdsv/common.hpp"

namespace tdsv::archshapes {

enum class TdnnVariant {
  kClpEmbedding,      // 512/512/512/512/1536 frame widths, softmax over N speakers
  kPhraseClassifier,  // 1536/512/512/256/256 frame widths, softmax over M phrases
};

struct LayerShape {
  std::string name;
  std::vector<long> dims;  // concrete sizes for the requested frame count
  std::string symbolic;    // e.g. "9 x T/32 x 128"
};

struct ShapeReport {
  std::vector<LayerShape> layers;
};

/// Output sizes of the two TDNN configurations. Frame-axis lengths follow the
/// stride-2 first layer (ceil(T/2)); channel widths and the pooled/segment
/// sizes are T-independent. n_classes is N (speakers) for the embedding
/// variant and M (phrase types) for the classifier variant.
ShapeReport tdnn_shapes(long frames, TdnnVariant variant, long n_classes);

/// Output sizes of the Thin ResNet34 stack on a 257 x T x 1 STFT input.
/// Strided sizes use floor((size + 2*pad - kernel)/stride) + 1; the 7x7 stem
/// uses pad 3 (required to map 257 -> 129), every other convolution pad 1.
ShapeReport resnet_shapes(long frames);

/// Aligned two-column text table of the report.
std::string render_table(const ShapeReport& report);

/// "layer=AxBxC" lines, one per layer, concrete sizes.
std::vector<std::string> key_value_lines(const ShapeReport& report);

}  // namespace tdsv::archshapes

#endif  // TDSV_ARCHSHAPES_HPP_
