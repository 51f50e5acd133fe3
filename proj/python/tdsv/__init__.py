# python/tdsv/__init__.py

# Copyright 2026  the tdsv authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""Text-dependent speaker verification back-end.

Feature extraction (log-mel, STFT), pooling (statistics, self-attentive,
GhostVLAD, character-level), cosine scoring with AS-Norm and phrase-posterior
score compensation, equal-weight fusion, and EER/MinDCF evaluation.
"""

from tdsv._core import (
    TdsvError,
    asnorm,
    clp_aggregate,
    cohort_scores,
    cosine,
    crop_frames,
    det_points,
    eer,
    frame_count,
    fuse,
    ghostvlad_pool,
    grid_search_alpha,
    locally_connected,
    logmel_frames,
    min_dcf,
    phrase_similarity,
    read_wav,
    resnet_shapes,
    self_attentive_pool,
    statistics_pool,
    stft_frames,
    tdnn_shapes,
    total_score,
)

__all__ = [
    "TdsvError",
    "asnorm",
    "clp_aggregate",
    "cohort_scores",
    "cosine",
    "crop_frames",
    "det_points",
    "eer",
    "frame_count",
    "fuse",
    "ghostvlad_pool",
    "grid_search_alpha",
    "locally_connected",
    "logmel_frames",
    "min_dcf",
    "phrase_similarity",
    "read_wav",
    "resnet_shapes",
    "self_attentive_pool",
    "statistics_pool",
    "stft_frames",
    "tdnn_shapes",
    "total_score",
]

__version__ = "0.1.0"
