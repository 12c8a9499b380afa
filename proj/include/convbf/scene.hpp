// convbf/scene.hpp

// Copyright 2026  convbf authors

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

#ifndef CONVBF_SCENE_HPP_
#define CONVBF_SCENE_HPP_

#include <cstdint>
#include <vector>

#include "convbf/types.hpp"

namespace convbf {

// Recipe for a synthetic multichannel scene generated directly in the STFT
// domain: a time-varying Gaussian source convolved per bin with a frame-domain
// transfer function, plus spatially white noise. Every component is kept, so
// downstream behavior can be measured against exact ground truth.
struct SceneSpec {
  int channels = 2;        // M
  int atf_frames = 4;      // transfer-function length in frames
  int early_boundary = 1;  // taps [0, early_boundary) count as early/desired
  int frames = 200;        // T
  double snr_db = 20.0;    // desired-plus-late to noise ratio; +inf = no noise
  uint64_t seed = 0;

  // Per-bin transfer functions, each atf_frames x channels. Empty draws the
  // built-in random recipe; a single entry is broadcast to all bins.
  std::vector<CMat> atf;

  // STFT grid the scene pretends to live on.
  int frame_len = 64;
  int hop = 16;
  int sample_rate = 16000;

  int bins() const { return frame_len / 2 + 1; }
};

struct SceneTruth {
  Spectrogram observation;  // early + late + noise
  Spectrogram early;
  Spectrogram late;
  Spectrogram noise;
  CMat source;       // frames x bins
  CMat atf0;         // bins x channels, tap-0 transfer function
  CMat rtf;          // bins x channels, atf0 normalized to channel 0
  RMat oracle_mask;  // frames x bins, in [0, 1]
  std::vector<int> noise_frames;  // frames known to contain noise only
};

SceneTruth synthesize_scene(const SceneSpec& spec);

// Gates the source to zero in the first head_ms and last tail_ms of the
// scene, leaving noise-only frames there, and records their indices.
SceneTruth noise_only_padding(const SceneTruth& truth, double head_ms,
                              double tail_ms);

}  // namespace convbf

#endif  // CONVBF_SCENE_HPP_
