// convbf/pipeline.hpp

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

#ifndef CONVBF_PIPELINE_HPP_
#define CONVBF_PIPELINE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "convbf/beamform.hpp"
#include "convbf/scene.hpp"
#include "convbf/stats.hpp"

namespace convbf {

enum class Method {
  kObs,            // reference-channel pass-through
  kWpeOnly,        // dereverberation only
  kBfOnly,         // beamformer only (kind from PipelineConfig::bf)
  kWpdUnified,     // one convolutional filter on the stacked observations
  kWpeBfJoint,     // dereverb + beamformer, one shared power-iteration loop
  kWpeBfSeparate,  // dereverb loop to completion, then beamformer loop
};

enum class LambdaInit { kChannelMean, kRefChannel };

// Prediction-filter length per frequency band, keyed by the band's upper
// edge in Hz. Bands cover [previous upper, upper); the last band also takes
// the Nyquist bin.
struct BandTaps {
  double upper_hz = 0;
  int taps = 1;
};

std::vector<BandTaps> default_bands();  // 0-0.8/0.8-1.5/1.5-8 kHz: 12/10/6

struct PipelineConfig {
  Method method = Method::kWpeBfJoint;
  BeamKind bf = BeamKind::kWmpdr;
  int delay = 4;  // prediction delay in frames
  std::vector<BandTaps> bands = default_bands();
  int iterations = 1;
  int inner_iterations = 0;  // per-block count for the separate scheme; 0 =
                             // same as iterations
  double loading = 1e-10;
  double lambda_floor = 1e-10;  // relative to the mean bin power
  int reference_channel = 0;
  LambdaInit lambda_init = LambdaInit::kChannelMean;
};

int taps_for_bin(const PipelineConfig& cfg, const Spectrogram& spec, int bin);
void validate_config(const PipelineConfig& cfg, const Spectrogram& spec);

// Where the RTF (and, for mask-based methods, the frame weights) come from.
// Exactly one of oracle / mask / noise_marks should be populated; the mask
// or marks double as the noise-covariance source for MVDR and for RTF
// estimation when no oracle vector is given.
struct RtfSource {
  std::optional<CMat> oracle;  // bins x channels
  std::optional<RMat> mask;    // frames x bins, in [0, 1]
  std::vector<int> noise_marks;

  bool has_weights() const { return mask.has_value() || !noise_marks.empty(); }
};

struct RunOptions {
  bool parallel = true;  // false runs the serial reference path
  int threads = 0;       // 0 = OpenMP default
};

struct RunReport {
  Spectrogram enhanced;  // frames x bins x 1
  // Objective value per bin after each (filter update, power update) pair.
  // For the separate scheme the dereverb-block entries come first.
  std::vector<std::vector<double>> loglik;
  PsdTrack final_psd;  // per-frame desired-signal powers after the last update
  std::vector<int> failed_bins;
  std::map<std::string, double> metrics;
  // Per-component outputs of the final linear filter, when ground truth was
  // supplied: what the filter does to early/late/noise parts in isolation.
  std::optional<CMat> enhanced_early, enhanced_late, enhanced_noise;
};

RunReport run(const Spectrogram& spec, const PipelineConfig& cfg,
              const RtfSource& rtf_source, const RunOptions& opts = {},
              const SceneTruth* truth = nullptr);

// Numerical agreement between the unified convolutional solution and the
// dereverb-then-beamform factorization, both fed the same fixed per-frame
// powers (observation power) and the same RTF. Per bin, the per-frame
// differences are normalized by the largest factorized output magnitude.
struct EquivalenceStats {
  double max_rel_diff = 0;
  int bins_checked = 0;
};

EquivalenceStats verify_equivalence(const Spectrogram& spec,
                                    const PipelineConfig& cfg,
                                    const RtfSource& rtf_source,
                                    const RunOptions& opts = {});

// STFT-domain quality figures against scene ground truth: output SNR vs the
// early reference-channel signal, and residual late-reverb/noise energy
// relative to their pass-through levels. All in dB, capped at +-300.
std::map<std::string, double> oracle_metrics(const SceneTruth& truth,
                                             const RunReport& report,
                                             int reference_channel);

}  // namespace convbf

#endif  // CONVBF_PIPELINE_HPP_
