// convbf/stats.hpp

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

#ifndef CONVBF_STATS_HPP_
#define CONVBF_STATS_HPP_

#include <optional>

#include "convbf/types.hpp"

namespace convbf {

// Delayed-and-stacked observations for one frequency bin. Column t is
// [y_t; y_{t-delay}; ...; y_{t-taps+1}], skipping the delay-1 most recent
// past frames; frames before the signal start enter as zeros. The stacked
// dimension is D = channels * (taps - delay + 1).
struct StackedFrames {
  CMat frames;  // D x T
  int channels = 0;
  int delay = 1;  // prediction delay in frames
  int taps = 1;   // filter length in frames

  int dim() const { return static_cast<int>(frames.rows()); }
  int num_frames() const { return static_cast<int>(frames.cols()); }
  // Current-frame block y_t (top channels rows).
  CMat current() const { return frames.topRows(channels); }
  // Past block, delay to taps-1 frames back.
  CMat past() const { return frames.bottomRows(dim() - channels); }
};

StackedFrames stack_bin(const CMat& bin /* channels x frames */, int delay,
                        int taps);
StackedFrames stack(const Spectrogram& spec, int bin, int delay, int taps);

// Inverse-lambda weighted covariance of the stacked observations, with the
// 2x2 block partition used by the factorized solver. Blocks are literal
// copies of the corresponding submatrices of Rbar.
struct CovarianceSet {
  CMat Rbar;    // D x D
  CMat Ry;      // channels x channels, top-left
  CMat P;       // (D - channels) x channels, bottom-left
  CMat Rtilde;  // (D - channels) x (D - channels), bottom-right
  std::optional<CMat> Rd;  // dereverberated weighted covariance, when known
  int T_used = 0;
  int channels = 0;
  int delay = 1;
  int taps = 1;

  int dim() const { return static_cast<int>(Rbar.rows()); }
};

CovarianceSet weighted_covariance(const StackedFrames& stacked,
                                  const RVec& lambda);

// Schur complement Ry - P^H Rtilde^{-1} P with diagonal loading on the
// Rtilde solve. Equals the weighted covariance of the dereverberated signal
// when the dereverberation filter is the least-squares one.
CMat schur_rd(const CovarianceSet& cov, double loading);

// Inverse-lambda weighted covariance of dereverberated (or raw) frames.
CMat dereverb_covariance(const CMat& frames /* channels x T */,
                         const RVec& lambda);

// Per-frame desired-signal powers for all bins, with the per-bin floor that
// was applied to them.
struct PsdTrack {
  RMat lambda;        // frames x bins, strictly positive
  RVec floor_per_bin; // bins
};

}  // namespace convbf

#endif  // CONVBF_STATS_HPP_
