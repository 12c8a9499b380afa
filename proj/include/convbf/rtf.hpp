// convbf/rtf.hpp

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

#ifndef CONVBF_RTF_HPP_
#define CONVBF_RTF_HPP_

#include <utility>

#include "convbf/linalg.hpp"

namespace convbf {

struct RtfEstimate {
  CVec v;  // v(0) == 1 exactly
  // Second-to-first eigenvalue ratio of the whitened signal covariance;
  // near 0 for a clean rank-one source, near 1 when no source stands out.
  double rank1_fit_error = 0;
  bool degenerate = false;  // top two eigenvalues indistinguishable
};

// Relative transfer function by covariance whitening: whiten the signal
// covariance with Rn^{-1/2}, take the principal eigenvector, de-whiten with
// W^H, and normalize to the reference channel.
RtfEstimate estimate_rtf(const CMat& rx, const CMat& rn, double loading);

// Mask-weighted signal and noise covariances from per-frame weights in
// [0, 1]: Rx uses the weights, Rn their complement, each normalized by its
// total weight.
std::pair<CMat, CMat> signal_covariances(const CMat& frames,
                                         const RVec& weights);

}  // namespace convbf

#endif  // CONVBF_RTF_HPP_
