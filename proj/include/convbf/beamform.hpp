// convbf/beamform.hpp

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

#ifndef CONVBF_BEAMFORM_HPP_
#define CONVBF_BEAMFORM_HPP_

#include "convbf/stats.hpp"

namespace convbf {

enum class BeamKind { kWmpdr, kMpdr, kMvdr, kWpdUnified };

// Distortionless filter weights: length channels for the plain beamformers,
// length D for the unified convolutional one.
struct BeamWeights {
  CVec w;
  BeamKind kind = BeamKind::kWmpdr;
};

// Unified convolutional beamformer on the stacked covariance: the
// minimum-weighted-power solution subject to unit gain toward the RTF,
// with the constraint vector zero-extended onto the past block.
BeamWeights solve_wpd(const CovarianceSet& cov, const CVec& rtf,
                      double loading);

// Plain distortionless beamformers, differing only in which covariance is
// minimized: inverse-lambda weighted (wMPDR), unweighted observation (MPDR),
// or noise-only (MVDR).
BeamWeights solve_wmpdr(const CMat& rd, const CVec& rtf, double loading);
BeamWeights solve_mpdr(const CMat& ry_unweighted, const CVec& rtf,
                       double loading);
BeamWeights solve_mvdr(const CMat& rn, const CVec& rtf, double loading);

// z_t = w^H frame_t for every column of frames.
CVec apply_weights(const BeamWeights& weights, const CMat& frames);

}  // namespace convbf

#endif  // CONVBF_BEAMFORM_HPP_
