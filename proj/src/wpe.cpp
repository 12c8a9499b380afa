// src/wpe.cpp

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

#include "convbf/wpe.hpp"

#include "convbf/linalg.hpp"

namespace convbf {

DereverbFilter fit_wpe(const CovarianceSet& cov, double loading) {
  DereverbFilter filter;
  filter.channels = cov.channels;
  filter.delay = cov.delay;
  filter.taps = cov.taps;
  if (cov.P.rows() == 0) {
    filter.gtilde.resize(0, cov.channels);
    return filter;
  }
  try {
    filter.gtilde = herm_solve(HermMatrix(cov.Rtilde), cov.P, loading);
  } catch (const NumericError&) {
    throw NumericError("singular past covariance");
  }
  return filter;
}

CMat apply_wpe(const DereverbFilter& filter, const StackedFrames& stacked) {
  if (filter.channels != stacked.channels || filter.delay != stacked.delay ||
      filter.taps != stacked.taps ||
      filter.gtilde.rows() != stacked.dim() - stacked.channels)
    throw Error("dimension mismatch");
  if (filter.gtilde.rows() == 0) return stacked.current();
  return stacked.current() - filter.gtilde.adjoint() * stacked.past();
}

}  // namespace convbf
