// convbf/wpe.hpp

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

#ifndef CONVBF_WPE_HPP_
#define CONVBF_WPE_HPP_

#include "convbf/stats.hpp"

namespace convbf {

// Multichannel linear-prediction dereverberation filter for one bin. Only
// the prediction part is stored; the full filter acts as identity on the
// current frame minus the prediction from the past block.
struct DereverbFilter {
  CMat gtilde;  // (D - channels) x channels
  int channels = 0;
  int delay = 1;
  int taps = 1;
};

// Least-squares prediction filter from the past block onto the current
// frame: solves Rtilde * G = P with diagonal loading.
DereverbFilter fit_wpe(const CovarianceSet& cov, double loading);

// Dereverberated frames d_t = y_t - G^H ytilde_t, channels x T.
CMat apply_wpe(const DereverbFilter& filter, const StackedFrames& stacked);

}  // namespace convbf

#endif  // CONVBF_WPE_HPP_
