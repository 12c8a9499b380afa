// convbf/tfspace.hpp

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

#ifndef CONVBF_TFSPACE_HPP_
#define CONVBF_TFSPACE_HPP_

#include "convbf/types.hpp"

namespace convbf {

// Periodic Hann window of length n.
RVec hann_window(int n);

// Hann-windowed one-sided STFT. The signal is zero-padded by frame_len - hop
// at the head, frames start every hop samples, and the frame count is
// ceil(num_samples / hop). frame_len must be even and a multiple of hop.
Spectrogram analyze(const WaveBlock& wave, int frame_len, int hop);

// Overlap-add inverse using the synthesis window dual to the Hann analysis
// window. Returns frames * hop samples; the round trip through analyze is
// exact away from the first/last frame_len samples.
WaveBlock synthesize(const Spectrogram& spec);

}  // namespace convbf

#endif  // CONVBF_TFSPACE_HPP_
