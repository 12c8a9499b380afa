// convbf/wav.hpp

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

#ifndef CONVBF_WAV_HPP_
#define CONVBF_WAV_HPP_

#include <string>

#include "convbf/types.hpp"

namespace convbf {

enum class WavFormat { kPcm16, kPcm24, kFloat32 };

// Reads interleaved multichannel RIFF/WAVE: 16/24-bit PCM or 32-bit float.
// Integer samples are scaled to [-1, 1). Throws IoError("unreadable input")
// on anything malformed.
WaveBlock read_wav(const std::string& path);

void write_wav(const std::string& path, const WaveBlock& wave,
               WavFormat format = WavFormat::kFloat32);

}  // namespace convbf

#endif  // CONVBF_WAV_HPP_
