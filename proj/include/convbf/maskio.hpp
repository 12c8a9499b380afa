// convbf/maskio.hpp

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

#ifndef CONVBF_MASKIO_HPP_
#define CONVBF_MASKIO_HPP_

#include <string>

#include "convbf/types.hpp"

namespace convbf {

// Time-frequency mask files: 16-byte header ("CBMK", u32 frames, u32 bins,
// u32 reserved zero; all little-endian) followed by frames*bins float32
// values, frame-major. Values are clamped to [0, 1] on read.
RMat read_mask(const std::string& path);
void write_mask(const std::string& path, const RMat& mask);

}  // namespace convbf

#endif  // CONVBF_MASKIO_HPP_
