// src/maskio.cpp

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

#include "convbf/maskio.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace convbf {

namespace {
constexpr char kMagic[4] = {'C', 'B', 'M', 'K'};
}

RMat read_mask(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("unreadable mask: " + path);
  uint8_t header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (!in || std::memcmp(header, kMagic, 4) != 0)
    throw IoError("unreadable mask: " + path);
  auto u32_at = [&](int off) {
    uint32_t v;
    std::memcpy(&v, header + off, 4);
    return v;
  };
  const uint32_t frames = u32_at(4);
  const uint32_t bins = u32_at(8);
  if (frames == 0 || bins == 0) throw IoError("unreadable mask: " + path);

  std::vector<float> buf(static_cast<size_t>(frames) * bins);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw IoError("unreadable mask: " + path);

  RMat mask(frames, bins);
  for (uint32_t t = 0; t < frames; ++t)
    for (uint32_t f = 0; f < bins; ++f)
      mask(t, f) = std::clamp<double>(buf[static_cast<size_t>(t) * bins + f],
                                      0.0, 1.0);
  return mask;
}

void write_mask(const std::string& path, const RMat& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path);
  uint8_t header[16] = {0};
  std::memcpy(header, kMagic, 4);
  const uint32_t frames = static_cast<uint32_t>(mask.rows());
  const uint32_t bins = static_cast<uint32_t>(mask.cols());
  std::memcpy(header + 4, &frames, 4);
  std::memcpy(header + 8, &bins, 4);
  out.write(reinterpret_cast<const char*>(header), 16);

  std::vector<float> buf(static_cast<size_t>(frames) * bins);
  for (uint32_t t = 0; t < frames; ++t)
    for (uint32_t f = 0; f < bins; ++f)
      buf[static_cast<size_t>(t) * bins + f] = static_cast<float>(mask(t, f));
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw IoError("cannot write: " + path);
}

}  // namespace convbf
