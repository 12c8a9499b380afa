// src/wav.cpp

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

#include "convbf/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace convbf {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
  out.push_back((v >> 16) & 0xFF);
  out.push_back((v >> 24) & 0xFF);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
}

void put_tag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WaveBlock read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("unreadable input: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError("unreadable input: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  size_t data_pos = 0, data_len = 0;
  bool have_fmt = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) break;
    if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0 && chunk_len >= 16) {
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible && chunk_len >= 26)
        format = read_u16(bytes.data() + body + 24);
      have_fmt = true;
    } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
      data_pos = body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_pos == 0 || channels == 0 || sample_rate == 0)
    throw IoError("unreadable input: " + path);

  const int bytes_per_sample = bits / 8;
  if ((format == kFormatPcm && bits != 16 && bits != 24) ||
      (format == kFormatFloat && bits != 32) ||
      (format != kFormatPcm && format != kFormatFloat))
    throw IoError("unsupported wav encoding: " + path);

  const size_t frame_bytes = static_cast<size_t>(bytes_per_sample) * channels;
  const size_t num_samples = data_len / frame_bytes;
  if (num_samples == 0) throw IoError("unreadable input: " + path);

  WaveBlock wave;
  wave.sample_rate = static_cast<int>(sample_rate);
  wave.samples.resize(num_samples, channels);
  const uint8_t* p = bytes.data() + data_pos;
  for (size_t i = 0; i < num_samples; ++i) {
    for (int m = 0; m < channels; ++m) {
      double v = 0;
      if (format == kFormatFloat) {
        float fv;
        std::memcpy(&fv, p, 4);
        v = fv;
      } else if (bits == 16) {
        const int16_t s = static_cast<int16_t>(p[0] | (p[1] << 8));
        v = s / 32768.0;
      } else {  // 24-bit
        int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
        if (s & 0x800000) s |= ~0xFFFFFF;  // sign extend
        v = s / 8388608.0;
      }
      wave.samples(i, m) = v;
      p += bytes_per_sample;
    }
  }
  return wave;
}

void write_wav(const std::string& path, const WaveBlock& wave,
               WavFormat format) {
  if (wave.num_samples() == 0 || wave.channels() == 0)
    throw IoError("refusing to write empty wav");

  const int channels = wave.channels();
  const size_t num_samples = static_cast<size_t>(wave.num_samples());
  const int bytes_per_sample = format == WavFormat::kPcm16   ? 2
                               : format == WavFormat::kPcm24 ? 3
                                                             : 4;
  const uint16_t fmt_code =
      format == WavFormat::kFloat32 ? kFormatFloat : kFormatPcm;
  const uint32_t data_len =
      static_cast<uint32_t>(num_samples * channels * bytes_per_sample);

  std::vector<uint8_t> out;
  out.reserve(44 + data_len);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_len);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, fmt_code);
  put_u16(out, static_cast<uint16_t>(channels));
  put_u32(out, static_cast<uint32_t>(wave.sample_rate));
  put_u32(out, static_cast<uint32_t>(wave.sample_rate) * channels *
                   bytes_per_sample);
  put_u16(out, static_cast<uint16_t>(channels * bytes_per_sample));
  put_u16(out, static_cast<uint16_t>(bytes_per_sample * 8));
  put_tag(out, "data");
  put_u32(out, data_len);

  for (size_t i = 0; i < num_samples; ++i) {
    for (int m = 0; m < channels; ++m) {
      const double v = wave.samples(i, m);
      if (format == WavFormat::kFloat32) {
        const float fv = static_cast<float>(v);
        uint32_t u;
        std::memcpy(&u, &fv, 4);
        put_u32(out, u);
      } else if (format == WavFormat::kPcm16) {
        const double scaled = std::clamp(v, -1.0, 1.0) * 32767.0;
        put_u16(out, static_cast<uint16_t>(
                         static_cast<int16_t>(std::lround(scaled))));
      } else {
        const double scaled = std::clamp(v, -1.0, 1.0) * 8388607.0;
        const int32_t s = static_cast<int32_t>(std::lround(scaled));
        out.push_back(s & 0xFF);
        out.push_back((s >> 8) & 0xFF);
        out.push_back((s >> 16) & 0xFF);
      }
    }
  }

  std::ofstream fout(path, std::ios::binary);
  if (!fout) throw IoError("cannot write: " + path);
  fout.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!fout) throw IoError("cannot write: " + path);
}

}  // namespace convbf
