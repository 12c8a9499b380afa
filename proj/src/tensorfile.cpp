// src/tensorfile.cpp

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

#include "convbf/tensorfile.hpp"

#include <cstring>
#include <fstream>

namespace convbf {

namespace {

constexpr char kMagic[4] = {'C', 'B', 'T', 'F'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated tensor file");
  return v;
}

Tensor from_rmat(const RMat& m) {
  Tensor t;
  t.dims = {static_cast<uint64_t>(m.rows()), static_cast<uint64_t>(m.cols())};
  t.real.reserve(t.count());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.real.push_back(m(r, c));
  return t;
}

Tensor from_cmat(const CMat& m) {
  Tensor t;
  t.is_complex = true;
  t.dims = {static_cast<uint64_t>(m.rows()), static_cast<uint64_t>(m.cols())};
  t.cplx.reserve(t.count());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.cplx.push_back(m(r, c));
  return t;
}

RMat to_rmat(const Tensor& t) {
  if (t.is_complex || t.dims.size() != 2) throw IoError("bad tensor shape");
  RMat m(t.dims[0], t.dims[1]);
  size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t.real[i++];
  return m;
}

CMat to_cmat(const Tensor& t) {
  if (!t.is_complex || t.dims.size() != 2) throw IoError("bad tensor shape");
  CMat m(t.dims[0], t.dims[1]);
  size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t.cplx[i++];
  return m;
}

Tensor from_spectrogram(const Spectrogram& s) {
  Tensor t;
  t.is_complex = true;
  t.dims = {static_cast<uint64_t>(s.frames), static_cast<uint64_t>(s.bins),
            static_cast<uint64_t>(s.channels)};
  t.cplx = s.data;
  return t;
}

Spectrogram to_spectrogram(const Tensor& t, int frame_len, int hop,
                           int sample_rate) {
  if (!t.is_complex || t.dims.size() != 3) throw IoError("bad tensor shape");
  Spectrogram s = Spectrogram::zeros(
      static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]),
      static_cast<int>(t.dims[2]), frame_len, hop, sample_rate);
  s.data = t.cplx;
  return s;
}

}  // namespace

void write_tensor_file(const std::string& path, const TensorMap& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path);
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, static_cast<uint32_t>(tensors.size()));
  write_pod(out, uint32_t{0});
  for (const auto& [name, t] : tensors) {
    write_pod(out, static_cast<uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod(out, static_cast<uint8_t>(t.is_complex ? 1 : 0));
    write_pod(out, static_cast<uint8_t>(t.dims.size()));
    write_pod(out, uint16_t{0});
    for (uint64_t d : t.dims) write_pod(out, d);
    if (t.is_complex) {
      if (t.cplx.size() != t.count()) throw IoError("tensor size mismatch");
      out.write(reinterpret_cast<const char*>(t.cplx.data()),
                static_cast<std::streamsize>(t.cplx.size() * sizeof(Complex)));
    } else {
      if (t.real.size() != t.count()) throw IoError("tensor size mismatch");
      out.write(reinterpret_cast<const char*>(t.real.data()),
                static_cast<std::streamsize>(t.real.size() * sizeof(double)));
    }
  }
  if (!out) throw IoError("cannot write: " + path);
}

TensorMap read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("unreadable tensor file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("unreadable tensor file: " + path);
  const uint32_t version = read_pod<uint32_t>(in);
  if (version != kVersion) throw IoError("unsupported tensor file version");
  const uint32_t count = read_pod<uint32_t>(in);
  read_pod<uint32_t>(in);  // reserved

  TensorMap tensors;
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t name_len = read_pod<uint32_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    Tensor t;
    t.is_complex = read_pod<uint8_t>(in) != 0;
    const uint8_t ndim = read_pod<uint8_t>(in);
    read_pod<uint16_t>(in);  // pad
    t.dims.resize(ndim);
    for (uint8_t d = 0; d < ndim; ++d) t.dims[d] = read_pod<uint64_t>(in);
    const size_t n = t.count();
    if (t.is_complex) {
      t.cplx.resize(n);
      in.read(reinterpret_cast<char*>(t.cplx.data()),
              static_cast<std::streamsize>(n * sizeof(Complex)));
    } else {
      t.real.resize(n);
      in.read(reinterpret_cast<char*>(t.real.data()),
              static_cast<std::streamsize>(n * sizeof(double)));
    }
    if (!in) throw IoError("truncated tensor file");
    tensors.emplace(std::move(name), std::move(t));
  }
  return tensors;
}

void save_scene(const std::string& path, const SceneTruth& truth) {
  TensorMap t;
  t["observation"] = from_spectrogram(truth.observation);
  t["early"] = from_spectrogram(truth.early);
  t["late"] = from_spectrogram(truth.late);
  t["noise"] = from_spectrogram(truth.noise);
  t["source"] = from_cmat(truth.source);
  t["atf0"] = from_cmat(truth.atf0);
  t["rtf"] = from_cmat(truth.rtf);
  t["oracle_mask"] = from_rmat(truth.oracle_mask);

  Tensor marks;
  marks.dims = {static_cast<uint64_t>(truth.noise_frames.size())};
  for (int v : truth.noise_frames) marks.real.push_back(v);
  t["noise_frames"] = marks;

  Tensor grid;
  grid.dims = {3};
  grid.real = {static_cast<double>(truth.observation.frame_len),
               static_cast<double>(truth.observation.hop),
               static_cast<double>(truth.observation.sample_rate)};
  t["grid"] = grid;

  write_tensor_file(path, t);
}

SceneTruth load_scene(const std::string& path) {
  TensorMap t = read_tensor_file(path);
  for (const char* key :
       {"observation", "early", "late", "noise", "source", "atf0", "rtf",
        "oracle_mask", "noise_frames", "grid"})
    if (t.find(key) == t.end())
      throw IoError(std::string("scene file missing array: ") + key);

  const Tensor& grid = t["grid"];
  if (grid.real.size() != 3) throw IoError("bad scene grid");
  const int frame_len = static_cast<int>(grid.real[0]);
  const int hop = static_cast<int>(grid.real[1]);
  const int fs = static_cast<int>(grid.real[2]);

  SceneTruth truth;
  truth.observation = to_spectrogram(t["observation"], frame_len, hop, fs);
  truth.early = to_spectrogram(t["early"], frame_len, hop, fs);
  truth.late = to_spectrogram(t["late"], frame_len, hop, fs);
  truth.noise = to_spectrogram(t["noise"], frame_len, hop, fs);
  truth.source = to_cmat(t["source"]);
  truth.atf0 = to_cmat(t["atf0"]);
  truth.rtf = to_cmat(t["rtf"]);
  truth.oracle_mask = to_rmat(t["oracle_mask"]);
  for (double v : t["noise_frames"].real)
    truth.noise_frames.push_back(static_cast<int>(v));
  return truth;
}

}  // namespace convbf
