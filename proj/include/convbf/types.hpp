// convbf/types.hpp

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

#ifndef CONVBF_TYPES_HPP_
#define CONVBF_TYPES_HPP_

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "convbf/errors.hpp"

namespace convbf {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Multichannel time-domain audio. One column per channel.
struct WaveBlock {
  RMat samples;  // num_samples x channels
  int sample_rate = 0;

  Eigen::Index num_samples() const { return samples.rows(); }
  int channels() const { return static_cast<int>(samples.cols()); }
};

// Complex time-frequency tensor, frames x bins x channels, plus the
// analysis grid it was produced with. All per-bin processing pulls a
// channels x frames view out of this and writes one back.
struct Spectrogram {
  std::vector<Complex> data;  // index: (t * bins + f) * channels + m
  int frames = 0;
  int bins = 0;
  int channels = 0;
  int frame_len = 0;
  int hop = 0;
  int sample_rate = 0;

  static Spectrogram zeros(int frames, int bins, int channels, int frame_len,
                           int hop, int sample_rate) {
    Spectrogram s;
    s.frames = frames;
    s.bins = bins;
    s.channels = channels;
    s.frame_len = frame_len;
    s.hop = hop;
    s.sample_rate = sample_rate;
    s.data.assign(static_cast<size_t>(frames) * bins * channels, Complex(0, 0));
    return s;
  }

  Complex& at(int t, int f, int m) {
    return data[(static_cast<size_t>(t) * bins + f) * channels + m];
  }
  const Complex& at(int t, int f, int m) const {
    return data[(static_cast<size_t>(t) * bins + f) * channels + m];
  }

  // channels x frames matrix for one frequency bin.
  CMat bin(int f) const {
    CMat out(channels, frames);
    for (int t = 0; t < frames; ++t)
      for (int m = 0; m < channels; ++m) out(m, t) = at(t, f, m);
    return out;
  }

  void set_bin(int f, const CMat& values) {
    if (values.rows() != channels || values.cols() != frames)
      throw Error("set_bin: dimension mismatch");
    for (int t = 0; t < frames; ++t)
      for (int m = 0; m < channels; ++m) at(t, f, m) = values(m, t);
  }

  // Center frequency of bin f in Hz.
  double bin_hz(int f) const {
    return static_cast<double>(f) * sample_rate / frame_len;
  }

  bool same_grid(const Spectrogram& other) const {
    return frames == other.frames && bins == other.bins &&
           frame_len == other.frame_len && hop == other.hop &&
           sample_rate == other.sample_rate;
  }
};

}  // namespace convbf

#endif  // CONVBF_TYPES_HPP_
