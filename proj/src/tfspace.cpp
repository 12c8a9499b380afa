// src/tfspace.cpp

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

#include "convbf/tfspace.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace convbf {

namespace {

// FFTW plan creation is not thread-safe; execution on caller-owned buffers is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// RAII pair of r2c/c2r plans for one frame length.
class FramePlans {
 public:
  explicit FramePlans(int n) : n_(n) {
    real_ = fftw_alloc_real(n);
    cplx_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(n, real_, cplx_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(n, cplx_, real_, FFTW_ESTIMATE);
  }
  ~FramePlans() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(cplx_);
  }
  FramePlans(const FramePlans&) = delete;
  FramePlans& operator=(const FramePlans&) = delete;

  double* real() { return real_; }
  fftw_complex* cplx() { return cplx_; }
  void forward() { fftw_execute(fwd_); }
  void inverse() { fftw_execute(inv_); }

 private:
  int n_;
  double* real_;
  fftw_complex* cplx_;
  fftw_plan fwd_, inv_;
};

void check_grid(int frame_len, int hop) {
  if (hop < 1 || hop > frame_len) throw Error("invalid hop");
  if (frame_len % 2 != 0) throw Error("frame length must be even");
  if (frame_len % hop != 0) throw Error("invalid hop");
}

// Synthesis window dual to the analysis window w at the given hop:
// g[n] = w[n] / sum_j w[(n mod hop) + j*hop]^2, so that sum_t g*w shifted by
// multiples of hop is identically one wherever frames fully overlap.
RVec dual_window(const RVec& w, int hop) {
  const int n = static_cast<int>(w.size());
  RVec denom = RVec::Zero(hop);
  for (int r = 0; r < hop; ++r)
    for (int j = r; j < n; j += hop) denom(r) += w(j) * w(j);
  RVec g(n);
  for (int i = 0; i < n; ++i) {
    const double d = denom(i % hop);
    g(i) = d > 1e-12 ? w(i) / d : 0.0;
  }
  return g;
}

}  // namespace

RVec hann_window(int n) {
  RVec w(n);
  for (int i = 0; i < n; ++i)
    w(i) = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
  return w;
}

Spectrogram analyze(const WaveBlock& wave, int frame_len, int hop) {
  if (wave.num_samples() == 0 || wave.channels() == 0)
    throw Error("empty signal");
  if (wave.sample_rate <= 0) throw Error("invalid sample rate");
  check_grid(frame_len, hop);

  const int num_samples = static_cast<int>(wave.num_samples());
  const int channels = wave.channels();
  const int frames = (num_samples + hop - 1) / hop;
  const int bins = frame_len / 2 + 1;
  const int head = frame_len - hop;
  const int padded_len = (frames - 1) * hop + frame_len;

  const RVec window = hann_window(frame_len);
  Spectrogram spec = Spectrogram::zeros(frames, bins, channels, frame_len, hop,
                                        wave.sample_rate);
  FramePlans plans(frame_len);

  std::vector<double> padded(padded_len);
  for (int m = 0; m < channels; ++m) {
    std::fill(padded.begin(), padded.end(), 0.0);
    for (int i = 0; i < num_samples; ++i) padded[head + i] = wave.samples(i, m);
    for (int t = 0; t < frames; ++t) {
      const double* src = padded.data() + static_cast<size_t>(t) * hop;
      for (int i = 0; i < frame_len; ++i) plans.real()[i] = src[i] * window(i);
      plans.forward();
      for (int f = 0; f < bins; ++f)
        spec.at(t, f, m) = Complex(plans.cplx()[f][0], plans.cplx()[f][1]);
    }
  }
  return spec;
}

WaveBlock synthesize(const Spectrogram& spec) {
  if (spec.frames == 0 || spec.channels == 0)
    throw Error("inconsistent stft metadata");
  if (spec.frame_len <= 0 || spec.hop <= 0 ||
      spec.bins != spec.frame_len / 2 + 1)
    throw Error("inconsistent stft metadata");
  check_grid(spec.frame_len, spec.hop);

  const int frame_len = spec.frame_len;
  const int hop = spec.hop;
  const int head = frame_len - hop;
  const int padded_len = (spec.frames - 1) * hop + frame_len;
  const int out_len = spec.frames * hop;

  const RVec g = dual_window(hann_window(frame_len), hop);
  FramePlans plans(frame_len);

  WaveBlock wave;
  wave.sample_rate = spec.sample_rate;
  wave.samples.setZero(out_len, spec.channels);

  std::vector<double> acc(padded_len);
  for (int m = 0; m < spec.channels; ++m) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int t = 0; t < spec.frames; ++t) {
      for (int f = 0; f < spec.bins; ++f) {
        plans.cplx()[f][0] = spec.at(t, f, m).real();
        plans.cplx()[f][1] = spec.at(t, f, m).imag();
      }
      plans.inverse();  // unnormalized; divide by frame_len below
      double* dst = acc.data() + static_cast<size_t>(t) * hop;
      for (int i = 0; i < frame_len; ++i)
        dst[i] += plans.real()[i] / frame_len * g(i);
    }
    for (int i = 0; i < out_len; ++i) wave.samples(i, m) = acc[head + i];
  }
  return wave;
}

}  // namespace convbf
