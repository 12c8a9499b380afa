// src/scene.cpp

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

#include "convbf/scene.hpp"

#include <cmath>
#include <limits>

#include "convbf/rng.hpp"

namespace convbf {

namespace {

// Time-varying source variances: a smoothed, mean-reverting Gaussian
// log-power walk, normalized to unit mean and floored at 1e-4 of it. The
// leak keeps the dynamic range speech-like regardless of the frame count.
RVec variance_profile(Rng& rng, int frames) {
  RVec walk(frames);
  double g = 0;
  for (int t = 0; t < frames; ++t) {
    g = 0.98 * g + 0.25 * rng.gauss();
    walk(t) = g;
  }
  const int half = 4;  // 9-frame moving average
  RVec smooth(frames);
  for (int t = 0; t < frames; ++t) {
    double acc = 0;
    int n = 0;
    for (int k = std::max(0, t - half); k <= std::min(frames - 1, t + half);
         ++k) {
      acc += walk(k);
      ++n;
    }
    smooth(t) = acc / n;
  }
  RVec var(frames);
  for (int t = 0; t < frames; ++t) var(t) = std::exp(smooth(t));
  const double mean = var.mean();
  if (mean > 0) var /= mean;
  for (int t = 0; t < frames; ++t) var(t) = std::max(var(t), 1e-4);
  return var;
}

// Random transfer function: complex Gaussian taps decaying as exp(-tap/4),
// scaled so the tap-0 vector has unit norm.
CMat random_atf(Rng& rng, int atf_frames, int channels) {
  CMat a(atf_frames, channels);
  for (int tau = 0; tau < atf_frames; ++tau) {
    const double decay = std::exp(-tau / 4.0);
    for (int m = 0; m < channels; ++m) a(tau, m) = decay * rng.cgauss();
  }
  const double n0 = a.row(0).norm();
  if (n0 > 0) a /= n0;
  return a;
}

}  // namespace

SceneTruth synthesize_scene(const SceneSpec& spec) {
  if (spec.early_boundary < 1 || spec.early_boundary > spec.atf_frames)
    throw Error("invalid early/late split");
  if (spec.channels < 1) throw Error("scene needs at least one channel");
  if (spec.frames < spec.atf_frames)
    throw Error("scene shorter than transfer function");
  if (!spec.atf.empty() && spec.atf.size() != 1 &&
      static_cast<int>(spec.atf.size()) != spec.bins())
    throw Error("atf list must have one entry or one per bin");

  const int T = spec.frames;
  const int F = spec.bins();
  const int M = spec.channels;

  SceneTruth truth;
  truth.early = Spectrogram::zeros(T, F, M, spec.frame_len, spec.hop,
                                   spec.sample_rate);
  truth.late = truth.early;
  truth.noise = truth.early;
  truth.source.setZero(T, F);
  truth.atf0.setZero(F, M);
  truth.rtf.setZero(F, M);
  truth.oracle_mask.setZero(T, F);

  Rng rng(spec.seed);
  double energy_signal = 0;
  double energy_noise_raw = 0;

  for (int f = 0; f < F; ++f) {
    const RVec var = variance_profile(rng, T);
    CVec s(T);
    for (int t = 0; t < T; ++t) s(t) = std::sqrt(var(t)) * rng.cgauss();
    truth.source.col(f) = s;

    CMat a;
    if (spec.atf.empty())
      a = random_atf(rng, spec.atf_frames, M);
    else
      a = spec.atf.size() == 1 ? spec.atf[0] : spec.atf[f];
    if (a.rows() != spec.atf_frames || a.cols() != M)
      throw Error("atf entry has wrong shape");
    truth.atf0.row(f) = a.row(0);
    if (a(0, 0) == Complex(0, 0))
      throw Error("reference channel gain is zero");
    truth.rtf.row(f) = a.row(0) / a(0, 0);
    truth.rtf(f, 0) = Complex(1, 0);  // exact, not 1 + O(eps) i

    for (int t = 0; t < T; ++t) {
      for (int m = 0; m < M; ++m) {
        Complex d(0, 0), r(0, 0);
        for (int tau = 0; tau < spec.atf_frames && tau <= t; ++tau) {
          const Complex c = a(tau, m) * s(t - tau);
          if (tau < spec.early_boundary)
            d += c;
          else
            r += c;
        }
        truth.early.at(t, f, m) = d;
        truth.late.at(t, f, m) = r;
        energy_signal += std::norm(d + r);
        const Complex n = rng.cgauss();
        truth.noise.at(t, f, m) = n;
        energy_noise_raw += std::norm(n);
      }
    }
  }

  // Scale the white noise to the requested global SNR against early + late.
  double alpha = 0;
  if (!std::isinf(spec.snr_db) && energy_noise_raw > 0)
    alpha = std::sqrt(energy_signal / energy_noise_raw *
                      std::pow(10.0, -spec.snr_db / 10.0));
  for (Complex& v : truth.noise.data) v *= alpha;

  truth.observation = truth.early;
  for (size_t i = 0; i < truth.observation.data.size(); ++i)
    truth.observation.data[i] =
        (truth.early.data[i] + truth.late.data[i]) + truth.noise.data[i];

  for (int f = 0; f < F; ++f) {
    for (int t = 0; t < T; ++t) {
      const double num = std::norm(truth.early.at(t, f, 0));
      const double den =
          num + std::norm(truth.late.at(t, f, 0) + truth.noise.at(t, f, 0));
      truth.oracle_mask(t, f) = den > 0 ? num / den : 0.0;
    }
  }
  return truth;
}

SceneTruth noise_only_padding(const SceneTruth& truth, double head_ms,
                              double tail_ms) {
  if (head_ms < 0 || tail_ms < 0) throw Error("negative padding");
  const Spectrogram& obs = truth.observation;
  const double frames_per_ms = obs.sample_rate / 1000.0 / obs.hop;
  const int head = static_cast<int>(std::lround(head_ms * frames_per_ms));
  const int tail = static_cast<int>(std::lround(tail_ms * frames_per_ms));
  if (head + tail > obs.frames) throw Error("padding exceeds signal length");

  SceneTruth out = truth;
  out.noise_frames.clear();
  for (int t = 0; t < head; ++t) out.noise_frames.push_back(t);
  for (int t = obs.frames - tail; t < obs.frames; ++t)
    out.noise_frames.push_back(t);

  for (int t : out.noise_frames) {
    for (int f = 0; f < obs.bins; ++f) {
      out.source(t, f) = Complex(0, 0);
      out.oracle_mask(t, f) = 0.0;
      for (int m = 0; m < obs.channels; ++m) {
        out.early.at(t, f, m) = Complex(0, 0);
        out.late.at(t, f, m) = Complex(0, 0);
        out.observation.at(t, f, m) =
            (out.early.at(t, f, m) + out.late.at(t, f, m)) +
            out.noise.at(t, f, m);
      }
    }
  }
  return out;
}

}  // namespace convbf
