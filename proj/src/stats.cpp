// src/stats.cpp

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

#include "convbf/stats.hpp"

#include "convbf/linalg.hpp"

namespace convbf {

StackedFrames stack_bin(const CMat& bin, int delay, int taps) {
  if (delay < 1) throw Error("invalid prediction delay");
  if (taps < delay) throw Error("filter shorter than delay");

  const int channels = static_cast<int>(bin.rows());
  const int frames = static_cast<int>(bin.cols());
  const int blocks = taps - delay + 1;

  StackedFrames out;
  out.channels = channels;
  out.delay = delay;
  out.taps = taps;
  out.frames.setZero(static_cast<Eigen::Index>(channels) * blocks, frames);
  for (int t = 0; t < frames; ++t) {
    out.frames.col(t).head(channels) = bin.col(t);
    for (int k = 1; k < blocks; ++k) {
      const int src = t - delay - (k - 1);
      if (src >= 0) out.frames.col(t).segment(k * channels, channels) =
          bin.col(src);
    }
  }
  return out;
}

StackedFrames stack(const Spectrogram& spec, int bin, int delay, int taps) {
  if (bin < 0 || bin >= spec.bins) throw Error("bin index out of range");
  return stack_bin(spec.bin(bin), delay, taps);
}

namespace {

// Fixed-order accumulation of (1/T) sum_t f_t f_t^H / lambda_t, followed by
// an exact symmetrization.
CMat weighted_outer_sum(const CMat& frames, const RVec& lambda) {
  const int dim = static_cast<int>(frames.rows());
  const int T = static_cast<int>(frames.cols());
  if (lambda.size() != T) throw Error("lambda length mismatch");

  CMat acc = CMat::Zero(dim, dim);
  for (int t = 0; t < T; ++t) {
    if (!(lambda(t) > 0)) throw Error("unfloored PSD");
    acc.noalias() += (frames.col(t) * frames.col(t).adjoint()) / lambda(t);
  }
  acc /= T;
  return CMat(0.5 * (acc + acc.adjoint()));
}

}  // namespace

CovarianceSet weighted_covariance(const StackedFrames& stacked,
                                  const RVec& lambda) {
  const int D = stacked.dim();
  const int M = stacked.channels;

  CovarianceSet cov;
  cov.Rbar = weighted_outer_sum(stacked.frames, lambda);
  cov.Ry = cov.Rbar.topLeftCorner(M, M);
  cov.P = cov.Rbar.bottomLeftCorner(D - M, M);
  cov.Rtilde = cov.Rbar.bottomRightCorner(D - M, D - M);
  cov.T_used = stacked.num_frames();
  cov.channels = M;
  cov.delay = stacked.delay;
  cov.taps = stacked.taps;
  return cov;
}

CMat schur_rd(const CovarianceSet& cov, double loading) {
  if (cov.P.rows() == 0) return cov.Ry;
  CMat x;
  try {
    x = herm_solve(HermMatrix(cov.Rtilde), cov.P, loading);
  } catch (const NumericError&) {
    throw NumericError("degenerate past covariance");
  }
  CMat rd = cov.Ry - cov.P.adjoint() * x;
  return CMat(0.5 * (rd + rd.adjoint()));
}

CMat dereverb_covariance(const CMat& frames, const RVec& lambda) {
  return weighted_outer_sum(frames, lambda);
}

}  // namespace convbf
