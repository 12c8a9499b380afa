// src/rtf.cpp

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

#include "convbf/rtf.hpp"

#include <cmath>

namespace convbf {

RtfEstimate estimate_rtf(const CMat& rx, const CMat& rn, double loading) {
  if (rx.rows() != rn.rows()) throw Error("dimension mismatch");
  const int m = static_cast<int>(rx.rows());

  // One eigendecomposition of Rn yields both Rn^{-1/2} (whitening) and
  // Rn^{1/2} (de-whitening) with consistent eigenvalue flooring.
  const EigDecomp noise_eig = herm_eig(HermMatrix(rn));
  if (!(noise_eig.values(0) > 0))
    throw NumericError("noise covariance numerically singular");
  const double floor = loading * noise_eig.values(0);
  RVec sqrt_vals(m), inv_sqrt_vals(m);
  for (int i = 0; i < m; ++i) {
    const double lam = std::max(noise_eig.values(i), floor);
    if (!(lam > 0))
      throw NumericError("noise covariance numerically singular");
    sqrt_vals(i) = std::sqrt(lam);
    inv_sqrt_vals(i) = 1.0 / sqrt_vals(i);
  }
  const CMat w = noise_eig.vectors * inv_sqrt_vals.asDiagonal() *
                 noise_eig.vectors.adjoint();
  const CMat rn_half =
      noise_eig.vectors * sqrt_vals.asDiagonal() * noise_eig.vectors.adjoint();

  const HermMatrix whitened(CMat(w * rx * w.adjoint()));
  const EigDecomp eig = herm_eig(whitened);

  RtfEstimate est;
  if (m > 1 && eig.values(0) != 0) {
    est.rank1_fit_error = eig.values(1) / eig.values(0);
    est.degenerate = (eig.values(0) - eig.values(1)) < 1e-8 * eig.values(0);
  }

  // The whitened principal direction maps back through Rn^{1/2}. Mapping
  // with W^H instead skews the estimate by Rn^{-1} whenever the noise is
  // spatially colored.
  CVec v_raw = rn_half * eig.vectors.col(0);
  if (std::abs(v_raw(0)) <= 1e-12 * v_raw.norm())
    throw NumericError("bad reference channel");
  est.v = v_raw / v_raw(0);
  est.v(0) = Complex(1, 0);
  return est;
}

std::pair<CMat, CMat> signal_covariances(const CMat& frames,
                                         const RVec& weights) {
  const int T = static_cast<int>(frames.cols());
  const int m = static_cast<int>(frames.rows());
  if (weights.size() != T) throw Error("dimension mismatch");

  CMat rx = CMat::Zero(m, m);
  CMat rn = CMat::Zero(m, m);
  double wx = 0, wn = 0;
  for (int t = 0; t < T; ++t) {
    const double mt = weights(t);
    if (mt < 0 || mt > 1) throw Error("mask weight outside [0, 1]");
    const CMat outer = frames.col(t) * frames.col(t).adjoint();
    rx.noalias() += mt * outer;
    rn.noalias() += (1.0 - mt) * outer;
    wx += mt;
    wn += 1.0 - mt;
  }
  if (wx == 0 || wn == 0) throw Error("empty class");
  rx /= wx;
  rn /= wn;
  return {CMat(0.5 * (rx + rx.adjoint())), CMat(0.5 * (rn + rn.adjoint()))};
}

}  // namespace convbf
