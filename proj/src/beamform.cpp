// src/beamform.cpp

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

#include "convbf/beamform.hpp"

#include <cmath>

#include "convbf/linalg.hpp"

namespace convbf {

namespace {

// Minimum-power solution under w^H v = 1: w = A^{-1} v / (v^H A^{-1} v).
// The constraint energy v^H A^{-1} v is real for Hermitian A; its numerical
// imaginary part is checked and discarded.
BeamWeights solve_distortionless(const CMat& a, const CVec& v, double loading,
                                 BeamKind kind) {
  if (a.rows() != v.size()) throw Error("dimension mismatch");
  const CVec x = herm_solve(HermMatrix(a), v, loading);
  const Complex denom = v.dot(x);  // v^H x
  const double re = denom.real();
  if (!(re > 0) || std::abs(denom.imag()) > 1e-8 * re)
    throw NumericError("invalid constraint energy");
  BeamWeights weights;
  weights.w = x / re;
  weights.kind = kind;
  return weights;
}

}  // namespace

BeamWeights solve_wpd(const CovarianceSet& cov, const CVec& rtf,
                      double loading) {
  if (rtf.size() != cov.channels) throw Error("dimension mismatch");
  CVec vbar = CVec::Zero(cov.dim());
  vbar.head(cov.channels) = rtf;
  return solve_distortionless(cov.Rbar, vbar, loading, BeamKind::kWpdUnified);
}

BeamWeights solve_wmpdr(const CMat& rd, const CVec& rtf, double loading) {
  return solve_distortionless(rd, rtf, loading, BeamKind::kWmpdr);
}

BeamWeights solve_mpdr(const CMat& ry_unweighted, const CVec& rtf,
                       double loading) {
  return solve_distortionless(ry_unweighted, rtf, loading, BeamKind::kMpdr);
}

BeamWeights solve_mvdr(const CMat& rn, const CVec& rtf, double loading) {
  return solve_distortionless(rn, rtf, loading, BeamKind::kMvdr);
}

CVec apply_weights(const BeamWeights& weights, const CMat& frames) {
  if (weights.w.size() != frames.rows()) throw Error("dimension mismatch");
  return (weights.w.adjoint() * frames).transpose();
}

}  // namespace convbf
