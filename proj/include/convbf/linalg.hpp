// convbf/linalg.hpp

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

#ifndef CONVBF_LINALG_HPP_
#define CONVBF_LINALG_HPP_

#include "convbf/types.hpp"

namespace convbf {

// Dense complex Hermitian matrix. Construction symmetrizes (A + A^H)/2 and
// records whether the input violated Hermitian symmetry by more than 1e-8
// relative in Frobenius norm.
struct HermMatrix {
  CMat mat;
  bool asymmetry_flagged = false;

  explicit HermMatrix(const CMat& a);
  int dim() const { return static_cast<int>(mat.rows()); }
};

// Solves (A + loading * tr(A)/dim * I) X = B for Hermitian A, with one step
// of iterative refinement. The residual is checked against 1e-9 * ||B||_F;
// failure throws NumericError("numeric failure").
CMat herm_solve(const HermMatrix& a, const CMat& b, double loading);
CVec herm_solve(const HermMatrix& a, const CVec& b, double loading);

struct EigDecomp {
  RVec values;   // real, descending
  CMat vectors;  // columns, orthonormal; largest-magnitude entry real positive
};

EigDecomp herm_eig(const HermMatrix& a);

// W such that W A W^H = I, via eigendecomposition of A with eigenvalues
// floored at floor_rel * max_eigenvalue. W is Hermitian.
HermMatrix inv_sqrt(const HermMatrix& a, double floor_rel);

}  // namespace convbf

#endif  // CONVBF_LINALG_HPP_
