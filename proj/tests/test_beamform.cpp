// tests/test_beamform.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "convbf/beamform.hpp"
#include "convbf/scene.hpp"
#include "test_util.hpp"

using namespace convbf;
using namespace convbf::testutil;

namespace {

CovarianceSet cov_of(const CMat& bin, int delay, int taps,
                     const RVec& lambda) {
  return weighted_covariance(stack_bin(bin, delay, taps), lambda);
}

CVec unit_rtf(Rng& rng, int m) {
  CVec v = random_cvec(rng, m);
  return CVec(v / v(0));
}

}  // namespace

TEST_CASE("identity covariance returns the constraint direction") {
  // Unified solver, D = 6, rtf = e_1.
  CovarianceSet cov;
  cov.channels = 2;
  cov.delay = 2;
  cov.taps = 4;
  cov.Rbar = CMat::Identity(6, 6);
  cov.Ry = CMat::Identity(2, 2);
  cov.P = CMat::Zero(4, 2);
  cov.Rtilde = CMat::Identity(4, 4);
  CVec rtf(2);
  rtf << Complex(1, 0), Complex(0, 0);
  const BeamWeights w = solve_wpd(cov, rtf, 0);
  REQUIRE(w.w.size() == 6);
  CHECK(std::abs(w.w(0) - Complex(1, 0)) < 1e-14);
  CHECK(w.w.tail(5).norm() < 1e-14);

  const BeamWeights q = solve_wmpdr(CMat::Identity(2, 2), rtf, 0);
  CHECK(std::abs(q.w(0) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(q.w(1)) < 1e-14);
}

TEST_CASE("unified solver satisfies the constraint and matches the oracle") {
  Rng rng(0);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat bin = random_cmat(rng, 2, 80);
    RVec lambda(80);
    for (int t = 0; t < 80; ++t) lambda(t) = 0.2 + rng.uniform();
    const CovarianceSet cov = cov_of(bin, 2, 4, lambda);  // D = 6
    const CVec rtf = unit_rtf(rng, 2);

    const BeamWeights w = solve_wpd(cov, rtf, 0);
    CVec vbar = CVec::Zero(6);
    vbar.head(2) = rtf;
    CHECK(std::abs(w.w.dot(vbar) - Complex(1, 0)) <= 1e-12);

    // Lagrange-multiplier closed form through the dense-inverse oracle.
    const CMat rinv = lu_inverse(cov.Rbar);
    const CVec num = rinv * vbar;
    const CVec want = num / (vbar.adjoint() * num)(0, 0).real();
    CHECK(rel_err(w.w, want) <= 1e-10);
  }
}

TEST_CASE("wmpdr matches the dense-inverse oracle on a small instance") {
  Rng rng(1);
  const CMat rd = random_hpd(rng, 2);
  const CVec rtf = unit_rtf(rng, 2);
  const BeamWeights q = solve_wmpdr(rd, rtf, 0);
  const CVec num = lu_inverse(rd) * rtf;
  const CVec want = num / (rtf.adjoint() * num)(0, 0).real();
  CHECK(rel_err(q.w, want) <= 1e-12);
}

TEST_CASE("weights are invariant to covariance scale") {
  Rng rng(2);
  const CMat rd = random_hpd(rng, 3);
  const CVec rtf = unit_rtf(rng, 3);
  const BeamWeights a = solve_wmpdr(rd, rtf, 1e-10);
  const BeamWeights b = solve_wmpdr(CMat(17.0 * rd), rtf, 1e-10);
  CHECK(rel_err(a.w, b.w) <= 1e-12);
}

TEST_CASE("unified solution degenerates to wmpdr when taps equal the delay") {
  Rng rng(3);
  const CMat bin = random_cmat(rng, 3, 60);
  RVec lambda(60);
  for (int t = 0; t < 60; ++t) lambda(t) = 0.2 + rng.uniform();
  const CovarianceSet cov = cov_of(bin, 2, 2, lambda);  // stack == raw frame
  REQUIRE(cov.dim() == 3);
  const CVec rtf = unit_rtf(rng, 3);

  const BeamWeights unified = solve_wpd(cov, rtf, 1e-10);
  const BeamWeights plain =
      solve_wmpdr(dereverb_covariance(bin, lambda), rtf, 1e-10);
  CHECK(rel_err(unified.w, plain.w) <= 1e-12);
}

TEST_CASE("mpdr with unit powers equals wmpdr on the unweighted covariance") {
  Rng rng(4);
  const CMat bin = random_cmat(rng, 2, 50);
  const RVec ones = RVec::Ones(50);
  const CMat cov = dereverb_covariance(bin, ones);
  const CVec rtf = unit_rtf(rng, 2);
  const BeamWeights mpdr = solve_mpdr(cov, rtf, 1e-10);
  const BeamWeights wmpdr = solve_wmpdr(cov, rtf, 1e-10);
  CHECK(rel_err(mpdr.w, wmpdr.w) <= 1e-12);
  CHECK(mpdr.kind == BeamKind::kMpdr);
}

TEST_CASE("mvdr against white noise is the matched filter") {
  Rng rng(5);
  const CVec rtf = unit_rtf(rng, 4);
  const CMat rn = 0.3 * CMat::Identity(4, 4);
  const BeamWeights q = solve_mvdr(rn, rtf, 0);
  const CVec want = rtf / rtf.squaredNorm();
  CHECK(rel_err(q.w, want) <= 1e-12);
}

TEST_CASE("mpdr passes a noise-free plane wave through unchanged") {
  SceneSpec spec;
  spec.channels = 3;
  spec.atf_frames = 1;
  spec.early_boundary = 1;
  spec.frames = 400;
  spec.snr_db = std::numeric_limits<double>::infinity();
  spec.seed = 21;
  spec.frame_len = 8;
  spec.hop = 2;
  const SceneTruth truth = synthesize_scene(spec);

  for (int f = 0; f < truth.observation.bins; ++f) {
    const CMat y = truth.observation.bin(f);
    const CMat cov = dereverb_covariance(y, RVec::Ones(spec.frames));
    const CVec rtf = truth.rtf.row(f).transpose();
    const BeamWeights q = solve_mpdr(cov, rtf, 1e-10);
    const CVec z = apply_weights(q, y);
    const CMat d = truth.early.bin(f);
    double err = 0, sig = 0;
    for (int t = 0; t < spec.frames; ++t) {
      err += std::norm(z(t) - d(0, t));
      sig += std::norm(d(0, t));
    }
    CHECK(err <= 1e-16 * sig);
  }
}

TEST_CASE("every solver output is distortionless and minimal") {
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 3;
    const CMat a = random_hpd(rng, m);
    const CVec rtf = unit_rtf(rng, m);
    for (const BeamWeights& w :
         {solve_wmpdr(a, rtf, 0), solve_mpdr(a, rtf, 0),
          solve_mvdr(a, rtf, 0)}) {
      CHECK(std::abs(w.w.dot(rtf) - Complex(1, 0)) <= 1e-10);

      const double base = (w.w.adjoint() * a * w.w)(0, 0).real();
      const CMat proj =
          CMat::Identity(m, m) - rtf * rtf.adjoint() / rtf.squaredNorm();
      for (int k = 0; k < 20; ++k) {
        const CVec other = w.w + proj * (0.3 * random_cvec(rng, m));
        CHECK(std::abs(other.dot(rtf) - Complex(1, 0)) <= 1e-10);
        const double power = (other.adjoint() * a * other)(0, 0).real();
        CHECK(base <= power + 1e-10);
      }
    }
  }
}

TEST_CASE("solver rejects a covariance with non-positive constraint energy") {
  CMat rd = CMat::Zero(2, 2);  // singular; solve itself fails first
  CVec rtf(2);
  rtf << Complex(1, 0), Complex(0, 0);
  CHECK_THROWS_AS(solve_wmpdr(rd, rtf, 0), NumericError);
}

TEST_CASE("apply_weights behaves like a per-frame inner product") {
  Rng rng(7);
  const CMat frames = random_cmat(rng, 3, 12);

  BeamWeights e1;
  e1.w = CVec::Zero(3);
  e1.w(0) = Complex(1, 0);
  const CVec z = apply_weights(e1, frames);
  for (int t = 0; t < 12; ++t) CHECK(z(t) == frames(0, t));

  BeamWeights w;
  w.w = random_cvec(rng, 3);
  const CVec za = apply_weights(w, frames);
  const CVec zb = apply_weights(w, CMat(2.5 * frames));
  CHECK(rel_err(zb, CVec(2.5 * za)) <= 1e-14);

  // Elementwise-sum oracle.
  for (int t = 0; t < 12; ++t) {
    Complex want(0, 0);
    for (int i = 0; i < 3; ++i) want += std::conj(w.w(i)) * frames(i, t);
    CHECK(std::abs(za(t) - want) <= 1e-14 * std::abs(want));
  }

  BeamWeights bad;
  bad.w = CVec::Zero(4);
  CHECK_THROWS_WITH_AS(apply_weights(bad, frames), "dimension mismatch", Error);
}
