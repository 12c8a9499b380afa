// tests/test_pipeline.cpp

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

#include <cmath>

#include "convbf/pipeline.hpp"
#include "convbf/wpe.hpp"
#include "test_util.hpp"

using namespace convbf;

namespace {

SceneSpec test_scene(uint64_t seed) {
  SceneSpec spec;
  spec.channels = 2;
  spec.atf_frames = 6;
  spec.early_boundary = 2;
  spec.frames = 200;
  spec.snr_db = 20;
  spec.seed = seed;
  spec.frame_len = 16;
  spec.hop = 4;
  return spec;
}

PipelineConfig base_config() {
  PipelineConfig cfg;
  cfg.method = Method::kWpeBfJoint;
  cfg.delay = 2;
  cfg.bands = {{1e12, 4}};
  cfg.iterations = 1;
  return cfg;
}

RtfSource mask_source(const SceneTruth& truth) {
  RtfSource src;
  src.mask = truth.oracle_mask;
  return src;
}

RtfSource oracle_source(const SceneTruth& truth) {
  RtfSource src = mask_source(truth);
  src.oracle = truth.rtf;
  return src;
}

double max_abs_diff(const Spectrogram& a, const Spectrogram& b) {
  double err = 0;
  for (size_t i = 0; i < a.data.size(); ++i)
    err = std::max(err, std::abs(a.data[i] - b.data[i]));
  return err;
}

}  // namespace

TEST_CASE("band lookup maps bin frequencies to taps") {
  PipelineConfig cfg;  // default 0-0.8/0.8-1.5/1.5-8 kHz: 12/10/6
  const Spectrogram spec = Spectrogram::zeros(4, 257, 2, 512, 128, 16000);
  CHECK(taps_for_bin(cfg, spec, 0) == 12);       // 0 Hz
  CHECK(taps_for_bin(cfg, spec, 25) == 12);      // 781 Hz
  CHECK(taps_for_bin(cfg, spec, 26) == 10);      // 812 Hz
  CHECK(taps_for_bin(cfg, spec, 47) == 10);      // 1469 Hz
  CHECK(taps_for_bin(cfg, spec, 48) == 6);       // 1500 Hz, lower edge
  CHECK(taps_for_bin(cfg, spec, 256) == 6);      // Nyquist
}

TEST_CASE("config validation rejects bad setups") {
  const Spectrogram spec = Spectrogram::zeros(4, 9, 2, 16, 4, 16000);
  PipelineConfig cfg = base_config();
  cfg.iterations = 0;
  CHECK_THROWS_AS(validate_config(cfg, spec), ConfigError);

  cfg = base_config();
  cfg.bands = {{4000.0, 4}};  // does not reach Nyquist
  CHECK_THROWS_AS(validate_config(cfg, spec), ConfigError);

  cfg = base_config();
  cfg.bands = {{1e12, 1}};  // shorter than the delay
  CHECK_THROWS_AS(validate_config(cfg, spec), ConfigError);

  cfg = base_config();
  cfg.reference_channel = 5;
  CHECK_THROWS_AS(validate_config(cfg, spec), ConfigError);
}

TEST_CASE("joint run produces output and one loglik entry per bin") {
  const SceneTruth truth = synthesize_scene(test_scene(1));
  const RunReport report =
      run(truth.observation, base_config(), mask_source(truth));
  CHECK(report.enhanced.frames == 200);
  CHECK(report.enhanced.bins == 9);
  CHECK(report.enhanced.channels == 1);
  CHECK(report.failed_bins.empty());
  for (const auto& per_bin : report.loglik) CHECK(per_bin.size() == 1);
}

TEST_CASE("obs method is a bit-exact pass-through") {
  const SceneTruth truth = synthesize_scene(test_scene(2));
  PipelineConfig cfg = base_config();
  cfg.method = Method::kObs;
  const RunReport report = run(truth.observation, cfg, RtfSource{});
  for (int t = 0; t < 200; ++t)
    for (int f = 0; f < 9; ++f)
      CHECK(report.enhanced.at(t, f, 0) == truth.observation.at(t, f, 0));
}

TEST_CASE("beamformer-only equals the unified filter at taps == delay") {
  const SceneTruth truth = synthesize_scene(test_scene(3));
  PipelineConfig cfg = base_config();
  cfg.iterations = 2;

  cfg.method = Method::kBfOnly;
  cfg.bf = BeamKind::kWmpdr;
  const RunReport bf = run(truth.observation, cfg, mask_source(truth));

  cfg.method = Method::kWpdUnified;
  cfg.bands = {{1e12, cfg.delay}};  // stack degenerates to the raw frame
  const RunReport wpd = run(truth.observation, cfg, mask_source(truth));

  CHECK(max_abs_diff(bf.enhanced, wpd.enhanced) <=
        1e-12 * std::sqrt(truth.observation.data.size()));
}

TEST_CASE("unified and factorized solutions agree to 1e-9") {
  const SceneTruth truth = synthesize_scene(test_scene(4));
  PipelineConfig cfg = base_config();
  cfg.loading = 0;
  const EquivalenceStats stats =
      verify_equivalence(truth.observation, cfg, mask_source(truth));
  CHECK(stats.bins_checked == 9);
  CHECK(stats.max_rel_diff <= 1e-9);
}

TEST_CASE("forced-zero dereverberation reduces both paths to the beamformer") {
  SceneSpec spec = test_scene(5);
  spec.atf_frames = 1;  // anechoic
  spec.early_boundary = 1;
  const SceneTruth truth = synthesize_scene(spec);
  PipelineConfig cfg = base_config();
  cfg.bands = {{1e12, cfg.delay}};  // no past block at all: gtilde empty
  cfg.loading = 0;
  const EquivalenceStats stats =
      verify_equivalence(truth.observation, cfg, mask_source(truth));
  CHECK(stats.max_rel_diff <= 1e-12);
}

TEST_CASE("equivalence requires the non-iterating configuration") {
  const SceneTruth truth = synthesize_scene(test_scene(6));
  PipelineConfig cfg = base_config();
  cfg.iterations = 3;
  CHECK_THROWS_WITH_AS(
      verify_equivalence(truth.observation, cfg, mask_source(truth)),
      "equivalence precondition violated", Error);
}

TEST_CASE("both paths fail identically on an exactly singular instance") {
  // Three frames cannot support a 6-dimensional stacked covariance with
  // zero loading. The prediction solve itself stays consistent (the
  // coupling block lies in the range of the past covariance, and the
  // pivoted factorization handles semidefinite systems), but the
  // prediction then annihilates the frames, so the factorized beamformer
  // meets a singular covariance exactly where the unified solve meets an
  // unsolvable system. Both report the same numeric failure.
  SceneSpec spec = test_scene(7);
  spec.frames = 3;
  spec.atf_frames = 3;
  spec.early_boundary = 1;
  spec.snr_db = 40;
  const SceneTruth truth = synthesize_scene(spec);

  PipelineConfig cfg = base_config();
  cfg.delay = 1;
  cfg.bands = {{1e12, 3}};
  cfg.loading = 0;
  RtfSource src = oracle_source(truth);
  src.mask.reset();

  const StackedFrames stacked = stack_bin(truth.observation.bin(0), 1, 3);
  const RVec lambda = RVec::Ones(3);
  const CovarianceSet cov = weighted_covariance(stacked, lambda);
  const CVec rtf = truth.rtf.row(0).transpose();

  const DereverbFilter filter = fit_wpe(cov, 0);  // consistent: no throw
  const CMat dvr = apply_wpe(filter, stacked);
  const CMat rd = dereverb_covariance(dvr, lambda);
  CHECK_THROWS_WITH_AS(solve_wmpdr(rd, rtf, 0), "numeric failure",
                       NumericError);  // factorized path
  CHECK_THROWS_WITH_AS(solve_wpd(cov, rtf, 0), "numeric failure",
                       NumericError);  // unified path
  CHECK_THROWS_AS(verify_equivalence(truth.observation, cfg, src),
                  NumericError);
}

TEST_CASE("joint optimization is coordinate ascent with a fixed rtf") {
  for (uint64_t seed : {10, 11, 12}) {
    const SceneTruth truth = synthesize_scene(test_scene(seed));
    PipelineConfig cfg = base_config();
    cfg.iterations = 4;
    RtfSource src;
    src.oracle = truth.rtf;
    const RunReport report = run(truth.observation, cfg, src);
    REQUIRE(report.failed_bins.empty());
    for (const auto& per_bin : report.loglik) {
      REQUIRE(per_bin.size() == 4);
      for (size_t k = 1; k < per_bin.size(); ++k)
        CHECK(per_bin[k] >=
              per_bin[k - 1] - 1e-6 * std::abs(per_bin[k - 1]));
    }
  }
}

TEST_CASE("final powers sit at the fixed point above the floor") {
  const SceneTruth truth = synthesize_scene(test_scene(13));
  PipelineConfig cfg = base_config();
  cfg.iterations = 2;
  const RunReport report =
      run(truth.observation, cfg, oracle_source(truth));

  for (int f = 0; f < 9; ++f) {
    // Recover the floor from the report: everything below it is clamped.
    for (int t = 0; t < 200; ++t) {
      const double z2 = std::norm(report.enhanced.at(t, f, 0));
      const double lam = report.final_psd.lambda(t, f);
      if (lam > z2) continue;  // floored entry
      CHECK(lam == z2);        // exact fixed point
    }
  }
}

TEST_CASE("separate scheme runs both blocks and stays close to joint") {
  const SceneTruth truth = synthesize_scene(test_scene(14));
  PipelineConfig cfg = base_config();
  cfg.iterations = 3;
  cfg.method = Method::kWpeBfSeparate;
  const RunReport sep =
      run(truth.observation, cfg, oracle_source(truth), {}, &truth);
  for (const auto& per_bin : sep.loglik) CHECK(per_bin.size() == 6);

  cfg.method = Method::kWpeBfJoint;
  const RunReport joint =
      run(truth.observation, cfg, oracle_source(truth), {}, &truth);
  CHECK(std::abs(sep.metrics.at("oracle_snr_db") -
                 joint.metrics.at("oracle_snr_db")) <= 1.5);
}

TEST_CASE("serial and parallel paths give bit-identical reports") {
  const SceneTruth truth = synthesize_scene(test_scene(15));
  PipelineConfig cfg = base_config();
  cfg.iterations = 2;
  RunOptions serial;
  serial.parallel = false;
  RunOptions parallel;
  parallel.threads = 3;

  const RunReport a =
      run(truth.observation, cfg, mask_source(truth), serial, &truth);
  const RunReport b =
      run(truth.observation, cfg, mask_source(truth), parallel, &truth);
  CHECK(a.enhanced.data == b.enhanced.data);
  CHECK(a.final_psd.lambda == b.final_psd.lambda);
  CHECK(a.loglik == b.loglik);
  CHECK(*a.enhanced_late == *b.enhanced_late);
}

TEST_CASE("failed bins fall back to pass-through and are flagged") {
  // An all-zero observation makes every power floor zero, so the weighted
  // covariance cannot be formed anywhere.
  const Spectrogram zero = Spectrogram::zeros(50, 5, 2, 8, 2, 16000);
  PipelineConfig cfg = base_config();
  RtfSource src;
  src.mask = RMat::Constant(50, 5, 0.5);
  const RunReport report = run(zero, cfg, src);
  CHECK(report.failed_bins.size() == 5);
  for (const Complex& v : report.enhanced.data) CHECK(v == Complex(0, 0));
}

TEST_CASE("metrics: exact output and pass-through references") {
  const SceneTruth truth = synthesize_scene(test_scene(16));

  // Pass-through: oracle snr equals the input snr, residual ratios are 0 dB.
  PipelineConfig cfg = base_config();
  cfg.method = Method::kObs;
  const RunReport obs = run(truth.observation, cfg, RtfSource{}, {}, &truth);
  CHECK(obs.metrics.at("oracle_snr_db") ==
        doctest::Approx(obs.metrics.at("input_snr_db")));
  CHECK(obs.metrics.at("residual_late_db") == doctest::Approx(0.0));
  CHECK(obs.metrics.at("residual_noise_db") == doctest::Approx(0.0));

  // Perfect output: capped snr, capped residuals.
  RunReport perfect = obs;
  for (int t = 0; t < 200; ++t)
    for (int f = 0; f < 9; ++f)
      perfect.enhanced.at(t, f, 0) = truth.early.at(t, f, 0);
  perfect.enhanced_late = CMat::Zero(200, 9);
  perfect.enhanced_noise = CMat::Zero(200, 9);
  const auto m = oracle_metrics(truth, perfect, 0);
  CHECK(m.at("oracle_snr_db") == 300.0);
  CHECK(m.at("residual_late_db") == -300.0);
  CHECK(m.at("residual_noise_db") == -300.0);
}

TEST_CASE("enhancement beats pass-through on a reverberant noisy scene") {
  SceneSpec spec = test_scene(17);
  spec.atf_frames = 8;
  spec.frames = 400;
  const SceneTruth truth = synthesize_scene(spec);
  PipelineConfig cfg = base_config();
  cfg.bands = {{1e12, 8}};
  cfg.iterations = 2;

  const RunReport joint =
      run(truth.observation, cfg, mask_source(truth), {}, &truth);
  cfg.method = Method::kObs;
  const RunReport obs = run(truth.observation, cfg, RtfSource{}, {}, &truth);

  CHECK(joint.metrics.at("oracle_snr_db") > obs.metrics.at("oracle_snr_db"));
}

TEST_CASE("wpe_only with a degenerate stack is the identity, and composes") {
  const SceneTruth truth = synthesize_scene(test_scene(18));
  PipelineConfig cfg = base_config();
  cfg.bands = {{1e12, cfg.delay}};  // taps == delay

  cfg.method = Method::kWpeOnly;
  const RunReport wpe = run(truth.observation, cfg, RtfSource{});
  for (int t = 0; t < 200; ++t)
    for (int f = 0; f < 9; ++f)
      CHECK(wpe.enhanced.at(t, f, 0) == truth.observation.at(t, f, 0));

  // Composition with the beamformer equals the unified degenerate filter.
  cfg.method = Method::kWpeBfJoint;
  const RunReport chain = run(truth.observation, cfg, mask_source(truth));
  cfg.method = Method::kWpdUnified;
  const RunReport wpd = run(truth.observation, cfg, mask_source(truth));
  CHECK(max_abs_diff(chain.enhanced, wpd.enhanced) == 0.0);
}
