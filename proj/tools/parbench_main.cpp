// tools/parbench_main.cpp

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

// Wall-clock comparison of the OpenMP per-bin kernel against the serial
// reference path, with a bitwise equality check between the two.

#include <omp.h>

#include <cstdio>
#include <cstring>
#include <string>

#include "convbf/pipeline.hpp"

using namespace convbf;

namespace {

bool reports_identical(const RunReport& a, const RunReport& b) {
  if (a.enhanced.data.size() != b.enhanced.data.size()) return false;
  for (size_t i = 0; i < a.enhanced.data.size(); ++i)
    if (a.enhanced.data[i] != b.enhanced.data[i]) return false;
  if (a.final_psd.lambda != b.final_psd.lambda) return false;
  return a.failed_bins == b.failed_bins;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  SceneSpec scene;
  scene.channels = quick ? 2 : 4;
  scene.atf_frames = 8;
  scene.early_boundary = 2;
  scene.frames = quick ? 120 : 800;
  scene.snr_db = 20;
  scene.seed = 11;
  scene.frame_len = quick ? 32 : 256;
  scene.hop = quick ? 8 : 64;
  const SceneTruth truth = synthesize_scene(scene);

  PipelineConfig cfg;
  cfg.method = Method::kWpeBfJoint;
  cfg.delay = 2;
  cfg.bands = {{800.0, 10}, {1500.0, 8}, {8000.0, 6}};
  cfg.iterations = 2;

  RtfSource src;
  src.mask = truth.oracle_mask;

  RunOptions serial;
  serial.parallel = false;

  // Warm-up run, then timed runs.
  run(truth.observation, cfg, src, serial);

  const double t0 = omp_get_wtime();
  const RunReport ref = run(truth.observation, cfg, src, serial);
  const double t1 = omp_get_wtime();

  RunOptions parallel;
  const RunReport par = run(truth.observation, cfg, src, parallel);
  const double t2 = omp_get_wtime();

  const bool same = reports_identical(ref, par);
  std::printf("bins=%d frames=%d channels=%d\n", truth.observation.bins,
              truth.observation.frames, truth.observation.channels);
  std::printf("serial:   %.3f s\n", t1 - t0);
  std::printf("parallel: %.3f s (%d threads max)\n", t2 - t1,
              omp_get_max_threads());
  std::printf("speedup:  %.2fx\n", (t1 - t0) / std::max(t2 - t1, 1e-9));
  std::printf("outputs bitwise identical: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
