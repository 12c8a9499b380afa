// convbf/cli.hpp

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

#ifndef CONVBF_CLI_HPP_
#define CONVBF_CLI_HPP_

#include <string>

#include "convbf/pipeline.hpp"

namespace convbf {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;     // equivalence check failed
inline constexpr int kExitIo = 2;       // unreadable input / bad config
inline constexpr int kExitNumeric = 3;  // solver breakdown

// Everything a single job needs, after flag parsing.
struct JobSpec {
  std::string input_path;
  std::string output_path;
  std::string mask_path;
  std::string json_out;
  std::string csv_out;
  std::string dump_scene_dir;

  PipelineConfig cfg;
  int frame_len = 512;
  int hop = 128;
  double noise_head_ms = 0;
  double noise_tail_ms = 0;
  bool emit_metrics = false;
  double tol = 1e-9;
  uint64_t seed = 0;
  int num_seeds = 20;
  std::string rtf_kind = "mask";  // mask | oracle (synthetic scenes only)
  std::string methods;            // bench: comma list of method names

  // Synthetic-scene shape for bench and generated equivalence checks. The
  // direct-path-only early component keeps the beamformer's rank-one
  // desired-signal model exact.
  int scene_channels = 2;
  int scene_atf_frames = 8;
  int scene_early = 1;
  int scene_frames = 200;
  double scene_snr_db = 20.0;

  RunOptions opts;
};

// Canonical method name used in reports and accepted by --method.
std::string method_to_string(Method method, BeamKind bf);
void parse_method(const std::string& name, Method* method, BeamKind* bf);

int cmd_enhance(const JobSpec& job);
int cmd_equiv_check(const JobSpec& job);
int cmd_bench(const JobSpec& job);

// Full flag parsing + dispatch; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace convbf

#endif  // CONVBF_CLI_HPP_
