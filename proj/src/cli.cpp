// src/cli.cpp

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

#include "convbf/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "convbf/maskio.hpp"
#include "convbf/tensorfile.hpp"
#include "convbf/tfspace.hpp"
#include "convbf/wav.hpp"

namespace convbf {

namespace {

using nlohmann::json;

bool needs_beamformer(Method method) {
  return method == Method::kBfOnly || method == Method::kWpdUnified ||
         method == Method::kWpeBfJoint || method == Method::kWpeBfSeparate;
}

std::string bf_name(BeamKind bf) {
  switch (bf) {
    case BeamKind::kWmpdr:
      return "wmpdr";
    case BeamKind::kMpdr:
      return "mpdr";
    case BeamKind::kMvdr:
      return "mvdr";
    case BeamKind::kWpdUnified:
      return "wpd";
  }
  return "?";
}

BeamKind parse_bf(const std::string& name) {
  if (name == "wmpdr") return BeamKind::kWmpdr;
  if (name == "mpdr") return BeamKind::kMpdr;
  if (name == "mvdr") return BeamKind::kMvdr;
  throw ConfigError("unknown beamformer kind: " + name);
}

}  // namespace

std::string method_to_string(Method method, BeamKind bf) {
  switch (method) {
    case Method::kObs:
      return "obs";
    case Method::kWpeOnly:
      return "wpe_only";
    case Method::kBfOnly:
      return "bf_only:" + bf_name(bf);
    case Method::kWpdUnified:
      return "wpd_unified";
    case Method::kWpeBfJoint:
      return "wpe_" + bf_name(bf) + "_joint";
    case Method::kWpeBfSeparate:
      return "wpe_then_bf_separate:" + bf_name(bf);
  }
  return "?";
}

void parse_method(const std::string& name, Method* method, BeamKind* bf) {
  std::string head = name;
  std::string tail;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    head = name.substr(0, colon);
    tail = name.substr(colon + 1);
  }

  if (head == "obs") {
    *method = Method::kObs;
  } else if (head == "wpe_only" || head == "wpe") {
    *method = Method::kWpeOnly;
  } else if (head == "bf_only") {
    *method = Method::kBfOnly;
    *bf = parse_bf(tail.empty() ? "wmpdr" : tail);
  } else if (head == "wmpdr" || head == "mpdr" || head == "mvdr") {
    *method = Method::kBfOnly;
    *bf = parse_bf(head);
  } else if (head == "wpd_unified" || head == "wpd") {
    *method = Method::kWpdUnified;
  } else if (head == "wpe_wmpdr_joint" || head == "wpe+wmpdr") {
    *method = Method::kWpeBfJoint;
    *bf = BeamKind::kWmpdr;
  } else if (head == "wpe_mpdr_joint" || head == "wpe+mpdr") {
    *method = Method::kWpeBfJoint;
    *bf = BeamKind::kMpdr;
  } else if (head == "wpe_mvdr_joint" || head == "wpe+mvdr") {
    *method = Method::kWpeBfJoint;
    *bf = BeamKind::kMvdr;
  } else if (head == "wpe_then_bf_separate") {
    *method = Method::kWpeBfSeparate;
    *bf = tail.empty() ? BeamKind::kWmpdr : parse_bf(tail);
  } else {
    throw ConfigError("unknown method: " + name);
  }
  if (*bf == BeamKind::kWpdUnified) *bf = BeamKind::kWmpdr;
  if (!tail.empty() && head != "bf_only" && head != "wpe_then_bf_separate")
    throw ConfigError("unknown method: " + name);
}

namespace {

std::vector<BandTaps> parse_lw(const std::string& text) {
  std::vector<BandTaps> bands;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto colon = token.find(':');
    BandTaps band;
    try {
      if (colon == std::string::npos) {
        band.upper_hz = 1e12;  // whole spectrum
        band.taps = std::stoi(token);
      } else {
        band.upper_hz = std::stod(token.substr(0, colon));
        band.taps = std::stoi(token.substr(colon + 1));
      }
    } catch (const std::exception&) {
      throw ConfigError("bad --lw entry: " + token);
    }
    bands.push_back(band);
  }
  if (bands.empty()) throw ConfigError("empty --lw list");
  return bands;
}

json config_json(const JobSpec& job) {
  json bands = json::array();
  for (const BandTaps& band : job.cfg.bands)
    bands.push_back({band.upper_hz, band.taps});
  return json{
      {"method", method_to_string(job.cfg.method, job.cfg.bf)},
      {"b", job.cfg.delay},
      {"lw_bands", bands},
      {"iterations", job.cfg.iterations},
      {"inner_iterations", job.cfg.inner_iterations},
      {"loading", job.cfg.loading},
      {"lambda_floor", job.cfg.lambda_floor},
      {"reference_channel", job.cfg.reference_channel},
      {"lambda_init", job.cfg.lambda_init == LambdaInit::kChannelMean
                          ? "channel_mean"
                          : "reference_channel"},
      {"frame_len", job.frame_len},
      {"hop", job.hop},
      {"rtf", job.rtf_kind},
  };
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("cannot write: " + path);
}

std::vector<int> marks_from_ms(const Spectrogram& spec, double head_ms,
                               double tail_ms) {
  const double frames_per_ms = spec.sample_rate / 1000.0 / spec.hop;
  const int head = static_cast<int>(std::lround(head_ms * frames_per_ms));
  const int tail = static_cast<int>(std::lround(tail_ms * frames_per_ms));
  if (head + tail > spec.frames)
    throw ConfigError("noise padding exceeds signal length");
  std::vector<int> marks;
  for (int t = 0; t < head; ++t) marks.push_back(t);
  for (int t = spec.frames - tail; t < spec.frames; ++t) marks.push_back(t);
  return marks;
}

std::vector<double> mean_loglik(const RunReport& report) {
  size_t iters = 0;
  for (const auto& per_bin : report.loglik)
    iters = std::max(iters, per_bin.size());
  std::vector<double> mean(iters, 0.0);
  for (size_t k = 0; k < iters; ++k) {
    int n = 0;
    for (const auto& per_bin : report.loglik) {
      if (k < per_bin.size()) {
        mean[k] += per_bin[k];
        ++n;
      }
    }
    if (n > 0) mean[k] /= n;
  }
  return mean;
}

SceneSpec scene_from_job(const JobSpec& job, uint64_t seed) {
  SceneSpec spec;
  spec.channels = job.scene_channels;
  spec.atf_frames = job.scene_atf_frames;
  spec.early_boundary = job.scene_early;
  spec.frames = job.scene_frames;
  spec.snr_db = job.scene_snr_db;
  spec.seed = seed;
  spec.frame_len = job.frame_len;
  spec.hop = job.hop;
  spec.sample_rate = 16000;
  return spec;
}

RtfSource rtf_source_for_scene(const JobSpec& job, const SceneTruth& truth) {
  RtfSource src;
  src.mask = truth.oracle_mask;
  if (job.rtf_kind == "oracle")
    src.oracle = truth.rtf;
  else if (job.rtf_kind != "mask")
    throw ConfigError("unknown rtf source: " + job.rtf_kind);
  return src;
}

}  // namespace

int cmd_enhance(const JobSpec& job) {
  if (!job.mask_path.empty() &&
      (job.noise_head_ms > 0 || job.noise_tail_ms > 0))
    throw ConfigError("pick one rtf source: --mask or noise-only padding");

  const WaveBlock wave = read_wav(job.input_path);
  if (needs_beamformer(job.cfg.method) && wave.channels() < 2)
    throw ConfigError("need >=2 channels");

  const Spectrogram spec = analyze(wave, job.frame_len, job.hop);

  RtfSource src;
  if (!job.mask_path.empty()) {
    RMat mask = read_mask(job.mask_path);
    if (mask.rows() != spec.frames || mask.cols() != spec.bins)
      throw IoError("mask grid mismatch: expected " +
                    std::to_string(spec.frames) + "x" +
                    std::to_string(spec.bins));
    src.mask = std::move(mask);
  } else if (job.noise_head_ms > 0 || job.noise_tail_ms > 0) {
    src.noise_marks = marks_from_ms(spec, job.noise_head_ms, job.noise_tail_ms);
  }
  if (needs_beamformer(job.cfg.method) && !src.has_weights())
    throw ConfigError(
        "no rtf source: provide --mask or --noise-head-ms/--noise-tail-ms");

  const RunReport report = run(spec, job.cfg, src, job.opts);
  const WaveBlock out = synthesize(report.enhanced);
  write_wav(job.output_path, out);

  if (!report.failed_bins.empty())
    std::cerr << "warning: " << report.failed_bins.size()
              << " bins fell back to pass-through\n";

  if (!job.json_out.empty()) {
    json j{{"config", config_json(job)},
           {"input", job.input_path},
           {"output", job.output_path},
           {"channels", wave.channels()},
           {"frames", spec.frames},
           {"bins", spec.bins},
           {"failed_bins", report.failed_bins}};
    if (job.emit_metrics) j["loglik_mean_per_iteration"] = mean_loglik(report);
    write_json(job.json_out, j);
  }
  return kExitOk;
}

int cmd_equiv_check(const JobSpec& job) {
  Spectrogram spec;
  RtfSource src;
  if (!job.input_path.empty()) {
    const WaveBlock wave = read_wav(job.input_path);
    if (wave.channels() < 2) throw ConfigError("need >=2 channels");
    spec = analyze(wave, job.frame_len, job.hop);
    if (!job.mask_path.empty()) {
      RMat mask = read_mask(job.mask_path);
      if (mask.rows() != spec.frames || mask.cols() != spec.bins)
        throw IoError("mask grid mismatch");
      src.mask = std::move(mask);
    } else if (job.noise_head_ms > 0 || job.noise_tail_ms > 0) {
      src.noise_marks =
          marks_from_ms(spec, job.noise_head_ms, job.noise_tail_ms);
    } else {
      throw ConfigError(
          "no rtf source: provide --mask or --noise-head-ms/--noise-tail-ms");
    }
  } else {
    if (job.scene_channels < 2) throw ConfigError("need >=2 channels");
    const SceneTruth truth = synthesize_scene(scene_from_job(job, job.seed));
    spec = truth.observation;
    src = rtf_source_for_scene(job, truth);
  }

  PipelineConfig cfg = job.cfg;
  cfg.iterations = 1;
  const EquivalenceStats stats = verify_equivalence(spec, cfg, src, job.opts);
  const bool pass = stats.max_rel_diff <= job.tol;

  std::printf("equiv-check: max_rel_diff=%.6e tol=%.1e bins=%d %s\n",
              stats.max_rel_diff, job.tol, stats.bins_checked,
              pass ? "PASS" : "FAIL");

  if (!job.json_out.empty()) {
    write_json(job.json_out, json{{"config", config_json(job)},
                                  {"max_rel_diff", stats.max_rel_diff},
                                  {"tol", job.tol},
                                  {"bins", stats.bins_checked},
                                  {"pass", pass},
                                  {"seed", job.seed}});
  }
  return pass ? kExitOk : kExitFail;
}

namespace {

struct Accum {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    if (values.empty()) return 0;
    double acc = 0;
    for (double v : values) acc += v;
    return acc / values.size();
  }
  double stddev() const {
    if (values.size() < 2) return 0;
    const double m = mean();
    double acc = 0;
    for (double v : values) acc += (v - m) * (v - m);
    return std::sqrt(acc / (values.size() - 1));
  }
};

}  // namespace

int cmd_bench(const JobSpec& job) {
  std::vector<std::string> methods;
  std::stringstream ss(job.methods);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    Method m;
    BeamKind bf = BeamKind::kWmpdr;
    parse_method(token, &m, &bf);  // validate early
    methods.push_back(token);
  }
  if (methods.empty()) throw ConfigError("empty --methods list");

  // metric sums keyed by (method index, iteration count)
  const int max_iters = job.cfg.iterations;
  std::vector<std::vector<std::map<std::string, Accum>>> acc(
      methods.size(),
      std::vector<std::map<std::string, Accum>>(max_iters + 1));

  if (!job.dump_scene_dir.empty())
    std::filesystem::create_directories(job.dump_scene_dir);

  for (int s = 0; s < job.num_seeds; ++s) {
    const uint64_t seed = job.seed + static_cast<uint64_t>(s);
    const SceneTruth truth = synthesize_scene(scene_from_job(job, seed));
    const RtfSource src = rtf_source_for_scene(job, truth);

    if (!job.dump_scene_dir.empty())
      save_scene(job.dump_scene_dir + "/scene_" + std::to_string(seed) + ".cbt",
                 truth);

    for (size_t mi = 0; mi < methods.size(); ++mi) {
      PipelineConfig cfg = job.cfg;
      parse_method(methods[mi], &cfg.method, &cfg.bf);
      const int iters = cfg.method == Method::kObs ? 1 : max_iters;
      for (int k = 1; k <= iters; ++k) {
        cfg.iterations = k;
        const RunReport report =
            run(truth.observation, cfg, src, job.opts, &truth);
        for (const auto& [key, value] : report.metrics)
          acc[mi][k][key].add(value);
      }
    }
  }

  json table = json::array();
  std::ostringstream csv;
  csv << "method,iterations,oracle_snr_db_mean,oracle_snr_db_std,"
         "residual_late_db_mean,residual_noise_db_mean,input_snr_db_mean\n";
  for (size_t mi = 0; mi < methods.size(); ++mi) {
    Method m;
    BeamKind bf = BeamKind::kWmpdr;
    parse_method(methods[mi], &m, &bf);
    const std::string canonical = method_to_string(m, bf);
    const int iters = m == Method::kObs ? 1 : max_iters;
    for (int k = 1; k <= iters; ++k) {
      const auto& metrics = acc[mi][k];
      auto get = [&](const std::string& key) -> const Accum& {
        static const Accum empty;
        const auto it = metrics.find(key);
        return it == metrics.end() ? empty : it->second;
      };
      char line[256];
      std::snprintf(line, sizeof(line), "%s,%d,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                    canonical.c_str(), k, get("oracle_snr_db").mean(),
                    get("oracle_snr_db").stddev(),
                    get("residual_late_db").mean(),
                    get("residual_noise_db").mean(),
                    get("input_snr_db").mean());
      csv << line;
      if (k == iters) {
        json row{{"method", canonical},
                 {"iterations", k},
                 {"oracle_snr_db",
                  {{"mean", get("oracle_snr_db").mean()},
                   {"std", get("oracle_snr_db").stddev()}}},
                 {"residual_late_db", {{"mean", get("residual_late_db").mean()}}},
                 {"residual_noise_db",
                  {{"mean", get("residual_noise_db").mean()}}},
                 {"input_snr_db", {{"mean", get("input_snr_db").mean()}}}};
        if (job.emit_metrics)
          row["oracle_snr_db"]["values"] = get("oracle_snr_db").values;
        table.push_back(row);
      }
    }
  }

  std::cout << table.dump(2) << "\n";
  if (!job.json_out.empty()) {
    write_json(job.json_out,
               json{{"config", config_json(job)},
                    {"scene",
                     {{"channels", job.scene_channels},
                      {"atf_frames", job.scene_atf_frames},
                      {"early_boundary", job.scene_early},
                      {"frames", job.scene_frames},
                      {"snr_db", job.scene_snr_db},
                      {"first_seed", job.seed},
                      {"num_seeds", job.num_seeds}}},
                    {"table", table}});
  }
  if (!job.csv_out.empty()) {
    std::ofstream out(job.csv_out);
    if (!out) throw IoError("cannot write: " + job.csv_out);
    out << csv.str();
  }
  return kExitOk;
}

namespace {

void add_common_flags(CLI::App* app, JobSpec* job, std::string* method,
                      std::string* lw) {
  app->add_option("--method", *method, "processing method");
  app->add_option("--b", job->cfg.delay, "prediction delay in frames");
  app->add_option("--lw", *lw,
                  "prediction filter taps, comma list of upper_hz:taps or a "
                  "single tap count");
  app->add_option("--iters", job->cfg.iterations, "estimation iterations");
  app->add_option("--inner-iters", job->cfg.inner_iterations,
                  "per-block iterations for the separate scheme");
  app->add_option("--loading", job->cfg.loading, "diagonal loading factor");
  app->add_option("--lambda-floor", job->cfg.lambda_floor,
                  "relative power floor");
  app->add_option("--ref-channel", job->cfg.reference_channel,
                  "reference channel index");
  app->add_option("--frame-len", job->frame_len, "stft frame length");
  app->add_option("--hop", job->hop, "stft hop");
  app->add_option("--mask", job->mask_path, "time-frequency mask file");
  app->add_option("--noise-head-ms", job->noise_head_ms,
                  "noise-only head duration");
  app->add_option("--noise-tail-ms", job->noise_tail_ms,
                  "noise-only tail duration");
  app->add_option("--json-out", job->json_out, "write a json report here");
  app->add_flag("--serial", "use the serial reference path")
      ->each([job](const std::string&) { job->opts.parallel = false; });
  std::string init;
  app->add_option("--lambda-init", init, "channel_mean | reference_channel")
      ->each([job](const std::string& v) {
        if (v == "channel_mean")
          job->cfg.lambda_init = LambdaInit::kChannelMean;
        else if (v == "reference_channel")
          job->cfg.lambda_init = LambdaInit::kRefChannel;
        else
          throw CLI::ValidationError("--lambda-init", "unknown value " + v);
      });
}

void add_scene_flags(CLI::App* app, JobSpec* job) {
  app->add_option("--seed", job->seed, "scene seed");
  app->add_option("--scene-m", job->scene_channels, "scene channel count");
  app->add_option("--scene-la", job->scene_atf_frames,
                  "scene transfer-function length in frames");
  app->add_option("--scene-b", job->scene_early,
                  "scene early/late boundary in frames");
  app->add_option("--scene-t", job->scene_frames, "scene frame count");
  app->add_option("--scene-snr", job->scene_snr_db, "scene snr in dB");
  app->add_option("--rtf", job->rtf_kind, "rtf source: mask | oracle");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"convbf: joint dereverberation and denoising in the STFT "
               "domain with convolutional and factorized beamformers"};
  app.require_subcommand(1);
  // Usage: convbf --config file <subcommand>; keys live in a [subcommand]
  // section and use the long flag names.
  app.set_config("--config", "", "read flags from a key=value file");

  JobSpec job;
  if (const char* env = std::getenv("CONVBF_THREADS")) {
    try {
      job.opts.threads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: bad CONVBF_THREADS value\n";
      return kExitIo;
    }
  }

  std::string method = "wpe_wmpdr_joint";
  std::string lw;

  CLI::App* enhance = app.add_subcommand("enhance", "enhance a wav file");
  JobSpec enhance_job = job;
  std::string enhance_method = method, enhance_lw;
  enhance->add_option("input", enhance_job.input_path, "multichannel wav")
      ->required();
  enhance->add_option("output", enhance_job.output_path, "enhanced mono wav")
      ->required();
  add_common_flags(enhance, &enhance_job, &enhance_method, &enhance_lw);
  enhance->add_flag("--emit-metrics", enhance_job.emit_metrics,
                    "include loglik series in the json report");

  CLI::App* equiv = app.add_subcommand(
      "equiv-check", "verify unified vs factorized agreement");
  JobSpec equiv_job = job;
  equiv_job.frame_len = 64;
  equiv_job.hop = 16;
  std::string equiv_method = method, equiv_lw;
  equiv->add_option("input", equiv_job.input_path,
                    "optional wav input; omitted = synthetic scene");
  add_common_flags(equiv, &equiv_job, &equiv_method, &equiv_lw);
  add_scene_flags(equiv, &equiv_job);
  equiv->add_option("--tol", equiv_job.tol, "pass/fail threshold");
  equiv_job.cfg.loading = 0.0;  // the identity is exact only without loading

  CLI::App* bench = app.add_subcommand(
      "bench", "method comparison table over seeded synthetic scenes");
  JobSpec bench_job = job;
  bench_job.frame_len = 64;
  bench_job.hop = 16;
  bench_job.cfg.delay = 1;  // matches the default scene's early boundary
  bench_job.cfg.iterations = 2;
  std::string bench_methods = "mpdr,mvdr,wmpdr,wpe,wpe+mpdr,wpe+wmpdr";
  std::string bench_lw;
  std::string bench_method_unused;
  add_common_flags(bench, &bench_job, &bench_method_unused, &bench_lw);
  add_scene_flags(bench, &bench_job);
  bench->add_option("--methods", bench_methods, "comma list of methods");
  bench->add_option("--seeds", bench_job.num_seeds, "number of scenes");
  bench->add_option("--csv-out", bench_job.csv_out,
                    "per-iteration metric curves");
  bench->add_option("--dump-scenes", bench_job.dump_scene_dir,
                    "write scene ground truth containers to this directory");
  bench->add_flag("--emit-metrics", bench_job.emit_metrics,
                  "include per-seed metric values in the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitIo;
  }

  try {
    if (enhance->parsed()) {
      parse_method(enhance_method, &enhance_job.cfg.method,
                   &enhance_job.cfg.bf);
      if (!enhance_lw.empty()) enhance_job.cfg.bands = parse_lw(enhance_lw);
      return cmd_enhance(enhance_job);
    }
    if (equiv->parsed()) {
      parse_method(equiv_method, &equiv_job.cfg.method, &equiv_job.cfg.bf);
      if (!equiv_lw.empty()) equiv_job.cfg.bands = parse_lw(equiv_lw);
      return cmd_equiv_check(equiv_job);
    }
    if (bench->parsed()) {
      if (!bench_lw.empty()) bench_job.cfg.bands = parse_lw(bench_lw);
      bench_job.methods = bench_methods;
      return cmd_bench(bench_job);
    }
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace convbf
