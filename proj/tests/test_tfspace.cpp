// tests/test_tfspace.cpp

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

#include "convbf/rng.hpp"
#include "convbf/tfspace.hpp"
#include "test_util.hpp"

using namespace convbf;
using namespace convbf::testutil;

namespace {

WaveBlock white_noise(Rng& rng, int n, int channels, int fs) {
  WaveBlock w;
  w.sample_rate = fs;
  w.samples.resize(n, channels);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < channels; ++m) w.samples(i, m) = 0.3 * rng.gauss();
  return w;
}

double interior_max_err(const WaveBlock& x, const WaveBlock& y, int margin) {
  const int n = static_cast<int>(std::min(x.num_samples(), y.num_samples()));
  double err = 0;
  for (int i = margin; i < n - margin; ++i)
    for (int m = 0; m < x.channels(); ++m)
      err = std::max(err, std::abs(x.samples(i, m) - y.samples(i, m)));
  return err;
}

}  // namespace

TEST_CASE("analyze input validation") {
  WaveBlock empty;
  empty.sample_rate = 16000;
  CHECK_THROWS_WITH_AS(analyze(empty, 512, 128), "empty signal", Error);

  Rng rng(0);
  WaveBlock w = white_noise(rng, 1000, 1, 16000);
  CHECK_THROWS_WITH_AS(analyze(w, 128, 256), "invalid hop", Error);
  CHECK_THROWS_AS(analyze(w, 512, 100), Error);  // hop must divide frame_len
}

TEST_CASE("sine concentrates in the nearest bin") {
  const int fs = 16000;
  const double f0 = 1000.0;
  WaveBlock w;
  w.sample_rate = fs;
  w.samples.resize(fs, 1);
  for (int i = 0; i < fs; ++i)
    w.samples(i, 0) = std::sin(2.0 * M_PI * f0 * i / fs);

  const Spectrogram spec = analyze(w, 512, 128);
  const int expected_bin = static_cast<int>(std::lround(f0 * 512 / fs));
  // Middle frame: away from edge effects.
  const int t = spec.frames / 2;
  double best = -1;
  int best_bin = -1;
  for (int f = 0; f < spec.bins; ++f) {
    const double p = std::norm(spec.at(t, f, 0));
    if (p > best) {
      best = p;
      best_bin = f;
    }
  }
  CHECK(best_bin == expected_bin);
}

TEST_CASE("all-zero wave gives all-zero spectrogram with ceil(N/hop) frames") {
  WaveBlock w;
  w.sample_rate = 16000;
  w.samples.setZero(16000, 2);
  const Spectrogram spec = analyze(w, 512, 128);
  CHECK(spec.frames == (16000 + 127) / 128);
  CHECK(spec.frames == 125);
  CHECK(spec.bins == 257);
  for (const Complex& v : spec.data) CHECK(v == Complex(0, 0));
}

TEST_CASE("bins match the direct DFT of the windowed frame, plus Parseval") {
  Rng rng(1);
  const int frame_len = 64;
  const int hop = 16;
  WaveBlock w = white_noise(rng, 400, 1, 8000);
  const Spectrogram spec = analyze(w, frame_len, hop);
  const RVec window = hann_window(frame_len);

  const int t = 10;  // an interior frame
  // Rebuild the same padded frame the transform saw.
  const int head = frame_len - hop;
  std::vector<double> frame(frame_len, 0.0);
  for (int i = 0; i < frame_len; ++i) {
    const int src = t * hop + i - head;
    if (src >= 0 && src < w.num_samples())
      frame[i] = w.samples(src, 0) * window(i);
    else
      frame[i] = 0.0;
  }

  const std::vector<Complex> ref = naive_dft(frame);
  double max_err = 0;
  for (int f = 0; f < spec.bins; ++f)
    max_err = std::max(max_err, std::abs(spec.at(t, f, 0) - ref[f]));
  CHECK(max_err < 1e-10);

  // Parseval: windowed time energy equals one-sided bin energy / frame_len.
  double time_energy = 0;
  for (double v : frame) time_energy += v * v;
  double bin_energy = std::norm(spec.at(t, 0, 0)) +
                      std::norm(spec.at(t, spec.bins - 1, 0));
  for (int f = 1; f < spec.bins - 1; ++f)
    bin_energy += 2.0 * std::norm(spec.at(t, f, 0));
  bin_energy /= frame_len;
  CHECK(std::abs(time_energy - bin_energy) <=
        1e-6 * std::max(time_energy, 1e-30));
}

TEST_CASE("round trip is exact on the interior") {
  Rng rng(2);
  for (auto [frame_len, hop] : {std::pair{512, 128}, {64, 16}, {64, 32}}) {
    WaveBlock w = white_noise(rng, 3000, 2, 16000);
    const WaveBlock back = synthesize(analyze(w, frame_len, hop));
    REQUIRE(back.num_samples() >= w.num_samples());
    const double peak = w.samples.cwiseAbs().maxCoeff();
    CHECK(interior_max_err(w, back, frame_len) <= 1e-8 * peak);
  }
}

TEST_CASE("round trip of speech-shaped noise exceeds 120 dB snr") {
  Rng rng(3);
  const int fs = 16000;
  WaveBlock w;
  w.sample_rate = fs;
  w.samples.resize(fs, 1);
  // One-pole lowpass on white noise approximates a speech-like spectrum.
  double state = 0;
  for (int i = 0; i < fs; ++i) {
    state = 0.9 * state + 0.3 * rng.gauss();
    w.samples(i, 0) = state;
  }
  const WaveBlock back = synthesize(analyze(w, 512, 128));
  double sig = 0, err = 0;
  for (int i = 512; i < fs - 512; ++i) {
    sig += w.samples(i, 0) * w.samples(i, 0);
    const double d = w.samples(i, 0) - back.samples(i, 0);
    err += d * d;
  }
  CHECK(10.0 * std::log10(sig / err) > 120.0);
}

TEST_CASE("all-zero spectrogram synthesizes to silence") {
  const Spectrogram spec = Spectrogram::zeros(10, 33, 1, 64, 16, 16000);
  const WaveBlock w = synthesize(spec);
  CHECK(w.num_samples() == 160);
  CHECK(w.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("synthesize rejects inconsistent metadata") {
  Spectrogram spec = Spectrogram::zeros(10, 33, 1, 64, 16, 16000);
  spec.bins = 30;  // no longer frame_len/2 + 1
  CHECK_THROWS_AS(synthesize(spec), Error);
}

TEST_CASE("analyze is linear") {
  Rng rng(4);
  WaveBlock x = white_noise(rng, 800, 1, 8000);
  WaveBlock y = white_noise(rng, 800, 1, 8000);
  WaveBlock mix = x;
  mix.samples = 2.0 * x.samples - 0.5 * y.samples;

  const Spectrogram sx = analyze(x, 64, 16);
  const Spectrogram sy = analyze(y, 64, 16);
  const Spectrogram sm = analyze(mix, 64, 16);
  double err = 0, scale = 0;
  for (size_t i = 0; i < sm.data.size(); ++i) {
    err += std::norm(sm.data[i] - (2.0 * sx.data[i] - 0.5 * sy.data[i]));
    scale += std::norm(sm.data[i]);
  }
  CHECK(std::sqrt(err) <= 1e-12 * std::sqrt(scale));
}

TEST_CASE("per-channel analysis equals single-channel analysis") {
  Rng rng(5);
  WaveBlock w = white_noise(rng, 700, 3, 8000);
  const Spectrogram multi = analyze(w, 64, 16);
  for (int m = 0; m < 3; ++m) {
    WaveBlock single;
    single.sample_rate = w.sample_rate;
    single.samples = w.samples.col(m);
    const Spectrogram s = analyze(single, 64, 16);
    double err = 0;
    for (int t = 0; t < s.frames; ++t)
      for (int f = 0; f < s.bins; ++f)
        err = std::max(err, std::abs(s.at(t, f, 0) - multi.at(t, f, m)));
    CHECK(err == 0.0);
  }
}
