// Copyright 2026 The embshift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Acceptance checks for the full toolkit. Each numbered criterion prints
// exactly one PASS/FAIL line; the process exits nonzero when any fail.
// Tolerances are pinned here, next to the checks they guard.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "embshift/downstream.hpp"
#include "embshift/dsp.hpp"
#include "embshift/embedding_io.hpp"
#include "embshift/features.hpp"
#include "embshift/manifest_io.hpp"
#include "embshift/metrics.hpp"
#include "embshift/pipeline.hpp"
#include "embshift/report_io.hpp"
#include "embshift/types.hpp"
#include "embshift/wav.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using namespace embshift;

bool g_ok = true;

void failCheck(const char* file, int line, const std::string& msg) {
  std::cerr << "  [FAIL] " << file << ":" << line << " " << msg << "\n";
  g_ok = false;
}

#define REQUIRE(cond, msg)                  \
  do {                                      \
    if (!(cond)) {                          \
      failCheck(__FILE__, __LINE__, (msg)); \
      return;                               \
    }                                       \
  } while (0)

void requireCloseAbs(const char* file, int line, const std::string& name,
                     double got, double want, double tol) {
  if (!(std::isfinite(got) && std::abs(got - want) <= tol)) {
    failCheck(file, line,
              name + ": got " + std::to_string(got) + ", want " +
                  std::to_string(want) + " within " + std::to_string(tol));
  }
}

#define REQUIRE_CLOSE(name, got, want, tol) \
  do {                                      \
    requireCloseAbs(__FILE__, __LINE__, (name), (got), (want), (tol)); \
    if (!g_ok) return;                      \
  } while (0)

int g_failed_criteria = 0;

void runCriterion(int number, const std::string& label, double budget_s,
                  const std::function<void()>& body) {
  g_ok = true;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    failCheck("(exception)", 0, std::string("unexpected exception: ") +
                                    e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (budget_s > 0.0 && elapsed > budget_s) {
    failCheck("(runtime)", 0,
              "took " + std::to_string(elapsed) + " s, budget " +
                  std::to_string(budget_s) + " s");
  }
  char timing[32];
  std::snprintf(timing, sizeof(timing), "%.2f", elapsed);
  std::cout << (g_ok ? "PASS" : "FAIL") << " criterion " << number << ": "
            << label << " (" << timing << " s)\n";
  if (!g_ok) ++g_failed_criteria;
}

// ---------------------------------------------------------------------------
// 1. Analytic distribution-distance fixtures.

void criterion1() {
  metrics::GaussianStats o;
  o.mean = Eigen::VectorXd::Zero(1);
  o.cov = Eigen::MatrixXd::Identity(1, 1);
  o.count = 100;

  metrics::GaussianStats shifted = o;
  shifted.mean(0) = 1.0;
  REQUIRE_CLOSE("N(0,1) vs N(1,1)", metrics::fad(o, shifted), 1.0, 1e-9);

  metrics::GaussianStats widened = o;
  widened.cov(0, 0) = 4.0;
  REQUIRE_CLOSE("N(0,1) vs N(0,4)", metrics::fad(o, widened), 1.0, 1e-9);

  REQUIRE_CLOSE("identical stats", metrics::fad(o, o), 0.0, 1e-9);

  const EmbeddingSet base = testutil::gaussian_set(200, 64, 11);
  EmbeddingSet moved = base;
  Eigen::VectorXd t(64);
  for (Eigen::Index i = 0; i < 64; ++i) {
    t(i) = 0.05 * static_cast<double>(i % 7) - 0.1;
  }
  moved.vectors.rowwise() += t.transpose();
  const double got = metrics::fad(metrics::gaussian_stats(base),
                                  metrics::gaussian_stats(moved));
  REQUIRE_CLOSE("64-d mean shift", got, t.squaredNorm(), 1e-6);
}

// ---------------------------------------------------------------------------
// 2. Distribution distance is invariant under a shared rotation.

void criterion2() {
  for (std::uint64_t pair = 0; pair < 50; ++pair) {
    const EmbeddingSet a = testutil::gaussian_set(200, 16, 2000 + 2 * pair);
    const EmbeddingSet b = testutil::gaussian_set(200, 16, 2001 + 2 * pair);
    const double before =
        metrics::fad(metrics::gaussian_stats(a), metrics::gaussian_stats(b));

    const Eigen::MatrixXd q = testutil::random_rotation(16, 3000 + pair);
    EmbeddingSet ar = a;
    EmbeddingSet br = b;
    ar.vectors = a.vectors * q;
    br.vectors = b.vectors * q;
    const double after =
        metrics::fad(metrics::gaussian_stats(ar), metrics::gaussian_stats(br));

    if (!(std::abs(after - before) <= 1e-6)) {
      REQUIRE(false, "pair " + std::to_string(pair) + ": |" +
                         std::to_string(after) + " - " +
                         std::to_string(before) + "| > 1e-6");
    }
  }
}

// ---------------------------------------------------------------------------
// 3. Clustering matches an exhaustive-search oracle exactly.

void criterion3() {
  for (std::uint64_t run = 0; run < 100; ++run) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(run % 11);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(run % 5);
    Eigen::MatrixXd m = testutil::gaussian_matrix(n, d, 4000 + run);
    if (run % 4 == 0 && n >= 4) {
      m.row(1) = m.row(0);  // force exact ties
      m.row(3) = m.row(2);
    }
    const auto got = metrics::agglomerative_cophenetic(testutil::make_set(m));
    const Eigen::MatrixXd want = oracles::cophenetic_bruteforce(m);
    const bool equal = (got.values.array() == want.array()).all();
    REQUIRE(equal, "set " + std::to_string(run) +
                       ": cophenetic matrices are not bitwise equal");
  }
}

// ---------------------------------------------------------------------------
// 4. Dendrogram comparison ignores affine height rescaling.

void criterion4() {
  for (std::uint64_t run = 0; run < 20; ++run) {
    const Eigen::Index n = 6 + static_cast<Eigen::Index>(run % 7);
    const auto co = metrics::agglomerative_cophenetic(
        testutil::gaussian_set(n, 3, 5000 + run));
    for (double a : {0.5, 2.0, 10.0}) {
      for (double b : {0.0, 1.0}) {
        metrics::CopheneticMatrix scaled = co;
        scaled.values = (co.values.array() * a + b).matrix();
        scaled.values.diagonal().setZero();
        const double got = metrics::cpcd(co, scaled);
        if (!(got <= 1e-9)) {
          REQUIRE(false, "dendrogram " + std::to_string(run) + ", a=" +
                             std::to_string(a) + ", b=" + std::to_string(b) +
                             ": cpcd " + std::to_string(got) + " > 1e-9");
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 5. A pure translation separates the three metrics.

void criterion5() {
  const EmbeddingSet e = testutil::gaussian_set(100, 8, 6000);
  EmbeddingSet moved = e;
  const Eigen::VectorXd t = Eigen::VectorXd::Constant(8, 0.5);  // |t| > 1
  moved.vectors.rowwise() += t.transpose();

  const double cpcd = metrics::cpcd_between(e, moved, 4096, 0);
  REQUIRE(cpcd <= 1e-9,
          "translation disturbed the dendrogram: cpcd = " +
              std::to_string(cpcd));

  const double fad = metrics::fad(metrics::gaussian_stats(e),
                                  metrics::gaussian_stats(moved));
  REQUIRE_CLOSE("fad vs squared shift", fad, t.squaredNorm(), 1e-6);

  const double cd = metrics::mean_cosine_distance(e, moved);
  REQUIRE(cd > 0.01, "cosine distance " + std::to_string(cd) +
                         " did not register the translation");
}

// ---------------------------------------------------------------------------
// 6. Filter attenuation measured on a steady sine.

void criterion6() {
  const int fs = 44100;
  // 2 s of 100 Hz; the second half holds exactly 100 cycles, so the
  // single-bin DFT reads the steady-state amplitude leak-free.
  const AudioClip sine = testutil::tone(100.0, fs, 2.0, 0.5);
  const double a_in =
      testutil::dft_amplitude(sine.samples, fs, 2 * fs, 100.0, fs);

  const auto hp =
      dsp::design_butterworth(dsp::FilterKind::HighPass, 400.0, fs);
  const AudioClip hp_out = dsp::filter_clip(sine, hp);
  const double a_hp =
      testutil::dft_amplitude(hp_out.samples, fs, 2 * fs, 100.0, fs);
  const double hp_atten_db = 20.0 * std::log10(a_in / a_hp);
  REQUIRE(hp_atten_db >= 40.0,
          "high-pass fc=400 attenuation at 100 Hz is " +
              std::to_string(hp_atten_db) + " dB, want >= 40");

  const auto lp =
      dsp::design_butterworth(dsp::FilterKind::LowPass, 1600.0, fs);
  const AudioClip lp_out = dsp::filter_clip(sine, lp);
  const double a_lp =
      testutil::dft_amplitude(lp_out.samples, fs, 2 * fs, 100.0, fs);
  const double lp_atten_db = 20.0 * std::log10(a_in / a_lp);
  REQUIRE(lp_atten_db <= 1.0,
          "low-pass fc=1600 attenuation at 100 Hz is " +
              std::to_string(lp_atten_db) + " dB, want <= 1");
}

// ---------------------------------------------------------------------------
// 7. Gain arithmetic, hard clipping, and the clipping-induced shift.

void criterion7() {
  AudioClip probe;
  probe.id = "probe";
  probe.sample_rate = 16000;
  probe.samples = {0.25, 0.5, -0.5};

  const AudioClip doubled = dsp::apply_gain(probe, 6.0206);
  REQUIRE_CLOSE("0.25 at +6.0206 dB", doubled.samples[0], 0.5, 1e-6);

  const AudioClip clipped = dsp::apply_gain(probe, 20.0);
  REQUIRE(clipped.samples[1] == 1.0,
          "0.5 at +20 dB must clip to exactly 1.0, got " +
              std::to_string(clipped.samples[1]));
  REQUIRE(clipped.samples[2] == -1.0,
          "-0.5 at +20 dB must clip to exactly -1.0");

  // Broadband noise: +3 dB stays inside full scale, +20 dB clips hard;
  // the embedding distribution must move further in the clipped case.
  std::vector<AudioClip> clips;
  for (int i = 0; i < 40; ++i) {
    clips.push_back(testutil::noise(8000, 16000,
                                    7000 + static_cast<std::uint64_t>(i), 0.5,
                                    "n" + std::to_string(i)));
  }
  const auto embedder = features::reference_embedder(64);
  const FrameGrid grid;
  const PerturbationSpec ident{PerturbationKind::Identity, 0.0, 0};
  const PerturbationSpec g3{PerturbationKind::Gain, 3.0, 0};
  const PerturbationSpec g20{PerturbationKind::Gain, 20.0, 0};

  const EmbeddingSet original =
      features::embed_clips(clips, grid, ident, embedder, 1);
  const EmbeddingSet gained3 =
      features::embed_clips(clips, grid, g3, embedder, 1);
  const EmbeddingSet gained20 =
      features::embed_clips(clips, grid, g20, embedder, 1);

  const auto stats = metrics::gaussian_stats(original);
  const double fad3 = metrics::fad(stats, metrics::gaussian_stats(gained3));
  const double fad20 = metrics::fad(stats, metrics::gaussian_stats(gained20));
  REQUIRE(fad20 > fad3, "clipping shift not larger: fad(+20 dB) = " +
                            std::to_string(fad20) + " vs fad(+3 dB) = " +
                            std::to_string(fad3));
}

// ---------------------------------------------------------------------------
// 8. Reverberation decay time and determinism.

void criterion8() {
  const int fs = 16000;
  const auto ir = dsp::reverb_impulse_response(100.0, fs, 12);
  REQUIRE(ir.size() > static_cast<std::size_t>(fs),
          "impulse response shorter than expected");

  // Energy of 50 ms blocks decays 30 dB per second when the full decay
  // spans 60 dB over RT60 = 2 s; the fitted slope recovers RT60.
  const std::size_t block = fs / 20;
  std::vector<double> t;
  std::vector<double> level;
  for (std::size_t b = 0; (b + 1) * block <= ir.size(); ++b) {
    double e = 0.0;
    for (std::size_t i = b * block; i < (b + 1) * block; ++i) {
      e += ir[i] * ir[i];
    }
    if (e <= 0.0) continue;
    t.push_back((static_cast<double>(b) + 0.5) * 0.05);
    level.push_back(10.0 * std::log10(e));
  }
  REQUIRE(t.size() >= 20, "too few decay blocks to fit");
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    ml += level[i];
  }
  mt /= static_cast<double>(t.size());
  ml /= static_cast<double>(t.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (level[i] - ml);
    den += (t[i] - mt) * (t[i] - mt);
  }
  const double rt60 = -60.0 / (num / den);
  // 3 dB-equivalent slack at 30 dB/s is 0.1 s on either side.
  REQUIRE(rt60 >= 1.9 && rt60 <= 2.1,
          "fitted RT60 " + std::to_string(rt60) + " s outside [1.9, 2.1]");

  const AudioClip dry = testutil::noise(16000, fs, 80, 0.5);
  const AudioClip pass = dsp::reverberate(dry, 0.0, 99);
  for (std::size_t i = 0; i < dry.samples.size(); ++i) {
    REQUIRE(pass.samples[i] == dry.samples[i],
            "pct=0 output differs at sample " + std::to_string(i));
  }

  const AudioClip wet1 = dsp::reverberate(dry, 75.0, 42);
  const AudioClip wet2 = dsp::reverberate(dry, 75.0, 42);
  for (std::size_t i = 0; i < dry.samples.size(); ++i) {
    REQUIRE(wet1.samples[i] == wet2.samples[i],
            "same-seed reverb differs at sample " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// 9. Downstream classifier, clustering score, ranking metric, gradients.

void criterion9() {
  // Tight, far-apart blobs: mean within-cluster distance ~0.13 against a
  // 10.0 separation keeps the silhouette well above the bar.
  const auto blobs = testutil::make_blobs(200, 4, 2, 10.0, 0.05, 90);
  const auto manifest = testutil::label_manifest(blobs.labels, 2);
  const auto model = downstream::train_logreg(blobs.points, manifest);
  const double acc = downstream::eval_accuracy(model, blobs.points, manifest);
  REQUIRE(acc >= 0.99, "blob accuracy " + std::to_string(acc) + " < 0.99");

  const double sil = downstream::silhouette(blobs.points, manifest);
  REQUIRE(sil >= 0.95, "blob silhouette " + std::to_string(sil) + " < 0.95");

  // Perfect ranking: positives strictly above negatives in score.
  {
    Eigen::MatrixXd x(6, 1);
    x << 5, 4, 3, -1, -2, -3;
    DatasetManifest multi;
    multi.name = "rank";
    multi.label_mode = LabelMode::MultiLabel;
    multi.classes = {"c0"};
    std::vector<std::vector<std::uint8_t>> y = {{1}, {1}, {1}, {0}, {0}, {0}};
    for (int i = 0; i < 6; ++i) {
      const std::string id = std::to_string(i);
      multi.clips.push_back({id, ""});
      multi.multi_labels[id] = y[static_cast<std::size_t>(i)];
    }
    downstream::LogRegModel ranker;
    ranker.weights = Eigen::MatrixXd::Ones(1, 1);
    ranker.bias = Eigen::VectorXd::Zero(1);
    ranker.mode = LabelMode::MultiLabel;
    const auto auprc =
        downstream::macro_auprc(ranker, testutil::make_set(x), multi);
    REQUIRE(auprc.value == 1.0, "perfect ranking AUPRC " +
                                    std::to_string(auprc.value) + " != 1.0");
  }

  // Analytic gradients against central differences, both objectives.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 6 + static_cast<int>(seed % 4) * 3;
    const int d = 2 + static_cast<int>(seed % 3);
    const int c = 2 + static_cast<int>(seed % 2);
    const Eigen::MatrixXd x = testutil::gaussian_matrix(n, d, 9100 + seed);
    const Eigen::MatrixXd w0 =
        0.4 * testutil::gaussian_matrix(c, d, 9200 + seed);
    Eigen::VectorXd b0 = Eigen::VectorXd::Zero(c);
    b0(0) = 0.3;

    const auto pack = [&](const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
      Eigen::VectorXd flat(c * d + c);
      for (int i = 0; i < c; ++i)
        for (int j = 0; j < d; ++j) flat(i * d + j) = w(i, j);
      for (int i = 0; i < c; ++i) flat(c * d + i) = b(i);
      return flat;
    };
    const auto unpack_w = [&](const Eigen::VectorXd& flat) {
      Eigen::MatrixXd w(c, d);
      for (int i = 0; i < c; ++i)
        for (int j = 0; j < d; ++j) w(i, j) = flat(i * d + j);
      return w;
    };
    const auto unpack_b = [&](const Eigen::VectorXd& flat) {
      Eigen::VectorXd b(c);
      for (int i = 0; i < c; ++i) b(i) = flat(c * d + i);
      return b;
    };

    {
      std::vector<int> y(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = i % c;
      const auto lg = downstream::softmax_loss(w0, b0, x, y, c, 1e-2);
      const Eigen::VectorXd want = oracles::numeric_gradient(
          [&](const Eigen::VectorXd& flat) {
            return downstream::softmax_loss(unpack_w(flat), unpack_b(flat), x,
                                            y, c, 1e-2)
                .loss;
          },
          pack(w0, b0));
      const double rel = (pack(lg.grad_weights, lg.grad_bias) - want).norm() /
                         std::max(1e-12, want.norm());
      REQUIRE(rel <= 1e-5, "softmax gradient mismatch, rel err " +
                               std::to_string(rel));
    }
    {
      Eigen::MatrixXd y(n, c);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j) y(i, j) = ((i * 5 + j) % 3 == 0) ? 1 : 0;
      const auto lg = downstream::sigmoid_loss(w0, b0, x, y, 1e-2);
      const Eigen::VectorXd want = oracles::numeric_gradient(
          [&](const Eigen::VectorXd& flat) {
            return downstream::sigmoid_loss(unpack_w(flat), unpack_b(flat), x,
                                            y, 1e-2)
                .loss;
          },
          pack(w0, b0));
      const double rel = (pack(lg.grad_weights, lg.grad_bias) - want).norm() /
                         std::max(1e-12, want.norm());
      REQUIRE(rel <= 1e-5, "sigmoid gradient mismatch, rel err " +
                               std::to_string(rel));
    }
  }
}

// ---------------------------------------------------------------------------
// 10. End-to-end run: identity is silent, scaled FAD grows with the cutoff.

void criterion10() {
  testutil::TempDir dir;
  DatasetManifest manifest;
  manifest.name = "whitenoise";
  for (int i = 0; i < 100; ++i) {
    const std::string id = "wn" + std::to_string(i);
    const std::string path = dir.str(id + ".wav");
    io::write_wav(testutil::noise(9600, 16000,
                                  10000 + static_cast<std::uint64_t>(i), 0.5,
                                  id),
                  path);
    manifest.clips.push_back({id, path});
  }
  const std::string manifest_path = dir.str("manifest.json");
  io::write_manifest(manifest, manifest_path);

  pipeline::RunConfig cfg;
  cfg.dataset_path = manifest_path;
  cfg.grid = {{PerturbationKind::Identity, 0.0, 0}};
  const std::vector<double> cutoffs = {100, 200, 400, 800, 1600, 4000};
  for (double fc : cutoffs) {
    cfg.grid.push_back({PerturbationKind::HighPass, fc, 0});
  }

  const ShiftReport report = pipeline::run(cfg);
  REQUIRE(report.ok(), "run reported failures");

  double scaled_prev = -1.0;
  std::size_t scaled_seen = 0;
  for (double fc : cutoffs) {
    bool found = false;
    for (const auto& row : report.rows) {
      if (row.metric == "fad_scaled" && row.kind == PerturbationKind::HighPass &&
          row.value == fc) {
        REQUIRE(row.score >= scaled_prev,
                "scaled FAD fell from " + std::to_string(scaled_prev) +
                    " to " + std::to_string(row.score) + " at cutoff " +
                    std::to_string(fc));
        scaled_prev = row.score;
        found = true;
        ++scaled_seen;
      }
    }
    REQUIRE(found, "no scaled FAD row for cutoff " + std::to_string(fc));
  }
  REQUIRE(scaled_seen == cutoffs.size(), "missing scaled FAD rows");

  for (const auto& row : report.rows) {
    if (row.kind != PerturbationKind::Identity) continue;
    if (row.metric == "cd_mean" || row.metric == "cpcd" ||
        row.metric == "fad_raw" || row.metric == "fad_scaled") {
      REQUIRE(std::abs(row.score) <= 1e-9,
              "identity " + row.metric + " = " + std::to_string(row.score) +
                  " is not zero");
    }
  }
}

// ---------------------------------------------------------------------------
// 11. Ingest fidelity through the command-line tool.

void criterion11() {
  const char* cli = std::getenv("EMBSHIFT_CLI");
  REQUIRE(cli != nullptr && *cli != '\0',
          "EMBSHIFT_CLI must point at the command-line binary");

  testutil::TempDir dir;

  // Four collinear points and their 90-degree rotation: every matched
  // pair is orthogonal (cd_mean exactly 1), pairwise distances are
  // untouched (cpcd 0), and the Gaussian moments give
  //   |dmu|^2 + tr(So) + tr(Sp) = 2 * 3.75^2 + 2 * (28.75 / 3)
  // because the rotated covariances have disjoint support.
  Eigen::MatrixXd a(4, 2);
  a << 1, 0, 2, 0, 4, 0, 8, 0;
  Eigen::MatrixXd b(4, 2);
  b << 0, 1, 0, 2, 0, 4, 0, 8;
  EmbeddingSet ea = testutil::make_set(a);
  EmbeddingSet eb = testutil::make_set(b);
  io::write_embeddings(ea, dir.str("orig.emb1"), io::default_sidecar_path(dir.str("orig.emb1")));
  io::write_embeddings(eb, dir.str("pert.emb1"), io::default_sidecar_path(dir.str("pert.emb1")));

  const std::string base = std::string("'") + cli + "' shift --original '" +
                           dir.str("orig.emb1") + "' --perturbed '" +
                           dir.str("pert.emb1") + "'";
  const std::string cmd1 =
      base + " --out-dir '" + dir.str("run1") + "' > /dev/null 2>&1";
  const std::string cmd2 =
      base + " --out-dir '" + dir.str("run2") + "' > /dev/null 2>&1";
  REQUIRE(std::system(cmd1.c_str()) == 0, "first shift invocation failed");
  REQUIRE(std::system(cmd2.c_str()) == 0, "second shift invocation failed");

  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  const std::string csv1 = slurp(dir.str("run1/shift.csv"));
  const std::string csv2 = slurp(dir.str("run2/shift.csv"));
  REQUIRE(!csv1.empty(), "first run produced no shift.csv");
  REQUIRE(csv1 == csv2, "shift.csv differs between identical runs");

  const ShiftReport report = io::read_report_csv(dir.str("run1/shift.csv"));
  double cd = -1.0, cpcd = -1.0, fad = -1.0;
  for (const auto& row : report.rows) {
    if (row.metric == "cd_mean") cd = row.score;
    if (row.metric == "cpcd") cpcd = row.score;
    if (row.metric == "fad_raw") fad = row.score;
  }
  REQUIRE(cd == 1.0, "cd_mean " + std::to_string(cd) + " != 1.0");
  REQUIRE(cpcd >= 0.0 && cpcd <= 1e-9,
          "cpcd " + std::to_string(cpcd) + " not ~0");
  // Report reals carry 9 significant digits, so the parsed value is the
  // analytic one up to that quantization.
  const double want_fad = 2.0 * 3.75 * 3.75 + 2.0 * (28.75 / 3.0);
  REQUIRE_CLOSE("ingest fad", fad, want_fad, 1e-6);
}

}  // namespace

int main() {
  runCriterion(1, "analytic distribution-distance fixtures", 1.0, criterion1);
  runCriterion(2, "rotation invariance of the distribution distance", 10.0,
               criterion2);
  runCriterion(3, "clustering equals the exhaustive oracle", 30.0, criterion3);
  runCriterion(4, "dendrogram comparison ignores affine rescaling", 0.0,
               criterion4);
  runCriterion(5, "translation separates the three metrics", 0.0, criterion5);
  runCriterion(6, "filter attenuation on steady tones", 5.0, criterion6);
  runCriterion(7, "gain clipping and its distribution shift", 0.0, criterion7);
  runCriterion(8, "reverb decay time and determinism", 0.0, criterion8);
  runCriterion(9, "classifier, silhouette, ranking, gradients", 0.0,
               criterion9);
  runCriterion(10, "end-to-end monotone scaled distance", 60.0, criterion10);
  runCriterion(11, "ingest fidelity through the CLI", 0.0, criterion11);

  if (g_failed_criteria > 0) {
    std::cerr << g_failed_criteria << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 11 criteria passed\n";
  return 0;
}
