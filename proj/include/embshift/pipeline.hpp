// Copyright 2026 The embshift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBSHIFT_PIPELINE_HPP_
#define EMBSHIFT_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "embshift/types.hpp"

namespace embshift::pipeline {

// Precomputed embeddings, one EMB1 file per grid point. Map keys are
// "<kind>:<value>" with the value printed like every other CSV real.
struct IngestPaths {
  std::string original;
  std::map<std::string, std::string> perturbed;
};

std::string grid_point_key(PerturbationKind kind, double value);

struct RunConfig {
  std::string dataset_path;
  std::string out_dir;  // empty: compute only, write nothing

  // "reference" embeds audio with the built-in log-mel embedder; "ingest"
  // reads one EMB1 file per grid point instead (audio never touched).
  std::string embedder = "reference";
  int n_mels = 64;
  IngestPaths ingest;

  std::vector<PerturbationSpec> grid;  // expanded points, in emission order
  FrameGrid frame;

  bool metric_cd = true;
  bool metric_cpcd = true;
  bool metric_fad = true;
  bool metric_downstream = true;

  // Row normalization is applied separately on the two paths: raw vectors
  // are the default for the distance metrics, unit vectors for training.
  bool normalize_metrics = false;
  bool normalize_downstream = true;

  std::uint64_t seed = 0;
  int jobs = 1;
  std::size_t cpcd_max_points = 4096;
  int cv_folds = 10;

  std::string embedder_id() const;
  void validate() const;
};

// The stock grid: high-pass cutoffs {100..4000} Hz, low-pass {8000..400} Hz,
// reverb {25..100} percent, gain {3..30} dB, plus the identity baseline.
std::vector<PerturbationSpec> default_grid(std::uint64_t seed = 0);

// Strict JSON config; unknown keys raise ConfigError. Schema:
// {
//   "dataset": "manifest.json",
//   "out_dir": "out",                          // optional
//   "embedder": {"type": "reference", "n_mels": 64}
//             | {"type": "ingest", "original": "orig.emb1",
//                "perturbed": {"HighPass:100": "hp100.emb1", ...}},
//   "grid": [{"kind": "HighPass", "values": [100, 200]},
//            {"kind": "Identity"}],            // optional, default full grid
//   "frame": {"window_s": 1.0, "hop_s": 0.5},  // optional
//   "metrics": {"cd_mean": true, "cpcd": true, // optional toggles
//               "fad": true, "downstream": true},
//   "normalize_metrics": false,                // optional
//   "normalize_downstream": true,              // optional
//   "seed": 0, "jobs": 1,                      // optional
//   "cpcd_max_points": 4096, "cv_folds": 10    // optional
// }
RunConfig load_config(const std::string& path);

// Full evaluation: per grid point, produce the perturbed set, measure the
// shift against the original, and append downstream metrics when the
// manifest carries labels. Per-point errors become failure rows; surviving
// fad_raw values gain fad_scaled rows after the whole grid is known.
ShiftReport run(const RunConfig& config);

// Grid value at which the series curves upward hardest: the value at
// position i+2 for the i maximizing f[i+2] - 2 f[i+1] + f[i] (ties take the
// smallest i). Points must be sorted by ascending value.
double detect_inflection(const std::vector<std::pair<double, double>>& series);

// One CSV per (dataset, embedder, metric), rows ordered by kind and then by
// increasing severity (high-pass ascending, low-pass descending, reverb and
// gain ascending). Also writes inflections.csv with the detected fad_raw
// inflection per kind that has at least 3 grid points.
void emit_plot_data(const ShiftReport& report, const std::string& out_dir);

}  // namespace embshift::pipeline

#endif  // EMBSHIFT_PIPELINE_HPP_
