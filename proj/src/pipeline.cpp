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

#include "embshift/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "embshift/downstream.hpp"
#include "embshift/embedding_io.hpp"
#include "embshift/errors.hpp"
#include "embshift/features.hpp"
#include "embshift/manifest_io.hpp"
#include "embshift/metrics.hpp"
#include "embshift/report_io.hpp"
#include "parallel.hpp"

namespace embshift::pipeline {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CorruptFile("'" + path + "': " + e.what());
  }
}

// Grid values are listed per kind in each kind's conventional order; the
// emitted point order is the listing order.
std::vector<PerturbationSpec> expand_grid(const json& grid_json,
                                          std::uint64_t seed,
                                          const std::string& where) {
  std::vector<PerturbationSpec> grid;
  for (const auto& entry : grid_json) {
    if (!entry.is_object()) {
      throw ConfigError(where + ": grid entries must be objects");
    }
    reject_unknown_keys(entry, {"kind", "values"}, where);
    if (!entry.contains("kind") || !entry["kind"].is_string()) {
      throw ConfigError(where + ": grid entry needs a string 'kind'");
    }
    PerturbationKind kind;
    try {
      kind = perturbation_kind_from_string(entry["kind"].get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (kind == PerturbationKind::Identity) {
      grid.push_back({kind, 0.0, seed});
      continue;
    }
    if (!entry.contains("values") || !entry["values"].is_array() ||
        entry["values"].empty()) {
      throw ConfigError(where + ": grid entry for " +
                        std::string(to_string(kind)) +
                        " needs a nonempty 'values' array");
    }
    for (const auto& v : entry["values"]) {
      if (!v.is_number()) {
        throw ConfigError(where + ": grid values must be numbers");
      }
      grid.push_back({kind, v.get<double>(), seed});
    }
  }
  return grid;
}

// Severity rank within one kind: plot rows run from mild to harsh, which is
// ascending value everywhere except low-pass, where a lower cutoff removes
// more of the band.
double severity_rank(PerturbationKind kind, double value) {
  return kind == PerturbationKind::LowPass ? -value : value;
}

int kind_order(PerturbationKind kind) { return static_cast<int>(kind); }

std::string sanitize_token(const std::string& s) {
  std::string out;
  for (const char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_';
    out.push_back(keep ? c : '_');
  }
  return out;
}

struct PointResult {
  std::vector<ReportRow> rows;
  bool failed = false;
  std::string error;
  double fad_raw = 0.0;
  bool has_fad = false;
};

}  // namespace

std::string grid_point_key(PerturbationKind kind, double value) {
  if (kind == PerturbationKind::Identity) return "Identity";
  return std::string(to_string(kind)) + ":" + io::format_real(value);
}

std::string RunConfig::embedder_id() const {
  if (embedder == "reference") {
    return "logmel" + std::to_string(2 * n_mels);
  }
  return "ingest";
}

void RunConfig::validate() const {
  if (dataset_path.empty()) throw ConfigError("config: 'dataset' is required");
  if (embedder != "reference" && embedder != "ingest") {
    throw ConfigError("config: embedder type must be 'reference' or 'ingest'");
  }
  if (embedder == "reference" && n_mels < 1) {
    throw ConfigError("config: n_mels must be positive");
  }
  if (embedder == "ingest" && ingest.original.empty()) {
    throw ConfigError("config: ingest mode needs an 'original' EMB1 path");
  }
  if (grid.empty()) throw ConfigError("config: perturbation grid is empty");
  for (const auto& spec : grid) spec.validate();
  std::set<std::string> seen;
  for (const auto& spec : grid) {
    if (!seen.insert(grid_point_key(spec.kind, spec.value)).second) {
      throw ConfigError("config: duplicate grid point " +
                        grid_point_key(spec.kind, spec.value));
    }
  }
  frame.validate();
  if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (cpcd_max_points < 2) {
    throw ConfigError("config: cpcd_max_points must be >= 2");
  }
  if (cv_folds < 2) throw ConfigError("config: cv_folds must be >= 2");
}

std::vector<PerturbationSpec> default_grid(std::uint64_t seed) {
  std::vector<PerturbationSpec> grid;
  grid.push_back({PerturbationKind::Identity, 0.0, seed});
  for (const double v : {100.0, 200.0, 400.0, 800.0, 1600.0, 4000.0}) {
    grid.push_back({PerturbationKind::HighPass, v, seed});
  }
  for (const double v : {8000.0, 4000.0, 1600.0, 800.0, 400.0}) {
    grid.push_back({PerturbationKind::LowPass, v, seed});
  }
  for (const double v : {25.0, 50.0, 75.0, 100.0}) {
    grid.push_back({PerturbationKind::Reverb, v, seed});
  }
  for (const double v : {3.0, 6.0, 10.0, 20.0, 30.0}) {
    grid.push_back({PerturbationKind::Gain, v, seed});
  }
  return grid;
}

RunConfig load_config(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object()) throw ConfigError("'" + path + "' must be a JSON object");
  reject_unknown_keys(j,
                      {"dataset", "out_dir", "embedder", "grid", "frame",
                       "metrics", "normalize_metrics", "normalize_downstream",
                       "seed", "jobs", "cpcd_max_points", "cv_folds"},
                      path);

  RunConfig cfg;
  if (!j.contains("dataset") || !j["dataset"].is_string()) {
    throw ConfigError(path + ": 'dataset' (string) is required");
  }
  cfg.dataset_path = j["dataset"].get<std::string>();
  cfg.out_dir = j.value("out_dir", std::string());
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.jobs = j.value("jobs", 1);
  cfg.cpcd_max_points = j.value("cpcd_max_points", std::size_t{4096});
  cfg.cv_folds = j.value("cv_folds", 10);
  cfg.normalize_metrics = j.value("normalize_metrics", false);
  cfg.normalize_downstream = j.value("normalize_downstream", true);

  if (j.contains("embedder")) {
    const json& e = j["embedder"];
    if (!e.is_object()) throw ConfigError(path + ": 'embedder' must be object");
    reject_unknown_keys(e, {"type", "n_mels", "original", "perturbed"}, path);
    cfg.embedder = e.value("type", std::string("reference"));
    cfg.n_mels = e.value("n_mels", 64);
    if (cfg.embedder == "ingest") {
      cfg.ingest.original = e.value("original", std::string());
      if (e.contains("perturbed")) {
        if (!e["perturbed"].is_object()) {
          throw ConfigError(path + ": 'perturbed' must be an object");
        }
        for (auto it = e["perturbed"].begin(); it != e["perturbed"].end();
             ++it) {
          if (!it.value().is_string()) {
            throw ConfigError(path + ": perturbed paths must be strings");
          }
          cfg.ingest.perturbed[it.key()] = it.value().get<std::string>();
        }
      }
    }
  }

  if (j.contains("grid")) {
    if (!j["grid"].is_array()) {
      throw ConfigError(path + ": 'grid' must be an array");
    }
    cfg.grid = expand_grid(j["grid"], cfg.seed, path);
  } else {
    cfg.grid = default_grid(cfg.seed);
  }

  if (j.contains("frame")) {
    const json& f = j["frame"];
    if (!f.is_object()) throw ConfigError(path + ": 'frame' must be object");
    reject_unknown_keys(f, {"window_s", "hop_s"}, path);
    cfg.frame.window_s = f.value("window_s", 1.0);
    cfg.frame.hop_s = f.value("hop_s", 0.5);
  }

  if (j.contains("metrics")) {
    const json& m = j["metrics"];
    if (!m.is_object()) throw ConfigError(path + ": 'metrics' must be object");
    reject_unknown_keys(m, {"cd_mean", "cpcd", "fad", "downstream"}, path);
    cfg.metric_cd = m.value("cd_mean", true);
    cfg.metric_cpcd = m.value("cpcd", true);
    cfg.metric_fad = m.value("fad", true);
    cfg.metric_downstream = m.value("downstream", true);
  }

  cfg.validate();
  return cfg;
}

ShiftReport run(const RunConfig& config) {
  config.validate();
  const DatasetManifest manifest = io::read_manifest(config.dataset_path);

  // The original set is shared, read-only, across all grid points.
  EmbeddingSet original;
  features::FrameEmbedder embedder;
  if (config.embedder == "reference") {
    embedder = features::reference_embedder(config.n_mels);
    original = features::embed_dataset(
        manifest, config.frame, {PerturbationKind::Identity, 0.0, config.seed},
        embedder, 1);
  } else {
    original = io::read_embeddings(config.ingest.original,
                                   io::default_sidecar_path(config.ingest.original));
  }

  const EmbeddingSet original_metrics =
      config.normalize_metrics ? metrics::l2_normalized(original) : original;
  const EmbeddingSet original_down =
      config.normalize_downstream ? metrics::l2_normalized(original) : original;

  const bool use_downstream =
      config.metric_downstream && manifest.has_labels();

  // A multi-label head depends only on the original set; train it once.
  downstream::LogRegModel multi_model;
  if (use_downstream && manifest.label_mode == LabelMode::MultiLabel) {
    multi_model = downstream::train_logreg(original_down, manifest);
  }

  const std::string dataset_id = manifest.name;
  const std::string embedder_id = config.embedder_id();

  std::vector<PointResult> results(config.grid.size());
  detail::parallel_for(config.grid.size(), config.jobs, [&](std::size_t g) {
    const PerturbationSpec& spec = config.grid[g];
    PointResult& res = results[g];
    try {
      EmbeddingSet perturbed;
      if (config.embedder == "reference") {
        perturbed = spec.kind == PerturbationKind::Identity
                        ? original
                        : features::embed_dataset(manifest, config.frame, spec,
                                                  embedder, 1);
      } else {
        const std::string key = grid_point_key(spec.kind, spec.value);
        const auto it = config.ingest.perturbed.find(key);
        if (it == config.ingest.perturbed.end()) {
          // Identity needs no file of its own; anything else is a hole in
          // the ingest configuration.
          if (spec.kind != PerturbationKind::Identity) {
            throw ConfigError("no embedding file configured for grid point " +
                              key);
          }
          perturbed = original;
        } else {
          perturbed = io::read_embeddings(
              it->second, io::default_sidecar_path(it->second));
        }
      }

      const auto push = [&](const std::string& metric, double score) {
        res.rows.push_back(
            {dataset_id, embedder_id, spec.kind, spec.value, metric, score});
      };

      const EmbeddingSet perturbed_metrics =
          config.normalize_metrics ? metrics::l2_normalized(perturbed)
                                   : perturbed;
      if (config.metric_cd) {
        push("cd_mean",
             metrics::mean_cosine_distance(original_metrics, perturbed_metrics));
      }
      if (config.metric_cpcd) {
        push("cpcd",
             metrics::cpcd_between(original_metrics, perturbed_metrics,
                                   config.cpcd_max_points, config.seed));
      }
      if (config.metric_fad) {
        const double value =
            metrics::fad(metrics::gaussian_stats(original_metrics),
                         metrics::gaussian_stats(perturbed_metrics));
        push("fad_raw", value);
        res.fad_raw = value;
        res.has_fad = true;
      }

      if (use_downstream) {
        const EmbeddingSet perturbed_down =
            config.normalize_downstream ? metrics::l2_normalized(perturbed)
                                        : perturbed;
        if (manifest.label_mode == LabelMode::SingleLabel) {
          push("accuracy", downstream::cross_validated_accuracy(
                               original_down, perturbed_down, manifest, {},
                               config.cv_folds, config.seed));
          push("silhouette", downstream::silhouette(perturbed_down, manifest));
        } else {
          push("macro_auprc",
               downstream::macro_auprc(multi_model, perturbed_down, manifest)
                   .value);
        }
      }
    } catch (const std::exception& e) {
      res = PointResult{};
      res.failed = true;
      res.error = e.what();
    }
  });

  ShiftReport report;
  for (std::size_t g = 0; g < results.size(); ++g) {
    const PerturbationSpec& spec = config.grid[g];
    if (results[g].failed) {
      report.failures.push_back({spec.kind, spec.value, results[g].error});
    } else {
      for (auto& row : results[g].rows) report.rows.push_back(std::move(row));
    }
  }

  // fad_scaled needs the whole grid's min/max; a flat set of values (for
  // instance an identity-only grid) simply omits the scaled rows.
  if (config.metric_fad) {
    std::vector<std::size_t> with_fad;
    std::vector<double> raw;
    for (std::size_t g = 0; g < results.size(); ++g) {
      if (results[g].has_fad) {
        with_fad.push_back(g);
        raw.push_back(results[g].fad_raw);
      }
    }
    if (raw.size() >= 2) {
      bool flat = true;
      for (const double v : raw) flat = flat && v == raw[0];
      if (!flat) {
        const std::vector<double> scaled = metrics::minmax_scale(raw);
        for (std::size_t k = 0; k < with_fad.size(); ++k) {
          const PerturbationSpec& spec = config.grid[with_fad[k]];
          report.rows.push_back({dataset_id, embedder_id, spec.kind,
                                 spec.value, "fad_scaled", scaled[k]});
        }
      }
    }
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path out(config.out_dir);
    io::write_report_csv(report, (out / "report.csv").string());
    io::write_failures_csv(report, (out / "failures.csv").string());
    if (!report.rows.empty()) {
      emit_plot_data(report, config.out_dir);
    }
  }
  return report;
}

double detect_inflection(
    const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) {
    throw TooFewPoints("inflection detection needs at least 3 points");
  }
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].first > series[i - 1].first)) {
      throw InvalidArgument("series values must be strictly ascending");
    }
  }
  std::size_t best = 0;
  double best_dd = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 2 < series.size(); ++i) {
    const double dd =
        series[i + 2].second - 2.0 * series[i + 1].second + series[i].second;
    if (dd > best_dd) {
      best_dd = dd;
      best = i;
    }
  }
  return series[best + 2].first;
}

void emit_plot_data(const ShiftReport& report, const std::string& out_dir) {
  if (report.rows.empty()) {
    throw InvalidArgument("cannot emit plot data for an empty report");
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path out(out_dir);

  // (dataset, embedder, metric) -> rows, later ordered by severity.
  std::map<std::tuple<std::string, std::string, std::string>,
           std::vector<const ReportRow*>>
      groups;
  for (const auto& row : report.rows) {
    groups[{row.dataset, row.embedder, row.metric}].push_back(&row);
  }

  for (auto& [key, rows] : groups) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReportRow* a, const ReportRow* b) {
                       if (a->kind != b->kind) {
                         return kind_order(a->kind) < kind_order(b->kind);
                       }
                       return severity_rank(a->kind, a->value) <
                              severity_rank(b->kind, b->value);
                     });
    const std::string name = "plot_" + sanitize_token(std::get<0>(key)) + "_" +
                             sanitize_token(std::get<1>(key)) + "_" +
                             sanitize_token(std::get<2>(key)) + ".csv";
    std::ofstream f(out / name, std::ios::binary);
    if (!f) throw IoFailure("cannot open '" + (out / name).string() + "'");
    f << "kind,value,score\n";
    for (const ReportRow* row : rows) {
      f << to_string(row->kind) << "," << io::format_real(row->value) << ","
        << io::format_real(row->score) << "\n";
    }
    if (!f.good()) throw IoFailure("write failed in '" + name + "'");
  }

  // fad_raw inflection per (dataset, embedder, kind) with >= 3 points. The
  // detector wants ascending x, so low-pass runs on negated cutoffs and the
  // answer is negated back.
  std::ofstream inf(out / "inflections.csv", std::ios::binary);
  if (!inf) throw IoFailure("cannot open inflections.csv");
  inf << "dataset,embedder,kind,value\n";
  std::map<std::tuple<std::string, std::string, PerturbationKind>,
           std::vector<std::pair<double, double>>>
      series;
  for (const auto& row : report.rows) {
    if (row.metric != "fad_raw" || row.kind == PerturbationKind::Identity) {
      continue;
    }
    const double x = severity_rank(row.kind, row.value);
    series[{row.dataset, row.embedder, row.kind}].push_back({x, row.score});
  }
  for (auto& [key, points] : series) {
    if (points.size() < 3) continue;
    std::sort(points.begin(), points.end());
    const double x = detect_inflection(points);
    const auto kind = std::get<2>(key);
    const double value =
        kind == PerturbationKind::LowPass ? -x : x;
    inf << std::get<0>(key) << "," << std::get<1>(key) << ","
        << to_string(kind) << "," << io::format_real(value) << "\n";
  }
  if (!inf.good()) throw IoFailure("write failed in inflections.csv");
}

}  // namespace embshift::pipeline
