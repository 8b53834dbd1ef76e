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

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "embshift/downstream.hpp"
#include "embshift/dsp.hpp"
#include "embshift/embedding_io.hpp"
#include "embshift/errors.hpp"
#include "embshift/features.hpp"
#include "embshift/manifest_io.hpp"
#include "embshift/metrics.hpp"
#include "embshift/pipeline.hpp"
#include "embshift/report_io.hpp"
#include "embshift/wav.hpp"

namespace {

namespace es = embshift;

struct PerturbArgs {
  std::string in, out, kind = "Identity";
  double value = 0.0;
  std::uint64_t seed = 0;
};

struct EmbedArgs {
  std::string manifest, out, kind = "Identity";
  double value = 0.0;
  std::uint64_t seed = 0;
  int n_mels = 64;
  double window_s = 1.0, hop_s = 0.5;
  int jobs = 1;
};

struct ShiftArgs {
  std::string original, perturbed, out_dir = ".";
  std::string dataset = "shift", embedder = "ingest";
  std::string kind = "Identity";
  double value = 0.0;
  std::uint64_t seed = 0;
  std::size_t cpcd_max_points = 4096;
  bool normalize = false;
};

struct DownstreamArgs {
  std::string original, perturbed, manifest, out_dir = ".";
  std::string kind = "Identity";
  double value = 0.0;
  std::uint64_t seed = 0;
  int folds = 10;
  bool normalize = true;
};

struct RunArgs {
  std::string config, out_dir;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool seed_set = false, jobs_set = false, out_dir_set = false;
  int normalize_on = 0, normalize_off = 0;
};

struct ReportArgs {
  std::string in, out_dir = ".";
};

struct ConvertArgs {
  std::string in, out;
};

es::PerturbationSpec make_spec(const std::string& kind, double value,
                               std::uint64_t seed) {
  es::PerturbationSpec spec{es::perturbation_kind_from_string(kind), value,
                            seed};
  spec.validate();
  return spec;
}

es::EmbeddingSet read_emb(const std::string& path) {
  return es::io::read_embeddings(path, es::io::default_sidecar_path(path));
}

int cmd_perturb(const PerturbArgs& a) {
  const es::AudioClip clip = es::io::read_wav(a.in);
  const es::AudioClip out = es::dsp::perturb(clip, make_spec(a.kind, a.value, a.seed));
  es::io::write_wav(out, a.out);
  std::cout << "wrote " << a.out << " (" << out.samples.size() << " samples @ "
            << out.sample_rate << " Hz)\n";
  return 0;
}

int cmd_embed(const EmbedArgs& a) {
  const es::DatasetManifest manifest = es::io::read_manifest(a.manifest);
  const es::FrameGrid grid{a.window_s, a.hop_s};
  const es::EmbeddingSet set = es::features::embed_dataset(
      manifest, grid, make_spec(a.kind, a.value, a.seed),
      es::features::reference_embedder(a.n_mels), a.jobs);
  es::io::write_embeddings(set, a.out, es::io::default_sidecar_path(a.out));
  std::cout << "wrote " << a.out << " (" << set.size() << " x " << set.dim()
            << ")\n";
  return 0;
}

int cmd_shift(const ShiftArgs& a) {
  es::EmbeddingSet original = read_emb(a.original);
  es::EmbeddingSet perturbed = read_emb(a.perturbed);
  if (a.normalize) {
    original = es::metrics::l2_normalized(original);
    perturbed = es::metrics::l2_normalized(perturbed);
  }

  const es::PerturbationKind kind = es::perturbation_kind_from_string(a.kind);
  es::ShiftReport report;
  const auto push = [&](const std::string& metric, double score) {
    report.rows.push_back(
        {a.dataset, a.embedder, kind, a.value, metric, score});
    std::cout << metric << "=" << es::io::format_real(score) << "\n";
  };
  push("cd_mean", es::metrics::mean_cosine_distance(original, perturbed));
  push("cpcd", es::metrics::cpcd_between(original, perturbed,
                                         a.cpcd_max_points, a.seed));
  push("fad_raw", es::metrics::fad(es::metrics::gaussian_stats(original),
                                   es::metrics::gaussian_stats(perturbed)));

  std::filesystem::create_directories(a.out_dir);
  const std::string path =
      (std::filesystem::path(a.out_dir) / "shift.csv").string();
  es::io::write_report_csv(report, path);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_downstream(const DownstreamArgs& a) {
  es::EmbeddingSet original = read_emb(a.original);
  es::EmbeddingSet perturbed =
      a.perturbed.empty() ? original : read_emb(a.perturbed);
  if (a.normalize) {
    original = es::metrics::l2_normalized(original);
    perturbed = es::metrics::l2_normalized(perturbed);
  }
  const es::DatasetManifest manifest = es::io::read_manifest(a.manifest);
  const es::PerturbationKind kind = es::perturbation_kind_from_string(a.kind);

  es::ShiftReport report;
  const auto push = [&](const std::string& metric, double score) {
    report.rows.push_back(
        {manifest.name, "ingest", kind, a.value, metric, score});
    std::cout << metric << "=" << es::io::format_real(score) << "\n";
  };
  if (manifest.label_mode == es::LabelMode::SingleLabel) {
    push("accuracy",
         es::downstream::cross_validated_accuracy(original, perturbed,
                                                  manifest, {}, a.folds,
                                                  a.seed));
    push("silhouette", es::downstream::silhouette(perturbed, manifest));
  } else if (manifest.label_mode == es::LabelMode::MultiLabel) {
    const es::downstream::LogRegModel model =
        es::downstream::train_logreg(original, manifest);
    push("macro_auprc",
         es::downstream::macro_auprc(model, perturbed, manifest).value);
  } else {
    throw es::LabelMismatch("manifest has no labels to evaluate against");
  }

  std::filesystem::create_directories(a.out_dir);
  const std::string path =
      (std::filesystem::path(a.out_dir) / "downstream.csv").string();
  es::io::write_report_csv(report, path);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_run(const RunArgs& a) {
  es::pipeline::RunConfig config = es::pipeline::load_config(a.config);
  if (a.out_dir_set) config.out_dir = a.out_dir;
  if (a.jobs_set) config.jobs = a.jobs;
  if (a.seed_set) {
    config.seed = a.seed;
    for (auto& spec : config.grid) spec.seed = a.seed;
  }
  if (a.normalize_on > 0) {
    config.normalize_metrics = true;
    config.normalize_downstream = true;
  }
  if (a.normalize_off > 0) {
    config.normalize_metrics = false;
    config.normalize_downstream = false;
  }
  config.validate();

  const es::ShiftReport report = es::pipeline::run(config);
  std::cout << report.rows.size() << " metric rows, "
            << report.failures.size() << " failures";
  if (!config.out_dir.empty()) std::cout << "; outputs in " << config.out_dir;
  std::cout << "\n";
  for (const auto& f : report.failures) {
    std::cerr << "FAIL " << es::pipeline::grid_point_key(f.kind, f.value)
              << ": " << f.message << "\n";
  }
  return report.ok() ? 0 : 1;
}

int cmd_report(const ReportArgs& a) {
  const es::ShiftReport report = es::io::read_report_csv(a.in);
  es::pipeline::emit_plot_data(report, a.out_dir);
  std::cout << "wrote plot CSVs to " << a.out_dir << "\n";
  return 0;
}

int cmd_convert(const ConvertArgs& a) {
  const es::EmbeddingSet set = es::io::read_embeddings_csv(a.in);
  es::io::write_embeddings(set, a.out, es::io::default_sidecar_path(a.out));
  std::cout << "wrote " << a.out << " (" << set.size() << " x " << set.dim()
            << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio embedding robustness toolkit"};
  app.require_subcommand(1);

  PerturbArgs pa;
  auto* perturb = app.add_subcommand(
      "perturb", "Apply one perturbation to a WAV file");
  perturb->add_option("--in", pa.in, "Input WAV")->required();
  perturb->add_option("--out", pa.out, "Output WAV")->required();
  perturb->add_option("--kind", pa.kind,
                      "Identity|HighPass|LowPass|Gain|Reverb");
  perturb->add_option("--value", pa.value,
                      "Cutoff Hz, gain dB, or reverb percent");
  perturb->add_option("--seed", pa.seed, "Reverb noise seed");

  EmbedArgs ea;
  auto* embed = app.add_subcommand(
      "embed", "Embed a dataset with the built-in embedder into EMB1");
  embed->add_option("--manifest", ea.manifest, "Dataset manifest JSON")
      ->required();
  embed->add_option("--out", ea.out, "Output EMB1 path")->required();
  embed->add_option("--kind", ea.kind, "Perturbation applied before embedding");
  embed->add_option("--value", ea.value, "Perturbation value");
  embed->add_option("--seed", ea.seed, "Perturbation seed");
  embed->add_option("--n-mels", ea.n_mels, "Mel bands (embedding dim = 2x)");
  embed->add_option("--window-s", ea.window_s, "Analysis frame length (s)");
  embed->add_option("--hop-s", ea.hop_s, "Analysis frame hop (s)");
  embed->add_option("--jobs", ea.jobs, "Worker threads across clips");

  ShiftArgs sa;
  auto* shift = app.add_subcommand(
      "shift", "Distance metrics between two EMB1 files");
  shift->add_option("--original", sa.original, "Original EMB1")->required();
  shift->add_option("--perturbed", sa.perturbed, "Perturbed EMB1")->required();
  shift->add_option("--out-dir", sa.out_dir, "Directory for shift.csv");
  shift->add_option("--dataset", sa.dataset, "Dataset label for the report");
  shift->add_option("--embedder", sa.embedder, "Embedder label for the report");
  shift->add_option("--kind", sa.kind, "Perturbation label for the report");
  shift->add_option("--value", sa.value, "Perturbation value label");
  shift->add_option("--seed", sa.seed, "Subsample seed for large sets");
  shift->add_option("--cpcd-max-points", sa.cpcd_max_points,
                    "Clustering size cap");
  shift->add_flag("--normalize,!--no-normalize", sa.normalize,
                  "L2-normalize rows first (default off)");

  DownstreamArgs da;
  auto* down = app.add_subcommand(
      "downstream", "Classifier transfer metrics from EMB1 plus labels");
  down->add_option("--original", da.original, "Training EMB1")->required();
  down->add_option("--perturbed", da.perturbed,
                   "Evaluation EMB1 (default: the training set)");
  down->add_option("--manifest", da.manifest, "Labeled manifest JSON")
      ->required();
  down->add_option("--out-dir", da.out_dir, "Directory for downstream.csv");
  down->add_option("--kind", da.kind, "Perturbation label for the report");
  down->add_option("--value", da.value, "Perturbation value label");
  down->add_option("--seed", da.seed, "Fold-assignment seed");
  down->add_option("--folds", da.folds, "Cross-validation folds");
  down->add_flag("--normalize,!--no-normalize", da.normalize,
                 "L2-normalize rows first (default on)");

  RunArgs ra;
  auto* runc = app.add_subcommand("run", "Full pipeline from a JSON config");
  runc->add_option("--config", ra.config, "RunConfig JSON")->required();
  auto* ro = runc->add_option("--out-dir", ra.out_dir, "Override output dir");
  auto* rs = runc->add_option("--seed", ra.seed, "Override seed");
  auto* rj = runc->add_option("--jobs", ra.jobs, "Override worker count");
  runc->add_flag("--normalize", ra.normalize_on,
                 "Force L2 normalization everywhere");
  runc->add_flag("--no-normalize", ra.normalize_off,
                 "Disable L2 normalization everywhere");

  ReportArgs rpa;
  auto* rep = app.add_subcommand("report", "Plot-ready CSVs from a report");
  rep->add_option("--in", rpa.in, "report.csv produced by run")->required();
  rep->add_option("--out-dir", rpa.out_dir, "Directory for plot CSVs");

  ConvertArgs ca;
  auto* conv = app.add_subcommand("convert", "CSV embeddings to EMB1");
  conv->add_option("--in", ca.in, "CSV with rows id,v0,v1,...")->required();
  conv->add_option("--out", ca.out, "Output EMB1 path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*perturb) return cmd_perturb(pa);
    if (*embed) return cmd_embed(ea);
    if (*shift) return cmd_shift(sa);
    if (*down) return cmd_downstream(da);
    if (*runc) {
      ra.out_dir_set = ro->count() > 0;
      ra.seed_set = rs->count() > 0;
      ra.jobs_set = rj->count() > 0;
      return cmd_run(ra);
    }
    if (*rep) return cmd_report(rpa);
    if (*conv) return cmd_convert(ca);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
