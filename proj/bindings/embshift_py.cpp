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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "embshift/downstream.hpp"
#include "embshift/dsp.hpp"
#include "embshift/errors.hpp"
#include "embshift/features.hpp"
#include "embshift/metrics.hpp"
#include "embshift/pipeline.hpp"
#include "embshift/types.hpp"

namespace py = pybind11;
namespace es = embshift;

namespace {

es::AudioClip make_clip(const std::vector<double>& samples, int sample_rate) {
  es::AudioClip clip{"py", samples, sample_rate};
  clip.validate();
  return clip;
}

es::PerturbationSpec make_spec(const std::string& kind, double value,
                               std::uint64_t seed) {
  es::PerturbationSpec spec{es::perturbation_kind_from_string(kind), value,
                            seed};
  spec.validate();
  return spec;
}

// Rows carry synthetic ids "0".."n-1"; the python surface deals in plain
// matrices and leaves id bookkeeping to the file formats.
es::EmbeddingSet make_set(const Eigen::MatrixXd& vectors) {
  es::EmbeddingSet set;
  set.vectors = vectors;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    set.clip_ids.push_back(std::to_string(i));
  }
  set.validate();
  return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Audio embedding robustness toolkit";

  m.def(
      "perturb",
      [](const std::vector<double>& samples, int sample_rate,
         const std::string& kind, double value, std::uint64_t seed) {
        return es::dsp::perturb(make_clip(samples, sample_rate),
                                make_spec(kind, value, seed))
            .samples;
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("kind"),
      py::arg("value") = 0.0, py::arg("seed") = 0,
      "Apply one perturbation; returns the new sample list.");

  m.def(
      "frame_spl",
      [](const std::vector<double>& samples, int sample_rate, double window_s,
         double hop_s) {
        return es::features::frame_spl(make_clip(samples, sample_rate),
                                       es::FrameGrid{window_s, hop_s});
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("window_s") = 1.0,
      py::arg("hop_s") = 0.5, "Per-frame level in dB re full scale.");

  m.def(
      "embed_frames",
      [](const std::vector<double>& samples, int sample_rate, int n_mels,
         double window_s, double hop_s) {
        const auto fe = es::features::embed_logmel_stats(
            make_clip(samples, sample_rate), es::FrameGrid{window_s, hop_s},
            n_mels);
        return py::make_tuple(fe.frame_starts, fe.vectors);
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("n_mels") = 64,
      py::arg("window_s") = 1.0, py::arg("hop_s") = 0.5,
      "Log-mel statistics embedder; returns (frame_starts, matrix).");

  m.def(
      "embed_clip_peak",
      [](const std::vector<double>& samples, int sample_rate,
         const std::string& kind, double value, std::uint64_t seed, int n_mels,
         double window_s, double hop_s) {
        return es::features::embed_clip_peak(
            make_clip(samples, sample_rate), make_spec(kind, value, seed),
            es::FrameGrid{window_s, hop_s},
            es::features::reference_embedder(n_mels));
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("kind") = "Identity",
      py::arg("value") = 0.0, py::arg("seed") = 0, py::arg("n_mels") = 64,
      py::arg("window_s") = 1.0, py::arg("hop_s") = 0.5,
      "Perturb, embed, and return the loudest frame's vector; the frame is "
      "chosen on the unperturbed audio.");

  m.def(
      "mean_cosine_distance",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return es::metrics::mean_cosine_distance(make_set(a), make_set(b));
      },
      py::arg("a"), py::arg("b"),
      "Mean of 1 - cosine similarity over matched rows.");

  m.def(
      "cophenetic",
      [](const Eigen::MatrixXd& x) {
        return es::metrics::agglomerative_cophenetic(make_set(x)).values;
      },
      py::arg("x"),
      "Average-linkage cophenetic distance matrix of the rows.");

  m.def(
      "cpcd",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
         std::size_t max_points, std::uint64_t seed) {
        return es::metrics::cpcd_between(make_set(a), make_set(b), max_points,
                                         seed);
      },
      py::arg("a"), py::arg("b"), py::arg("max_points") = 4096,
      py::arg("seed") = 0,
      "1 - Pearson correlation between the two cophenetic matrices.");

  m.def(
      "fad",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return es::metrics::fad(es::metrics::gaussian_stats(make_set(a)),
                                es::metrics::gaussian_stats(make_set(b)));
      },
      py::arg("a"), py::arg("b"),
      "Frechet distance between Gaussians fitted to the two row sets.");

  m.def("minmax_scale", &es::metrics::minmax_scale, py::arg("values"),
        "Scale values to [0, 1] over one shared min/max.");

  m.def(
      "silhouette",
      [](const Eigen::MatrixXd& x, const std::vector<int>& labels) {
        es::EmbeddingSet set = make_set(x);
        es::DatasetManifest manifest;
        manifest.name = "py";
        manifest.label_mode = es::LabelMode::SingleLabel;
        int n_classes = 0;
        for (const int y : labels) n_classes = std::max(n_classes, y + 1);
        for (int c = 0; c < n_classes; ++c) {
          manifest.classes.push_back(std::to_string(c));
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
          manifest.clips.push_back({std::to_string(i), ""});
          manifest.single_labels[std::to_string(i)] = labels[i];
        }
        return es::downstream::silhouette(set, manifest);
      },
      py::arg("x"), py::arg("labels"),
      "Mean silhouette of rows grouped by integer labels.");

  m.def(
      "detect_inflection",
      [](const std::vector<double>& values, const std::vector<double>& scores) {
        if (values.size() != scores.size()) {
          throw es::InvalidArgument("values and scores differ in length");
        }
        std::vector<std::pair<double, double>> series;
        for (std::size_t i = 0; i < values.size(); ++i) {
          series.emplace_back(values[i], scores[i]);
        }
        return es::pipeline::detect_inflection(series);
      },
      py::arg("values"), py::arg("scores"),
      "Grid value where the series curves upward hardest.");

  m.def(
      "run",
      [](const std::string& config_path) {
        const es::ShiftReport report =
            es::pipeline::run(es::pipeline::load_config(config_path));
        py::list rows, failures;
        for (const auto& r : report.rows) {
          rows.append(py::make_tuple(r.dataset, r.embedder,
                                     std::string(es::to_string(r.kind)),
                                     r.value, r.metric, r.score));
        }
        for (const auto& f : report.failures) {
          failures.append(py::make_tuple(std::string(es::to_string(f.kind)),
                                         f.value, f.message));
        }
        return py::make_tuple(rows, failures);
      },
      py::arg("config_path"),
      "Run the full pipeline; returns (rows, failures).");

  m.attr("__version__") = "0.1.0";
}
