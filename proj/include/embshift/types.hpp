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

#ifndef EMBSHIFT_TYPES_HPP_
#define EMBSHIFT_TYPES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace embshift {

// A mono audio snippet. Samples are real amplitudes, nominally in [-1, 1];
// integer PCM is rescaled at ingest (1/32768 for 16-bit).
struct AudioClip {
  std::string id;
  std::vector<double> samples;
  int sample_rate = 0;

  // Throws InvalidArgument unless samples are nonempty and finite and the
  // rate is at least 8 kHz.
  void validate() const;
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class PerturbationKind { Identity, HighPass, LowPass, Gain, Reverb };

const char* to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(const std::string& name);

// One point of the perturbation grid. `value` is a cutoff in Hz for the
// filters, dB for gain, a percentage in [0, 100] for reverb, and ignored
// for Identity. Only reverb consumes the seed.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::Identity;
  double value = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// A set of clip-level embeddings: one row per clip, aligned with clip_ids.
struct EmbeddingSet {
  std::vector<std::string> clip_ids;
  Eigen::MatrixXd vectors;  // n x d

  Eigen::Index size() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }

  // Throws InvalidArgument on duplicate ids, row/id count mismatch, or
  // non-finite entries.
  void validate() const;
};

// Two sets are aligned iff their clip id sequences are identical (same ids,
// same order) and dims match. Throws MisalignedSets / DimMismatch.
void validate_alignment(const EmbeddingSet& a, const EmbeddingSet& b);

enum class LabelMode { None, SingleLabel, MultiLabel };

const char* to_string(LabelMode mode);

struct ManifestClip {
  std::string id;
  std::string audio_path;  // may be empty in ingest-only workflows
};

// Dataset description: clips plus an optional label taxonomy.
struct DatasetManifest {
  std::string name;
  std::vector<ManifestClip> clips;
  LabelMode label_mode = LabelMode::None;
  std::vector<std::string> classes;
  // Single-label: id -> class index. Multi-label: id -> 0/1 per class.
  std::map<std::string, int> single_labels;
  std::map<std::string, std::vector<std::uint8_t>> multi_labels;
  // Optional cross-validation fold per clip id.
  std::map<std::string, int> folds;

  bool has_labels() const { return label_mode != LabelMode::None; }
  void validate() const;
};

struct ReportRow {
  std::string dataset;
  std::string embedder;
  PerturbationKind kind = PerturbationKind::Identity;
  double value = 0.0;
  std::string metric;  // cd_mean, cpcd, fad_raw, fad_scaled, accuracy,
                       // macro_auprc, silhouette
  double score = 0.0;
};

struct FailureRow {
  PerturbationKind kind = PerturbationKind::Identity;
  double value = 0.0;
  std::string message;
};

// Everything a pipeline run produces. Failure rows cover grid points whose
// metric rows are absent; a grid point is never in both.
struct ShiftReport {
  std::vector<ReportRow> rows;
  std::vector<FailureRow> failures;

  bool ok() const { return failures.empty(); }
};

// Outer analysis frames over a clip. Short clips yield exactly one frame
// covering the whole clip.
struct FrameGrid {
  double window_s = 1.0;
  double hop_s = 0.5;

  void validate() const;
};

struct FrameSpan {
  std::size_t start = 0;
  std::size_t length = 0;
};

// Shared segmentation used by both SPL frames and the reference embedder so
// the two stay index-aligned.
std::vector<FrameSpan> frame_spans(std::size_t n_samples, int sample_rate,
                                   const FrameGrid& grid);

}  // namespace embshift

#endif  // EMBSHIFT_TYPES_HPP_
