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

#include "embshift/types.hpp"

#include <cmath>
#include <unordered_set>

#include "embshift/errors.hpp"

namespace embshift {

void AudioClip::validate() const {
  if (samples.empty()) {
    throw InvalidArgument("AudioClip '" + id + "': samples are empty");
  }
  if (sample_rate < 8000) {
    throw InvalidArgument("AudioClip '" + id + "': sample_rate " +
                          std::to_string(sample_rate) + " below 8000 Hz");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw InvalidArgument("AudioClip '" + id + "': non-finite sample");
    }
  }
}

const char* to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::Identity:
      return "Identity";
    case PerturbationKind::HighPass:
      return "HighPass";
    case PerturbationKind::LowPass:
      return "LowPass";
    case PerturbationKind::Gain:
      return "Gain";
    case PerturbationKind::Reverb:
      return "Reverb";
  }
  return "Identity";
}

PerturbationKind perturbation_kind_from_string(const std::string& name) {
  if (name == "Identity") return PerturbationKind::Identity;
  if (name == "HighPass") return PerturbationKind::HighPass;
  if (name == "LowPass") return PerturbationKind::LowPass;
  if (name == "Gain") return PerturbationKind::Gain;
  if (name == "Reverb") return PerturbationKind::Reverb;
  throw InvalidArgument("unknown perturbation kind '" + name + "'");
}

void PerturbationSpec::validate() const {
  if (!std::isfinite(value)) {
    throw InvalidArgument("PerturbationSpec: non-finite value");
  }
  switch (kind) {
    case PerturbationKind::HighPass:
    case PerturbationKind::LowPass:
      if (value <= 0.0) {
        throw CutoffOutOfRange("filter cutoff must be strictly positive, got " +
                               std::to_string(value));
      }
      break;
    case PerturbationKind::Reverb:
      if (value < 0.0 || value > 100.0) {
        throw PercentOutOfRange("reverb percent must lie in [0, 100], got " +
                                std::to_string(value));
      }
      break;
    case PerturbationKind::Gain:
    case PerturbationKind::Identity:
      break;
  }
}

void EmbeddingSet::validate() const {
  if (static_cast<Eigen::Index>(clip_ids.size()) != vectors.rows()) {
    throw InvalidArgument("EmbeddingSet: " + std::to_string(clip_ids.size()) +
                          " ids for " + std::to_string(vectors.rows()) +
                          " rows");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : clip_ids) {
    if (!seen.insert(id).second) {
      throw InvalidArgument("EmbeddingSet: duplicate clip id '" + id + "'");
    }
  }
  if (!vectors.allFinite()) {
    throw InvalidArgument("EmbeddingSet: non-finite entry");
  }
}

void validate_alignment(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.dim() != b.dim()) {
    throw DimMismatch("embedding dims differ: " + std::to_string(a.dim()) +
                      " vs " + std::to_string(b.dim()));
  }
  if (a.clip_ids.size() != b.clip_ids.size()) {
    throw MisalignedSets("clip counts differ: " +
                         std::to_string(a.clip_ids.size()) + " vs " +
                         std::to_string(b.clip_ids.size()));
  }
  for (std::size_t i = 0; i < a.clip_ids.size(); ++i) {
    if (a.clip_ids[i] != b.clip_ids[i]) {
      throw MisalignedSets("clip id mismatch at row " + std::to_string(i) +
                           ": '" + a.clip_ids[i] + "' vs '" + b.clip_ids[i] +
                           "'");
    }
  }
}

const char* to_string(LabelMode mode) {
  switch (mode) {
    case LabelMode::None:
      return "none";
    case LabelMode::SingleLabel:
      return "single";
    case LabelMode::MultiLabel:
      return "multi";
  }
  return "none";
}

void DatasetManifest::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& clip : clips) {
    if (clip.id.empty()) {
      throw InvalidArgument("manifest '" + name + "': empty clip id");
    }
    if (!ids.insert(clip.id).second) {
      throw InvalidArgument("manifest '" + name + "': duplicate clip id '" +
                            clip.id + "'");
    }
  }
  const int n_classes = static_cast<int>(classes.size());
  if (label_mode == LabelMode::SingleLabel) {
    for (const auto& clip : clips) {
      auto it = single_labels.find(clip.id);
      if (it == single_labels.end()) {
        throw InvalidArgument("manifest '" + name + "': clip '" + clip.id +
                              "' has no label");
      }
      if (it->second < 0 || it->second >= n_classes) {
        throw InvalidArgument("manifest '" + name + "': label " +
                              std::to_string(it->second) + " out of range");
      }
    }
  } else if (label_mode == LabelMode::MultiLabel) {
    for (const auto& clip : clips) {
      auto it = multi_labels.find(clip.id);
      if (it == multi_labels.end()) {
        throw InvalidArgument("manifest '" + name + "': clip '" + clip.id +
                              "' has no label vector");
      }
      if (static_cast<int>(it->second.size()) != n_classes) {
        throw InvalidArgument("manifest '" + name + "': label vector for '" +
                              clip.id + "' has wrong length");
      }
    }
  }
  for (const auto& [id, fold] : folds) {
    if (fold < 0) {
      throw InvalidArgument("manifest '" + name + "': negative fold for '" +
                            id + "'");
    }
  }
}

void FrameGrid::validate() const {
  if (!(hop_s > 0.0) || !(window_s > 0.0) || hop_s > window_s) {
    throw InvalidArgument("FrameGrid: need 0 < hop_s <= window_s");
  }
}

std::vector<FrameSpan> frame_spans(std::size_t n_samples, int sample_rate,
                                   const FrameGrid& grid) {
  grid.validate();
  const auto window =
      static_cast<std::size_t>(std::llround(grid.window_s * sample_rate));
  const auto hop =
      static_cast<std::size_t>(std::llround(grid.hop_s * sample_rate));
  std::vector<FrameSpan> spans;
  if (window == 0 || hop == 0 || n_samples <= window) {
    spans.push_back({0, n_samples});
    return spans;
  }
  for (std::size_t start = 0; start + window <= n_samples; start += hop) {
    spans.push_back({start, window});
  }
  return spans;
}

}  // namespace embshift
