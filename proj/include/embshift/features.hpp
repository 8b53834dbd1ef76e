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

#ifndef EMBSHIFT_FEATURES_HPP_
#define EMBSHIFT_FEATURES_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "embshift/types.hpp"

namespace embshift::features {

// Per-frame embeddings for one clip.
struct FrameEmbeddings {
  std::string clip_id;
  std::vector<double> frame_starts;  // seconds, strictly increasing
  Eigen::MatrixXd vectors;           // m x d
};

// Frame-wise sound pressure level in dB relative to digital full scale:
// 20 log10(max(rms, 1e-10)). Uses the same segmentation as the embedder.
std::vector<double> frame_spl(const AudioClip& clip, const FrameGrid& grid);

// Index of the highest-SPL frame (ties -> earliest) and its embedding row.
// Throws LengthMismatch when spl.size() != fe.vectors.rows().
std::pair<Eigen::Index, Eigen::VectorXd> select_peak_embedding(
    const std::vector<double>& spl, const FrameEmbeddings& fe);

// Deterministic reference embedder: per outer frame, an STFT (25 ms Hann
// window, 10 ms hop) is reduced to a mel filterbank (n_mels triangular
// bands spanning 0..Nyquist) on the power spectrum; per-band log-energies
// log(x + 1e-10) are summarized by their mean and standard deviation,
// giving d = 2 * n_mels.
FrameEmbeddings embed_logmel_stats(const AudioClip& clip, const FrameGrid& grid,
                                   int n_mels = 64);

// Mel band center frequencies used by embed_logmel_stats.
std::vector<double> mel_band_centers_hz(int n_mels, int sample_rate);

using FrameEmbedder =
    std::function<FrameEmbeddings(const AudioClip&, const FrameGrid&)>;

// embed_logmel_stats with the dimensionality fixed up front.
FrameEmbedder reference_embedder(int n_mels = 64);

// One clip through the pipeline: SPL-peak frame chosen on the original
// audio, embedding taken from the perturbed audio at that same index, so
// matched rows always describe the same temporal region.
Eigen::VectorXd embed_clip_peak(const AudioClip& original,
                                const PerturbationSpec& spec,
                                const FrameGrid& grid,
                                const FrameEmbedder& embedder);

// Applies embed_clip_peak to every clip; rows follow clip order. Per-clip
// failures are aggregated into one EmbedDatasetError naming each clip id.
EmbeddingSet embed_clips(const std::vector<AudioClip>& clips,
                         const FrameGrid& grid, const PerturbationSpec& spec,
                         const FrameEmbedder& embedder, int jobs = 1);

// Reads each manifest clip from disk and embeds it (manifest order).
EmbeddingSet embed_dataset(const DatasetManifest& manifest,
                           const FrameGrid& grid, const PerturbationSpec& spec,
                           const FrameEmbedder& embedder, int jobs = 1);

}  // namespace embshift::features

#endif  // EMBSHIFT_FEATURES_HPP_
