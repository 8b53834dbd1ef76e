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

#include "embshift/features.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "embshift/dsp.hpp"
#include "embshift/errors.hpp"
#include "embshift/wav.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace embshift::features {

namespace {

constexpr double kSplFloor = 1e-10;
constexpr double kLogFloor = 1e-10;
constexpr double kStftWindowSeconds = 0.025;
constexpr double kStftHopSeconds = 0.010;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// n_mels triangular filters over FFT bin center frequencies, edges equally
// spaced on the mel scale from 0 to Nyquist.
Eigen::MatrixXd mel_filterbank(int n_mels, int sample_rate, std::size_t nfft) {
  const std::size_t n_bins = nfft / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / (n_mels + 1));
  }
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_mels, n_bins);
  for (int b = 0; b < n_mels; ++b) {
    const double lo = edges[b], center = edges[b + 1], hi = edges[b + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate /
                       static_cast<double>(nfft);
      double w = 0.0;
      if (f > lo && f < hi) {
        w = f <= center ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
      }
      fb(b, k) = w;
    }
  }
  return fb;
}

}  // namespace

std::vector<double> frame_spl(const AudioClip& clip, const FrameGrid& grid) {
  clip.validate();
  const auto spans = frame_spans(clip.samples.size(), clip.sample_rate, grid);
  std::vector<double> spl;
  spl.reserve(spans.size());
  for (const auto& span : spans) {
    double sum_sq = 0.0;
    for (std::size_t i = span.start; i < span.start + span.length; ++i) {
      sum_sq += clip.samples[i] * clip.samples[i];
    }
    const double rms =
        span.length > 0 ? std::sqrt(sum_sq / static_cast<double>(span.length))
                        : 0.0;
    spl.push_back(20.0 * std::log10(std::max(rms, kSplFloor)));
  }
  return spl;
}

std::pair<Eigen::Index, Eigen::VectorXd> select_peak_embedding(
    const std::vector<double>& spl, const FrameEmbeddings& fe) {
  if (static_cast<Eigen::Index>(spl.size()) != fe.vectors.rows()) {
    throw LengthMismatch("select_peak_embedding: " +
                         std::to_string(spl.size()) + " SPL frames vs " +
                         std::to_string(fe.vectors.rows()) + " embeddings");
  }
  if (spl.empty()) {
    throw LengthMismatch("select_peak_embedding: no frames");
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < static_cast<Eigen::Index>(spl.size()); ++i) {
    if (spl[static_cast<std::size_t>(i)] > spl[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return {best, fe.vectors.row(best)};
}

std::vector<double> mel_band_centers_hz(int n_mels, int sample_rate) {
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> centers(static_cast<std::size_t>(n_mels));
  for (int b = 0; b < n_mels; ++b) {
    centers[static_cast<std::size_t>(b)] =
        mel_to_hz(mel_max * (b + 1.0) / (n_mels + 1));
  }
  return centers;
}

FrameEmbeddings embed_logmel_stats(const AudioClip& clip, const FrameGrid& grid,
                                   int n_mels) {
  clip.validate();
  if (n_mels < 1) throw InvalidArgument("n_mels must be positive");

  const auto win = static_cast<std::size_t>(
      std::llround(kStftWindowSeconds * clip.sample_rate));
  const auto hop = static_cast<std::size_t>(
      std::llround(kStftHopSeconds * clip.sample_rate));
  const std::size_t nfft = detail::next_pow2(win);
  const std::size_t n_bins = nfft / 2 + 1;

  const auto spans = frame_spans(clip.samples.size(), clip.sample_rate, grid);
  for (const auto& span : spans) {
    if (span.length < win) {
      throw ClipTooShort("clip '" + clip.id + "': frame of " +
                         std::to_string(span.length) +
                         " samples is shorter than one STFT window (" +
                         std::to_string(win) + ")");
    }
  }

  std::vector<double> hann(win);
  for (std::size_t i = 0; i < win; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                   static_cast<double>(win));
  }
  const Eigen::MatrixXd fb = mel_filterbank(n_mels, clip.sample_rate, nfft);

  FrameEmbeddings fe;
  fe.clip_id = clip.id;
  fe.vectors.resize(static_cast<Eigen::Index>(spans.size()), 2 * n_mels);

  std::vector<std::complex<double>> buf(nfft);
  Eigen::VectorXd power(n_bins);
  for (std::size_t f = 0; f < spans.size(); ++f) {
    const auto& span = spans[f];
    fe.frame_starts.push_back(static_cast<double>(span.start) /
                              clip.sample_rate);
    const std::size_t n_hops = (span.length - win) / hop + 1;

    Eigen::MatrixXd log_energies(n_mels, static_cast<Eigen::Index>(n_hops));
    for (std::size_t h = 0; h < n_hops; ++h) {
      const std::size_t off = span.start + h * hop;
      for (std::size_t i = 0; i < win; ++i) {
        buf[i] = clip.samples[off + i] * hann[i];
      }
      std::fill(buf.begin() + static_cast<std::ptrdiff_t>(win), buf.end(),
                std::complex<double>(0.0, 0.0));
      detail::fft(buf, false);
      for (std::size_t k = 0; k < n_bins; ++k) power[static_cast<Eigen::Index>(k)] = std::norm(buf[k]);
      const Eigen::VectorXd band = fb * power;
      for (int b = 0; b < n_mels; ++b) {
        log_energies(b, static_cast<Eigen::Index>(h)) =
            std::log(band[b] + kLogFloor);
      }
    }

    for (int b = 0; b < n_mels; ++b) {
      const double mean = log_energies.row(b).mean();
      const double var =
          (log_energies.row(b).array() - mean).square().sum() /
          static_cast<double>(n_hops);
      fe.vectors(static_cast<Eigen::Index>(f), b) = mean;
      fe.vectors(static_cast<Eigen::Index>(f), n_mels + b) = std::sqrt(var);
    }
  }
  return fe;
}

FrameEmbedder reference_embedder(int n_mels) {
  return [n_mels](const AudioClip& clip, const FrameGrid& grid) {
    return embed_logmel_stats(clip, grid, n_mels);
  };
}

Eigen::VectorXd embed_clip_peak(const AudioClip& original,
                                const PerturbationSpec& spec,
                                const FrameGrid& grid,
                                const FrameEmbedder& embedder) {
  const std::vector<double> spl = frame_spl(original, grid);
  const AudioClip perturbed = dsp::perturb(original, spec);
  const FrameEmbeddings fe = embedder(perturbed, grid);
  auto [index, vec] = select_peak_embedding(spl, fe);
  (void)index;
  return vec;
}

EmbeddingSet embed_clips(const std::vector<AudioClip>& clips,
                         const FrameGrid& grid, const PerturbationSpec& spec,
                         const FrameEmbedder& embedder, int jobs) {
  if (clips.empty()) throw InvalidArgument("embed_clips: no clips");

  std::vector<Eigen::VectorXd> rows(clips.size());
  std::vector<std::string> errors(clips.size());
  detail::parallel_for(clips.size(), jobs, [&](std::size_t i) {
    try {
      rows[i] = embed_clip_peak(clips[i], spec, grid, embedder);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::ostringstream failed;
  int n_failed = 0;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (!errors[i].empty()) {
      if (n_failed++) failed << "; ";
      failed << "clip '" << clips[i].id << "': " << errors[i];
    }
  }
  if (n_failed > 0) {
    throw EmbedDatasetError(std::to_string(n_failed) + " clip(s) failed: " +
                            failed.str());
  }

  EmbeddingSet set;
  set.vectors.resize(static_cast<Eigen::Index>(clips.size()), rows[0].size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    set.clip_ids.push_back(clips[i].id);
    if (rows[i].size() != rows[0].size()) {
      throw DimMismatch("embed_clips: inconsistent embedding dims");
    }
    set.vectors.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  set.validate();
  return set;
}

EmbeddingSet embed_dataset(const DatasetManifest& manifest,
                           const FrameGrid& grid, const PerturbationSpec& spec,
                           const FrameEmbedder& embedder, int jobs) {
  manifest.validate();
  if (manifest.clips.empty()) {
    throw InvalidArgument("embed_dataset: manifest has no clips");
  }

  std::vector<Eigen::VectorXd> rows(manifest.clips.size());
  std::vector<std::string> errors(manifest.clips.size());
  detail::parallel_for(manifest.clips.size(), jobs, [&](std::size_t i) {
    const auto& entry = manifest.clips[i];
    try {
      const AudioClip clip = io::read_wav(entry.audio_path, entry.id);
      rows[i] = embed_clip_peak(clip, spec, grid, embedder);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::ostringstream failed;
  int n_failed = 0;
  for (std::size_t i = 0; i < manifest.clips.size(); ++i) {
    if (!errors[i].empty()) {
      if (n_failed++) failed << "; ";
      failed << "clip '" << manifest.clips[i].id << "': " << errors[i];
    }
  }
  if (n_failed > 0) {
    throw EmbedDatasetError(std::to_string(n_failed) + " clip(s) failed: " +
                            failed.str());
  }

  EmbeddingSet set;
  set.vectors.resize(static_cast<Eigen::Index>(manifest.clips.size()),
                     rows[0].size());
  for (std::size_t i = 0; i < manifest.clips.size(); ++i) {
    set.clip_ids.push_back(manifest.clips[i].id);
    if (rows[i].size() != rows[0].size()) {
      throw DimMismatch("embed_dataset: inconsistent embedding dims");
    }
    set.vectors.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  set.validate();
  return set;
}

}  // namespace embshift::features
