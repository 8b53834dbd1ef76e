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

#include "embshift/dsp.hpp"

#include <cmath>
#include <random>

#include "embshift/errors.hpp"
#include "fft.hpp"

namespace embshift::dsp {

namespace {

// Uniform double in [-1, 1) from the top 53 bits of a mt19937_64 draw.
// std::uniform_real_distribution is implementation-defined, this is not.
double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

bool BiquadCoeffs::stable() const {
  // z^2 + a1 z + a2: both roots inside the unit circle iff
  // |a2| < 1 and |a1| < 1 + a2 (Schur-Cohn for a real quadratic).
  return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
}

double BiquadCoeffs::magnitude_at(double freq_hz, double sample_rate) const {
  const double w = 2.0 * M_PI * freq_hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  const std::complex<double> num = b0 + b1 * z1 + b2 * z2;
  const std::complex<double> den = 1.0 + a1 * z1 + a2 * z2;
  return std::abs(num / den);
}

std::vector<BiquadCoeffs> design_butterworth(FilterKind kind, double fc_hz,
                                             double fs_hz, int order) {
  if (order <= 0 || order % 2 != 0) {
    throw InvalidArgument("butterworth order must be a positive even number");
  }
  if (!(fc_hz > 0.0) || fc_hz >= fs_hz / 2.0) {
    throw CutoffOutOfRange("cutoff " + std::to_string(fc_hz) +
                           " Hz must lie in (0, " + std::to_string(fs_hz / 2) +
                           ") for fs = " + std::to_string(fs_hz) + " Hz");
  }

  const double w0 = 2.0 * M_PI * fc_hz / fs_hz;
  const double cosw = std::cos(w0);
  const double sinw = std::sin(w0);

  std::vector<BiquadCoeffs> cascade;
  cascade.reserve(static_cast<std::size_t>(order / 2));
  for (int k = 0; k < order / 2; ++k) {
    // Butterworth pole-pair quality factors: Q_k = 1 / (2 cos theta_k).
    const double theta = M_PI * (2.0 * k + 1.0) / (2.0 * order);
    const double q = 1.0 / (2.0 * std::cos(theta));
    const double alpha = sinw / (2.0 * q);
    const double a0 = 1.0 + alpha;

    BiquadCoeffs c;
    if (kind == FilterKind::LowPass) {
      c.b0 = (1.0 - cosw) / 2.0 / a0;
      c.b1 = (1.0 - cosw) / a0;
      c.b2 = c.b0;
    } else {
      c.b0 = (1.0 + cosw) / 2.0 / a0;
      c.b1 = -(1.0 + cosw) / a0;
      c.b2 = c.b0;
    }
    c.a1 = -2.0 * cosw / a0;
    c.a2 = (1.0 - alpha) / a0;
    if (!c.stable()) {
      throw NonFiniteResult("unstable biquad for fc=" + std::to_string(fc_hz) +
                            " fs=" + std::to_string(fs_hz));
    }
    cascade.push_back(c);
  }
  return cascade;
}

double cascade_magnitude_at(const std::vector<BiquadCoeffs>& cascade,
                            double freq_hz, double sample_rate) {
  double mag = 1.0;
  for (const auto& c : cascade) mag *= c.magnitude_at(freq_hz, sample_rate);
  return mag;
}

AudioClip filter_clip(const AudioClip& clip,
                      const std::vector<BiquadCoeffs>& cascade) {
  clip.validate();
  for (const auto& c : cascade) {
    if (!c.stable()) throw InvalidArgument("filter_clip: unstable biquad");
  }

  AudioClip out = clip;
  for (const auto& c : cascade) {
    double s1 = 0.0, s2 = 0.0;  // transposed direct-form II state
    for (double& x : out.samples) {
      const double y = c.b0 * x + s1;
      s1 = c.b1 * x - c.a1 * y + s2;
      s2 = c.b2 * x - c.a2 * y;
      x = y;
    }
  }
  for (double s : out.samples) {
    if (!std::isfinite(s)) throw NonFiniteResult("filter output not finite");
  }
  return out;
}

AudioClip apply_gain(const AudioClip& clip, double gain_db) {
  clip.validate();
  if (!std::isfinite(gain_db)) {
    throw InvalidArgument("apply_gain: non-finite gain");
  }
  const double g = std::pow(10.0, gain_db / 20.0);
  AudioClip out = clip;
  for (double& s : out.samples) {
    const double v = s * g;
    s = v > 1.0 ? 1.0 : (v < -1.0 ? -1.0 : v);
  }
  return out;
}

std::vector<double> reverb_impulse_response(double reverberance_pct,
                                            int sample_rate,
                                            std::uint64_t seed) {
  if (reverberance_pct < 0.0 || reverberance_pct > 100.0) {
    throw PercentOutOfRange("reverberance must lie in [0, 100], got " +
                            std::to_string(reverberance_pct));
  }
  const double rt60 = reverberance_pct / 100.0 * kMaxRt60Seconds;
  const auto tail = static_cast<std::size_t>(std::ceil(rt60 * sample_rate));
  // One-sample pre-delay, then noise under the -60 dB/RT60 envelope.
  std::vector<double> rir(tail + 1, 0.0);
  std::mt19937_64 rng(seed);
  double energy = 0.0;
  for (std::size_t t = 1; t < rir.size(); ++t) {
    const double seconds = static_cast<double>(t - 1) / sample_rate;
    const double envelope = std::pow(10.0, -3.0 * seconds / rt60);
    rir[t] = uniform_pm1(rng) * envelope;
    energy += rir[t] * rir[t];
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (double& r : rir) r *= scale;
  return rir;
}

AudioClip reverberate(const AudioClip& clip, double reverberance_pct,
                      std::uint64_t seed) {
  clip.validate();
  if (reverberance_pct < 0.0 || reverberance_pct > 100.0) {
    throw PercentOutOfRange("reverberance must lie in [0, 100], got " +
                            std::to_string(reverberance_pct));
  }
  if (reverberance_pct == 0.0) return clip;

  const std::vector<double> rir =
      reverb_impulse_response(reverberance_pct, clip.sample_rate, seed);
  const std::vector<double> wet = detail::fft_convolve(clip.samples, rir);
  const double w = reverberance_pct / 100.0 * 0.5;

  AudioClip out = clip;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = (1.0 - w) * clip.samples[i] + w * wet[i];
  }
  return out;
}

AudioClip perturb(const AudioClip& clip, const PerturbationSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case PerturbationKind::Identity:
      return clip;
    case PerturbationKind::HighPass:
      return filter_clip(clip, design_butterworth(FilterKind::HighPass,
                                                  spec.value,
                                                  clip.sample_rate));
    case PerturbationKind::LowPass:
      return filter_clip(clip, design_butterworth(FilterKind::LowPass,
                                                  spec.value,
                                                  clip.sample_rate));
    case PerturbationKind::Gain:
      return apply_gain(clip, spec.value);
    case PerturbationKind::Reverb:
      return reverberate(clip, spec.value, spec.seed);
  }
  throw InvalidArgument("perturb: unknown kind");
}

}  // namespace embshift::dsp
