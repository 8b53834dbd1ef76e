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

#ifndef EMBSHIFT_DSP_HPP_
#define EMBSHIFT_DSP_HPP_

#include <complex>
#include <cstdint>
#include <vector>

#include "embshift/types.hpp"

namespace embshift::dsp {

// One second-order IIR section, a0 normalized to 1.
struct BiquadCoeffs {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  // Poles strictly inside the unit circle.
  bool stable() const;
  // |H(e^{j 2 pi f / fs})|.
  double magnitude_at(double freq_hz, double sample_rate) const;
};

enum class FilterKind { HighPass, LowPass };

// 4th-order Butterworth as two cascaded biquads (bilinear transform with
// prewarped cutoff). Magnitude at fc is -3.01 dB by construction.
// Throws CutoffOutOfRange unless 0 < fc < fs/2.
std::vector<BiquadCoeffs> design_butterworth(FilterKind kind, double fc_hz,
                                             double fs_hz, int order = 4);

double cascade_magnitude_at(const std::vector<BiquadCoeffs>& cascade,
                            double freq_hz, double sample_rate);

// Runs the cascade over the clip (transposed direct-form II, zero initial
// state). Length and rate are preserved.
AudioClip filter_clip(const AudioClip& clip,
                      const std::vector<BiquadCoeffs>& cascade);

// Scales by 10^(gain_db/20) and hard-clips to [-1, 1].
AudioClip apply_gain(const AudioClip& clip, double gain_db);

// Mixes (1-w) dry with w * (dry convolved with a synthetic impulse
// response), truncated to the input length. The impulse response is seeded
// white noise under an exponential decay reaching -60 dB at
// RT60 = (pct/100) * 2.0 s, normalized to unit energy, with a one-sample
// pre-delay. w = pct/100 * 0.5. pct = 0 returns the input bit-exactly.
AudioClip reverberate(const AudioClip& clip, double reverberance_pct,
                      std::uint64_t seed);

constexpr double kMaxRt60Seconds = 2.0;

// Builds the impulse response reverberate() would use at this percentage.
std::vector<double> reverb_impulse_response(double reverberance_pct,
                                            int sample_rate,
                                            std::uint64_t seed);

// Dispatches on spec.kind; Identity copies the clip bit-exactly.
AudioClip perturb(const AudioClip& clip, const PerturbationSpec& spec);

}  // namespace embshift::dsp

#endif  // EMBSHIFT_DSP_HPP_
