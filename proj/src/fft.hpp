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

#ifndef EMBSHIFT_SRC_FFT_HPP_
#define EMBSHIFT_SRC_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace embshift::detail {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 FFT. data.size() must be a power of two.
// inverse=true applies the conjugate transform including the 1/N scale.
void fft(std::vector<std::complex<double>>& data, bool inverse);

// Linear convolution of a and b via FFT, length a.size() + b.size() - 1.
std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b);

}  // namespace embshift::detail

#endif  // EMBSHIFT_SRC_FFT_HPP_
