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

#ifndef EMBSHIFT_SRC_RNG_HPP_
#define EMBSHIFT_SRC_RNG_HPP_

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace embshift::detail {

// Uniform integer in [0, m) by rejection. std::uniform_int_distribution's
// mapping is implementation-defined, so seeded outputs must not go through
// it anywhere reproducibility is promised.
inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t m) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % m;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % m;
}

// Seeded Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> shuffled_indices(std::size_t n,
                                                 std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(bounded_rand(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

}  // namespace embshift::detail

#endif  // EMBSHIFT_SRC_RNG_HPP_
