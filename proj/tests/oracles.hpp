// Copyright 2026 The embshift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Reference implementations kept deliberately naive. They share only the
// arithmetic conventions that the contracts pin down (scalar accumulation
// in index order, additive cross-cluster sums) and none of the library
// code paths, so agreement is evidence rather than tautology.

#ifndef EMBSHIFT_TESTS_ORACLES_HPP_
#define EMBSHIFT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

inline double euclidean(const Eigen::MatrixXd& x, Eigen::Index a,
                        Eigen::Index b) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double diff = x(a, j) - x(b, j);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

// Average-linkage cophenetic distances by exhaustive search: every step
// scans all active cluster pairs for the lowest height, ties broken by the
// smaller (min rep, max rep) pair where rep is the smallest member index.
// Cross-cluster distances are maintained as additive sums of the pairwise
// point distances; heights divide by the pair count on demand.
inline Eigen::MatrixXd cophenetic_bruteforce(const Eigen::MatrixXd& x) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n < 2) throw std::invalid_argument("cophenetic_bruteforce: n < 2");

  std::vector<std::vector<int>> members(n);
  std::vector<bool> alive(n, true);
  std::vector<std::vector<double>> sum(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<int>(i)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      sum[i][j] = euclidean(x, static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(j));
      sum[j][i] = sum[i][j];
    }

  Eigen::MatrixXd coph = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(n));
  auto rep = [&](std::size_t c) { return members[c].front(); };

  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best_h = std::numeric_limits<double>::infinity();
    int best_lo = -1;
    int best_hi = -1;
    std::size_t best_a = 0;
    std::size_t best_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        const double pairs = static_cast<double>(members[i].size()) *
                             static_cast<double>(members[j].size());
        const double h = sum[i][j] / pairs;
        const int lo = std::min(rep(i), rep(j));
        const int hi = std::max(rep(i), rep(j));
        const bool better =
            h < best_h ||
            (h == best_h &&
             (lo < best_lo || (lo == best_lo && hi < best_hi)));
        if (better) {
          best_h = h;
          best_lo = lo;
          best_hi = hi;
          best_a = i;
          best_b = j;
        }
      }
    }

    for (int p : members[best_a])
      for (int q : members[best_b]) {
        coph(p, q) = best_h;
        coph(q, p) = best_h;
      }

    // Merge b into a; members stay sorted so front() is the min index.
    std::vector<int> merged;
    std::merge(members[best_a].begin(), members[best_a].end(),
               members[best_b].begin(), members[best_b].end(),
               std::back_inserter(merged));
    members[best_a] = std::move(merged);
    alive[best_b] = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == best_a) continue;
      sum[best_a][k] += sum[best_b][k];
      sum[k][best_a] = sum[best_a][k];
    }
  }
  return coph;
}

// Textbook silhouette: per point, a = mean distance within its class,
// b = min over other classes of the mean distance to that class.
// Singleton classes and zero denominators score 0.
inline double silhouette_bruteforce(const Eigen::MatrixXd& x,
                                    const std::vector<int>& labels,
                                    int n_classes) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> class_size(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) class_size[static_cast<std::size_t>(y)]++;

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int yi = labels[i];
    if (class_size[static_cast<std::size_t>(yi)] < 2) continue;
    std::vector<double> mean_to(static_cast<std::size_t>(n_classes), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_to[static_cast<std::size_t>(labels[j])] +=
          euclidean(x, static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(j));
    }
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_classes; ++c) {
      const auto sz = class_size[static_cast<std::size_t>(c)];
      if (sz == 0) continue;
      if (c == yi) {
        a = mean_to[static_cast<std::size_t>(c)] /
            static_cast<double>(sz - 1);
      } else {
        b = std::min(b, mean_to[static_cast<std::size_t>(c)] /
                            static_cast<double>(sz));
      }
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

// Central-difference gradient of f at w, flattened.
inline Eigen::VectorXd numeric_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& w, double h = 1e-6) {
  Eigen::VectorXd g(w.size());
  Eigen::VectorXd probe = w;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    probe(i) = w(i) + h;
    const double fp = f(probe);
    probe(i) = w(i) - h;
    const double fm = f(probe);
    probe(i) = w(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Average precision for distinct scores: mean over positives of
// (positives seen so far) / rank in the descending-score ordering.
inline double average_precision_distinct(const std::vector<double>& scores,
                                         const std::vector<int>& targets) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double positives = 0.0;
  double ap = 0.0;
  double rank = 0.0;
  double total_pos = 0.0;
  for (int t : targets) total_pos += t;
  for (std::size_t idx : order) {
    rank += 1.0;
    if (targets[idx] == 1) {
      positives += 1.0;
      ap += positives / rank;
    }
  }
  return ap / total_pos;
}

// Pearson correlation over two equal-length vectors, plain loops.
inline double pearson(const std::vector<double>& u,
                      const std::vector<double>& v) {
  const auto n = static_cast<double>(u.size());
  double mu = 0.0;
  double mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suv = 0.0;
  double suu = 0.0;
  double svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suv += (u[i] - mu) * (v[i] - mv);
    suu += (u[i] - mu) * (u[i] - mu);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  return suv / std::sqrt(suu * svv);
}

}  // namespace oracles

#endif  // EMBSHIFT_TESTS_ORACLES_HPP_
