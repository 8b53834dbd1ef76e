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

#include "embshift/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "embshift/errors.hpp"
#include "rng.hpp"

namespace embshift::metrics {

namespace {

constexpr double kEigvalClamp = 1e-12;

// Scalar-loop Euclidean distance in fixed index order. Pairwise distances
// feed exact-equality checks against reference computations, so the
// summation order must not depend on vectorization choices.
double row_distance(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double d = x(i, k) - x(j, k);
    sum += d * d;
  }
  return std::sqrt(sum);
}

// Merge candidates are ordered by height, then by the (min rep, max rep)
// pair of the two clusters' smallest member indices.
struct MergeKey {
  double height;
  Eigen::Index lo;
  Eigen::Index hi;

  bool operator<(const MergeKey& other) const {
    if (height != other.height) return height < other.height;
    if (lo != other.lo) return lo < other.lo;
    return hi < other.hi;
  }
};

MergeKey make_key(double height, Eigen::Index rep_a, Eigen::Index rep_b) {
  return {height, std::min(rep_a, rep_b), std::max(rep_a, rep_b)};
}

}  // namespace

void GaussianStats::validate() const {
  if (count < 2) throw TooFewPoints("GaussianStats requires count >= 2");
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
    throw DimMismatch("GaussianStats mean/cov dimensions disagree");
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw NonFiniteResult("GaussianStats contains non-finite entries");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw InvalidArgument("GaussianStats covariance is not symmetric");
  }
}

void CopheneticMatrix::validate() const {
  if (values.rows() != values.cols()) {
    throw DimMismatch("cophenetic matrix must be square");
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (values(i, i) != 0.0) {
      throw InvalidArgument("cophenetic matrix diagonal must be zero");
    }
    for (Eigen::Index j = i + 1; j < values.cols(); ++j) {
      if (!(values(i, j) >= 0.0) || values(i, j) != values(j, i)) {
        throw InvalidArgument(
            "cophenetic matrix must be symmetric and nonnegative");
      }
    }
  }
}

double mean_cosine_distance(const EmbeddingSet& a, const EmbeddingSet& b) {
  validate_alignment(a, b);
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double na = a.vectors.row(i).norm();
    const double nb = b.vectors.row(i).norm();
    if (na == 0.0 || nb == 0.0) {
      throw ZeroNormVector("zero-norm embedding for clip '" +
                           a.clip_ids[static_cast<std::size_t>(i)] + "'");
    }
    const double dot = a.vectors.row(i).dot(b.vectors.row(i));
    total += 1.0 - dot / (na * nb);
  }
  return total / static_cast<double>(a.size());
}

CopheneticMatrix agglomerative_cophenetic(const EmbeddingSet& e) {
  e.validate();
  const Eigen::Index n = e.size();
  if (n < 2) throw TooFewPoints("clustering requires at least 2 points");

  // S(i, j) holds the SUM of pointwise distances between the members of
  // clusters i and j; the average-linkage height is S / (size_i * size_j).
  // Keeping sums makes the post-merge update a plain addition, so heights
  // are an exact arithmetic function of the initial distances.
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = row_distance(e.vectors, i, j);
      s(i, j) = d;
      s(j, i) = d;
    }
  }

  std::vector<char> active(static_cast<std::size_t>(n), 1);
  std::vector<Eigen::Index> csize(static_cast<std::size_t>(n), 1);
  std::vector<Eigen::Index> rep(static_cast<std::size_t>(n));
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    rep[static_cast<std::size_t>(i)] = i;
    members[static_cast<std::size_t>(i)] = {i};
  }

  const auto height = [&](Eigen::Index i, Eigen::Index j) {
    return s(i, j) / static_cast<double>(csize[static_cast<std::size_t>(i)] *
                                         csize[static_cast<std::size_t>(j)]);
  };
  const auto pair_key = [&](Eigen::Index i, Eigen::Index j) {
    return make_key(height(i, j), rep[static_cast<std::size_t>(i)],
                    rep[static_cast<std::size_t>(j)]);
  };

  // Nearest-neighbor cache: nn[i] is the exact argmin partner of i under
  // MergeKey ordering, kept valid across merges.
  std::vector<Eigen::Index> nn(static_cast<std::size_t>(n), -1);
  const auto rescan = [&](Eigen::Index i) {
    Eigen::Index best = -1;
    MergeKey best_key{0.0, 0, 0};
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || !active[static_cast<std::size_t>(j)]) continue;
      const MergeKey key = pair_key(i, j);
      if (best < 0 || key < best_key) {
        best = j;
        best_key = key;
      }
    }
    nn[static_cast<std::size_t>(i)] = best;
  };
  for (Eigen::Index i = 0; i < n; ++i) rescan(i);

  CopheneticMatrix c;
  c.values = Eigen::MatrixXd::Zero(n, n);

  for (Eigen::Index step = 0; step < n - 1; ++step) {
    Eigen::Index a = -1;
    MergeKey best_key{0.0, 0, 0};
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      const Eigen::Index j = nn[static_cast<std::size_t>(i)];
      if (j < 0) continue;
      const MergeKey key = pair_key(i, j);
      if (a < 0 || key < best_key) {
        a = i;
        best_key = key;
      }
    }
    const Eigen::Index b = nn[static_cast<std::size_t>(a)];
    const double h = best_key.height;

    for (const Eigen::Index i : members[static_cast<std::size_t>(a)]) {
      for (const Eigen::Index j : members[static_cast<std::size_t>(b)]) {
        c.values(i, j) = h;
        c.values(j, i) = h;
      }
    }

    // Fold b into a: cross sums add, so no distance is recomputed.
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == a || k == b || !active[static_cast<std::size_t>(k)]) continue;
      const double merged = s(a, k) + s(b, k);
      s(a, k) = merged;
      s(k, a) = merged;
    }
    active[static_cast<std::size_t>(b)] = 0;
    csize[static_cast<std::size_t>(a)] += csize[static_cast<std::size_t>(b)];
    rep[static_cast<std::size_t>(a)] =
        std::min(rep[static_cast<std::size_t>(a)],
                 rep[static_cast<std::size_t>(b)]);
    auto& ma = members[static_cast<std::size_t>(a)];
    auto& mb = members[static_cast<std::size_t>(b)];
    ma.insert(ma.end(), mb.begin(), mb.end());
    mb.clear();
    mb.shrink_to_fit();

    rescan(a);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == a || !active[static_cast<std::size_t>(k)]) continue;
      const Eigen::Index cur = nn[static_cast<std::size_t>(k)];
      if (cur == a || cur == b) {
        rescan(k);
      } else if (pair_key(k, a) < pair_key(k, cur)) {
        nn[static_cast<std::size_t>(k)] = a;
      }
    }
  }
  return c;
}

double cpcd(const CopheneticMatrix& co, const CopheneticMatrix& cp) {
  if (co.size() != cp.size()) {
    throw DimMismatch("cophenetic matrices have different sizes");
  }
  const Eigen::Index n = co.size();
  const std::size_t m = static_cast<std::size_t>(n) *
                        static_cast<std::size_t>(n - 1) / 2;
  if (m < 2) {
    throw DegenerateDendrogram(
        "correlation needs at least 2 upper-triangle entries");
  }

  std::vector<double> u, v;
  u.reserve(m);
  v.reserve(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      u.push_back(co.values(i, j));
      v.push_back(cp.values(i, j));
    }
  }

  const auto constant = [](const std::vector<double>& x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *lo == *hi;
  };
  if (constant(u) || constant(v)) {
    throw DegenerateDendrogram(
        "cophenetic distances have zero variance; correlation undefined");
  }

  double mu = 0.0, mv = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mu += u[k];
    mv += v[k];
  }
  mu /= static_cast<double>(m);
  mv /= static_cast<double>(m);

  double suu = 0.0, svv = 0.0, suv = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double du = u[k] - mu;
    const double dv = v[k] - mv;
    suu += du * du;
    svv += dv * dv;
    suv += du * dv;
  }
  const double r = suv / std::sqrt(suu * svv);
  if (!std::isfinite(r)) {
    throw NonFiniteResult("cophenetic correlation is not finite");
  }
  return std::clamp(1.0 - r, 0.0, 2.0);
}

double cpcd_between(const EmbeddingSet& a, const EmbeddingSet& b,
                    std::size_t max_points, std::uint64_t seed) {
  validate_alignment(a, b);
  const std::size_t n = static_cast<std::size_t>(a.size());
  if (n <= max_points) {
    return cpcd(agglomerative_cophenetic(a), agglomerative_cophenetic(b));
  }

  const std::vector<std::size_t> keep = subsample_indices(n, max_points, seed);
  EmbeddingSet sa, sb;
  sa.vectors.resize(static_cast<Eigen::Index>(keep.size()), a.dim());
  sb.vectors.resize(static_cast<Eigen::Index>(keep.size()), b.dim());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    sa.clip_ids.push_back(a.clip_ids[keep[r]]);
    sb.clip_ids.push_back(b.clip_ids[keep[r]]);
    sa.vectors.row(static_cast<Eigen::Index>(r)) =
        a.vectors.row(static_cast<Eigen::Index>(keep[r]));
    sb.vectors.row(static_cast<Eigen::Index>(r)) =
        b.vectors.row(static_cast<Eigen::Index>(keep[r]));
  }
  return cpcd(agglomerative_cophenetic(sa), agglomerative_cophenetic(sb));
}

GaussianStats gaussian_stats(const EmbeddingSet& e) {
  e.validate();
  const Eigen::Index n = e.size();
  if (n < 2) throw TooFewPoints("gaussian_stats requires at least 2 rows");

  GaussianStats g;
  g.count = n;
  g.mean = e.vectors.colwise().mean();
  const Eigen::MatrixXd centered = e.vectors.rowwise() - g.mean.transpose();
  g.cov = centered.transpose() * centered / static_cast<double>(n - 1);
  g.cov = ((g.cov + g.cov.transpose()) / 2.0).eval();
  g.validate();
  return g;
}

namespace {

// PSD square root with eigenvalues below the clamp zeroed.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NonFiniteResult("eigendecomposition failed");
  }
  Eigen::VectorXd evals = solver.eigenvalues();
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    evals[i] = evals[i] < kEigvalClamp ? 0.0 : std::sqrt(evals[i]);
  }
  return solver.eigenvectors() * evals.asDiagonal() *
         solver.eigenvectors().transpose();
}

}  // namespace

double fad(const GaussianStats& o, const GaussianStats& p) {
  o.validate();
  p.validate();
  if (o.dim() != p.dim()) {
    throw DimMismatch("Gaussian stats have different dimensions");
  }

  const double mean_term = (o.mean - p.mean).squaredNorm();

  const Eigen::MatrixXd root_o = psd_sqrt(o.cov);
  Eigen::MatrixXd inner = root_o * p.cov * root_o;
  inner = ((inner + inner.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inner);
  if (solver.info() != Eigen::Success) {
    throw NonFiniteResult("eigendecomposition failed");
  }
  double cross = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double ev = solver.eigenvalues()[i];
    cross += ev < kEigvalClamp ? 0.0 : std::sqrt(ev);
  }

  const double result =
      mean_term + o.cov.trace() + p.cov.trace() - 2.0 * cross;
  if (!std::isfinite(result)) {
    throw NonFiniteResult("distance between Gaussians is not finite");
  }
  return std::max(result, 0.0);
}

std::vector<double> minmax_scale(const std::vector<double>& values) {
  if (values.empty()) throw DegenerateRange("no values to scale");
  double lo = values[0], hi = values[0];
  for (const double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    throw DegenerateRange("all values equal; min-max range is empty");
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const double v : values) out.push_back((v - lo) / (hi - lo));
  return out;
}

EmbeddingSet l2_normalized(const EmbeddingSet& e) {
  e.validate();
  EmbeddingSet out = e;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double norm = out.vectors.row(i).norm();
    if (norm == 0.0) {
      throw ZeroNormVector("zero-norm embedding for clip '" +
                           out.clip_ids[static_cast<std::size_t>(i)] + "'");
    }
    out.vectors.row(i) /= norm;
  }
  return out;
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t k,
                                           std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k >= n) return idx;

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(detail::bounded_rand(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace embshift::metrics
