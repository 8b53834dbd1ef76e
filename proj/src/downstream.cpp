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

#include "embshift/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "embshift/errors.hpp"
#include "rng.hpp"

namespace embshift::downstream {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kMinStep = 1e-16;

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow for large |z|.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

Eigen::MatrixXd logits(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                       const Eigen::MatrixXd& x) {
  return (x * w.transpose()).rowwise() + b.transpose();
}

}  // namespace

void LogRegModel::validate() const {
  if (weights.rows() != bias.size()) {
    throw DimMismatch("weight rows and bias length disagree");
  }
  if (!weights.allFinite() || !bias.allFinite()) {
    throw NonFiniteResult("model parameters are not finite");
  }
  if (mode == LabelMode::None) {
    throw ModeMismatch("model has no label mode");
  }
}

LossGrad softmax_loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                      const Eigen::MatrixXd& x, const std::vector<int>& y,
                      int n_classes, double l2) {
  const Eigen::Index n = x.rows();
  if (static_cast<Eigen::Index>(y.size()) != n) {
    throw LabelMismatch("label count does not match row count");
  }
  Eigen::MatrixXd z = logits(w, b, x);

  double loss = 0.0;
  Eigen::MatrixXd g(n, n_classes);  // softmax(z) - onehot(y)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zmax = z.row(i).maxCoeff();
    double sum = 0.0;
    for (int c = 0; c < n_classes; ++c) sum += std::exp(z(i, c) - zmax);
    const double lse = zmax + std::log(sum);
    loss += lse - z(i, y[static_cast<std::size_t>(i)]);
    for (int c = 0; c < n_classes; ++c) g(i, c) = std::exp(z(i, c) - lse);
    g(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  }

  LossGrad out;
  out.loss = loss / static_cast<double>(n) + 0.5 * l2 * w.squaredNorm();
  out.grad_weights =
      g.transpose() * x / static_cast<double>(n) + l2 * w;
  out.grad_bias = g.colwise().sum().transpose() / static_cast<double>(n);
  return out;
}

LossGrad sigmoid_loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                      const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      double l2) {
  const Eigen::Index n = x.rows();
  if (y.rows() != n || y.cols() != w.rows()) {
    throw LabelMismatch("target matrix shape does not match data/model");
  }
  Eigen::MatrixXd z = logits(w, b, x);

  double loss = 0.0;
  Eigen::MatrixXd g(n, w.rows());  // sigmoid(z) - y
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < w.rows(); ++c) {
      loss += softplus(z(i, c)) - z(i, c) * y(i, c);
      g(i, c) = stable_sigmoid(z(i, c)) - y(i, c);
    }
  }

  LossGrad out;
  out.loss = loss / static_cast<double>(n) + 0.5 * l2 * w.squaredNorm();
  out.grad_weights =
      g.transpose() * x / static_cast<double>(n) + l2 * w;
  out.grad_bias = g.colwise().sum().transpose() / static_cast<double>(n);
  return out;
}

std::vector<int> single_labels_for(const EmbeddingSet& e,
                                   const DatasetManifest& manifest) {
  if (manifest.label_mode != LabelMode::SingleLabel) {
    throw LabelMismatch("dataset '" + manifest.name + "' is not single-label");
  }
  std::vector<int> y;
  y.reserve(e.clip_ids.size());
  for (const auto& id : e.clip_ids) {
    const auto it = manifest.single_labels.find(id);
    if (it == manifest.single_labels.end()) {
      throw LabelMismatch("no label for clip '" + id + "'");
    }
    y.push_back(it->second);
  }
  return y;
}

Eigen::MatrixXd multi_labels_for(const EmbeddingSet& e,
                                 const DatasetManifest& manifest) {
  if (manifest.label_mode != LabelMode::MultiLabel) {
    throw LabelMismatch("dataset '" + manifest.name + "' is not multi-label");
  }
  const Eigen::Index c = static_cast<Eigen::Index>(manifest.classes.size());
  Eigen::MatrixXd y(e.size(), c);
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const auto& id = e.clip_ids[static_cast<std::size_t>(i)];
    const auto it = manifest.multi_labels.find(id);
    if (it == manifest.multi_labels.end()) {
      throw LabelMismatch("no labels for clip '" + id + "'");
    }
    for (Eigen::Index k = 0; k < c; ++k) {
      y(i, k) = it->second[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
    }
  }
  return y;
}

LogRegModel train_logreg(const EmbeddingSet& e, const DatasetManifest& manifest,
                         const TrainOptions& opts) {
  e.validate();
  manifest.validate();
  if (opts.l2 <= 0.0) throw InvalidArgument("l2 strength must be positive");
  if (opts.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (manifest.label_mode == LabelMode::None) {
    throw LabelMismatch("dataset '" + manifest.name + "' has no labels");
  }
  const int c = static_cast<int>(manifest.classes.size());
  if (e.size() < c) {
    throw LabelMismatch("fewer rows than classes");
  }

  std::vector<int> y_single;
  Eigen::MatrixXd y_multi;
  if (manifest.label_mode == LabelMode::SingleLabel) {
    y_single = single_labels_for(e, manifest);
    const std::set<int> present(y_single.begin(), y_single.end());
    if (present.size() < 2) {
      throw LabelMismatch("training labels cover fewer than 2 classes");
    }
  } else {
    y_multi = multi_labels_for(e, manifest);
  }

  LogRegModel model;
  model.mode = manifest.label_mode;
  model.l2 = opts.l2;
  model.weights = Eigen::MatrixXd::Zero(c, e.dim());
  model.bias = Eigen::VectorXd::Zero(c);

  const auto objective = [&](const Eigen::MatrixXd& w,
                             const Eigen::VectorXd& b) {
    return model.mode == LabelMode::SingleLabel
               ? softmax_loss(w, b, e.vectors, y_single, c, opts.l2)
               : sigmoid_loss(w, b, e.vectors, y_multi, opts.l2);
  };

  LossGrad cur = objective(model.weights, model.bias);
  double step = 1.0;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const double gsq =
        cur.grad_weights.squaredNorm() + cur.grad_bias.squaredNorm();
    if (std::sqrt(gsq) <= opts.tol) {
      model.converged = true;
      model.iterations = iter;
      break;
    }

    // Backtracking from twice the previous accepted step keeps the loss
    // strictly decreasing while letting the step grow on easy stretches.
    double t = step * 2.0;
    bool accepted = false;
    while (t >= kMinStep) {
      const Eigen::MatrixXd w2 = model.weights - t * cur.grad_weights;
      const Eigen::VectorXd b2 = model.bias - t * cur.grad_bias;
      const LossGrad trial = objective(w2, b2);
      if (trial.loss <= cur.loss - kArmijoSlope * t * gsq) {
        model.weights = w2;
        model.bias = b2;
        cur = trial;
        step = t;
        accepted = true;
        break;
      }
      t /= 2.0;
    }
    model.iterations = iter + 1;
    if (!accepted) break;  // no descent step representable; report as-is
  }
  model.validate();
  return model;
}

double eval_accuracy(const LogRegModel& model, const EmbeddingSet& e,
                     const DatasetManifest& manifest) {
  model.validate();
  e.validate();
  if (model.mode != LabelMode::SingleLabel ||
      manifest.label_mode != LabelMode::SingleLabel) {
    throw ModeMismatch("accuracy requires single-label model and dataset");
  }
  if (e.size() == 0) throw InvalidArgument("empty embedding set");
  if (e.dim() != model.dim()) {
    throw DimMismatch("embedding dim does not match model");
  }
  const std::vector<int> y = single_labels_for(e, manifest);
  const Eigen::MatrixXd z = logits(model.weights, model.bias, e.vectors);

  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < z.cols(); ++k) {
      if (z(i, k) > z(i, best)) best = static_cast<int>(k);
    }
    if (best == y[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(e.size());
}

namespace {

// Step-wise average precision with tied scores collapsed into one
// threshold group.
double average_precision(const std::vector<double>& scores,
                         const std::vector<double>& targets,
                         double total_pos) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });

  double ap = 0.0;
  double tp = 0.0, fp = 0.0, recall_prev = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double tp_g = 0.0, fp_g = 0.0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (targets[order[j]] > 0.5) {
        tp_g += 1.0;
      } else {
        fp_g += 1.0;
      }
      ++j;
    }
    tp += tp_g;
    fp += fp_g;
    const double recall = tp / total_pos;
    const double precision = tp / (tp + fp);
    ap += (recall - recall_prev) * precision;
    recall_prev = recall;
    i = j;
  }
  return ap;
}

}  // namespace

MacroAuprc macro_auprc(const LogRegModel& model, const EmbeddingSet& e,
                       const DatasetManifest& manifest) {
  model.validate();
  e.validate();
  if (model.mode != LabelMode::MultiLabel ||
      manifest.label_mode != LabelMode::MultiLabel) {
    throw ModeMismatch("macro AUPRC requires multi-label model and dataset");
  }
  if (e.size() == 0) throw InvalidArgument("empty embedding set");
  if (e.dim() != model.dim()) {
    throw DimMismatch("embedding dim does not match model");
  }
  const Eigen::MatrixXd y = multi_labels_for(e, manifest);
  const Eigen::MatrixXd z = logits(model.weights, model.bias, e.vectors);

  MacroAuprc out;
  double sum = 0.0;
  int evaluated = 0;
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double total_pos = y.col(c).sum();
    if (total_pos == 0.0) {
      out.skipped_classes.push_back(static_cast<int>(c));
      continue;
    }
    std::vector<double> scores(static_cast<std::size_t>(z.rows()));
    std::vector<double> targets(static_cast<std::size_t>(z.rows()));
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      scores[static_cast<std::size_t>(i)] = z(i, c);
      targets[static_cast<std::size_t>(i)] = y(i, c);
    }
    sum += average_precision(scores, targets, total_pos);
    ++evaluated;
  }
  if (evaluated == 0) {
    throw NoEvaluableClasses("no class has a positive example");
  }
  out.value = sum / static_cast<double>(evaluated);
  return out;
}

double silhouette(const EmbeddingSet& e, const DatasetManifest& manifest) {
  e.validate();
  if (manifest.label_mode != LabelMode::SingleLabel) {
    throw ModeMismatch("silhouette requires a single-label dataset");
  }
  const std::vector<int> y = single_labels_for(e, manifest);
  const int c = static_cast<int>(manifest.classes.size());
  std::vector<Eigen::Index> count(static_cast<std::size_t>(c), 0);
  for (const int label : y) ++count[static_cast<std::size_t>(label)];
  int present = 0;
  for (const Eigen::Index k : count) present += k > 0 ? 1 : 0;
  if (present < 2) {
    throw TooFewClasses("silhouette requires at least 2 populated classes");
  }

  const Eigen::Index n = e.size();
  double total = 0.0;
  std::vector<double> class_sum(static_cast<std::size_t>(c));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = y[static_cast<std::size_t>(i)];
    if (count[static_cast<std::size_t>(own)] < 2) continue;  // s_i = 0

    std::fill(class_sum.begin(), class_sum.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      double sq = 0.0;
      for (Eigen::Index k = 0; k < e.dim(); ++k) {
        const double d = e.vectors(i, k) - e.vectors(j, k);
        sq += d * d;
      }
      class_sum[static_cast<std::size_t>(y[static_cast<std::size_t>(j)])] +=
          std::sqrt(sq);
    }

    const double a = class_sum[static_cast<std::size_t>(own)] /
                     static_cast<double>(count[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int k = 0; k < c; ++k) {
      if (k == own || count[static_cast<std::size_t>(k)] == 0) continue;
      b = std::min(b, class_sum[static_cast<std::size_t>(k)] /
                          static_cast<double>(count[static_cast<std::size_t>(k)]));
    }
    const double denom = std::max(a, b);
    total += denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

double cross_validated_accuracy(const EmbeddingSet& train_on,
                                const EmbeddingSet& eval_on,
                                const DatasetManifest& manifest,
                                const TrainOptions& opts, int n_folds,
                                std::uint64_t fold_seed) {
  validate_alignment(train_on, eval_on);
  if (manifest.label_mode != LabelMode::SingleLabel) {
    throw ModeMismatch("cross-validated accuracy requires single-label data");
  }
  const std::size_t n = train_on.clip_ids.size();
  if (n_folds < 2) throw InvalidArgument("need at least 2 folds");

  // Manifest folds win when complete; otherwise a seeded shuffle is dealt
  // round-robin into n_folds groups.
  std::vector<int> fold(n);
  bool from_manifest = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = manifest.folds.find(train_on.clip_ids[i]);
    if (it == manifest.folds.end()) {
      from_manifest = false;
      break;
    }
    fold[i] = it->second;
  }
  if (!from_manifest) {
    const auto order = detail::shuffled_indices(n, fold_seed);
    for (std::size_t pos = 0; pos < n; ++pos) {
      fold[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(n_folds));
    }
  }

  std::set<int> fold_ids(fold.begin(), fold.end());
  if (fold_ids.size() < 2) {
    throw InvalidArgument("fold assignment produced fewer than 2 folds");
  }

  const auto subset = [&](const EmbeddingSet& src,
                          const std::vector<std::size_t>& rows) {
    EmbeddingSet out;
    out.vectors.resize(static_cast<Eigen::Index>(rows.size()), src.dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out.clip_ids.push_back(src.clip_ids[rows[r]]);
      out.vectors.row(static_cast<Eigen::Index>(r)) =
          src.vectors.row(static_cast<Eigen::Index>(rows[r]));
    }
    return out;
  };

  Eigen::Index correct = 0, total = 0;
  for (const int f : fold_ids) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (fold[i] == f ? test_rows : train_rows).push_back(i);
    }
    if (test_rows.empty() || train_rows.empty()) continue;

    const EmbeddingSet tr = subset(train_on, train_rows);
    const EmbeddingSet te = subset(eval_on, test_rows);
    const LogRegModel model = train_logreg(tr, manifest, opts);
    const double acc = eval_accuracy(model, te, manifest);
    correct += static_cast<Eigen::Index>(
        std::llround(acc * static_cast<double>(te.size())));
    total += te.size();
  }
  if (total == 0) throw InvalidArgument("no evaluable folds");
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace embshift::downstream
