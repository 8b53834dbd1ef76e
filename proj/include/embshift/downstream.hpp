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

#ifndef EMBSHIFT_DOWNSTREAM_HPP_
#define EMBSHIFT_DOWNSTREAM_HPP_

#include <cstdint>
#include <vector>

#include "embshift/types.hpp"

namespace embshift::downstream {

// Linear classifier head. SingleLabel rows are softmax logits over classes;
// MultiLabel rows are independent sigmoid heads.
struct LogRegModel {
  Eigen::MatrixXd weights;  // c x d
  Eigen::VectorXd bias;     // c
  LabelMode mode = LabelMode::SingleLabel;
  double l2 = 1e-2;
  // Optimization outcome. Hitting max_iter is reported here, not thrown;
  // the partially optimized model is still usable.
  bool converged = false;
  int iterations = 0;

  Eigen::Index n_classes() const { return weights.rows(); }
  Eigen::Index dim() const { return weights.cols(); }
  void validate() const;
};

struct TrainOptions {
  double l2 = 1e-2;
  double tol = 1e-6;  // stop when the full gradient norm drops below this
  int max_iter = 1000;
};

// Loss value plus analytic gradient of one training objective, exposed so
// the gradient can be checked against finite differences.
struct LossGrad {
  double loss = 0.0;
  Eigen::MatrixXd grad_weights;
  Eigen::VectorXd grad_bias;
};

// Mean multinomial cross-entropy over rows of x with targets y in
// [0, n_classes), plus (l2/2)|w|^2. Bias is unregularized.
LossGrad softmax_loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                      const Eigen::MatrixXd& x, const std::vector<int>& y,
                      int n_classes, double l2);

// Mean over rows of summed per-class binary cross-entropy with 0/1 target
// matrix y, plus (l2/2)|w|^2.
LossGrad sigmoid_loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                      const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      double l2);

// Class index per aligned row (throws LabelMismatch on a missing id or mode
// mismatch with the manifest).
std::vector<int> single_labels_for(const EmbeddingSet& e,
                                   const DatasetManifest& manifest);

// n x c matrix of 0/1 targets per aligned row.
Eigen::MatrixXd multi_labels_for(const EmbeddingSet& e,
                                 const DatasetManifest& manifest);

// Deterministic full-batch training: zero init, gradient descent with
// backtracking line search, monotone loss. Throws LabelMismatch when labels
// are missing or (single-label) fewer than two classes appear.
LogRegModel train_logreg(const EmbeddingSet& e, const DatasetManifest& manifest,
                         const TrainOptions& opts = {});

// Argmax-prediction accuracy (ties go to the lowest class index).
double eval_accuracy(const LogRegModel& model, const EmbeddingSet& e,
                     const DatasetManifest& manifest);

struct MacroAuprc {
  double value = 0.0;
  // Class indices with no positive example in the evaluation set; these are
  // excluded from the macro mean.
  std::vector<int> skipped_classes;
};

// Macro-averaged step-wise average precision over classes with at least one
// positive. Scores with equal value form one threshold group. Throws
// NoEvaluableClasses when every class is skipped.
MacroAuprc macro_auprc(const LogRegModel& model, const EmbeddingSet& e,
                       const DatasetManifest& manifest);

// Mean silhouette over all points with Euclidean distances.
// Singleton-class points and points with max(a, b) = 0 score 0.
double silhouette(const EmbeddingSet& e, const DatasetManifest& manifest);

// Pooled held-out accuracy: for each fold, train on the other folds of
// train_on and predict that fold's rows of eval_on (the two sets must be
// aligned). Folds come from the manifest when every clip has one, else from
// a seeded shuffle split into n_folds groups.
double cross_validated_accuracy(const EmbeddingSet& train_on,
                                const EmbeddingSet& eval_on,
                                const DatasetManifest& manifest,
                                const TrainOptions& opts = {},
                                int n_folds = 10, std::uint64_t fold_seed = 0);

}  // namespace embshift::downstream

#endif  // EMBSHIFT_DOWNSTREAM_HPP_
