/*
 * Copyright 2026 The WaveMV Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WAVEMV_EVAL_HPP_
#define WAVEMV_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wavemv/data.hpp"
#include "wavemv/model.hpp"
#include "wavemv/solver.hpp"

namespace wavemv {

// ---------------------------------------------------------------------------
// Classification metrics. Label vectors hold -1 / +1.

double Accuracy(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);

struct Confusion {
  int tp = 0;
  int tn = 0;
  int fp = 0;
  int fn = 0;
};
Confusion ConfusionCounts(const Eigen::VectorXd& predicted,
                          const Eigen::VectorXd& truth);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// Sweeps the threshold down through the distinct scores. Starts at (0, 0),
// ends at (1, 1); tied scores move both coordinates in one step. Throws
// kInput when truth holds a single class.
std::vector<RocPoint> RocCurve(const Eigen::VectorXd& scores,
                               const Eigen::VectorXd& truth);
// Trapezoidal area under the points.
double Auc(const std::vector<RocPoint>& points);

struct EvalReport {
  double accuracy = 0.0;
  Confusion confusion;
  std::vector<RocPoint> roc;
  double auc = 0.0;
};
// Predictions are sign(score) with sign(0) = +1.
EvalReport Evaluate(const Eigen::VectorXd& scores, const Eigen::VectorXd& truth);

// ---------------------------------------------------------------------------
// Cross-validated grid search.

// k stratified folds: every class is shuffled under the seed and dealt to the
// folds round-robin. Throws kStratification when a class has fewer than k
// members, since some fold would then miss it.
std::vector<std::vector<Eigen::Index>> StratifiedFolds(
    const Eigen::VectorXd& labels, int k, std::uint64_t seed);

struct GridSearchResult {
  std::size_t best_index = 0;
  Hyperparams best;
  std::vector<double> mean_accuracy;  // one entry per grid config
};

// Mean validation accuracy per config over the folds. Highest mean wins; ties
// go to the smaller c1, then the smaller view-1 sigma, then the earlier grid
// entry. A fold whose fit fails numerically scores 0.
GridSearchResult KFoldGridSearch(const TwoViewDataset& data,
                                 const std::vector<Hyperparams>& grid, int k,
                                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// Friedman test and Nemenyi critical difference. Accuracy matrices are
// p x N: one row per model, one column per dataset.

struct RankTable {
  Eigen::MatrixXd accuracies;
  Eigen::MatrixXd ranks;  // 1 = best on that dataset, ties mid-ranked
  Eigen::VectorXd avg_ranks;
  double chi2_f = 0.0;
  double f_f = 0.0;
  std::optional<double> cd;
};

Eigen::MatrixXd RankModels(const Eigen::MatrixXd& accuracies);

// chi2_F = 12N / (p(p+1)) * (sum_j R_j^2 - p(p+1)^2 / 4).
double FriedmanChi2(const Eigen::VectorXd& avg_ranks, int n_datasets);

// F_F = (N-1) chi2_F / (N(p-1) - chi2_F). Throws kDegenerate when the
// denominator is not positive (every dataset ranks the models identically).
double FriedmanF(double chi2, int p, int n_datasets);

// Throws kInvalidArgument unless p >= 2 and N >= 2.
RankTable FriedmanTest(const Eigen::MatrixXd& accuracies);

// CD = q_alpha * sqrt(p(p+1) / (6N)).
double NemenyiCd(int p, int n_datasets, double q_alpha);

// Two-tailed Nemenyi critical values for alpha in {0.05, 0.10} and
// 2 <= p <= 10; nullopt outside that table.
std::optional<double> NemenyiQAlpha(int p, double alpha);

// ---------------------------------------------------------------------------
// Rademacher generalization bound for the weighted two-view predictor.

// (1/(n(1+delta))) (sum z1 + delta sum z2) + 3 sqrt(ln(2/theta) / (2n))
//   + 4N / (n(1+delta)) * sqrt(sum_i K1(x_i,x_i) + delta^2 K2(x_i,x_i)).
double GeneralizationBoundValue(double slack_sum1, double slack_sum2,
                                Eigen::Index n, double kernel_diag_sum1,
                                double kernel_diag_sum2, double delta,
                                double theta, double norm_bound);

// sqrt(gamma a1'K1 a1 + a2'K2 a2) over the training Gram matrices.
double DefaultNormBound(const TrainedModel& model,
                        const TwoViewDataset& train);

// Evaluates the bound with the model's kernels on `train`. norm_bound
// defaults to DefaultNormBound.
double GeneralizationBound(const TrainedModel& model,
                           const TwoViewDataset& train,
                           const Eigen::VectorXd& zeta1,
                           const Eigen::VectorXd& zeta2, double delta,
                           double theta,
                           std::optional<double> norm_bound = std::nullopt);

}  // namespace wavemv

#endif  // WAVEMV_EVAL_HPP_
