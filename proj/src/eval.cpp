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

#include "wavemv/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "wavemv/error.hpp"
#include "wavemv/kernel.hpp"

namespace wavemv {
namespace {

void CheckPair(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kShape, "vectors have lengths " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
  }
  if (a.size() == 0) Fail(ErrorCode::kShape, "empty vectors");
}

}  // namespace

double Accuracy(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
  CheckPair(predicted, truth);
  Eigen::Index agree = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(truth.size());
}

Confusion ConfusionCounts(const Eigen::VectorXd& predicted,
                          const Eigen::VectorXd& truth) {
  CheckPair(predicted, truth);
  Confusion c;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    const bool pos = predicted[i] > 0;
    if (truth[i] > 0) {
      pos ? ++c.tp : ++c.fn;
    } else {
      pos ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

std::vector<RocPoint> RocCurve(const Eigen::VectorXd& scores,
                               const Eigen::VectorXd& truth) {
  CheckPair(scores, truth);
  if (!scores.allFinite()) Fail(ErrorCode::kDomain, "non-finite scores");
  const Eigen::Index n = scores.size();
  double positives = 0;
  for (Eigen::Index i = 0; i < n; ++i) positives += truth[i] > 0 ? 1 : 0;
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0 || negatives == 0) {
    Fail(ErrorCode::kInput, "ROC needs both classes present");
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return scores[a] > scores[b];
  });
  std::vector<RocPoint> points{{0.0, 0.0}};
  double tp = 0, fp = 0;
  for (Eigen::Index k = 0; k < n;) {
    const double threshold = scores[order[k]];
    while (k < n && scores[order[k]] == threshold) {
      truth[order[k]] > 0 ? ++tp : ++fp;
      ++k;
    }
    points.push_back({fp / negatives, tp / positives});
  }
  return points;
}

double Auc(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

EvalReport Evaluate(const Eigen::VectorXd& scores,
                    const Eigen::VectorXd& truth) {
  CheckPair(scores, truth);
  Eigen::VectorXd predicted(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    predicted[i] = SignWithTie(scores[i]);
  }
  EvalReport r;
  r.accuracy = Accuracy(predicted, truth);
  r.confusion = ConfusionCounts(predicted, truth);
  r.roc = RocCurve(scores, truth);
  r.auc = Auc(r.roc);
  return r;
}

std::vector<std::vector<Eigen::Index>> StratifiedFolds(
    const Eigen::VectorXd& labels, int k, std::uint64_t seed) {
  if (k < 2) Fail(ErrorCode::kInvalidArgument, "k must be >= 2");
  if (labels.size() < k) {
    Fail(ErrorCode::kInput, "fewer samples than folds");
  }
  std::array<std::vector<Eigen::Index>, 2> by_class;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    by_class[labels[i] > 0 ? 0 : 1].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Eigen::Index>> folds(static_cast<size_t>(k));
  size_t next = 0;
  for (auto& members : by_class) {
    if (members.size() < static_cast<size_t>(k)) {
      Fail(ErrorCode::kStratification,
           "a class has " + std::to_string(members.size()) +
               " samples, fewer than " + std::to_string(k) + " folds");
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (Eigen::Index idx : members) {
      folds[next].push_back(idx);
      next = (next + 1) % folds.size();
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

GridSearchResult KFoldGridSearch(const TwoViewDataset& data,
                                 const std::vector<Hyperparams>& grid, int k,
                                 std::uint64_t seed) {
  data.Validate();
  if (grid.empty()) Fail(ErrorCode::kInvalidArgument, "empty grid");
  for (const auto& hp : grid) hp.Validate();
  const auto folds = StratifiedFolds(data.labels, k, seed);

  std::vector<TwoViewDataset> train_parts, valid_parts;
  for (size_t f = 0; f < folds.size(); ++f) {
    std::vector<Eigen::Index> train_rows;
    for (size_t g = 0; g < folds.size(); ++g) {
      if (g != f) {
        train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
      }
    }
    std::sort(train_rows.begin(), train_rows.end());
    train_parts.push_back(data.Subset(train_rows));
    valid_parts.push_back(data.Subset(folds[f]));
  }

  GridSearchResult result;
  result.mean_accuracy.reserve(grid.size());
  for (const auto& hp : grid) {
    double sum = 0.0;
    for (size_t f = 0; f < folds.size(); ++f) {
      double acc = 0.0;
      try {
        const FitResult fit = Fit(train_parts[f], hp);
        acc = Accuracy(Predict(fit.model, valid_parts[f].view1,
                               valid_parts[f].view2),
                       valid_parts[f].labels);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNumerical) throw;
      }
      sum += acc;
    }
    result.mean_accuracy.push_back(sum / static_cast<double>(folds.size()));
  }

  size_t best = 0;
  for (size_t i = 1; i < grid.size(); ++i) {
    const double a = result.mean_accuracy[i];
    const double b = result.mean_accuracy[best];
    if (a > b) {
      best = i;
    } else if (a == b) {
      const auto& hi = grid[i];
      const auto& hb = grid[best];
      if (hi.c1 < hb.c1 ||
          (hi.c1 == hb.c1 && hi.kernel1.sigma < hb.kernel1.sigma)) {
        best = i;
      }
    }
  }
  result.best_index = best;
  result.best = grid[best];
  return result;
}

Eigen::MatrixXd RankModels(const Eigen::MatrixXd& accuracies) {
  const Eigen::Index p = accuracies.rows();
  Eigen::MatrixXd ranks(p, accuracies.cols());
  std::vector<Eigen::Index> order(static_cast<size_t>(p));
  for (Eigen::Index col = 0; col < accuracies.cols(); ++col) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return accuracies(a, col) > accuracies(b, col);
                     });
    for (Eigen::Index start = 0; start < p;) {
      Eigen::Index end = start + 1;
      while (end < p &&
             accuracies(order[end], col) == accuracies(order[start], col)) {
        ++end;
      }
      // Positions start..end-1 hold ranks start+1..end; all get the average.
      const double mid = (static_cast<double>(start + 1 + end)) / 2.0;
      for (Eigen::Index k = start; k < end; ++k) ranks(order[k], col) = mid;
      start = end;
    }
  }
  return ranks;
}

double FriedmanChi2(const Eigen::VectorXd& avg_ranks, int n_datasets) {
  const double p = static_cast<double>(avg_ranks.size());
  const double n = n_datasets;
  return 12.0 * n / (p * (p + 1.0)) *
         (avg_ranks.squaredNorm() - p * (p + 1.0) * (p + 1.0) / 4.0);
}

double FriedmanF(double chi2, int p, int n_datasets) {
  const double n = n_datasets;
  const double denom = n * (p - 1.0) - chi2;
  if (!(denom > 0)) {
    Fail(ErrorCode::kDegenerate,
         "Friedman F statistic undefined: N(p-1) - chi2 = " +
             std::to_string(denom));
  }
  return (n - 1.0) * chi2 / denom;
}

RankTable FriedmanTest(const Eigen::MatrixXd& accuracies) {
  if (accuracies.rows() < 2 || accuracies.cols() < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "Friedman test needs at least 2 models and 2 datasets");
  }
  if (!accuracies.allFinite()) Fail(ErrorCode::kDomain, "non-finite accuracy");
  RankTable t;
  t.accuracies = accuracies;
  t.ranks = RankModels(accuracies);
  t.avg_ranks = t.ranks.rowwise().mean();
  const int n = static_cast<int>(accuracies.cols());
  t.chi2_f = FriedmanChi2(t.avg_ranks, n);
  t.f_f = FriedmanF(t.chi2_f, static_cast<int>(accuracies.rows()), n);
  return t;
}

double NemenyiCd(int p, int n_datasets, double q_alpha) {
  if (p < 2 || n_datasets < 1 || q_alpha < 0) {
    Fail(ErrorCode::kInvalidArgument, "Nemenyi CD needs p >= 2, N >= 1");
  }
  return q_alpha * std::sqrt(p * (p + 1.0) / (6.0 * n_datasets));
}

std::optional<double> NemenyiQAlpha(int p, double alpha) {
  // Studentized range statistic divided by sqrt(2), p = 2..10.
  static constexpr std::array<double, 9> kQ05 = {
      1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
  static constexpr std::array<double, 9> kQ10 = {
      1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};
  if (p < 2 || p > 10) return std::nullopt;
  if (alpha == 0.05) return kQ05[static_cast<size_t>(p - 2)];
  if (alpha == 0.10) return kQ10[static_cast<size_t>(p - 2)];
  return std::nullopt;
}

double GeneralizationBoundValue(double slack_sum1, double slack_sum2,
                                Eigen::Index n, double kernel_diag_sum1,
                                double kernel_diag_sum2, double delta,
                                double theta, double norm_bound) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "bound needs n >= 1");
  if (!(delta > 0)) Fail(ErrorCode::kInvalidArgument, "delta must be > 0");
  if (!(theta > 0 && theta < 1)) {
    Fail(ErrorCode::kInvalidArgument, "theta must be in (0, 1)");
  }
  if (!(norm_bound > 0)) {
    Fail(ErrorCode::kInvalidArgument, "norm bound must be > 0");
  }
  const double nn = static_cast<double>(n);
  const double slack = (slack_sum1 + delta * slack_sum2) / (nn * (1.0 + delta));
  const double confidence = 3.0 * std::sqrt(std::log(2.0 / theta) / (2.0 * nn));
  const double complexity =
      4.0 * norm_bound / (nn * (1.0 + delta)) *
      std::sqrt(kernel_diag_sum1 + delta * delta * kernel_diag_sum2);
  return slack + confidence + complexity;
}

double DefaultNormBound(const TrainedModel& model,
                        const TwoViewDataset& train) {
  model.Validate();
  if (train.size() != model.alpha1.size()) {
    Fail(ErrorCode::kShape, "training set does not match the model");
  }
  const Eigen::MatrixXd k1 = GramMatrix(train.view1, model.kernel1);
  const Eigen::MatrixXd k2 = GramMatrix(train.view2, model.kernel2);
  const double sq = model.gamma * model.alpha1.dot(k1 * model.alpha1) +
                    model.alpha2.dot(k2 * model.alpha2);
  return std::sqrt(std::max(sq, 0.0));
}

double GeneralizationBound(const TrainedModel& model,
                           const TwoViewDataset& train,
                           const Eigen::VectorXd& zeta1,
                           const Eigen::VectorXd& zeta2, double delta,
                           double theta, std::optional<double> norm_bound) {
  train.Validate();
  const Eigen::Index n = train.size();
  if (zeta1.size() != n || zeta2.size() != n) {
    Fail(ErrorCode::kShape, "slack vectors do not match the training set");
  }
  double diag1 = 0.0;
  double diag2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    diag1 += GaussianKernel(train.view1.row(i).transpose(),
                            train.view1.row(i).transpose(), model.kernel1);
    diag2 += GaussianKernel(train.view2.row(i).transpose(),
                            train.view2.row(i).transpose(), model.kernel2);
  }
  const double bound_norm =
      norm_bound ? *norm_bound : DefaultNormBound(model, train);
  return GeneralizationBoundValue(zeta1.sum(), zeta2.sum(), n, diag1, diag2,
                                  delta, theta, bound_norm);
}

}  // namespace wavemv
