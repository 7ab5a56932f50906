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

#ifndef WAVEMV_MODEL_HPP_
#define WAVEMV_MODEL_HPP_

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "wavemv/data.hpp"
#include "wavemv/kernel.hpp"
#include "wavemv/solver.hpp"

namespace wavemv {

inline constexpr int kModelSchemaVersion = 1;

// Immutable after Fit; safe to share across threads for prediction.
struct TrainedModel {
  Eigen::VectorXd alpha1;
  Eigen::VectorXd alpha2;
  double gamma = 1.0;
  KernelConfig kernel1;
  KernelConfig kernel2;
  Eigen::MatrixXd support1;
  Eigen::MatrixXd support2;
  Hyperparams hyperparams;
  // Set when view 2 was synthesized from view 1, so prediction can derive
  // view 2 for new samples the same way.
  std::optional<PcaProjection> view2_projection;
  int schema_version = kModelSchemaVersion;

  void Validate() const;
};

struct FitResult {
  TrainedModel model;
  ConvergenceTrace trace;
  SolverState state;  // final ADMM iterate, including the slacks
  bool converged = false;
};

// Throws kInput for fewer than 2 samples; solver errors propagate.
FitResult Fit(const TwoViewDataset& data, const Hyperparams& hp);

// f = gamma * sum_i a1_i k1(x1_i, x1) + sum_i a2_i k2(x2_i, x2) for one sample;
// DecisionFunction evaluates every row of two test views.
double DecisionValue(const TrainedModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x1,
                     const Eigen::Ref<const Eigen::VectorXd>& x2);
Eigen::VectorXd DecisionFunction(const TrainedModel& model,
                                 const Eigen::MatrixXd& view1,
                                 const Eigen::MatrixXd& view2);

// sign(f) with sign(0) = +1.
inline int SignWithTie(double f) { return f >= 0.0 ? 1 : -1; }

int PredictLabel(const TrainedModel& model,
                 const Eigen::Ref<const Eigen::VectorXd>& x1,
                 const Eigen::Ref<const Eigen::VectorXd>& x2);
Eigen::VectorXd Predict(const TrainedModel& model, const Eigen::MatrixXd& view1,
                        const Eigen::MatrixXd& view2);

// JSON model file; see docs/model-format.md.
std::string ModelToJson(const TrainedModel& model);
TrainedModel ModelFromJson(const std::string& text);
void SaveModel(const TrainedModel& model, const std::string& path);
TrainedModel LoadModel(const std::string& path);

}  // namespace wavemv

#endif  // WAVEMV_MODEL_HPP_
