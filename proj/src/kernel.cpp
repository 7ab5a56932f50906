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

#include "wavemv/kernel.hpp"

#include <cmath>
#include <string>

#include "wavemv/error.hpp"

namespace wavemv {
namespace {

// Sum of squared coordinate differences. Equal points give exactly zero, and
// the value is never negative, unlike the |x|^2 + |z|^2 - 2 x.z expansion.
double SquaredDistance(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& z) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double d = x[k] - z[k];
    sum += d * d;
  }
  return sum;
}

double KernelFromDistance(double squared_distance, double sigma) {
  return std::exp(-squared_distance / (2.0 * sigma * sigma));
}

}  // namespace

void KernelConfig::Validate() const {
  if (!std::isfinite(sigma) || !(sigma > 0)) {
    Fail(ErrorCode::kInvalidArgument, "kernel sigma must be positive");
  }
}

double GaussianKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& z,
                      const KernelConfig& config) {
  config.Validate();
  if (x.size() != z.size()) {
    Fail(ErrorCode::kShape, "kernel arguments have dimensions " +
                                std::to_string(x.size()) + " and " +
                                std::to_string(z.size()));
  }
  return KernelFromDistance(SquaredDistance(x, z), config.sigma);
}

Eigen::MatrixXd GramMatrix(const Eigen::MatrixXd& x,
                           const KernelConfig& config) {
  config.Validate();
  if (x.rows() == 0) Fail(ErrorCode::kShape, "gram matrix of an empty set");
  const Eigen::Index n = x.rows();
  // Row access on a column-major matrix is strided; transpose once.
  const Eigen::MatrixXd xt = x.transpose();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v =
          KernelFromDistance(SquaredDistance(xt.col(i), xt.col(j)),
                             config.sigma);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

Eigen::MatrixXd CrossGram(const Eigen::MatrixXd& train,
                          const Eigen::MatrixXd& test,
                          const KernelConfig& config) {
  config.Validate();
  if (train.cols() != test.cols()) {
    Fail(ErrorCode::kShape, "cross gram: train has " +
                                std::to_string(train.cols()) +
                                " features, test has " +
                                std::to_string(test.cols()));
  }
  const Eigen::MatrixXd train_t = train.transpose();
  const Eigen::MatrixXd test_t = test.transpose();
  Eigen::MatrixXd out(test.rows(), train.rows());
  for (Eigen::Index j = 0; j < test.rows(); ++j) {
    for (Eigen::Index i = 0; i < train.rows(); ++i) {
      out(j, i) = KernelFromDistance(
          SquaredDistance(test_t.col(j), train_t.col(i)), config.sigma);
    }
  }
  return out;
}

GramPair BuildGramPair(const Eigen::MatrixXd& view1, const KernelConfig& k1,
                       const Eigen::MatrixXd& view2, const KernelConfig& k2) {
  if (view1.rows() != view2.rows()) {
    Fail(ErrorCode::kShape, "views have different sample counts");
  }
  return GramPair{GramMatrix(view1, k1), GramMatrix(view2, k2)};
}

}  // namespace wavemv
