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

#ifndef WAVEMV_KERNEL_HPP_
#define WAVEMV_KERNEL_HPP_

#include <Eigen/Dense>

namespace wavemv {

// Gaussian kernel k(x, z) = exp(-|x - z|^2 / (2 sigma^2)).
struct KernelConfig {
  double sigma = 1.0;

  void Validate() const;
};

// Gram matrices of the two views over the same n training samples.
struct GramPair {
  Eigen::MatrixXd k1;
  Eigen::MatrixXd k2;

  Eigen::Index size() const { return k1.rows(); }
};

double GaussianKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& z,
                      const KernelConfig& config);

// n x n matrix over the rows of x. Filled as the upper triangle and mirrored,
// so the result is exactly symmetric with a unit diagonal.
Eigen::MatrixXd GramMatrix(const Eigen::MatrixXd& x,
                           const KernelConfig& config);

// t x n matrix; entry (j, i) = k(test row j, train row i).
Eigen::MatrixXd CrossGram(const Eigen::MatrixXd& train,
                          const Eigen::MatrixXd& test,
                          const KernelConfig& config);

GramPair BuildGramPair(const Eigen::MatrixXd& view1, const KernelConfig& k1,
                       const Eigen::MatrixXd& view2, const KernelConfig& k2);

}  // namespace wavemv

#endif  // WAVEMV_KERNEL_HPP_
