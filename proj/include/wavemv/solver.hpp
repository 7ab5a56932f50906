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

// ADMM solver for the kernelized two-view wave-loss problem
//
//   min  gamma/2 a1'K1 a1 + 1/2 a2'K2 a2
//        + C1 sum_i Lw(z1_i; y_i) + C2 sum_i Lw(z2_i; y_i)
//        + D |K1 a1 - K2 a2|^2
//   s.t. Y K1 a1 >= e - z1,  Y K2 a2 >= e - z2,  z1 >= 0,  z2 >= 0,
//
// split with four nonnegative auxiliaries eta1..eta4 and multipliers
// theta1..theta4:
//
//   Y K1 a1 - e + z1 - eta1 = 0     z1 - eta3 = 0
//   Y K2 a2 - e + z2 - eta2 = 0     z2 - eta4 = 0
//
// One outer iteration updates a1, a2 in closed form, the slacks z1, z2 by
// gradient descent on the augmented Lagrangian, projects the etas onto the
// nonnegative orthant and takes a dual ascent step.

#ifndef WAVEMV_SOLVER_HPP_
#define WAVEMV_SOLVER_HPP_

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wavemv/error.hpp"
#include "wavemv/kernel.hpp"
#include "wavemv/loss.hpp"

namespace wavemv {

struct Hyperparams {
  double gamma = 1.0;  // view-1 regularization weight, also the decision weight
  double c1 = 1.0;
  double c2 = 1.0;
  double d = 0.25;  // co-regularization weight
  WaveParams wave1;
  WaveParams wave2;
  KernelConfig kernel1{2.0};
  KernelConfig kernel2{2.0};

  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 1.0;
  double kappa4 = 1.0;
  // Dual step lengths, open interval (0, (1 + sqrt 5) / 2).
  double tau1 = 1.0;
  double tau2 = 1.0;

  double gd_rate = 1e-2;
  int t1_max = 500;
  int t2_max = 50;
  double tol_obj = 1e-6;
  double tol_res = 1e-4;
  double tol_grad = 1e-6;

  // Throws kInvalidArgument naming the first offending field.
  void Validate() const;
};

struct SolverState {
  Eigen::VectorXd alpha1, alpha2;
  Eigen::VectorXd zeta1, zeta2;
  std::array<Eigen::VectorXd, 4> eta;
  std::array<Eigen::VectorXd, 4> theta;
  int iter = 0;
  double objective = 0.0;

  static SolverState Zero(Eigen::Index n);
  Eigen::Index size() const { return alpha1.size(); }
};

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  // Infinity norms of the four equality-constraint residuals.
  std::array<double, 4> residual{};
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;

  // Header "iter,objective,res1,res2,res3,res4" then one row per record,
  // values printed with 17 significant digits.
  void WriteCsv(std::ostream& out) const;
};

// Raised when the objective blows up; carries the trace up to that point.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, ConvergenceTrace trace)
      : Error(ErrorCode::kNumerical, message), trace_(std::move(trace)) {}
  const ConvergenceTrace& trace() const { return trace_; }

 private:
  ConvergenceTrace trace_;
};

// Labels are stored as doubles in {-1, +1}.
using LabelVector = Eigen::VectorXd;

// Primal objective at the given coefficients and slacks.
double Objective(const Eigen::VectorXd& alpha1, const Eigen::VectorXd& alpha2,
                 const Eigen::VectorXd& zeta1, const Eigen::VectorXd& zeta2,
                 const GramPair& grams, const LabelVector& labels,
                 const Hyperparams& hp);

// Smallest slacks that make (alpha1, alpha2) feasible: max(0, e - Y K a).
std::pair<Eigen::VectorXd, Eigen::VectorXd> TightSlacks(
    const Eigen::VectorXd& alpha1, const Eigen::VectorXd& alpha2,
    const GramPair& grams, const LabelVector& labels);

// Objective evaluated at TightSlacks(alpha1, alpha2). This is the value the
// solver traces: unlike the raw objective at the iterate's own slacks it is
// the cost of a feasible point, so the zero start scores C * sum L(1) rather
// than a meaningless 0.
double FeasibleObjective(const Eigen::VectorXd& alpha1,
                         const Eigen::VectorXd& alpha2, const GramPair& grams,
                         const LabelVector& labels, const Hyperparams& hp);

// Dense system A alpha = b of the closed-form alpha update for view 1 or 2:
//   A = g K + (2D + kappa) K'K,
//   b = 2D K'K_other alpha_other - K Y theta + kappa K Y (e - zeta + eta),
// with g = gamma for view 1 and 1 for view 2.
struct AlphaSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};
AlphaSystem AssembleAlphaSystem(int view, const SolverState& state,
                                const GramPair& grams,
                                const LabelVector& labels,
                                const Hyperparams& hp);

// Solves the alpha update for one view. Because K is symmetric the system
// factors as K (g I + (2D + kappa) K) alpha = K r, so the solver factorizes
// the well-conditioned g I + (2D + kappa) K once and reuses it.
class AlphaSolver {
 public:
  AlphaSolver(int view, const GramPair& grams, const Hyperparams& hp);

  Eigen::VectorXd Solve(const SolverState& state, const GramPair& grams,
                        const LabelVector& labels, const Hyperparams& hp) const;

 private:
  int view_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

Eigen::VectorXd UpdateAlpha1(const SolverState& state, const GramPair& grams,
                             const LabelVector& labels, const Hyperparams& hp);
// Uses state.alpha1 as the already-updated view-1 coefficients.
Eigen::VectorXd UpdateAlpha2(const SolverState& state, const GramPair& grams,
                             const LabelVector& labels, const Hyperparams& hp);

// Augmented Lagrangian restricted to the slack variables (all other state
// held fixed). Minimized by GdZeta.
double ZetaObjective(const Eigen::VectorXd& zeta1, const Eigen::VectorXd& zeta2,
                     const SolverState& state, const GramPair& grams,
                     const LabelVector& labels, const Hyperparams& hp);

std::pair<Eigen::VectorXd, Eigen::VectorXd> ZetaGradient(
    const Eigen::VectorXd& zeta1, const Eigen::VectorXd& zeta2,
    const SolverState& state, const GramPair& grams, const LabelVector& labels,
    const Hyperparams& hp);

struct GdResult {
  Eigen::VectorXd zeta1, zeta2;
  int steps = 0;
  double initial_value = 0.0;
  double final_value = 0.0;
};

// Gradient descent from state.zeta1/zeta2 with step gd_rate, halving the step
// (at most 30 times) until the objective does not increase. Stops after
// t2_max steps or once the gradient infinity norm is <= tol_grad.
GdResult GdZeta(const SolverState& state, const GramPair& grams,
                const LabelVector& labels, const Hyperparams& hp);

std::array<Eigen::VectorXd, 4> UpdateEta(const SolverState& state,
                                         const GramPair& grams,
                                         const LabelVector& labels,
                                         const Hyperparams& hp);

std::array<Eigen::VectorXd, 4> UpdateDuals(const SolverState& state,
                                           const GramPair& grams,
                                           const LabelVector& labels,
                                           const Hyperparams& hp);

std::array<double, 4> PrimalResiduals(const SolverState& state,
                                      const GramPair& grams,
                                      const LabelVector& labels);

struct SolveResult {
  SolverState state;
  ConvergenceTrace trace;
  bool converged = false;
};

// Runs ADMM from the all-zero state. Stops when the relative change of the
// traced objective drops below tol_obj and every residual is below tol_res,
// or after t1_max iterations. Throws DivergenceError when the objective
// exceeds 1e6 * initial + 1e6.
SolveResult AdmmSolve(const GramPair& grams, const LabelVector& labels,
                      const Hyperparams& hp);

}  // namespace wavemv

#endif  // WAVEMV_SOLVER_HPP_
