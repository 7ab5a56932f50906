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

#include "wavemv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace wavemv {
namespace {

constexpr double kGoldenRatio = 1.6180339887498949;
constexpr int kMaxHalvings = 30;
constexpr double kRidgeJitter = 1e-8;

void Require(bool ok, const char* what) {
  if (!ok) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("hyperparameter out of range: ") + what);
  }
}

void CheckSizes(const GramPair& grams, const LabelVector& labels) {
  const Eigen::Index n = labels.size();
  if (n == 0 || grams.k1.rows() != n || grams.k1.cols() != n ||
      grams.k2.rows() != n || grams.k2.cols() != n) {
    Fail(ErrorCode::kShape, "gram matrices do not match " +
                                std::to_string(n) + " labels");
  }
}

void CheckVector(const Eigen::VectorXd& v, Eigen::Index n, const char* name) {
  if (v.size() != n) {
    Fail(ErrorCode::kShape, std::string(name) + " has length " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(n));
  }
}

void CheckState(const SolverState& s, Eigen::Index n) {
  CheckVector(s.alpha1, n, "alpha1");
  CheckVector(s.alpha2, n, "alpha2");
  CheckVector(s.zeta1, n, "zeta1");
  CheckVector(s.zeta2, n, "zeta2");
  for (const auto& v : s.eta) CheckVector(v, n, "eta");
  for (const auto& v : s.theta) CheckVector(v, n, "theta");
}

double LossSum(const Eigen::VectorXd& zeta, const LabelVector& labels,
               const WaveParams& wave) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < zeta.size(); ++i) {
    sum += LabeledWaveLoss(zeta[i], static_cast<int>(labels[i]), wave);
  }
  return sum;
}

// Y K a, the per-sample functional margins of one view.
struct Margins {
  Eigen::VectorXd m1;
  Eigen::VectorXd m2;
};

Margins ComputeMargins(const SolverState& s, const GramPair& grams,
                       const LabelVector& labels) {
  return Margins{labels.cwiseProduct(grams.k1 * s.alpha1),
                 labels.cwiseProduct(grams.k2 * s.alpha2)};
}

double ZetaObjectiveAt(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                       const SolverState& s, const Margins& m,
                       const LabelVector& labels, const Hyperparams& hp) {
  const Eigen::ArrayXd r1 = (m.m1.array() - 1.0) + z1.array() - s.eta[0].array();
  const Eigen::ArrayXd r2 = (m.m2.array() - 1.0) + z2.array() - s.eta[1].array();
  const Eigen::ArrayXd r3 = z1.array() - s.eta[2].array();
  const Eigen::ArrayXd r4 = z2.array() - s.eta[3].array();
  double value = hp.c1 * LossSum(z1, labels, hp.wave1) +
                 hp.c2 * LossSum(z2, labels, hp.wave2);
  value += (s.theta[0].array() * r1).sum() + (s.theta[1].array() * r2).sum();
  value += 0.5 * hp.kappa1 * r1.square().sum() +
           0.5 * hp.kappa2 * r2.square().sum();
  value += (s.theta[2].array() * r3).sum() + (s.theta[3].array() * r4).sum();
  value += 0.5 * hp.kappa3 * r3.square().sum() +
           0.5 * hp.kappa4 * r4.square().sum();
  return value;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ZetaGradientAt(
    const Eigen::VectorXd& z1, const Eigen::VectorXd& z2, const SolverState& s,
    const Margins& m, const LabelVector& labels, const Hyperparams& hp) {
  const Eigen::Index n = z1.size();
  Eigen::VectorXd g1(n), g2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = static_cast<int>(labels[i]);
    g1[i] = hp.c1 * LabeledWaveLossGrad(z1[i], y, hp.wave1) + s.theta[0][i] +
            s.theta[2][i] +
            hp.kappa1 * (m.m1[i] - 1.0 + z1[i] - s.eta[0][i]) +
            hp.kappa3 * (z1[i] - s.eta[2][i]);
    g2[i] = hp.c2 * LabeledWaveLossGrad(z2[i], y, hp.wave2) + s.theta[1][i] +
            s.theta[3][i] +
            hp.kappa2 * (m.m2[i] - 1.0 + z2[i] - s.eta[1][i]) +
            hp.kappa4 * (z2[i] - s.eta[3][i]);
  }
  return {std::move(g1), std::move(g2)};
}

double InfNorm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

GdResult GdZetaWithMargins(const SolverState& s, const Margins& m,
                           const LabelVector& labels, const Hyperparams& hp) {
  GdResult out{s.zeta1, s.zeta2, 0, 0.0, 0.0};
  double value = ZetaObjectiveAt(out.zeta1, out.zeta2, s, m, labels, hp);
  out.initial_value = value;
  for (int step = 0; step < hp.t2_max; ++step) {
    auto [g1, g2] = ZetaGradientAt(out.zeta1, out.zeta2, s, m, labels, hp);
    if (std::max(InfNorm(g1), InfNorm(g2)) <= hp.tol_grad) break;
    double rate = hp.gd_rate;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      Eigen::VectorXd t1 = out.zeta1 - rate * g1;
      Eigen::VectorXd t2 = out.zeta2 - rate * g2;
      const double trial = ZetaObjectiveAt(t1, t2, s, m, labels, hp);
      if (!std::isfinite(trial)) {
        Fail(ErrorCode::kNumerical,
             "slack descent produced a non-finite objective");
      }
      if (trial <= value) {
        out.zeta1 = std::move(t1);
        out.zeta2 = std::move(t2);
        value = trial;
        accepted = true;
        break;
      }
      rate *= 0.5;
    }
    if (!accepted) break;
    ++out.steps;
  }
  out.final_value = value;
  return out;
}

Eigen::VectorXd Positive(const Eigen::VectorXd& v) {
  return v.cwiseMax(0.0);
}

// r such that the alpha right-hand side equals K r.
Eigen::VectorXd ReducedRhs(int view, const SolverState& s,
                           const GramPair& grams, const LabelVector& labels,
                           const Hyperparams& hp) {
  const bool first = view == 1;
  const Eigen::MatrixXd& k_other = first ? grams.k2 : grams.k1;
  const Eigen::VectorXd& a_other = first ? s.alpha2 : s.alpha1;
  const Eigen::VectorXd& theta = first ? s.theta[0] : s.theta[1];
  const Eigen::VectorXd& zeta = first ? s.zeta1 : s.zeta2;
  const Eigen::VectorXd& eta = first ? s.eta[0] : s.eta[1];
  const double kappa = first ? hp.kappa1 : hp.kappa2;
  Eigen::VectorXd r = 2.0 * hp.d * (k_other * a_other);
  r.array() -= labels.array() * theta.array();
  r.array() += kappa * labels.array() * (1.0 - zeta.array() + eta.array());
  return r;
}

void CheckView(int view) {
  if (view != 1 && view != 2) {
    Fail(ErrorCode::kInvalidArgument, "view must be 1 or 2");
  }
}

}  // namespace

void Hyperparams::Validate() const {
  Require(std::isfinite(gamma) && gamma > 0, "gamma must be > 0");
  Require(std::isfinite(c1) && c1 >= 0, "c1 must be >= 0");
  Require(std::isfinite(c2) && c2 >= 0, "c2 must be >= 0");
  Require(std::isfinite(d) && d >= 0, "d must be >= 0");
  wave1.Validate();
  wave2.Validate();
  kernel1.Validate();
  kernel2.Validate();
  for (double k : {kappa1, kappa2, kappa3, kappa4}) {
    Require(std::isfinite(k) && k > 0, "kappa must be > 0");
  }
  Require(tau1 > 0 && tau1 < kGoldenRatio, "tau1 must lie in (0, 1.618...)");
  Require(tau2 > 0 && tau2 < kGoldenRatio, "tau2 must lie in (0, 1.618...)");
  Require(std::isfinite(gd_rate) && gd_rate > 0, "gd_rate must be > 0");
  Require(t1_max >= 1, "t1_max must be >= 1");
  Require(t2_max >= 1, "t2_max must be >= 1");
  Require(tol_obj > 0, "tol_obj must be > 0");
  Require(tol_res > 0, "tol_res must be > 0");
  Require(tol_grad > 0, "tol_grad must be > 0");
}

SolverState SolverState::Zero(Eigen::Index n) {
  SolverState s;
  s.alpha1 = Eigen::VectorXd::Zero(n);
  s.alpha2 = Eigen::VectorXd::Zero(n);
  s.zeta1 = Eigen::VectorXd::Zero(n);
  s.zeta2 = Eigen::VectorXd::Zero(n);
  for (auto& v : s.eta) v = Eigen::VectorXd::Zero(n);
  for (auto& v : s.theta) v = Eigen::VectorXd::Zero(n);
  return s;
}

void ConvergenceTrace::WriteCsv(std::ostream& out) const {
  out << "iter,objective,res1,res2,res3,res4\n";
  char buf[64];
  for (const auto& r : records) {
    out << r.iter;
    std::snprintf(buf, sizeof(buf), ",%.17g", r.objective);
    out << buf;
    for (double v : r.residual) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out << buf;
    }
    out << '\n';
  }
}

double Objective(const Eigen::VectorXd& alpha1, const Eigen::VectorXd& alpha2,
                 const Eigen::VectorXd& zeta1, const Eigen::VectorXd& zeta2,
                 const GramPair& grams, const LabelVector& labels,
                 const Hyperparams& hp) {
  CheckSizes(grams, labels);
  const Eigen::Index n = labels.size();
  CheckVector(alpha1, n, "alpha1");
  CheckVector(alpha2, n, "alpha2");
  CheckVector(zeta1, n, "zeta1");
  CheckVector(zeta2, n, "zeta2");
  const Eigen::VectorXd f1 = grams.k1 * alpha1;
  const Eigen::VectorXd f2 = grams.k2 * alpha2;
  return 0.5 * hp.gamma * alpha1.dot(f1) + 0.5 * alpha2.dot(f2) +
         hp.c1 * LossSum(zeta1, labels, hp.wave1) +
         hp.c2 * LossSum(zeta2, labels, hp.wave2) +
         hp.d * (f1 - f2).squaredNorm();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> TightSlacks(
    const Eigen::VectorXd& alpha1, const Eigen::VectorXd& alpha2,
    const GramPair& grams, const LabelVector& labels) {
  CheckSizes(grams, labels);
  CheckVector(alpha1, labels.size(), "alpha1");
  CheckVector(alpha2, labels.size(), "alpha2");
  Eigen::VectorXd z1 =
      (1.0 - labels.cwiseProduct(grams.k1 * alpha1).array()).max(0.0).matrix();
  Eigen::VectorXd z2 =
      (1.0 - labels.cwiseProduct(grams.k2 * alpha2).array()).max(0.0).matrix();
  return {std::move(z1), std::move(z2)};
}

double FeasibleObjective(const Eigen::VectorXd& alpha1,
                         const Eigen::VectorXd& alpha2, const GramPair& grams,
                         const LabelVector& labels, const Hyperparams& hp) {
  auto [z1, z2] = TightSlacks(alpha1, alpha2, grams, labels);
  return Objective(alpha1, alpha2, z1, z2, grams, labels, hp);
}

AlphaSystem AssembleAlphaSystem(int view, const SolverState& state,
                                const GramPair& grams,
                                const LabelVector& labels,
                                const Hyperparams& hp) {
  CheckView(view);
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  const Eigen::MatrixXd& k = view == 1 ? grams.k1 : grams.k2;
  const double g = view == 1 ? hp.gamma : 1.0;
  const double kappa = view == 1 ? hp.kappa1 : hp.kappa2;
  AlphaSystem sys;
  sys.matrix = g * k + (2.0 * hp.d + kappa) * (k.transpose() * k);
  sys.rhs = k.transpose() * ReducedRhs(view, state, grams, labels, hp);
  return sys;
}

AlphaSolver::AlphaSolver(int view, const GramPair& grams, const Hyperparams& hp)
    : view_(view) {
  CheckView(view);
  const Eigen::MatrixXd& k = view == 1 ? grams.k1 : grams.k2;
  const double g = view == 1 ? hp.gamma : 1.0;
  const double kappa = view == 1 ? hp.kappa1 : hp.kappa2;
  const Eigen::Index n = k.rows();
  Eigen::MatrixXd m = (2.0 * hp.d + kappa) * k;
  m.diagonal().array() += g;
  factor_.compute(m);
  if (factor_.info() != Eigen::Success) {
    m.diagonal().array() += kRidgeJitter;
    factor_.compute(m);
    if (factor_.info() != Eigen::Success) {
      Fail(ErrorCode::kNumerical,
           "alpha system for view " + std::to_string(view) + " (n=" +
               std::to_string(n) +
               ") is not positive definite even after ridge jitter; check "
               "that the Gram matrix is PSD and gamma > 0");
    }
  }
}

Eigen::VectorXd AlphaSolver::Solve(const SolverState& state,
                                   const GramPair& grams,
                                   const LabelVector& labels,
                                   const Hyperparams& hp) const {
  Eigen::VectorXd alpha =
      factor_.solve(ReducedRhs(view_, state, grams, labels, hp));
  if (!alpha.allFinite()) {
    Fail(ErrorCode::kNumerical, "alpha update produced non-finite values");
  }
  return alpha;
}

Eigen::VectorXd UpdateAlpha1(const SolverState& state, const GramPair& grams,
                             const LabelVector& labels, const Hyperparams& hp) {
  hp.Validate();
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  return AlphaSolver(1, grams, hp).Solve(state, grams, labels, hp);
}

Eigen::VectorXd UpdateAlpha2(const SolverState& state, const GramPair& grams,
                             const LabelVector& labels, const Hyperparams& hp) {
  hp.Validate();
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  return AlphaSolver(2, grams, hp).Solve(state, grams, labels, hp);
}

double ZetaObjective(const Eigen::VectorXd& zeta1, const Eigen::VectorXd& zeta2,
                     const SolverState& state, const GramPair& grams,
                     const LabelVector& labels, const Hyperparams& hp) {
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  CheckVector(zeta1, labels.size(), "zeta1");
  CheckVector(zeta2, labels.size(), "zeta2");
  return ZetaObjectiveAt(zeta1, zeta2, state,
                         ComputeMargins(state, grams, labels), labels, hp);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ZetaGradient(
    const Eigen::VectorXd& zeta1, const Eigen::VectorXd& zeta2,
    const SolverState& state, const GramPair& grams, const LabelVector& labels,
    const Hyperparams& hp) {
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  CheckVector(zeta1, labels.size(), "zeta1");
  CheckVector(zeta2, labels.size(), "zeta2");
  return ZetaGradientAt(zeta1, zeta2, state,
                        ComputeMargins(state, grams, labels), labels, hp);
}

GdResult GdZeta(const SolverState& state, const GramPair& grams,
                const LabelVector& labels, const Hyperparams& hp) {
  hp.Validate();
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  return GdZetaWithMargins(state, ComputeMargins(state, grams, labels), labels,
                           hp);
}

std::array<Eigen::VectorXd, 4> UpdateEta(const SolverState& state,
                                         const GramPair& grams,
                                         const LabelVector& labels,
                                         const Hyperparams& hp) {
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  const Margins m = ComputeMargins(state, grams, labels);
  return {
      Positive(state.theta[0] / hp.kappa1 + (m.m1.array() - 1.0).matrix() +
               state.zeta1),
      Positive(state.theta[1] / hp.kappa2 + (m.m2.array() - 1.0).matrix() +
               state.zeta2),
      Positive(state.theta[2] / hp.kappa3 + state.zeta1),
      Positive(state.theta[3] / hp.kappa4 + state.zeta2),
  };
}

std::array<Eigen::VectorXd, 4> UpdateDuals(const SolverState& state,
                                           const GramPair& grams,
                                           const LabelVector& labels,
                                           const Hyperparams& hp) {
  Require(hp.tau1 > 0 && hp.tau1 < kGoldenRatio,
          "tau1 must lie in (0, 1.618...)");
  Require(hp.tau2 > 0 && hp.tau2 < kGoldenRatio,
          "tau2 must lie in (0, 1.618...)");
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  const Margins m = ComputeMargins(state, grams, labels);
  const Eigen::VectorXd r1 =
      (m.m1.array() - 1.0).matrix() + state.zeta1 - state.eta[0];
  const Eigen::VectorXd r2 =
      (m.m2.array() - 1.0).matrix() + state.zeta2 - state.eta[1];
  return {
      state.theta[0] + hp.tau1 * hp.kappa1 * r1,
      state.theta[1] + hp.tau2 * hp.kappa2 * r2,
      state.theta[2] + hp.tau1 * hp.kappa3 * (state.zeta1 - state.eta[2]),
      state.theta[3] + hp.tau2 * hp.kappa4 * (state.zeta2 - state.eta[3]),
  };
}

std::array<double, 4> PrimalResiduals(const SolverState& state,
                                      const GramPair& grams,
                                      const LabelVector& labels) {
  CheckSizes(grams, labels);
  CheckState(state, labels.size());
  const Margins m = ComputeMargins(state, grams, labels);
  return {
      InfNorm((m.m1.array() - 1.0).matrix() + state.zeta1 - state.eta[0]),
      InfNorm((m.m2.array() - 1.0).matrix() + state.zeta2 - state.eta[1]),
      InfNorm(state.zeta1 - state.eta[2]),
      InfNorm(state.zeta2 - state.eta[3]),
  };
}

SolveResult AdmmSolve(const GramPair& grams, const LabelVector& labels,
                      const Hyperparams& hp) {
  hp.Validate();
  CheckSizes(grams, labels);
  const Eigen::Index n = labels.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      Fail(ErrorCode::kInvalidArgument, "labels must be -1 or +1");
    }
  }

  const AlphaSolver solve1(1, grams, hp);
  const AlphaSolver solve2(2, grams, hp);

  SolveResult result;
  SolverState& s = result.state;
  s = SolverState::Zero(n);
  const double initial = FeasibleObjective(s.alpha1, s.alpha2, grams, labels, hp);
  s.objective = initial;
  const double blowup = 1e6 * std::fabs(initial) + 1e6;
  double previous = initial;

  for (int t = 1; t <= hp.t1_max; ++t) {
    s.alpha1 = solve1.Solve(s, grams, labels, hp);
    s.alpha2 = solve2.Solve(s, grams, labels, hp);

    const Margins m = ComputeMargins(s, grams, labels);
    GdResult gd = GdZetaWithMargins(s, m, labels, hp);
    s.zeta1 = std::move(gd.zeta1);
    s.zeta2 = std::move(gd.zeta2);

    s.eta = UpdateEta(s, grams, labels, hp);
    s.theta = UpdateDuals(s, grams, labels, hp);
    s.iter = t;

    const double objective =
        FeasibleObjective(s.alpha1, s.alpha2, grams, labels, hp);
    s.objective = objective;
    TraceRecord record{t, objective, PrimalResiduals(s, grams, labels)};
    result.trace.records.push_back(record);

    if (!std::isfinite(objective) || objective > blowup) {
      throw DivergenceError("ADMM diverged at iteration " + std::to_string(t) +
                                ": objective " + std::to_string(objective),
                            result.trace);
    }

    const double rel_change =
        std::fabs(objective - previous) / std::max(std::fabs(previous), 1e-12);
    const double max_res = *std::max_element(record.residual.begin(),
                                             record.residual.end());
    previous = objective;
    if (t > 1 && rel_change < hp.tol_obj && max_res < hp.tol_res) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace wavemv
