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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "wavemv/data.hpp"
#include "wavemv/error.hpp"
#include "wavemv/kernel.hpp"
#include "wavemv/loss.hpp"

namespace wavemv {
namespace {

struct Instance {
  GramPair grams;
  LabelVector labels;
};

Instance RandomInstance(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd v1(n, 3), v2(n, 2);
  LabelVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = (i % 2 == 0) ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < 3; ++j) v1(i, j) = normal(rng) + y[i];
    for (Eigen::Index j = 0; j < 2; ++j) v2(i, j) = normal(rng) - y[i];
  }
  return {BuildGramPair(v1, {1.5}, v2, {1.0}), y};
}

Eigen::VectorXd RandomVector(Eigen::Index n, std::mt19937_64& rng,
                             double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

SolverState RandomState(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SolverState s = SolverState::Zero(n);
  s.alpha1 = RandomVector(n, rng);
  s.alpha2 = RandomVector(n, rng);
  s.zeta1 = RandomVector(n, rng);
  s.zeta2 = RandomVector(n, rng);
  for (auto& e : s.eta) e = RandomVector(n, rng).cwiseAbs();
  for (auto& t : s.theta) t = RandomVector(n, rng);
  return s;
}

// Element-by-element evaluation of the primal objective, written without
// any matrix-vector helpers.
double NaiveObjective(const Eigen::VectorXd& a1, const Eigen::VectorXd& a2,
                      const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                      const GramPair& g, const LabelVector& y,
                      const Hyperparams& hp) {
  const Eigen::Index n = y.size();
  double quad1 = 0, quad2 = 0, coreg = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double f1 = 0, f2 = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      quad1 += a1[i] * g.k1(i, j) * a1[j];
      quad2 += a2[i] * g.k2(i, j) * a2[j];
      f1 += g.k1(i, j) * a1[j];
      f2 += g.k2(i, j) * a2[j];
    }
    coreg += (f1 - f2) * (f1 - f2);
  }
  double loss1 = 0, loss2 = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e1 = std::exp(hp.wave1.a * z1[i] * y[i]);
    const double e2 = std::exp(hp.wave2.a * z2[i] * y[i]);
    loss1 += (1 - 1 / (1 + hp.wave1.lambda * z1[i] * z1[i] * e1)) /
             hp.wave1.lambda;
    loss2 += (1 - 1 / (1 + hp.wave2.lambda * z2[i] * z2[i] * e2)) /
             hp.wave2.lambda;
  }
  return 0.5 * hp.gamma * quad1 + 0.5 * quad2 + hp.c1 * loss1 +
         hp.c2 * loss2 + hp.d * coreg;
}

GramPair UnitGrams() {
  GramPair g;
  g.k1 = Eigen::MatrixXd::Ones(1, 1);
  g.k2 = Eigen::MatrixXd::Ones(1, 1);
  return g;
}

TEST(HyperparamsTest, DefaultsValid) { EXPECT_NO_THROW(Hyperparams{}.Validate()); }

TEST(HyperparamsTest, RejectsOutOfRange) {
  auto bad = [](auto mutate) {
    Hyperparams hp;
    mutate(hp);
    EXPECT_THROW(hp.Validate(), Error);
  };
  bad([](Hyperparams& h) { h.gamma = 0; });
  bad([](Hyperparams& h) { h.c1 = -1; });
  bad([](Hyperparams& h) { h.kappa3 = 0; });
  bad([](Hyperparams& h) { h.tau1 = 0; });
  bad([](Hyperparams& h) { h.tau2 = 1.62; });
  bad([](Hyperparams& h) { h.gd_rate = 0; });
  bad([](Hyperparams& h) { h.t1_max = 0; });
  bad([](Hyperparams& h) { h.tol_res = 0; });
  bad([](Hyperparams& h) { h.kernel1.sigma = 0; });
  bad([](Hyperparams& h) { h.wave2.lambda = 0; });
}

TEST(ObjectiveTest, ZeroVectors) {
  const auto inst = RandomInstance(6, 1);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  EXPECT_EQ(Objective(z, z, z, z, inst.grams, inst.labels, Hyperparams{}), 0.0);
}

TEST(ObjectiveTest, HandValue) {
  Hyperparams hp;
  hp.gamma = 2;
  hp.d = 1;
  LabelVector y(1);
  y << 1;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  EXPECT_DOUBLE_EQ(Objective(one, zero, zero, zero, UnitGrams(), y, hp), 2.0);
}

TEST(ObjectiveTest, MatchesNaiveSummation) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = RandomInstance(9, seed);
    const SolverState s = RandomState(9, seed + 100);
    Hyperparams hp;
    hp.gamma = 1.7;
    hp.c1 = 0.6;
    hp.c2 = 2.1;
    hp.d = 0.9;
    hp.wave1 = {0.4, 1.5};
    hp.wave2 = {0.8, 0.5};
    EXPECT_NEAR(Objective(s.alpha1, s.alpha2, s.zeta1, s.zeta2, inst.grams,
                          inst.labels, hp),
                NaiveObjective(s.alpha1, s.alpha2, s.zeta1, s.zeta2,
                               inst.grams, inst.labels, hp),
                1e-10);
  }
}

TEST(ObjectiveTest, ShapeMismatch) {
  const auto inst = RandomInstance(4, 1);
  const Eigen::VectorXd z4 = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd z3 = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(Objective(z3, z4, z4, z4, inst.grams, inst.labels, {}), Error);
}

TEST(TightSlacksTest, HingeOfMargins) {
  const auto inst = RandomInstance(8, 2);
  const SolverState s = RandomState(8, 3);
  auto [z1, z2] = TightSlacks(s.alpha1, s.alpha2, inst.grams, inst.labels);
  for (Eigen::Index i = 0; i < 8; ++i) {
    double f1 = 0;
    for (Eigen::Index j = 0; j < 8; ++j) f1 += inst.grams.k1(i, j) * s.alpha1[j];
    EXPECT_NEAR(z1[i], std::max(0.0, 1 - inst.labels[i] * f1), 1e-14);
    EXPECT_GE(z2[i], 0.0);
  }
}

TEST(UpdateAlphaTest, ZeroRhsGivesZero) {
  const auto inst = RandomInstance(5, 4);
  Hyperparams hp;
  hp.d = 0;
  SolverState s = SolverState::Zero(5);
  s.zeta1.setOnes();
  s.zeta2.setOnes();
  s.alpha2 = Eigen::VectorXd::Constant(5, 3.0);
  EXPECT_LT(UpdateAlpha1(s, inst.grams, inst.labels, hp).norm(), 1e-14);
  s.alpha1 = Eigen::VectorXd::Constant(5, -2.0);
  EXPECT_LT(UpdateAlpha2(s, inst.grams, inst.labels, hp).norm(), 1e-14);
}

TEST(UpdateAlphaTest, HandValueSingleSample) {
  Hyperparams hp;
  hp.gamma = 1;
  hp.d = 0;
  hp.kappa1 = 1;
  hp.kappa2 = 1;
  LabelVector y(1);
  y << 1;
  const SolverState s = SolverState::Zero(1);
  EXPECT_NEAR(UpdateAlpha1(s, UnitGrams(), y, hp)[0], 0.5, 1e-15);
  EXPECT_NEAR(UpdateAlpha2(s, UnitGrams(), y, hp)[0], 0.5, 1e-15);
}

TEST(UpdateAlphaTest, AssembledResidualIsTiny) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = RandomInstance(5, seed);
    SolverState s = RandomState(5, seed + 50);
    Hyperparams hp;
    hp.gamma = 0.7;
    hp.d = 0.4;
    hp.kappa1 = 1.3;
    hp.kappa2 = 0.6;
    s.alpha1 = UpdateAlpha1(s, inst.grams, inst.labels, hp);
    const AlphaSystem a = AssembleAlphaSystem(1, s, inst.grams, inst.labels, hp);
    EXPECT_LE((a.matrix * s.alpha1 - a.rhs).norm(), 1e-10 * (1 + a.rhs.norm()));
    s.alpha2 = UpdateAlpha2(s, inst.grams, inst.labels, hp);
    const AlphaSystem b = AssembleAlphaSystem(2, s, inst.grams, inst.labels, hp);
    EXPECT_LE((b.matrix * s.alpha2 - b.rhs).norm(), 1e-10 * (1 + b.rhs.norm()));
  }
}

TEST(UpdateAlphaTest, AssembledSystemMatchesDefinition) {
  const auto inst = RandomInstance(4, 9);
  const SolverState s = RandomState(4, 10);
  Hyperparams hp;
  hp.gamma = 1.4;
  hp.d = 0.3;
  hp.kappa1 = 2.0;
  const auto& k1 = inst.grams.k1;
  const auto& k2 = inst.grams.k2;
  const Eigen::MatrixXd y = inst.labels.asDiagonal();
  const Eigen::VectorXd e = Eigen::VectorXd::Ones(4);
  const Eigen::MatrixXd a = hp.gamma * k1 + 2 * hp.d * k1.transpose() * k1 +
                            hp.kappa1 * k1.transpose() * k1;
  const Eigen::VectorXd b = 2 * hp.d * k1.transpose() * k2 * s.alpha2 -
                            k1 * y * s.theta[0] +
                            hp.kappa1 * k1 * y * (e - s.zeta1 + s.eta[0]);
  const AlphaSystem sys = AssembleAlphaSystem(1, s, inst.grams, inst.labels, hp);
  EXPECT_TRUE(sys.matrix.isApprox(a, 1e-14));
  EXPECT_TRUE(sys.rhs.isApprox(b, 1e-13));
}

TEST(UpdateAlphaTest, DecoupledWithoutCoRegularization) {
  const auto inst = RandomInstance(6, 12);
  Hyperparams hp;
  hp.d = 0;
  SolverState s = RandomState(6, 13);
  const Eigen::VectorXd first = UpdateAlpha2(s, inst.grams, inst.labels, hp);
  s.alpha1 *= -7.0;
  EXPECT_EQ(UpdateAlpha2(s, inst.grams, inst.labels, hp), first);
}

TEST(ZetaGradientTest, MatchesFiniteDifference) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = RandomInstance(6, seed);
    const SolverState s = RandomState(6, seed + 20);
    Hyperparams hp;
    hp.c1 = 0.8;
    hp.c2 = 1.6;
    hp.kappa1 = 1.1;
    hp.kappa2 = 0.7;
    hp.kappa3 = 1.9;
    hp.kappa4 = 0.4;
    hp.wave1 = {0.3, 1.2};
    hp.wave2 = {0.9, 0.4};
    auto [g1, g2] = ZetaGradient(s.zeta1, s.zeta2, s, inst.grams, inst.labels, hp);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (int view = 1; view <= 2; ++view) {
        Eigen::VectorXd p1 = s.zeta1, m1 = s.zeta1, p2 = s.zeta2, m2 = s.zeta2;
        (view == 1 ? p1 : p2)[i] += h;
        (view == 1 ? m1 : m2)[i] -= h;
        const double fd =
            (ZetaObjective(p1, p2, s, inst.grams, inst.labels, hp) -
             ZetaObjective(m1, m2, s, inst.grams, inst.labels, hp)) /
            (2 * h);
        const double g = view == 1 ? g1[i] : g2[i];
        EXPECT_LT(std::abs(g - fd) / std::max(1.0, std::abs(fd)), 1e-6);
      }
    }
  }
}

TEST(ZetaGradientTest, VanishesWhenEveryTermDoes) {
  const auto inst = RandomInstance(5, 7);
  Hyperparams hp;
  hp.c1 = 0;
  hp.c2 = 0;
  SolverState s = RandomState(5, 8);
  for (auto& t : s.theta) t.setZero();
  const Eigen::VectorXd m1 = inst.labels.cwiseProduct(inst.grams.k1 * s.alpha1);
  const Eigen::VectorXd m2 = inst.labels.cwiseProduct(inst.grams.k2 * s.alpha2);
  s.zeta1 = Eigen::VectorXd::Ones(5) - m1;
  s.zeta2 = Eigen::VectorXd::Ones(5) - m2;
  s.eta[0].setZero();
  s.eta[1].setZero();
  s.eta[2] = s.zeta1;
  s.eta[3] = s.zeta2;
  auto [g1, g2] = ZetaGradient(s.zeta1, s.zeta2, s, inst.grams, inst.labels, hp);
  EXPECT_LT(g1.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(g2.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GdZetaTest, StationaryStartUnchanged) {
  const auto inst = RandomInstance(5, 7);
  Hyperparams hp;
  hp.c1 = 0;
  hp.c2 = 0;
  SolverState s = RandomState(5, 8);
  for (auto& t : s.theta) t.setZero();
  s.zeta1 = Eigen::VectorXd::Ones(5) -
            inst.labels.cwiseProduct(inst.grams.k1 * s.alpha1);
  s.zeta2 = Eigen::VectorXd::Ones(5) -
            inst.labels.cwiseProduct(inst.grams.k2 * s.alpha2);
  s.eta[0].setZero();
  s.eta[1].setZero();
  s.eta[2] = s.zeta1;
  s.eta[3] = s.zeta2;
  const GdResult r = GdZeta(s, inst.grams, inst.labels, hp);
  EXPECT_EQ(r.steps, 0);
  EXPECT_EQ(r.zeta1, s.zeta1);
  EXPECT_EQ(r.zeta2, s.zeta2);
}

TEST(GdZetaTest, SmallStepDecreases) {
  const auto inst = RandomInstance(8, 3);
  const SolverState s = RandomState(8, 4);
  Hyperparams hp;
  hp.gd_rate = 1e-4;
  hp.t2_max = 1;
  const double before = ZetaObjective(s.zeta1, s.zeta2, s, inst.grams, inst.labels, hp);
  const GdResult r = GdZeta(s, inst.grams, inst.labels, hp);
  EXPECT_EQ(r.steps, 1);
  EXPECT_LT(ZetaObjective(r.zeta1, r.zeta2, s, inst.grams, inst.labels, hp),
            before);
}

TEST(GdZetaTest, BacktracksFromHugeStep) {
  const auto inst = RandomInstance(8, 5);
  const SolverState s = RandomState(8, 6);
  Hyperparams hp;
  hp.gd_rate = 1e3;
  const GdResult r = GdZeta(s, inst.grams, inst.labels, hp);
  EXPECT_GT(r.steps, 0);
  EXPECT_LE(r.final_value, r.initial_value + 1e-12);
  EXPECT_LE(ZetaObjective(r.zeta1, r.zeta2, s, inst.grams, inst.labels, hp),
            ZetaObjective(s.zeta1, s.zeta2, s, inst.grams, inst.labels, hp) +
                1e-12);
}

TEST(UpdateEtaTest, ProjectsOntoOrthant) {
  GramPair g;
  g.k1 = Eigen::MatrixXd::Identity(2, 2);
  g.k2 = Eigen::MatrixXd::Identity(2, 2);
  LabelVector y(2);
  y << 1, 1;
  SolverState s = SolverState::Zero(2);
  s.zeta1 << -1, 2;
  s.alpha1 << 1, 1;  // margin term Y K a - e vanishes
  const auto eta = UpdateEta(s, g, y, Hyperparams{});
  EXPECT_EQ(eta[0], (Eigen::VectorXd(2) << 0, 2).finished());
  EXPECT_EQ(eta[2], (Eigen::VectorXd(2) << 0, 2).finished());
}

TEST(UpdateEtaTest, ZeroArgumentsGiveZero) {
  GramPair g;
  g.k1 = Eigen::MatrixXd::Identity(3, 3);
  g.k2 = g.k1;
  LabelVector y = LabelVector::Ones(3);
  SolverState s = SolverState::Zero(3);
  s.alpha1.setOnes();
  s.alpha2.setOnes();
  for (const auto& e : UpdateEta(s, g, y, Hyperparams{})) {
    EXPECT_EQ(e, Eigen::VectorXd::Zero(3));
  }
}

TEST(UpdateEtaTest, EachCoordinateIsZeroOrPreProjection) {
  const auto inst = RandomInstance(10, 14);
  const SolverState s = RandomState(10, 15);
  Hyperparams hp;
  hp.kappa1 = 2;
  hp.kappa3 = 0.5;
  const auto eta = UpdateEta(s, inst.grams, inst.labels, hp);
  const Eigen::VectorXd pre1 =
      s.theta[0] / hp.kappa1 +
      inst.labels.cwiseProduct(inst.grams.k1 * s.alpha1) -
      Eigen::VectorXd::Ones(10) + s.zeta1;
  const Eigen::VectorXd pre3 = s.theta[2] / hp.kappa3 + s.zeta1;
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (const auto& v : eta) EXPECT_GE(v[i], 0.0);
    EXPECT_TRUE(eta[0][i] == 0.0 || std::abs(eta[0][i] - pre1[i]) < 1e-14);
    EXPECT_NEAR(eta[0][i], std::max(0.0, pre1[i]), 1e-14);
    EXPECT_EQ(eta[2][i], std::max(0.0, pre3[i]));
  }
}

TEST(UpdateDualsTest, ZeroResidualLeavesDualsUnchanged) {
  const auto inst = RandomInstance(5, 16);
  SolverState s = RandomState(5, 17);
  s.eta[0] = inst.labels.cwiseProduct(inst.grams.k1 * s.alpha1) -
             Eigen::VectorXd::Ones(5) + s.zeta1;
  s.eta[1] = inst.labels.cwiseProduct(inst.grams.k2 * s.alpha2) -
             Eigen::VectorXd::Ones(5) + s.zeta2;
  s.eta[2] = s.zeta1;
  s.eta[3] = s.zeta2;
  const auto theta = UpdateDuals(s, inst.grams, inst.labels, Hyperparams{});
  for (int k = 0; k < 4; ++k) EXPECT_TRUE(theta[k].isApprox(s.theta[k], 1e-15));
}

TEST(UpdateDualsTest, RejectsZeroStep) {
  const auto inst = RandomInstance(4, 1);
  Hyperparams hp;
  hp.tau1 = 0;
  EXPECT_THROW(UpdateDuals(SolverState::Zero(4), inst.grams, inst.labels, hp),
               Error);
}

TEST(UpdateDualsTest, HandComputedTwoSamples) {
  GramPair g;
  g.k1 = (Eigen::MatrixXd(2, 2) << 1, 0.5, 0.5, 1).finished();
  g.k2 = Eigen::MatrixXd::Identity(2, 2);
  LabelVector y(2);
  y << 1, -1;
  SolverState s = SolverState::Zero(2);
  s.alpha1 << 1, 2;    // K1 a1 = (2, 2.5), Y K1 a1 = (2, -2.5)
  s.alpha2 << 0.5, 1;  // Y K2 a2 = (0.5, -1)
  s.zeta1 << 0.1, 0.2;
  s.zeta2 << 0.3, 0.4;
  s.eta[0] << 1, 0;
  s.eta[1] << 0, 0;
  s.eta[2] << 0.1, 0;
  s.eta[3] << 0, 1;
  Hyperparams hp;
  hp.tau1 = 0.5;
  hp.tau2 = 1.5;
  hp.kappa1 = 2;
  hp.kappa2 = 1;
  hp.kappa3 = 4;
  hp.kappa4 = 3;
  const auto t = UpdateDuals(s, g, y, hp);
  // view 1: (2-1+0.1-1, -2.5-1+0.2-0) = (0.1, -3.3), scaled by 0.5*2
  EXPECT_NEAR(t[0][0], 0.1, 1e-15);
  EXPECT_NEAR(t[0][1], -3.3, 1e-15);
  // view 2: (0.5-1+0.3, -1-1+0.4) = (-0.2, -1.6), scaled by 1.5*1
  EXPECT_NEAR(t[1][0], -0.3, 1e-15);
  EXPECT_NEAR(t[1][1], -2.4, 1e-15);
  // slack copies: 0.5*4*(0, 0.2) and 1.5*3*(0.3, -0.6)
  EXPECT_NEAR(t[2][0], 0.0, 1e-15);
  EXPECT_NEAR(t[2][1], 0.4, 1e-15);
  EXPECT_NEAR(t[3][0], 1.35, 1e-15);
  EXPECT_NEAR(t[3][1], -2.7, 1e-15);
}

TEST(AdmmSolveTest, SeparableSetHasZeroTrainingError) {
  const TwoViewDataset d = MakeSyntheticTwoView(8, 10.0, 1.0, 3);
  const GramPair g = BuildGramPair(d.view1, {2.0}, d.view2, {2.0});
  const Hyperparams hp;
  const SolveResult r = AdmmSolve(g, d.labels, hp);
  const Eigen::VectorXd f = hp.gamma * g.k1 * r.state.alpha1 + g.k2 * r.state.alpha2;
  for (Eigen::Index i = 0; i < 8; ++i) {
    EXPECT_EQ(f[i] >= 0 ? 1.0 : -1.0, d.labels[i]);
  }
}

TEST(AdmmSolveTest, InvariantsOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = RandomInstance(30, seed);
    const Hyperparams hp;
    const SolveResult r = AdmmSolve(inst.grams, inst.labels, hp);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(30);
    const double initial =
        FeasibleObjective(z, z, inst.grams, inst.labels, hp);
    ASSERT_FALSE(r.trace.records.empty());
    EXPECT_LE(static_cast<int>(r.trace.records.size()), hp.t1_max);
    EXPECT_LE(r.trace.records.back().objective, initial);
    for (const auto& e : r.state.eta) EXPECT_GE(e.minCoeff(), 0.0);
    for (size_t i = 1; i < r.trace.records.size(); ++i) {
      EXPECT_EQ(r.trace.records[i].iter, r.trace.records[i - 1].iter + 1);
    }
  }
}

TEST(AdmmSolveTest, Deterministic) {
  const auto inst = RandomInstance(20, 4);
  const SolveResult a = AdmmSolve(inst.grams, inst.labels, Hyperparams{});
  const SolveResult b = AdmmSolve(inst.grams, inst.labels, Hyperparams{});
  EXPECT_EQ(a.state.alpha1, b.state.alpha1);
  EXPECT_EQ(a.state.alpha2, b.state.alpha2);
  ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
  for (size_t i = 0; i < a.trace.records.size(); ++i) {
    EXPECT_EQ(a.trace.records[i].objective, b.trace.records[i].objective);
  }
}

TEST(AdmmSolveTest, ViewTwoVanishesWithoutItsLossOrCoupling) {
  const auto inst = RandomInstance(20, 5);
  Hyperparams hp;
  hp.d = 0;
  hp.c2 = 0;
  hp.t1_max = 2000;
  hp.tol_obj = 1e-10;
  hp.tol_res = 1e-8;
  const SolveResult r = AdmmSolve(inst.grams, inst.labels, hp);
  EXPECT_LT(r.state.alpha2.cwiseAbs().maxCoeff(), 1e-3);
}

TEST(AdmmSolveTest, RejectsMismatchedShapes) {
  const auto inst = RandomInstance(6, 1);
  EXPECT_THROW(AdmmSolve(inst.grams, LabelVector::Ones(5), {}), Error);
}

TEST(ConvergenceTraceTest, CsvLayout) {
  ConvergenceTrace t;
  t.records.push_back({1, 0.5, {0.1, 0.2, 0.0, 1e-20}});
  t.records.push_back({2, 0.25, {0, 0, 0, 0}});
  std::ostringstream out;
  t.WriteCsv(out);
  EXPECT_EQ(out.str(),
            "iter,objective,res1,res2,res3,res4\n"
            "1,0.5,0.10000000000000001,0.20000000000000001,0,9.9999999999999995e-21\n"
            "2,0.25,0,0,0,0\n");
}

}  // namespace
}  // namespace wavemv
