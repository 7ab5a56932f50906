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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cli.hpp"
#include "wavemv/data.hpp"
#include "wavemv/eval.hpp"
#include "wavemv/kernel.hpp"
#include "wavemv/loss.hpp"
#include "wavemv/model.hpp"
#include "wavemv/solver.hpp"

namespace {

using namespace wavemv;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a = 0, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Loss values, bounds and gradients.

Outcome LossCorrectness() {
  const double v = WaveLoss(1.0, {1.0, 1.0});
  const double expected = std::exp(1.0) / (1.0 + std::exp(1.0));
  bool ok = std::fabs(v - 0.731059) <= 1e-6 && std::fabs(v - expected) <= 1e-12;

  double worst_bound = -INFINITY;
  int bound_violations = 0;
  for (double lambda : {0.25, 1.0, 4.0}) {
    for (double a : {-3.0, 1.0, 3.0}) {
      const WaveParams p{lambda, a};
      for (int i = 0; i < 100000; ++i) {
        const double h = -50.0 + 100.0 * i / 99999.0;
        const double l = WaveLoss(h, p);
        if (!(l >= 0.0 && l < 1.0 / lambda)) ++bound_violations;
        worst_bound = std::max(worst_bound, l * lambda);
      }
    }
  }
  ok = ok && bound_violations == 0;

  double worst_rel = 0.0;
  for (double lambda : {0.1, 0.5, 1.0, 2.0, 8.0}) {
    for (double a : {-2.0, -0.5, 0.5, 1.0, 2.0}) {
      const WaveParams p{lambda, a};
      for (double h = -4.0; h <= 4.0; h += 0.0625) {
        if (std::fabs(h) < 1e-12) continue;
        const double step = 1e-6 * std::max(1.0, std::fabs(h));
        const double fd =
            (WaveLoss(h + step, p) - WaveLoss(h - step, p)) / (2.0 * step);
        const double g = WaveLossGrad(h, p);
        // Flat tails: compare absolutely below the finite-difference noise.
        const double scale = std::max(std::fabs(g), 1e-4);
        worst_rel = std::max(worst_rel, std::fabs(g - fd) / scale);
      }
    }
  }
  ok = ok && worst_rel <= 1e-6;
  return {ok, Fmt("loss(1,1,1)=%.7f, bound violations %.0f, max lambda*loss "
                  "%.17g, max gradient rel err %.2e",
                  v, bound_violations, worst_bound, worst_rel)};
}

// ---------------------------------------------------------------------------
// 2. Pointwise convergence to the 0-1 step.

Outcome StepConvergence() {
  const WaveParams p{1.0, 100.0};
  double worst = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double h = -10.0 + 20.0 * i / 200000.0;
    if (std::fabs(h) < 0.1) continue;
    const double step = h > 0 ? 1.0 : 0.0;
    worst = std::max(worst, std::fabs(WaveLoss(h, p) - step));
  }
  return {worst < 0.01, Fmt("max |loss - step| for |h| >= 0.1: %.3e", worst)};
}

// ---------------------------------------------------------------------------
// 3. Classification calibration of the conditional risk.

Outcome Calibration() {
  const WaveParams p{1.0, 1.0};
  bool ok = true;
  std::string minimizers;
  for (int k = 1; k <= 9; ++k) {
    if (k == 5) continue;
    const double prob = k / 10.0;
    double best_f = 0.0, best_risk = INFINITY;
    for (int i = 0; i <= 10000; ++i) {
      const double f = -5.0 + i * 1e-3;
      const double risk =
          WaveLoss(1.0 + f, p) * (1.0 - prob) + WaveLoss(1.0 - f, p) * prob;
      if (risk < best_risk) {
        best_risk = risk;
        best_f = f;
      }
    }
    const bool sign_ok = (best_f > 0) == (2 * prob - 1 > 0) && best_f != 0.0;
    ok = ok && sign_ok;
    minimizers += Fmt(" P=%.1f:F*=%.3f", prob, best_f);
  }
  return {ok, "minimizers" + minimizers};
}

// ---------------------------------------------------------------------------
// Shared helpers for the solver criteria.

struct Instance {
  GramPair grams;
  LabelVector labels;
};

Instance RandomInstance(Eigen::Index n, std::uint64_t seed) {
  const double separation = 0.5 + static_cast<double>(seed % 5);
  const TwoViewDataset d = MakeSyntheticTwoView(n, separation, 1.0, seed);
  const Hyperparams hp;
  return {BuildGramPair(d.view1, hp.kernel1, d.view2, hp.kernel2), d.labels};
}

// ---------------------------------------------------------------------------
// 4. ADMM internal consistency.

Outcome AdmmConsistency() {
  double worst_residual = 0.0;
  double worst_eta = 0.0;
  double worst_gd_increase = -INFINITY;
  int objective_failures = 0;
  int instances = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::Index n = 20 + static_cast<Eigen::Index>((seed * 37) % 41) * 2;
    const Instance inst = RandomInstance(n, seed);
    Hyperparams hp;
    hp.c1 = 0.5 + 0.1 * static_cast<double>(seed % 7);
    hp.d = 0.1 * static_cast<double>(seed % 4);

    // Step through the iteration by hand to inspect every intermediate.
    SolverState s = SolverState::Zero(n);
    for (int t = 1; t <= 60; ++t) {
      s.alpha1 = UpdateAlpha1(s, inst.grams, inst.labels, hp);
      const AlphaSystem a1 = AssembleAlphaSystem(1, s, inst.grams, inst.labels, hp);
      worst_residual = std::max(worst_residual, (a1.matrix * s.alpha1 - a1.rhs).norm());
      s.alpha2 = UpdateAlpha2(s, inst.grams, inst.labels, hp);
      const AlphaSystem a2 = AssembleAlphaSystem(2, s, inst.grams, inst.labels, hp);
      worst_residual = std::max(worst_residual, (a2.matrix * s.alpha2 - a2.rhs).norm());

      const GdResult gd = GdZeta(s, inst.grams, inst.labels, hp);
      worst_gd_increase =
          std::max(worst_gd_increase, gd.final_value - gd.initial_value);
      s.zeta1 = gd.zeta1;
      s.zeta2 = gd.zeta2;
      s.eta = UpdateEta(s, inst.grams, inst.labels, hp);
      for (const auto& e : s.eta) worst_eta = std::min(worst_eta, e.minCoeff());
      s.theta = UpdateDuals(s, inst.grams, inst.labels, hp);
    }

    const double initial = FeasibleObjective(
        Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), inst.grams,
        inst.labels, hp);
    const SolveResult r = AdmmSolve(inst.grams, inst.labels, hp);
    if (!(r.trace.records.back().objective <= initial)) ++objective_failures;
    ++instances;
  }
  const bool ok = worst_residual <= 1e-10 && worst_eta >= 0.0 &&
                  worst_gd_increase <= 0.0 && objective_failures == 0;
  return {ok, Fmt("max alpha residual %.2e, min eta %.2e, max GD change %.2e, "
                  "objective increases %.0f of 20",
                  worst_residual, worst_eta, worst_gd_increase,
                  objective_failures) +
                  (instances == 20 ? "" : " (instances missing)")};
}

// ---------------------------------------------------------------------------
// 5. Convergence behavior on the 50-sample fixture.

TwoViewDataset Fixture50() { return MakeSyntheticTwoView(50, 4.0, 1.0, 42); }

Outcome ConvergenceBehavior() {
  const TwoViewDataset d = Fixture50();
  const Hyperparams hp;
  const FitResult fit = Fit(d, hp);
  const auto& rec = fit.trace.records;
  int settled_at = -1;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    const double prev = rec[i - 1].objective;
    if (std::fabs(rec[i].objective - prev) / std::max(std::fabs(prev), 1e-12) <
        1e-4) {
      settled_at = rec[i].iter;
      break;
    }
  }
  double worst_rise = -INFINITY;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    if (rec[i].iter <= 10) continue;
    worst_rise = std::max(worst_rise, rec[i].objective - rec[i - 1].objective);
  }
  if (rec.size() <= 11) worst_rise = 0.0;
  const bool ok = settled_at > 0 && settled_at <= 500 && worst_rise <= 1e-8;
  return {ok, Fmt("relative change < 1e-4 at iteration %.0f, %.0f iterations "
                  "run, max rise after iteration 10: %.2e",
                  settled_at, static_cast<double>(rec.size()), worst_rise)};
}

// ---------------------------------------------------------------------------
// 6. Local optimality against random perturbations.

// Objective at (alpha1, alpha2) with the solver's slacks, each raised just
// enough to keep the margin and sign constraints satisfied. For samples whose
// loss shape a*y is negative the loss falls again past its peak, so the
// smallest feasible slack is not the cheapest one and slacks must be carried
// along rather than recomputed.
double JointObjective(const Eigen::VectorXd& alpha1, const Eigen::VectorXd& alpha2,
                      const SolverState& solved, const Instance& inst,
                      const Hyperparams& hp) {
  const auto [tight1, tight2] = TightSlacks(alpha1, alpha2, inst.grams, inst.labels);
  return Objective(alpha1, alpha2, solved.zeta1.cwiseMax(tight1),
                   solved.zeta2.cwiseMax(tight2), inst.grams, inst.labels, hp);
}

Outcome LocalOptimality() {
  int beaten = 0;
  double worst_margin = INFINITY;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = RandomInstance(40, 100 + seed);
    const Hyperparams hp;
    const SolveResult r = AdmmSolve(inst.grams, inst.labels, hp);
    const auto& a1 = r.state.alpha1;
    const auto& a2 = r.state.alpha2;
    const double base = JointObjective(a1, a2, r.state, inst, hp);
    std::mt19937_64 rng(DeriveSeed(seed, 6));
    std::normal_distribution<double> normal;
    const Eigen::Index n = a1.size();
    for (int k = 0; k < 1000; ++k) {
      Eigen::VectorXd dir(2 * n);
      for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = normal(rng);
      dir *= 1e-2 / dir.norm();
      const double v =
          JointObjective(a1 + dir.head(n), a2 + dir.tail(n), r.state, inst, hp);
      worst_margin = std::min(worst_margin, v - base);
      if (v < base) ++beaten;
    }
  }
  return {beaten == 0, Fmt("perturbations that improve the objective: %.0f of "
                           "5000, smallest excess %.3e",
                           beaten, worst_margin)};
}

// ---------------------------------------------------------------------------
// 7 and 8. End-to-end learning and label-noise robustness.

struct SplitRun {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Small grid for the noise protocol: loss weight, kernel width, loss shape.
std::vector<Hyperparams> NoiseGrid() {
  std::vector<Hyperparams> grid;
  for (double c : {0.1, 1.0}) {
    for (double sigma : {1.0, 2.0, 4.0}) {
      for (double a : {0.5, 1.0}) {
        Hyperparams hp;
        hp.c1 = hp.c2 = c;
        hp.kernel1.sigma = hp.kernel2.sigma = sigma;
        hp.wave1.a = hp.wave2.a = a;
        grid.push_back(hp);
      }
    }
  }
  return grid;
}

// 70/30 split of the n=100 fixture, optional flips on the training labels,
// then either the default hyperparameters or a five-fold grid search on the
// (possibly noisy) training part.
SplitRun TrainAndTest(std::uint64_t seed, double noise, bool tune) {
  const TwoViewDataset d = MakeSyntheticTwoView(100, 10.0, 1.0, seed);
  auto [train, test] = TrainTestSplit(d, 0.7, DeriveSeed(seed, 1));
  if (noise > 0) {
    train.labels = InjectLabelNoise(train.labels, noise, DeriveSeed(seed, 2));
  }
  Hyperparams hp;
  if (tune) hp = KFoldGridSearch(train, NoiseGrid(), 5, DeriveSeed(seed, 3)).best;
  const FitResult fit = Fit(train, hp);
  SplitRun r;
  r.train_accuracy =
      Accuracy(Predict(fit.model, train.view1, train.view2), train.labels);
  r.test_accuracy = Accuracy(Predict(fit.model, test.view1, test.view2), test.labels);
  return r;
}

Outcome EndToEnd() {
  double min_train = 1.0, min_test = 1.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SplitRun r = TrainAndTest(seed, 0.0, false);
    min_train = std::min(min_train, r.train_accuracy);
    min_test = std::min(min_test, r.test_accuracy);
  }
  return {min_train == 1.0 && min_test >= 0.95,
          Fmt("min train accuracy %.4f, min test accuracy %.4f over 5 seeds",
              min_train, min_test)};
}

Outcome NoiseRobustness() {
  double clean = 0.0, noisy = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    clean += TrainAndTest(seed, 0.0, true).test_accuracy / 5.0;
    noisy += TrainAndTest(seed, 0.2, true).test_accuracy / 5.0;
  }
  return {clean - noisy <= 0.10,
          Fmt("mean test accuracy with tuned hyperparameters: clean %.4f, 20%% "
              "noise %.4f, drop %.4f",
              clean, noisy, clean - noisy)};
}

// ---------------------------------------------------------------------------
// 9. Friedman and Nemenyi against the published values.

Outcome Statistics() {
  Eigen::VectorXd ranks(7);
  ranks << 1.55, 3.43, 4.87, 4.70, 5.17, 3.57, 4.72;
  const double chi2 = FriedmanChi2(ranks, 30);
  const double f = FriedmanF(chi2, 7, 30);
  const double cd30 = NemenyiCd(7, 30, 2.949);
  const double cd45 = NemenyiCd(7, 45, 2.949);
  const bool ok = std::fabs(chi2 - 62.5275) <= 0.01 &&
                  std::fabs(f - 15.4359) <= 0.01 &&
                  std::fabs(cd30 - 1.645) <= 0.001 &&
                  std::fabs(cd45 - 1.343) <= 0.001;
  return {ok, Fmt("chi2_F %.4f, F_F %.4f, CD(N=30) %.4f, CD(N=45) %.4f", chi2,
                  f, cd30, cd45)};
}

// ---------------------------------------------------------------------------
// 10. AUC against a brute-force pairwise count.

Outcome AucOracle() {
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 49);
    Eigen::VectorXd truth(n), scores(n);
    for (int i = 0; i < n; ++i) {
      truth(i) = rng() % 2 ? 1.0 : -1.0;
      // Alternate between continuous and coarsely tied scores.
      scores(i) = trial % 2 ? std::ldexp(static_cast<double>(rng() >> 11), -53)
                            : static_cast<double>(rng() % 5);
    }
    truth(0) = 1.0;
    truth(n - 1) = -1.0;
    double wins = 0.0, pairs = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (truth(i) != 1.0 || truth(j) != -1.0) continue;
        pairs += 1.0;
        wins += scores(i) > scores(j) ? 1.0 : scores(i) == scores(j) ? 0.5 : 0.0;
      }
    }
    worst = std::max(worst, std::fabs(Auc(RocCurve(scores, truth)) - wins / pairs));
  }
  return {worst <= 1e-10, Fmt("max |sweep AUC - pairwise AUC| %.2e", worst)};
}

// ---------------------------------------------------------------------------
// 11. Generalization bound.

Outcome Bound() {
  const double v = GeneralizationBoundValue(0, 0, 100, 100, 100, 1.0, 0.05, 1.0);
  bool monotone = true;
  double prev = INFINITY;
  for (Eigen::Index n = 2; n <= 5000; n += 7) {
    const double nd = static_cast<double>(n);
    const double b = GeneralizationBoundValue(0, 0, n, nd, nd, 1.0, 0.05, 1.0);
    if (b > prev) monotone = false;
    prev = b;
  }
  return {std::fabs(v - 0.6903) <= 0.001 && monotone,
          Fmt("bound %.6f, monotone in n: ", v) + (monotone ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 12. CLI reproducibility.

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Manifests keep everything except the wall-clock lines.
std::string StripClock(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.find("\"started_at\"") != std::string::npos ||
        line.find("\"wall_clock_seconds\"") != std::string::npos) {
      continue;
    }
    out += line + '\n';
  }
  return out;
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string body = Slurp(e.path());
    if (e.path().filename().string().find("manifest") != std::string::npos) {
      body = StripClock(body);
    }
    files[fs::relative(e.path(), dir).string()] = body;
  }
  return files;
}

Outcome Reproducibility() {
  const fs::path root = fs::temp_directory_path() / "wavemv_acceptance_cli";
  fs::remove_all(root);
  const fs::path inputs = root / "inputs";
  const fs::path work = root / "work";
  fs::create_directories(inputs);
  const TwoViewDataset d = MakeSyntheticTwoView(60, 3.0, 1.0, 12);
  const std::string v1 = (inputs / "view1.csv").string();
  const std::string v2 = (inputs / "view2.csv").string();
  WriteTwoViewCsv(d, v1, v2, "");
  const std::string acc = (inputs / "acc.csv").string();
  {
    std::ofstream out(acc);
    out << "a,0.91,0.85,0.77,0.88\nb,0.81,0.86,0.70,0.80\nc,0.75,0.80,0.72,0.79\n";
  }
  const std::string model = (inputs / "model.json").string();
  std::ostringstream sink;
  if (wavemv::cli::Run({"train", "--view1", v1, "--view2", v2,
                        "--labels-in-view1", "--out", model},
                       sink, sink) != 0) {
    return {false, "could not train the model used by predict"};
  }

  const std::string w = work.string();
  const std::vector<std::vector<std::string>> commands = {
      {"train", "--view1", v1, "--labels-in-view1", "--synthesize-view2", "0.95",
       "--out", w + "/model.json", "--trace", w + "/trace.csv"},
      {"predict", "--model", model, "--view1", v1, "--view2", v2,
       "--labels-in-view1", "--out", w + "/pred.csv", "--scores",
       w + "/scores.csv"},
      {"eval", "--view1", v1, "--view2", v2, "--labels-in-view1", "--noise",
       "0.1", "--standardize", "--seed", "5", "--out-dir", w},
      {"noise-sweep", "--view1", v1, "--view2", v2, "--labels-in-view1",
       "--rates", "0.05,0.2", "--out-dir", w},
      {"tune", "--view1", v1, "--view2", v2, "--labels-in-view1", "--grid-c",
       "0.5,2", "--grid-sigma", "1,3", "--folds", "3", "--out-dir", w},
      {"stats", "--input", acc, "--out-dir", w},
      {"trace", "--view1", v1, "--view2", v2, "--labels-in-view1", "--out",
       w + "/trace.csv"},
  };
  int identical = 0;
  std::string failed;
  for (const auto& cmd : commands) {
    std::map<std::string, std::string> runs[2];
    bool ran = true;
    for (auto& snapshot : runs) {
      fs::remove_all(work);
      fs::create_directories(work);
      std::ostringstream out, err;
      if (wavemv::cli::Run(cmd, out, err) != 0) ran = false;
      snapshot = Snapshot(work);
    }
    if (ran && !runs[0].empty() && runs[0] == runs[1]) {
      ++identical;
    } else {
      failed += " " + cmd.front();
    }
  }
  fs::remove_all(root);
  const bool ok = identical == static_cast<int>(commands.size());
  return {ok, Fmt("%.0f of %.0f commands byte-identical on repeat", identical,
                  static_cast<double>(commands.size())) +
                  (failed.empty() ? "" : "; differing:" + failed)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "wave-loss correctness", 1, LossCorrectness},
      {2, "pointwise 0-1 convergence", 1, StepConvergence},
      {3, "classification calibration", 5, Calibration},
      {4, "ADMM internal consistency", 30, AdmmConsistency},
      {5, "convergence behavior", 60, ConvergenceBehavior},
      {6, "local-optimality probe", 60, LocalOptimality},
      {7, "end-to-end learning", 60, EndToEnd},
      {8, "noise robustness", 120, NoiseRobustness},
      {9, "statistics oracle", 1, Statistics},
      {10, "AUC oracle", 5, AucOracle},
      {11, "bound evaluator", 1, Bound},
      {12, "CLI reproducibility", 60, Reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2fs of %.0fs%s]\n",
                pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
