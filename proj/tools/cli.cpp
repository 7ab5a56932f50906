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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavemv/wavemv.h"

namespace wavemv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 42;
// Independent random streams derived from the run seed.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(wmv_status status, const std::string& context) {
  if (status != WMV_OK) {
    throw RuntimeError(context + ": " + wmv_status_name(status) + ": " +
                       wmv_last_error());
  }
}

struct DatasetDeleter {
  void operator()(wmv_dataset* p) const { wmv_dataset_free(p); }
};
struct ModelDeleter {
  void operator()(wmv_model* p) const { wmv_model_free(p); }
};
struct TraceDeleter {
  void operator()(wmv_trace* p) const { wmv_trace_free(p); }
};
using Dataset = std::unique_ptr<wmv_dataset, DatasetDeleter>;
using Model = std::unique_ptr<wmv_model, ModelDeleter>;
using Trace = std::unique_ptr<wmv_trace, TraceDeleter>;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Human-readable number for log lines.
std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeError("error writing " + path.string());
}

void WriteJson(const fs::path& path, const ordered_json& j) {
  WriteText(path, j.dump(2) + "\n");
}

std::string UtcNow() {
  const std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// Option groups shared by several commands.

struct DataOptions {
  std::string view1;
  std::string view2;
  std::string labels;
  bool labels_in_view1 = false;
  bool header = false;
  bool zero_one = false;
  double synthesize_view2 = 0.0;

  void Register(CLI::App* app, bool labeled) {
    app->add_option("--view1", view1, "View-1 feature CSV")->required();
    app->add_option("--view2", view2, "View-2 feature CSV");
    app->add_option("--synthesize-view2", synthesize_view2,
                    "Derive view 2 from view 1 by PCA, keeping this fraction "
                    "of the variance")
        ->check(CLI::Range(0.0, 1.0));
    app->add_flag("--header", header, "Input CSV files start with a header");
    if (labeled) {
      app->add_option("--labels", labels, "Single-column label CSV");
      app->add_flag("--labels-in-view1", labels_in_view1,
                    "Labels are the last column of the view-1 file");
      app->add_flag("--zero-one-labels", zero_one,
                    "Labels are 0/1 instead of -1/+1");
    }
  }

  Dataset Load(bool labeled) const {
    if (!view2.empty() && synthesize_view2 > 0) {
      throw UsageError("--view2 and --synthesize-view2 are exclusive");
    }
    wmv_load_options opts;
    wmv_load_options_default(&opts);
    opts.view1_path = view1.c_str();
    opts.view2_path = view2.empty() ? nullptr : view2.c_str();
    opts.has_header = header ? 1 : 0;
    opts.zero_one_labels = zero_one ? 1 : 0;
    opts.synthesize_view2 = synthesize_view2;
    if (!labeled) {
      opts.label_source = WMV_LABELS_NONE;
    } else if (labels_in_view1 == !labels.empty()) {
      throw UsageError("give exactly one of --labels and --labels-in-view1");
    } else if (labels_in_view1) {
      opts.label_source = WMV_LABELS_VIEW1_LAST;
    } else {
      opts.label_source = WMV_LABELS_FILE;
      opts.labels_path = labels.c_str();
    }
    wmv_dataset* raw = nullptr;
    Check(wmv_dataset_load(&opts, &raw), "loading " + view1);
    Dataset ds(raw);
    if (labeled && wmv_dataset_cols2(ds.get()) == 0) {
      throw UsageError("view 2 is required: pass --view2 or --synthesize-view2");
    }
    return ds;
  }
};

struct HyperOptions {
  wmv_hyperparams hp;
  std::optional<double> sigma;
  std::optional<double> sigma1;
  std::optional<double> sigma2;

  HyperOptions() { wmv_hyperparams_default(&hp); }

  void Register(CLI::App* app) {
    app->add_option("--gamma", hp.gamma, "View-1 weight")->capture_default_str();
    app->add_option("--c1", hp.c1, "View-1 loss weight")->capture_default_str();
    app->add_option("--c2", hp.c2, "View-2 loss weight")->capture_default_str();
    app->add_option("--d", hp.d, "Co-regularization weight")
        ->capture_default_str();
    app->add_option("--lambda1", hp.lambda1, "View-1 wave-loss bound")
        ->capture_default_str();
    app->add_option("--a1", hp.a1, "View-1 wave-loss shape")
        ->capture_default_str();
    app->add_option("--lambda2", hp.lambda2, "View-2 wave-loss bound")
        ->capture_default_str();
    app->add_option("--a2", hp.a2, "View-2 wave-loss shape")
        ->capture_default_str();
    app->add_option("--sigma", sigma, "Gaussian width for both views");
    app->add_option("--sigma1", sigma1, "View-1 Gaussian width");
    app->add_option("--sigma2", sigma2, "View-2 Gaussian width");
    app->add_option("--kappa1", hp.kappa[0], "View-1 penalty for the margin constraint")
        ->capture_default_str();
    app->add_option("--kappa2", hp.kappa[1], "View-2 penalty for the margin constraint")
        ->capture_default_str();
    app->add_option("--kappa3", hp.kappa[2], "View-1 penalty for the slack sign constraint")
        ->capture_default_str();
    app->add_option("--kappa4", hp.kappa[3], "View-2 penalty for the slack sign constraint")
        ->capture_default_str();
    app->add_option("--tau1", hp.tau1, "View-1 dual step length")
        ->capture_default_str();
    app->add_option("--tau2", hp.tau2, "View-2 dual step length")
        ->capture_default_str();
    app->add_option("--gd-rate", hp.gd_rate, "Slack gradient step")
        ->capture_default_str();
    app->add_option("--t1-max", hp.t1_max, "Outer iteration cap")
        ->capture_default_str();
    app->add_option("--t2-max", hp.t2_max, "Inner iteration cap")
        ->capture_default_str();
    app->add_option("--tol-obj", hp.tol_obj, "Relative objective change to stop")
        ->capture_default_str();
    app->add_option("--tol-res", hp.tol_res, "Residual norm to stop")
        ->capture_default_str();
    app->add_option("--tol-grad", hp.tol_grad, "Slack gradient norm to stop")
        ->capture_default_str();
  }

  wmv_hyperparams Resolve() const {
    wmv_hyperparams out = hp;
    if (sigma) out.sigma1 = out.sigma2 = *sigma;
    if (sigma1) out.sigma1 = *sigma1;
    if (sigma2) out.sigma2 = *sigma2;
    if (wmv_hyperparams_validate(&out) != WMV_OK) {
      throw UsageError(wmv_last_error());
    }
    return out;
  }
};

ordered_json HyperJson(const wmv_hyperparams& hp) {
  return ordered_json{
      {"gamma", hp.gamma},     {"c1", hp.c1},
      {"c2", hp.c2},           {"d", hp.d},
      {"lambda1", hp.lambda1}, {"a1", hp.a1},
      {"lambda2", hp.lambda2}, {"a2", hp.a2},
      {"sigma1", hp.sigma1},   {"sigma2", hp.sigma2},
      {"kappa", {hp.kappa[0], hp.kappa[1], hp.kappa[2], hp.kappa[3]}},
      {"tau1", hp.tau1},       {"tau2", hp.tau2},
      {"gd_rate", hp.gd_rate}, {"t1_max", hp.t1_max},
      {"t2_max", hp.t2_max},   {"tol_obj", hp.tol_obj},
      {"tol_res", hp.tol_res}, {"tol_grad", hp.tol_grad}};
}

// Every option of the command as resolved after flags, config and defaults.
ordered_json OptionEcho(const CLI::App* app) {
  ordered_json j = ordered_json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (opt->get_expected_max() == 0) {
        j[name] = true;
      } else if (r.size() == 1) {
        j[name] = r.front();
      } else {
        j[name] = r;
      }
    } else if (opt->get_expected_max() == 0) {
      j[name] = false;
    } else if (!opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    } else {
      j[name] = nullptr;
    }
  }
  return j;
}

class Manifest {
 public:
  Manifest(std::string command, const CLI::App* app, std::uint64_t seed)
      : command_(std::move(command)),
        app_(app),
        seed_(seed),
        started_(UtcNow()),
        clock_(std::chrono::steady_clock::now()) {}

  ordered_json& extra() { return extra_; }

  void Write(const fs::path& path) const {
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - clock_)
                               .count();
    ordered_json j;
    j["command"] = command_;
    j["version"] = wmv_version();
    j["seed"] = seed_;
    j["options"] = OptionEcho(app_);
    for (const auto& [k, v] : extra_.items()) j[k] = v;
    j["started_at"] = started_;
    j["wall_clock_seconds"] = seconds;
    WriteJson(path, j);
  }

 private:
  std::string command_;
  const CLI::App* app_;
  std::uint64_t seed_;
  std::string started_;
  std::chrono::steady_clock::time_point clock_;
  ordered_json extra_ = ordered_json::object();
};

fs::path ManifestBeside(const fs::path& out) {
  return fs::path(out.string() + ".manifest.json");
}

std::vector<double> Labels(const wmv_dataset* ds) {
  std::vector<double> y(wmv_dataset_size(ds));
  Check(wmv_dataset_labels(ds, y.data(), y.size()), "reading labels");
  return y;
}

std::vector<double> Decision(const wmv_model* m, const wmv_dataset* ds) {
  std::vector<double> f(wmv_dataset_size(ds));
  Check(wmv_model_decision(m, ds, f.data(), f.size()), "decision function");
  return f;
}

std::vector<double> Signs(const std::vector<double>& f) {
  std::vector<double> s(f.size());
  for (size_t i = 0; i < f.size(); ++i) s[i] = f[i] >= 0.0 ? 1.0 : -1.0;
  return s;
}

struct FitOutcome {
  Model model;
  Trace trace;
};

// Fits and, on failure, still hands back whatever trace the solver produced.
wmv_status TryFit(const wmv_dataset* ds, const wmv_hyperparams& hp,
                  FitOutcome& out) {
  wmv_model* m = nullptr;
  wmv_trace* t = nullptr;
  const wmv_status s = wmv_model_fit(ds, &hp, &m, &t);
  out.model.reset(m);
  out.trace.reset(t);
  return s;
}

std::string TraceCsv(const wmv_trace* trace) {
  std::string s = "iter,objective,res1,res2,res3,res4\n";
  const size_t n = wmv_trace_length(trace);
  for (size_t i = 0; i < n; ++i) {
    int iter = 0;
    double obj = 0;
    double res[4];
    Check(wmv_trace_record(trace, i, &iter, &obj, res), "reading trace");
    s += std::to_string(iter) + ',' + Num(obj);
    for (double r : res) s += ',' + Num(r);
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation protocol shared by eval and noise-sweep: seeded split, optional
// standardization, training-label noise, fit, test metrics.

struct EvalSettings {
  double train_fraction = 0.7;
  bool standardize = false;
  double delta = 1.0;
  double theta = 0.05;
};

struct EvalOutcome {
  ordered_json summary;
  std::string roc_csv;
};

EvalOutcome EvaluateOnce(const wmv_dataset* data, const wmv_hyperparams& hp,
                         const EvalSettings& settings, double noise_rate,
                         std::uint64_t seed) {
  wmv_dataset* tr = nullptr;
  wmv_dataset* te = nullptr;
  Check(wmv_dataset_split(data, settings.train_fraction,
                          wmv_derive_seed(seed, kSplitStream), &tr, &te),
        "splitting");
  Dataset train(tr), test(te);
  if (settings.standardize) {
    Check(wmv_dataset_standardize(train.get(), test.get(), &tr, &te),
          "standardizing");
    train.reset(tr);
    test.reset(te);
  }
  if (noise_rate > 0) {
    wmv_dataset* noisy = nullptr;
    Check(wmv_dataset_inject_noise(train.get(), noise_rate,
                                   wmv_derive_seed(seed, kNoiseStream), &noisy),
          "injecting label noise");
    train.reset(noisy);
  }

  FitOutcome fit;
  Check(TryFit(train.get(), hp, fit), "training");

  const auto y_train = Labels(train.get());
  const auto y_test = Labels(test.get());
  const auto f_train = Decision(fit.model.get(), train.get());
  const auto f_test = Decision(fit.model.get(), test.get());
  const auto p_test = Signs(f_test);
  const size_t n_test = y_test.size();

  double train_acc = 0, test_acc = 0;
  Check(wmv_accuracy(Signs(f_train).data(), y_train.data(), y_train.size(),
                     &train_acc),
        "accuracy");
  Check(wmv_accuracy(p_test.data(), y_test.data(), n_test, &test_acc),
        "accuracy");
  int conf[4];
  Check(wmv_confusion(p_test.data(), y_test.data(), n_test, conf),
        "confusion");

  ordered_json summary;
  summary["noise_rate"] = noise_rate;
  summary["n_train"] = y_train.size();
  summary["n_test"] = n_test;
  summary["train_accuracy"] = train_acc;
  summary["test_accuracy"] = test_acc;
  summary["confusion"] = {
      {"tp", conf[0]}, {"tn", conf[1]}, {"fp", conf[2]}, {"fn", conf[3]}};

  std::string roc = "fpr,tpr\n";
  std::vector<double> fpr(n_test + 1), tpr(n_test + 1);
  size_t count = 0;
  if (wmv_roc_curve(f_test.data(), y_test.data(), n_test, fpr.data(),
                    tpr.data(), fpr.size(), &count) == WMV_OK) {
    double auc = 0;
    Check(wmv_auc(fpr.data(), tpr.data(), count, &auc), "AUC");
    summary["auc"] = auc;
    for (size_t i = 0; i < count; ++i) {
      roc += Num(fpr[i]) + ',' + Num(tpr[i]) + '\n';
    }
  } else {
    // Single-class test split: the curve is undefined.
    summary["auc"] = nullptr;
  }

  std::vector<double> z1(y_train.size()), z2(y_train.size());
  Check(wmv_model_slacks(fit.model.get(), z1.data(), z2.data(), z1.size()),
        "slacks");
  double bound = 0;
  Check(wmv_generalization_bound(fit.model.get(), train.get(), z1.data(),
                                 z2.data(), z1.size(), settings.delta,
                                 settings.theta, 0.0, &bound),
        "generalization bound");
  summary["generalization_bound"] = {
      {"delta", settings.delta}, {"theta", settings.theta}, {"value", bound}};
  summary["iterations"] = wmv_trace_length(fit.trace.get());
  summary["converged"] = wmv_model_converged(fit.model.get()) != 0;
  return {summary, roc};
}

void WriteEvalOutcome(const fs::path& dir, const EvalOutcome& o) {
  WriteJson(dir / "summary.json", o.summary);
  WriteText(dir / "roc.csv", o.roc_csv);
}

void RegisterEvalSettings(CLI::App* app, EvalSettings& s) {
  app->add_option("--train-fraction", s.train_fraction,
                  "Fraction of rows used for training")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app->add_flag("--standardize", s.standardize,
                "z-score features with training statistics");
  app->add_option("--bound-delta", s.delta, "View weight in the bound")
      ->capture_default_str();
  app->add_option("--bound-theta", s.theta, "Bound confidence parameter")
      ->capture_default_str();
}

std::vector<double> ParseList(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " is empty");
  return out;
}

// ---------------------------------------------------------------------------
// Config files: one key=value per line, keys are flag names without dashes,
// '#' starts a comment. Keys already given on the command line are skipped,
// the rest are appended as flags, so command-line values always win.

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool OnCommandLine(const std::vector<std::string>& args,
                   const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file " + path);
  std::vector<std::string> out = args;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) +
                       ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    const std::string flag = "--" + key;
    if (key.empty() || key == "config") {
      throw UsageError(path + ":" + std::to_string(line_no) + ": bad key");
    }
    if (OnCommandLine(args, flag)) continue;
    if (value == "true") {
      out.push_back(flag);
    } else if (value != "false") {
      out.push_back(flag);
      out.push_back(value);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands.

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::string config;
  void Register(CLI::App* app) {
    app->add_option("--seed", seed, "Seed for every random choice")
        ->capture_default_str();
    app->add_option("--config", config,
                    "key=value file; flags on the command line win");
  }
};

int CmdTrain(CLI::App* app, const DataOptions& data, const HyperOptions& h,
             const Common& common, const std::string& out,
             const std::string& trace_path, const std::string& export_dir,
             std::ostream& log) {
  const wmv_hyperparams hp = h.Resolve();
  Manifest manifest("train", app, common.seed);
  Dataset ds = data.Load(true);
  if (!export_dir.empty()) {
    fs::create_directories(export_dir);
    const fs::path d(export_dir);
    Check(wmv_dataset_write_csv(ds.get(), (d / "view1.csv").c_str(),
                                (d / "view2.csv").c_str(),
                                (d / "labels.csv").c_str()),
          "exporting views");
  }
  FitOutcome fit;
  const wmv_status s = TryFit(ds.get(), hp, fit);
  if (!trace_path.empty() && fit.trace) {
    WriteText(trace_path, TraceCsv(fit.trace.get()));
  }
  Check(s, "training");
  if (fs::path(out).has_parent_path()) {
    fs::create_directories(fs::path(out).parent_path());
  }
  Check(wmv_model_save(fit.model.get(), out.c_str()), "saving model");
  manifest.extra()["hyperparams"] = HyperJson(hp);
  manifest.extra()["outputs"] = {out};
  manifest.Write(ManifestBeside(out));
  log << "trained on " << wmv_dataset_size(ds.get()) << " samples in "
      << wmv_trace_length(fit.trace.get()) << " iterations"
      << (wmv_model_converged(fit.model.get()) ? "" : " (not converged)")
      << "\n";
  return 0;
}

int CmdPredict(CLI::App* app, const Common& common, const std::string& model_path,
               const DataOptions& data, bool labels_in_view1,
               const std::string& out, const std::string& scores_path,
               std::ostream& log) {
  Manifest manifest("predict", app, common.seed);
  wmv_model* raw = nullptr;
  Check(wmv_model_load(model_path.c_str(), &raw), "loading " + model_path);
  Model model(raw);

  wmv_load_options opts;
  wmv_load_options_default(&opts);
  opts.view1_path = data.view1.c_str();
  opts.view2_path = data.view2.empty() ? nullptr : data.view2.c_str();
  opts.has_header = data.header ? 1 : 0;
  opts.label_source = labels_in_view1 ? WMV_LABELS_VIEW1_LAST : WMV_LABELS_NONE;
  wmv_dataset* dsraw = nullptr;
  Check(wmv_dataset_load(&opts, &dsraw), "loading " + data.view1);
  Dataset ds(dsraw);

  const auto f = Decision(model.get(), ds.get());
  std::string preds, scores;
  for (double v : f) {
    preds += v >= 0.0 ? "1\n" : "-1\n";
    scores += Num(v) + '\n';
  }
  WriteText(out, preds);
  ordered_json outputs = {out};
  if (!scores_path.empty()) {
    WriteText(scores_path, scores);
    outputs.push_back(scores_path);
  }
  manifest.extra()["outputs"] = outputs;
  manifest.Write(ManifestBeside(out));
  log << "wrote " << f.size() << " predictions\n";
  return 0;
}

int CmdEval(CLI::App* app, const DataOptions& data, const HyperOptions& h,
            const Common& common, const EvalSettings& settings,
            double noise_rate, const std::string& out_dir, std::ostream& log) {
  const wmv_hyperparams hp = h.Resolve();
  if (noise_rate < 0 || noise_rate > 1) {
    throw UsageError("--noise must lie in [0, 1]");
  }
  Manifest manifest("eval", app, common.seed);
  Dataset ds = data.Load(true);
  const EvalOutcome o = EvaluateOnce(ds.get(), hp, settings, noise_rate,
                                     common.seed);
  WriteEvalOutcome(out_dir, o);
  manifest.extra()["hyperparams"] = HyperJson(hp);
  manifest.Write(fs::path(out_dir) / "manifest.json");
  log << "test accuracy " << Short(o.summary["test_accuracy"].get<double>())
      << "\n";
  return 0;
}

std::string RateDir(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rate_%.2f", rate);
  return buf;
}

int CmdNoiseSweep(CLI::App* app, const DataOptions& data,
                  const HyperOptions& h, const Common& common,
                  const EvalSettings& settings, const std::string& rates_text,
                  const std::string& out_dir, std::ostream& log) {
  const wmv_hyperparams hp = h.Resolve();
  const auto rates = ParseList(rates_text, "--rates");
  for (double r : rates) {
    if (r < 0 || r > 1) throw UsageError("noise rates must lie in [0, 1]");
  }
  Manifest manifest("noise-sweep", app, common.seed);
  Dataset ds = data.Load(true);
  std::string table = "rate,train_accuracy,test_accuracy,auc\n";
  for (double r : rates) {
    const EvalOutcome o = EvaluateOnce(ds.get(), hp, settings, r, common.seed);
    WriteEvalOutcome(fs::path(out_dir) / RateDir(r), o);
    const auto& s = o.summary;
    table += Num(r) + ',' + Num(s["train_accuracy"].get<double>()) + ',' +
             Num(s["test_accuracy"].get<double>()) + ',' +
             (s["auc"].is_null() ? std::string("NA")
                                 : Num(s["auc"].get<double>())) +
             '\n';
    log << "rate " << Short(r) << ": test accuracy "
        << Short(s["test_accuracy"].get<double>()) << "\n";
  }
  WriteText(fs::path(out_dir) / "sweep.csv", table);
  manifest.extra()["hyperparams"] = HyperJson(hp);
  manifest.extra()["rates"] = rates;
  manifest.Write(fs::path(out_dir) / "manifest.json");
  return 0;
}

struct GridOptions {
  std::string gamma, c, d, sigma, lambda, a;

  void Register(CLI::App* app) {
    app->add_option("--grid-gamma", gamma, "Comma list for gamma");
    app->add_option("--grid-c", c, "Comma list for c1 = c2");
    app->add_option("--grid-d", d, "Comma list for d");
    app->add_option("--grid-sigma", sigma, "Comma list for sigma1 = sigma2");
    app->add_option("--grid-lambda", lambda,
                    "Comma list for lambda1 = lambda2");
    app->add_option("--grid-a", a, "Comma list for a1 = a2");
  }

  // Cartesian product in the order gamma, c, d, sigma, lambda, a (last
  // varies fastest). Unset axes keep the base value.
  std::vector<wmv_hyperparams> Expand(const wmv_hyperparams& base) const {
    auto axis = [](const std::string& text, double fallback, const char* flag) {
      return text.empty() ? std::vector<double>{fallback}
                          : ParseList(text, flag);
    };
    const auto gs = axis(gamma, base.gamma, "--grid-gamma");
    const auto cs = axis(c, base.c1, "--grid-c");
    const auto ds = axis(d, base.d, "--grid-d");
    const auto ss = axis(sigma, base.sigma1, "--grid-sigma");
    const auto ls = axis(lambda, base.lambda1, "--grid-lambda");
    const auto as = axis(a, base.a1, "--grid-a");
    std::vector<wmv_hyperparams> grid;
    for (double g : gs)
      for (double cv : cs)
        for (double dv : ds)
          for (double sv : ss)
            for (double lv : ls)
              for (double av : as) {
                wmv_hyperparams hp = base;
                hp.gamma = g;
                if (!c.empty()) hp.c1 = hp.c2 = cv;
                hp.d = dv;
                if (!sigma.empty()) hp.sigma1 = hp.sigma2 = sv;
                if (!lambda.empty()) hp.lambda1 = hp.lambda2 = lv;
                if (!a.empty()) hp.a1 = hp.a2 = av;
                if (wmv_hyperparams_validate(&hp) != WMV_OK) {
                  throw UsageError(std::string("grid entry invalid: ") +
                                   wmv_last_error());
                }
                grid.push_back(hp);
              }
    return grid;
  }
};

int CmdTune(CLI::App* app, const DataOptions& data, const HyperOptions& h,
            const Common& common, const GridOptions& grid_opts, int folds,
            const std::string& out_dir, std::ostream& log) {
  const wmv_hyperparams base = h.Resolve();
  const auto grid = grid_opts.Expand(base);
  if (folds < 2) throw UsageError("--folds must be at least 2");
  Manifest manifest("tune", app, common.seed);
  Dataset ds = data.Load(true);
  std::vector<double> mean(grid.size());
  size_t best = 0;
  Check(wmv_kfold_grid_search(ds.get(), grid.data(), grid.size(), folds,
                              common.seed, &best, mean.data()),
        "grid search");
  std::string table =
      "index,gamma,c1,c2,d,sigma1,sigma2,lambda1,a1,lambda2,a2,mean_accuracy\n";
  for (size_t i = 0; i < grid.size(); ++i) {
    const auto& g = grid[i];
    table += std::to_string(i);
    for (double v : {g.gamma, g.c1, g.c2, g.d, g.sigma1, g.sigma2, g.lambda1,
                     g.a1, g.lambda2, g.a2, mean[i]}) {
      table += ',' + Num(v);
    }
    table += '\n';
  }
  WriteText(fs::path(out_dir) / "grid.csv", table);
  ordered_json best_json;
  best_json["index"] = best;
  best_json["mean_accuracy"] = mean[best];
  best_json["folds"] = folds;
  best_json["hyperparams"] = HyperJson(grid[best]);
  WriteJson(fs::path(out_dir) / "best.json", best_json);
  manifest.extra()["grid_size"] = grid.size();
  manifest.Write(fs::path(out_dir) / "manifest.json");
  log << "best config " << best << " with mean accuracy " << Short(mean[best])
      << "\n";
  return 0;
}

struct AccuracyTable {
  std::vector<std::string> models;
  std::vector<double> values;  // row-major models x datasets
  size_t n_datasets = 0;
};

AccuracyTable ReadAccuracyTable(const std::string& path, bool header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot open " + path);
  AccuracyTable t;
  std::string line;
  size_t line_no = 0;
  bool skip = header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (skip) {
      skip = false;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    t.models.push_back(cell);
    size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        t.values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw RuntimeError(path + ":" + std::to_string(line_no) + ": '" +
                           cell + "' is not a number");
      }
      ++count;
    }
    if (t.models.size() == 1) {
      t.n_datasets = count;
    } else if (count != t.n_datasets) {
      throw RuntimeError(path + ":" + std::to_string(line_no) +
                         ": ragged row");
    }
  }
  if (t.models.empty() || t.n_datasets == 0) {
    throw RuntimeError(path + ": no accuracy rows");
  }
  return t;
}

int CmdStats(CLI::App* app, const Common& common, const std::string& input,
             bool header, double alpha, std::optional<double> q_override,
             const std::string& out_dir, std::ostream& log) {
  Manifest manifest("stats", app, common.seed);
  if (!q_override && alpha != 0.05 && alpha != 0.10) {
    throw UsageError("--alpha must be 0.05 or 0.10 unless --q is given");
  }
  const AccuracyTable t = ReadAccuracyTable(input, header);
  const size_t p = t.models.size();
  const size_t n = t.n_datasets;
  std::vector<double> ranks(p * n), avg(p);
  Check(wmv_rank_models(t.values.data(), p, n, ranks.data(), avg.data()),
        "ranking");
  double chi2 = 0;
  Check(wmv_friedman_chi2(avg.data(), p, n, &chi2), "Friedman test");
  std::optional<double> ff;
  double value = 0;
  if (wmv_friedman_f(chi2, p, n, &value) == WMV_OK) ff = value;
  std::optional<double> q = q_override;
  if (!q && wmv_nemenyi_q_alpha(p, alpha, &value) == WMV_OK) q = value;
  std::optional<double> cd;
  if (q) {
    Check(wmv_nemenyi_cd(p, n, *q, &value), "critical difference");
    cd = value;
  }

  std::string ranks_csv = "model,avg_rank\n";
  for (size_t i = 0; i < p; ++i) ranks_csv += t.models[i] + ',' + Num(avg[i]) + '\n';
  const auto opt_num = [](const std::optional<double>& v) {
    return v ? Num(*v) : std::string("NA");
  };
  const std::string stats_csv =
      "chi2_f,f_f,cd\n" + Num(chi2) + ',' + opt_num(ff) + ',' + opt_num(cd) + '\n';
  const auto opt_json = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json summary;
  summary["models"] = t.models;
  summary["n_datasets"] = n;
  summary["avg_ranks"] = avg;
  ordered_json rank_rows = ordered_json::array();
  for (size_t i = 0; i < p; ++i) {
    rank_rows.push_back(std::vector<double>(ranks.begin() + i * n,
                                            ranks.begin() + (i + 1) * n));
  }
  summary["ranks"] = rank_rows;
  summary["chi2_f"] = chi2;
  summary["f_f"] = opt_json(ff);
  summary["alpha"] = alpha;
  summary["q_alpha"] = opt_json(q);
  summary["cd"] = opt_json(cd);

  const fs::path dir(out_dir);
  WriteText(dir / "ranks.csv", ranks_csv);
  WriteText(dir / "stats.csv", stats_csv);
  WriteJson(dir / "summary.json", summary);
  manifest.Write(dir / "manifest.json");
  log << "chi2_F " << Short(chi2) << ", F_F " << (ff ? Short(*ff) : "NA")
      << ", CD " << (cd ? Short(*cd) : "NA") << "\n";
  return 0;
}

int CmdTrace(CLI::App* app, const DataOptions& data, const HyperOptions& h,
             const Common& common, const std::string& out, std::ostream& log) {
  const wmv_hyperparams hp = h.Resolve();
  Manifest manifest("trace", app, common.seed);
  Dataset ds = data.Load(true);
  FitOutcome fit;
  const wmv_status s = TryFit(ds.get(), hp, fit);
  if (fit.trace) WriteText(out, TraceCsv(fit.trace.get()));
  manifest.extra()["hyperparams"] = HyperJson(hp);
  manifest.Write(ManifestBeside(out));
  Check(s, "training");
  log << "wrote " << wmv_trace_length(fit.trace.get()) << " trace records\n";
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Two-view kernel classifier with the wave loss", "wavemv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wmv_version()));
  app.footer(
      "Settings resolve as: command-line flag, then --config file, then "
      "built-in default. Config files hold one key=value line per flag, "
      "using the flag name without dashes.");

  Common common;
  DataOptions data;
  HyperOptions hyper;
  EvalSettings eval_settings;
  GridOptions grid;
  std::string out_path, trace_path, export_dir, model_path, scores_path;
  std::string out_dir, rates = "0.05,0.10,0.15,0.20", stats_input;
  double noise_rate = 0.0, alpha = 0.05;
  std::optional<double> q_override;
  int folds = 5;
  bool predict_labels_in_view1 = false, stats_header = false;

  auto* train = app.add_subcommand("train", "Fit a model and save it");
  common.Register(train);
  data.Register(train, true);
  hyper.Register(train);
  train->add_option("--out", out_path, "Model JSON path")->required();
  train->add_option("--trace", trace_path, "Also write the convergence trace");
  train->add_option("--export-views", export_dir,
                    "Write the two views and labels as CSV to this directory");

  auto* predict = app.add_subcommand("predict", "Label new samples");
  common.Register(predict);
  predict->add_option("--model", model_path, "Model JSON")->required();
  data.Register(predict, false);
  predict->add_flag("--labels-in-view1", predict_labels_in_view1,
                    "Drop the last view-1 column (labels) before predicting");
  predict->add_option("--out", out_path, "Prediction CSV, one label per row")
      ->required();
  predict->add_option("--scores", scores_path, "Also write decision values");

  auto* eval = app.add_subcommand("eval", "Train/test split evaluation");
  common.Register(eval);
  data.Register(eval, true);
  hyper.Register(eval);
  RegisterEvalSettings(eval, eval_settings);
  eval->add_option("--noise", noise_rate,
                   "Fraction of training labels to flip")
      ->capture_default_str();
  eval->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("noise-sweep",
                                   "Evaluation repeated at several label-noise "
                                   "rates");
  common.Register(sweep);
  data.Register(sweep, true);
  hyper.Register(sweep);
  RegisterEvalSettings(sweep, eval_settings);
  sweep->add_option("--rates", rates, "Comma list of noise rates")
      ->capture_default_str();
  sweep->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* tune = app.add_subcommand("tune", "Stratified k-fold grid search");
  common.Register(tune);
  data.Register(tune, true);
  hyper.Register(tune);
  grid.Register(tune);
  tune->add_option("--folds", folds, "Number of folds")->capture_default_str();
  tune->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* stats = app.add_subcommand(
      "stats", "Friedman test and Nemenyi critical difference");
  common.Register(stats);
  stats->add_option("--input", stats_input,
                    "CSV: model name, then one accuracy per dataset")
      ->required();
  stats->add_flag("--header", stats_header, "Input starts with a header");
  stats->add_option("--alpha", alpha, "Significance level (0.05 or 0.10)")
      ->capture_default_str();
  stats->add_option("--q", q_override, "Critical value q_alpha override");
  stats->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* trace = app.add_subcommand("trace", "Fit and write the convergence trace");
  common.Register(trace);
  data.Register(trace, true);
  hyper.Register(trace);
  trace->add_option("--out", out_path, "Trace CSV path")->required();

  std::vector<std::string> expanded;
  try {
    expanded = ExpandConfig(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help()
                                          : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << wmv_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (train->parsed()) {
      return CmdTrain(train, data, hyper, common, out_path, trace_path,
                      export_dir, out);
    }
    if (predict->parsed()) {
      return CmdPredict(predict, common, model_path, data,
                        predict_labels_in_view1, out_path, scores_path, out);
    }
    if (eval->parsed()) {
      return CmdEval(eval, data, hyper, common, eval_settings, noise_rate,
                     out_dir, out);
    }
    if (sweep->parsed()) {
      return CmdNoiseSweep(sweep, data, hyper, common, eval_settings, rates,
                           out_dir, out);
    }
    if (tune->parsed()) {
      return CmdTune(tune, data, hyper, common, grid, folds, out_dir, out);
    }
    if (stats->parsed()) {
      return CmdStats(stats, common, stats_input, stats_header, alpha,
                      q_override, out_dir, out);
    }
    if (trace->parsed()) {
      return CmdTrace(trace, data, hyper, common, out_path, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace wavemv::cli
