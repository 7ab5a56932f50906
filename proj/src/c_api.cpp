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

#include "wavemv/wavemv.h"

#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wavemv/data.hpp"
#include "wavemv/error.hpp"
#include "wavemv/eval.hpp"
#include "wavemv/loss.hpp"
#include "wavemv/model.hpp"
#include "wavemv/solver.hpp"

#ifndef WAVEMV_VERSION_STRING
#define WAVEMV_VERSION_STRING "0.0.0-unknown"
#endif

using wavemv::ErrorCode;
using wavemv::Fail;

struct wmv_dataset {
  wavemv::TwoViewDataset data;
  bool has_labels = true;
  bool has_view2 = true;
  std::optional<wavemv::PcaProjection> projection;
};

struct wmv_model {
  wavemv::TrainedModel model;
  bool converged = false;
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> slacks;
};

struct wmv_trace {
  wavemv::ConvergenceTrace trace;
};

namespace {

thread_local std::string g_last_error;

wmv_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return WMV_ERR_INVALID_ARGUMENT;
    case ErrorCode::kShape: return WMV_ERR_SHAPE;
    case ErrorCode::kDomain: return WMV_ERR_DOMAIN;
    case ErrorCode::kNumerical: return WMV_ERR_NUMERICAL;
    case ErrorCode::kFormat: return WMV_ERR_FORMAT;
    case ErrorCode::kIo: return WMV_ERR_IO;
    case ErrorCode::kUnsupportedVersion: return WMV_ERR_UNSUPPORTED_VERSION;
    case ErrorCode::kDegenerate: return WMV_ERR_DEGENERATE;
    case ErrorCode::kStratification: return WMV_ERR_STRATIFICATION;
    case ErrorCode::kInput: return WMV_ERR_INPUT;
  }
  return WMV_ERR_INTERNAL;
}

template <typename F>
wmv_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return WMV_OK;
  } catch (const wavemv::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WMV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WMV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return WMV_ERR_INTERNAL;
  }
}

template <typename T>
void Require(const T* p, const char* what) {
  if (p == nullptr) Fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

wavemv::Hyperparams ToCpp(const wmv_hyperparams& c) {
  wavemv::Hyperparams hp;
  hp.gamma = c.gamma;
  hp.c1 = c.c1;
  hp.c2 = c.c2;
  hp.d = c.d;
  hp.wave1 = {c.lambda1, c.a1};
  hp.wave2 = {c.lambda2, c.a2};
  hp.kernel1.sigma = c.sigma1;
  hp.kernel2.sigma = c.sigma2;
  hp.kappa1 = c.kappa[0];
  hp.kappa2 = c.kappa[1];
  hp.kappa3 = c.kappa[2];
  hp.kappa4 = c.kappa[3];
  hp.tau1 = c.tau1;
  hp.tau2 = c.tau2;
  hp.gd_rate = c.gd_rate;
  hp.t1_max = c.t1_max;
  hp.t2_max = c.t2_max;
  hp.tol_obj = c.tol_obj;
  hp.tol_res = c.tol_res;
  hp.tol_grad = c.tol_grad;
  return hp;
}

wmv_hyperparams ToC(const wavemv::Hyperparams& hp) {
  wmv_hyperparams c;
  c.gamma = hp.gamma;
  c.c1 = hp.c1;
  c.c2 = hp.c2;
  c.d = hp.d;
  c.lambda1 = hp.wave1.lambda;
  c.a1 = hp.wave1.a;
  c.lambda2 = hp.wave2.lambda;
  c.a2 = hp.wave2.a;
  c.sigma1 = hp.kernel1.sigma;
  c.sigma2 = hp.kernel2.sigma;
  c.kappa[0] = hp.kappa1;
  c.kappa[1] = hp.kappa2;
  c.kappa[2] = hp.kappa3;
  c.kappa[3] = hp.kappa4;
  c.tau1 = hp.tau1;
  c.tau2 = hp.tau2;
  c.gd_rate = hp.gd_rate;
  c.t1_max = hp.t1_max;
  c.t2_max = hp.t2_max;
  c.tol_obj = hp.tol_obj;
  c.tol_res = hp.tol_res;
  c.tol_grad = hp.tol_grad;
  return c;
}

Eigen::Map<const Eigen::VectorXd> Vec(const double* p, size_t n) {
  return {p, static_cast<Eigen::Index>(n)};
}

void CheckCount(size_t got, Eigen::Index want, const char* what) {
  if (got != static_cast<size_t>(want)) {
    Fail(ErrorCode::kShape, std::string(what) + " buffer holds " +
                                std::to_string(got) + " entries, expected " +
                                std::to_string(want));
  }
}

void RequireLabels(const wmv_dataset* d) {
  if (!d->has_labels) Fail(ErrorCode::kInput, "dataset has no labels");
}

void RequireView2(const wmv_dataset* d) {
  if (!d->has_view2) Fail(ErrorCode::kInput, "dataset has no view 2");
}

// Copies the flags and projection of `like` onto a derived dataset.
wmv_dataset* Derived(const wmv_dataset* like, wavemv::TwoViewDataset data) {
  auto* out = new wmv_dataset;
  out->data = std::move(data);
  out->has_labels = like->has_labels;
  out->has_view2 = like->has_view2;
  out->projection = like->projection;
  return out;
}

const Eigen::MatrixXd& View2For(const wmv_model* m, const wmv_dataset* d,
                                Eigen::MatrixXd& scratch) {
  if (d->has_view2) return d->data.view2;
  if (!m->model.view2_projection) {
    Fail(ErrorCode::kInput,
         "dataset has no view 2 and the model stores no view-2 projection");
  }
  scratch = m->model.view2_projection->Transform(d->data.view1);
  return scratch;
}

}  // namespace

extern "C" {

const char* wmv_version(void) { return WAVEMV_VERSION_STRING; }

const char* wmv_last_error(void) { return g_last_error.c_str(); }

const char* wmv_status_name(wmv_status status) {
  switch (status) {
    case WMV_OK: return "ok";
    case WMV_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WMV_ERR_SHAPE: return "shape error";
    case WMV_ERR_DOMAIN: return "domain error";
    case WMV_ERR_NUMERICAL: return "numerical error";
    case WMV_ERR_FORMAT: return "format error";
    case WMV_ERR_IO: return "i/o error";
    case WMV_ERR_UNSUPPORTED_VERSION: return "unsupported version";
    case WMV_ERR_DEGENERATE: return "degenerate input";
    case WMV_ERR_STRATIFICATION: return "stratification error";
    case WMV_ERR_INPUT: return "input error";
    case WMV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

uint64_t wmv_derive_seed(uint64_t seed, uint64_t stream) {
  return wavemv::DeriveSeed(seed, stream);
}

void wmv_hyperparams_default(wmv_hyperparams* hp) {
  if (hp != nullptr) *hp = ToC(wavemv::Hyperparams{});
}

wmv_status wmv_hyperparams_validate(const wmv_hyperparams* hp) {
  return Guard([&] {
    Require(hp, "hyperparams");
    ToCpp(*hp).Validate();
  });
}

wmv_status wmv_wave_loss(double h, double lambda, double a, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = wavemv::WaveLoss(h, {lambda, a});
  });
}

void wmv_load_options_default(wmv_load_options* opts) {
  if (opts == nullptr) return;
  opts->view1_path = nullptr;
  opts->view2_path = nullptr;
  opts->labels_path = nullptr;
  opts->label_source = WMV_LABELS_VIEW1_LAST;
  opts->has_header = 0;
  opts->zero_one_labels = 0;
  opts->synthesize_view2 = 0.0;
}

wmv_status wmv_dataset_load(const wmv_load_options* opts, wmv_dataset** out) {
  return Guard([&] {
    Require(opts, "options");
    Require(out, "out");
    Require(opts->view1_path, "view1_path");
    *out = nullptr;
    const auto map = opts->zero_one_labels ? wavemv::LabelMap::kZeroOne
                                           : wavemv::LabelMap::kPlusMinusOne;
    const bool header = opts->has_header != 0;
    wavemv::CsvSchema v1_schema{header, std::nullopt, map};
    if (opts->label_source == WMV_LABELS_VIEW1_LAST) v1_schema.label_column = -1;
    auto table1 = wavemv::LoadCsv(opts->view1_path, v1_schema);
    const Eigen::Index n = table1.features.rows();

    auto ds = std::make_unique<wmv_dataset>();
    ds->data.view1 = std::move(table1.features);
    switch (opts->label_source) {
      case WMV_LABELS_NONE:
        ds->has_labels = false;
        ds->data.labels = Eigen::VectorXd::Ones(n);
        break;
      case WMV_LABELS_VIEW1_LAST:
        ds->data.labels = std::move(table1.labels);
        break;
      case WMV_LABELS_FILE: {
        Require(opts->labels_path, "labels_path");
        auto lt = wavemv::LoadCsv(opts->labels_path,
                                  wavemv::CsvSchema{header, -1, map});
        if (lt.features.cols() != 0) {
          Fail(ErrorCode::kFormat, std::string("labels file ") +
                                       opts->labels_path +
                                       " must have exactly one column");
        }
        ds->data.labels = std::move(lt.labels);
        break;
      }
      default:
        Fail(ErrorCode::kInvalidArgument, "unknown label source");
    }

    const bool synth = opts->synthesize_view2 != 0.0;
    if (opts->view2_path != nullptr && synth) {
      Fail(ErrorCode::kInvalidArgument,
           "give either a view-2 file or a synthesis threshold, not both");
    }
    if (opts->view2_path != nullptr) {
      auto t2 = wavemv::LoadCsv(opts->view2_path,
                                wavemv::CsvSchema{header, std::nullopt, map});
      ds->data.view2 = std::move(t2.features);
    } else if (synth) {
      ds->projection = wavemv::FitPca(ds->data.view1, opts->synthesize_view2);
      ds->data.view2 = ds->projection->Transform(ds->data.view1);
    } else {
      ds->has_view2 = false;
      ds->data.view2.resize(n, 0);
    }
    ds->data.Validate();
    *out = ds.release();
  });
}

wmv_status wmv_dataset_from_arrays(size_t n, size_t m1, const double* view1,
                                   size_t m2, const double* view2,
                                   const double* labels, wmv_dataset** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    if (n == 0 || m1 == 0) Fail(ErrorCode::kShape, "empty view 1");
    Require(view1, "view1");
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto rows = static_cast<Eigen::Index>(n);
    auto ds = std::make_unique<wmv_dataset>();
    ds->data.view1 = Eigen::Map<const RowMajor>(view1, rows,
                                                static_cast<Eigen::Index>(m1));
    if (m2 > 0) {
      Require(view2, "view2");
      ds->data.view2 = Eigen::Map<const RowMajor>(
          view2, rows, static_cast<Eigen::Index>(m2));
    } else {
      ds->has_view2 = false;
      ds->data.view2.resize(rows, 0);
    }
    if (labels != nullptr) {
      ds->data.labels = Vec(labels, n);
    } else {
      ds->has_labels = false;
      ds->data.labels = Eigen::VectorXd::Ones(rows);
    }
    ds->data.Validate();
    *out = ds.release();
  });
}

wmv_status wmv_dataset_make_synthetic(size_t n, double separation,
                                      double noise_std, uint64_t seed,
                                      wmv_dataset** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    auto ds = std::make_unique<wmv_dataset>();
    ds->data = wavemv::MakeSyntheticTwoView(static_cast<Eigen::Index>(n),
                                            separation, noise_std, seed);
    *out = ds.release();
  });
}

wmv_status wmv_dataset_synthesize_view2(const wmv_dataset* data,
                                        double threshold, wmv_dataset** out) {
  return Guard([&] {
    Require(data, "data");
    Require(out, "out");
    *out = nullptr;
    auto ds = std::make_unique<wmv_dataset>(*data);
    ds->projection = wavemv::FitPca(data->data.view1, threshold);
    ds->data.view2 = ds->projection->Transform(data->data.view1);
    ds->has_view2 = true;
    *out = ds.release();
  });
}

wmv_status wmv_dataset_split(const wmv_dataset* data, double train_fraction,
                             uint64_t seed, wmv_dataset** train,
                             wmv_dataset** test) {
  return Guard([&] {
    Require(data, "data");
    Require(train, "train");
    Require(test, "test");
    *train = nullptr;
    *test = nullptr;
    auto parts = wavemv::TrainTestSplit(data->data, train_fraction, seed);
    std::unique_ptr<wmv_dataset> a(Derived(data, std::move(parts.first)));
    std::unique_ptr<wmv_dataset> b(Derived(data, std::move(parts.second)));
    *train = a.release();
    *test = b.release();
  });
}

wmv_status wmv_dataset_standardize(const wmv_dataset* train,
                                   const wmv_dataset* test,
                                   wmv_dataset** train_out,
                                   wmv_dataset** test_out) {
  return Guard([&] {
    Require(train, "train");
    Require(test, "test");
    Require(train_out, "train_out");
    Require(test_out, "test_out");
    *train_out = nullptr;
    *test_out = nullptr;
    RequireView2(train);
    RequireView2(test);
    auto res = wavemv::Standardize(train->data, test->data);
    std::unique_ptr<wmv_dataset> a(Derived(train, std::move(res.train)));
    std::unique_ptr<wmv_dataset> b(Derived(test, std::move(res.test)));
    // A projection fit on raw view 1 no longer describes the scaled data.
    a->projection.reset();
    b->projection.reset();
    *train_out = a.release();
    *test_out = b.release();
  });
}

wmv_status wmv_dataset_inject_noise(const wmv_dataset* data, double rate,
                                    uint64_t seed, wmv_dataset** out) {
  return Guard([&] {
    Require(data, "data");
    Require(out, "out");
    *out = nullptr;
    RequireLabels(data);
    wavemv::TwoViewDataset noisy = data->data;
    noisy.labels = wavemv::InjectLabelNoise(data->data.labels, rate, seed);
    *out = Derived(data, std::move(noisy));
  });
}

wmv_status wmv_dataset_write_csv(const wmv_dataset* data,
                                 const char* view1_path,
                                 const char* view2_path,
                                 const char* labels_path) {
  return Guard([&] {
    Require(data, "data");
    Require(view1_path, "view1_path");
    Require(view2_path, "view2_path");
    RequireLabels(data);
    RequireView2(data);
    wavemv::WriteTwoViewCsv(data->data, view1_path, view2_path,
                            labels_path == nullptr ? "" : labels_path);
  });
}

size_t wmv_dataset_size(const wmv_dataset* data) {
  return data == nullptr ? 0 : static_cast<size_t>(data->data.size());
}

size_t wmv_dataset_cols1(const wmv_dataset* data) {
  return data == nullptr ? 0 : static_cast<size_t>(data->data.view1.cols());
}

size_t wmv_dataset_cols2(const wmv_dataset* data) {
  if (data == nullptr || !data->has_view2) return 0;
  return static_cast<size_t>(data->data.view2.cols());
}

int wmv_dataset_has_labels(const wmv_dataset* data) {
  return data != nullptr && data->has_labels ? 1 : 0;
}

wmv_status wmv_dataset_labels(const wmv_dataset* data, double* out, size_t n) {
  return Guard([&] {
    Require(data, "data");
    Require(out, "out");
    RequireLabels(data);
    CheckCount(n, data->data.size(), "labels");
    Eigen::Map<Eigen::VectorXd>(out, data->data.size()) = data->data.labels;
  });
}

void wmv_dataset_free(wmv_dataset* data) { delete data; }

wmv_status wmv_model_fit(const wmv_dataset* data, const wmv_hyperparams* hp,
                         wmv_model** model, wmv_trace** trace) {
  if (trace != nullptr) *trace = nullptr;
  return Guard([&] {
    Require(data, "data");
    Require(hp, "hyperparams");
    Require(model, "model");
    *model = nullptr;
    RequireLabels(data);
    RequireView2(data);
    try {
      auto fit = wavemv::Fit(data->data, ToCpp(*hp));
      auto m = std::make_unique<wmv_model>();
      m->model = std::move(fit.model);
      m->model.view2_projection = data->projection;
      m->converged = fit.converged;
      m->slacks.emplace(fit.state.zeta1, fit.state.zeta2);
      if (trace != nullptr) *trace = new wmv_trace{std::move(fit.trace)};
      *model = m.release();
    } catch (const wavemv::DivergenceError& e) {
      if (trace != nullptr) *trace = new wmv_trace{e.trace()};
      throw;
    }
  });
}

int wmv_model_converged(const wmv_model* model) {
  return model != nullptr && model->converged ? 1 : 0;
}

size_t wmv_model_size(const wmv_model* model) {
  return model == nullptr ? 0 : static_cast<size_t>(model->model.alpha1.size());
}

wmv_status wmv_model_hyperparams(const wmv_model* model, wmv_hyperparams* out) {
  return Guard([&] {
    Require(model, "model");
    Require(out, "out");
    *out = ToC(model->model.hyperparams);
  });
}

wmv_status wmv_model_decision(const wmv_model* model, const wmv_dataset* data,
                              double* out, size_t n) {
  return Guard([&] {
    Require(model, "model");
    Require(data, "data");
    Require(out, "out");
    CheckCount(n, data->data.size(), "decision");
    Eigen::MatrixXd scratch;
    const auto& v2 = View2For(model, data, scratch);
    Eigen::Map<Eigen::VectorXd>(out, data->data.size()) =
        wavemv::DecisionFunction(model->model, data->data.view1, v2);
  });
}

wmv_status wmv_model_predict(const wmv_model* model, const wmv_dataset* data,
                             int* out, size_t n) {
  return Guard([&] {
    Require(model, "model");
    Require(data, "data");
    Require(out, "out");
    CheckCount(n, data->data.size(), "prediction");
    Eigen::MatrixXd scratch;
    const auto& v2 = View2For(model, data, scratch);
    const Eigen::VectorXd f =
        wavemv::DecisionFunction(model->model, data->data.view1, v2);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      out[i] = wavemv::SignWithTie(f[i]);
    }
  });
}

wmv_status wmv_model_slacks(const wmv_model* model, double* zeta1,
                            double* zeta2, size_t n) {
  return Guard([&] {
    Require(model, "model");
    Require(zeta1, "zeta1");
    Require(zeta2, "zeta2");
    if (!model->slacks) {
      Fail(ErrorCode::kInput, "slacks are only kept for freshly fit models");
    }
    const auto& [z1, z2] = *model->slacks;
    CheckCount(n, z1.size(), "slack");
    Eigen::Map<Eigen::VectorXd>(zeta1, z1.size()) = z1;
    Eigen::Map<Eigen::VectorXd>(zeta2, z2.size()) = z2;
  });
}

wmv_status wmv_model_save(const wmv_model* model, const char* path) {
  return Guard([&] {
    Require(model, "model");
    Require(path, "path");
    wavemv::SaveModel(model->model, path);
  });
}

wmv_status wmv_model_load(const char* path, wmv_model** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = nullptr;
    auto m = std::make_unique<wmv_model>();
    m->model = wavemv::LoadModel(path);
    *out = m.release();
  });
}

void wmv_model_free(wmv_model* model) { delete model; }

size_t wmv_trace_length(const wmv_trace* trace) {
  return trace == nullptr ? 0 : trace->trace.records.size();
}

wmv_status wmv_trace_record(const wmv_trace* trace, size_t index, int* iter,
                            double* objective, double* residual) {
  return Guard([&] {
    Require(trace, "trace");
    if (index >= trace->trace.records.size()) {
      Fail(ErrorCode::kInvalidArgument, "trace index out of range");
    }
    const auto& r = trace->trace.records[index];
    if (iter != nullptr) *iter = r.iter;
    if (objective != nullptr) *objective = r.objective;
    if (residual != nullptr) {
      for (size_t k = 0; k < 4; ++k) residual[k] = r.residual[k];
    }
  });
}

wmv_status wmv_trace_write_csv(const wmv_trace* trace, const char* path) {
  return Guard([&] {
    Require(trace, "trace");
    Require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) Fail(ErrorCode::kIo, std::string("cannot write ") + path);
    trace->trace.WriteCsv(out);
    if (!out) Fail(ErrorCode::kIo, std::string("error writing ") + path);
  });
}

void wmv_trace_free(wmv_trace* trace) { delete trace; }

wmv_status wmv_accuracy(const double* predicted, const double* truth, size_t n,
                        double* out) {
  return Guard([&] {
    Require(predicted, "predicted");
    Require(truth, "truth");
    Require(out, "out");
    *out = wavemv::Accuracy(Vec(predicted, n), Vec(truth, n));
  });
}

wmv_status wmv_confusion(const double* predicted, const double* truth,
                         size_t n, int* out) {
  return Guard([&] {
    Require(predicted, "predicted");
    Require(truth, "truth");
    Require(out, "out");
    const auto c = wavemv::ConfusionCounts(Vec(predicted, n), Vec(truth, n));
    out[0] = c.tp;
    out[1] = c.tn;
    out[2] = c.fp;
    out[3] = c.fn;
  });
}

wmv_status wmv_roc_curve(const double* scores, const double* truth, size_t n,
                         double* fpr, double* tpr, size_t capacity,
                         size_t* count) {
  return Guard([&] {
    Require(scores, "scores");
    Require(truth, "truth");
    Require(fpr, "fpr");
    Require(tpr, "tpr");
    Require(count, "count");
    const auto points = wavemv::RocCurve(Vec(scores, n), Vec(truth, n));
    if (points.size() > capacity) {
      Fail(ErrorCode::kShape, "ROC buffers hold " + std::to_string(capacity) +
                                  " points, need " +
                                  std::to_string(points.size()));
    }
    for (size_t i = 0; i < points.size(); ++i) {
      fpr[i] = points[i].fpr;
      tpr[i] = points[i].tpr;
    }
    *count = points.size();
  });
}

wmv_status wmv_auc(const double* fpr, const double* tpr, size_t count,
                   double* out) {
  return Guard([&] {
    Require(fpr, "fpr");
    Require(tpr, "tpr");
    Require(out, "out");
    std::vector<wavemv::RocPoint> points(count);
    for (size_t i = 0; i < count; ++i) points[i] = {fpr[i], tpr[i]};
    *out = wavemv::Auc(points);
  });
}

wmv_status wmv_rank_models(const double* accuracies, size_t p,
                           size_t n_datasets, double* ranks,
                           double* avg_ranks) {
  return Guard([&] {
    Require(accuracies, "accuracies");
    if (p == 0 || n_datasets == 0) Fail(ErrorCode::kShape, "empty matrix");
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto rows = static_cast<Eigen::Index>(p);
    const auto cols = static_cast<Eigen::Index>(n_datasets);
    const Eigen::MatrixXd acc = Eigen::Map<const RowMajor>(accuracies, rows, cols);
    if (!acc.allFinite()) Fail(ErrorCode::kDomain, "non-finite accuracy");
    const Eigen::MatrixXd r = wavemv::RankModels(acc);
    if (ranks != nullptr) Eigen::Map<RowMajor>(ranks, rows, cols) = r;
    if (avg_ranks != nullptr) {
      Eigen::Map<Eigen::VectorXd>(avg_ranks, rows) = r.rowwise().mean();
    }
  });
}

wmv_status wmv_friedman_chi2(const double* avg_ranks, size_t p,
                             size_t n_datasets, double* out) {
  return Guard([&] {
    Require(avg_ranks, "avg_ranks");
    Require(out, "out");
    if (p < 2 || n_datasets < 2) {
      Fail(ErrorCode::kInvalidArgument,
           "Friedman test needs at least 2 models and 2 datasets");
    }
    *out = wavemv::FriedmanChi2(Vec(avg_ranks, p), static_cast<int>(n_datasets));
  });
}

wmv_status wmv_friedman_f(double chi2, size_t p, size_t n_datasets,
                          double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = wavemv::FriedmanF(chi2, static_cast<int>(p),
                             static_cast<int>(n_datasets));
  });
}

wmv_status wmv_nemenyi_cd(size_t p, size_t n_datasets, double q_alpha,
                          double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = wavemv::NemenyiCd(static_cast<int>(p), static_cast<int>(n_datasets),
                             q_alpha);
  });
}

wmv_status wmv_nemenyi_q_alpha(size_t p, double alpha, double* out) {
  return Guard([&] {
    Require(out, "out");
    const auto q = wavemv::NemenyiQAlpha(static_cast<int>(p), alpha);
    if (!q) {
      Fail(ErrorCode::kInvalidArgument,
           "no tabulated q_alpha for p = " + std::to_string(p) +
               ", alpha = " + std::to_string(alpha));
    }
    *out = *q;
  });
}

wmv_status wmv_kfold_grid_search(const wmv_dataset* data,
                                 const wmv_hyperparams* grid, size_t grid_size,
                                 int k, uint64_t seed, size_t* best_index,
                                 double* mean_accuracy) {
  return Guard([&] {
    Require(data, "data");
    Require(grid, "grid");
    Require(best_index, "best_index");
    RequireLabels(data);
    RequireView2(data);
    std::vector<wavemv::Hyperparams> configs;
    configs.reserve(grid_size);
    for (size_t i = 0; i < grid_size; ++i) configs.push_back(ToCpp(grid[i]));
    const auto result = wavemv::KFoldGridSearch(data->data, configs, k, seed);
    *best_index = result.best_index;
    if (mean_accuracy != nullptr) {
      for (size_t i = 0; i < grid_size; ++i) {
        mean_accuracy[i] = result.mean_accuracy[i];
      }
    }
  });
}

wmv_status wmv_generalization_bound(const wmv_model* model,
                                    const wmv_dataset* train,
                                    const double* zeta1, const double* zeta2,
                                    size_t n, double delta, double theta,
                                    double norm_bound, double* out) {
  return Guard([&] {
    Require(model, "model");
    Require(train, "train");
    Require(zeta1, "zeta1");
    Require(zeta2, "zeta2");
    Require(out, "out");
    RequireView2(train);
    std::optional<double> nb;
    if (norm_bound > 0) nb = norm_bound;
    *out = wavemv::GeneralizationBound(model->model, train->data,
                                       Vec(zeta1, n), Vec(zeta2, n), delta,
                                       theta, nb);
  });
}

}  // extern "C"
