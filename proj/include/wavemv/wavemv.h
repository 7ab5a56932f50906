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

/* C interface to the WaveMV two-view classifier.
 *
 * Every function returns a wmv_status; on failure wmv_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the caller,
 * who releases them with the matching *_free function. Matrices are passed
 * row-major. Label arrays hold -1.0 / +1.0.
 */

#ifndef WAVEMV_WAVEMV_H_
#define WAVEMV_WAVEMV_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WAVEMV_API __declspec(dllexport)
#elif defined(__GNUC__)
#define WAVEMV_API __attribute__((visibility("default")))
#else
#define WAVEMV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wmv_status {
  WMV_OK = 0,
  WMV_ERR_INVALID_ARGUMENT = 1,
  WMV_ERR_SHAPE = 2,
  WMV_ERR_DOMAIN = 3,
  WMV_ERR_NUMERICAL = 4,
  WMV_ERR_FORMAT = 5,
  WMV_ERR_IO = 6,
  WMV_ERR_UNSUPPORTED_VERSION = 7,
  WMV_ERR_DEGENERATE = 8,
  WMV_ERR_STRATIFICATION = 9,
  WMV_ERR_INPUT = 10,
  WMV_ERR_INTERNAL = 99
} wmv_status;

typedef struct wmv_dataset wmv_dataset;
typedef struct wmv_model wmv_model;
typedef struct wmv_trace wmv_trace;

WAVEMV_API const char* wmv_version(void);
/* Message of the last failed call on this thread; "" if none. */
WAVEMV_API const char* wmv_last_error(void);
WAVEMV_API const char* wmv_status_name(wmv_status status);

/* Independent seed for a numbered purpose, derived from a base seed. */
WAVEMV_API uint64_t wmv_derive_seed(uint64_t seed, uint64_t stream);

/* ------------------------------------------------------------------------ */
/* Hyperparameters */

typedef struct wmv_hyperparams {
  double gamma;
  double c1, c2;
  double d;
  double lambda1, a1;
  double lambda2, a2;
  double sigma1, sigma2;
  double kappa[4];
  double tau1, tau2;
  double gd_rate;
  int t1_max, t2_max;
  double tol_obj, tol_res, tol_grad;
} wmv_hyperparams;

WAVEMV_API void wmv_hyperparams_default(wmv_hyperparams* hp);
WAVEMV_API wmv_status wmv_hyperparams_validate(const wmv_hyperparams* hp);

/* ------------------------------------------------------------------------ */
/* Loss */

WAVEMV_API wmv_status wmv_wave_loss(double h, double lambda, double a,
                                    double* out);

/* ------------------------------------------------------------------------ */
/* Datasets */

typedef enum wmv_label_source {
  WMV_LABELS_NONE = 0,         /* unlabeled, e.g. for prediction */
  WMV_LABELS_VIEW1_LAST = 1,   /* last column of the view-1 file */
  WMV_LABELS_FILE = 2          /* single-column labels file */
} wmv_label_source;

typedef struct wmv_load_options {
  const char* view1_path;
  const char* view2_path;   /* NULL: synthesize or leave view 2 absent */
  const char* labels_path;  /* used with WMV_LABELS_FILE */
  wmv_label_source label_source;
  int has_header;           /* every file starts with a header line */
  int zero_one_labels;      /* map labels 0/1 to -1/+1 */
  /* In (0, 1]: derive view 2 from view 1 by PCA at this explained-variance
   * fraction. 0: no synthesis. */
  double synthesize_view2;
} wmv_load_options;

WAVEMV_API void wmv_load_options_default(wmv_load_options* opts);
WAVEMV_API wmv_status wmv_dataset_load(const wmv_load_options* opts,
                                       wmv_dataset** out);
/* labels may be NULL for an unlabeled dataset. */
WAVEMV_API wmv_status wmv_dataset_from_arrays(size_t n, size_t m1,
                                              const double* view1, size_t m2,
                                              const double* view2,
                                              const double* labels,
                                              wmv_dataset** out);
WAVEMV_API wmv_status wmv_dataset_make_synthetic(size_t n, double separation,
                                                 double noise_std,
                                                 uint64_t seed,
                                                 wmv_dataset** out);
/* Replaces view 2 with PCA scores of view 1 and remembers the projection so
 * a model fit on the result can derive view 2 for new samples. */
WAVEMV_API wmv_status wmv_dataset_synthesize_view2(const wmv_dataset* data,
                                                   double threshold,
                                                   wmv_dataset** out);
WAVEMV_API wmv_status wmv_dataset_split(const wmv_dataset* data,
                                        double train_fraction, uint64_t seed,
                                        wmv_dataset** train,
                                        wmv_dataset** test);
/* z-scores both sets with the training statistics. */
WAVEMV_API wmv_status wmv_dataset_standardize(const wmv_dataset* train,
                                              const wmv_dataset* test,
                                              wmv_dataset** train_out,
                                              wmv_dataset** test_out);
WAVEMV_API wmv_status wmv_dataset_inject_noise(const wmv_dataset* data,
                                               double rate, uint64_t seed,
                                               wmv_dataset** out);
/* labels_path NULL or "": labels become the last column of view1_path. */
WAVEMV_API wmv_status wmv_dataset_write_csv(const wmv_dataset* data,
                                            const char* view1_path,
                                            const char* view2_path,
                                            const char* labels_path);
WAVEMV_API size_t wmv_dataset_size(const wmv_dataset* data);
WAVEMV_API size_t wmv_dataset_cols1(const wmv_dataset* data);
/* 0 when view 2 is absent. */
WAVEMV_API size_t wmv_dataset_cols2(const wmv_dataset* data);
WAVEMV_API int wmv_dataset_has_labels(const wmv_dataset* data);
/* Copies n labels into out; n must equal the dataset size. */
WAVEMV_API wmv_status wmv_dataset_labels(const wmv_dataset* data, double* out,
                                         size_t n);
WAVEMV_API void wmv_dataset_free(wmv_dataset* data);

/* ------------------------------------------------------------------------ */
/* Models */

/* trace may be NULL. If the solver diverges the call fails with
 * WMV_ERR_NUMERICAL and *trace (when requested) holds the partial trace. */
WAVEMV_API wmv_status wmv_model_fit(const wmv_dataset* data,
                                    const wmv_hyperparams* hp,
                                    wmv_model** model, wmv_trace** trace);
WAVEMV_API int wmv_model_converged(const wmv_model* model);
WAVEMV_API size_t wmv_model_size(const wmv_model* model);
WAVEMV_API wmv_status wmv_model_hyperparams(const wmv_model* model,
                                            wmv_hyperparams* out);
/* Decision values for every row of data. If data lacks view 2 the model's
 * stored PCA projection derives it from view 1. */
WAVEMV_API wmv_status wmv_model_decision(const wmv_model* model,
                                         const wmv_dataset* data, double* out,
                                         size_t n);
/* sign of the decision value, 0 counted as +1. */
WAVEMV_API wmv_status wmv_model_predict(const wmv_model* model,
                                        const wmv_dataset* data, int* out,
                                        size_t n);
/* Final solver slacks; only available on models returned by wmv_model_fit. */
WAVEMV_API wmv_status wmv_model_slacks(const wmv_model* model, double* zeta1,
                                       double* zeta2, size_t n);
WAVEMV_API wmv_status wmv_model_save(const wmv_model* model, const char* path);
WAVEMV_API wmv_status wmv_model_load(const char* path, wmv_model** out);
WAVEMV_API void wmv_model_free(wmv_model* model);

/* ------------------------------------------------------------------------ */
/* Convergence traces */

WAVEMV_API size_t wmv_trace_length(const wmv_trace* trace);
/* residual receives four values; any output pointer may be NULL. */
WAVEMV_API wmv_status wmv_trace_record(const wmv_trace* trace, size_t index,
                                       int* iter, double* objective,
                                       double* residual);
WAVEMV_API wmv_status wmv_trace_write_csv(const wmv_trace* trace,
                                          const char* path);
WAVEMV_API void wmv_trace_free(wmv_trace* trace);

/* ------------------------------------------------------------------------ */
/* Evaluation */

WAVEMV_API wmv_status wmv_accuracy(const double* predicted,
                                   const double* truth, size_t n, double* out);
/* out receives tp, tn, fp, fn. */
WAVEMV_API wmv_status wmv_confusion(const double* predicted,
                                    const double* truth, size_t n, int* out);
/* fpr and tpr need room for n + 1 points; *count receives the number used. */
WAVEMV_API wmv_status wmv_roc_curve(const double* scores, const double* truth,
                                    size_t n, double* fpr, double* tpr,
                                    size_t capacity, size_t* count);
WAVEMV_API wmv_status wmv_auc(const double* fpr, const double* tpr,
                              size_t count, double* out);

/* accuracies: p x N row-major (models by datasets). ranks: p x N out. */
WAVEMV_API wmv_status wmv_rank_models(const double* accuracies, size_t p,
                                      size_t n_datasets, double* ranks,
                                      double* avg_ranks);
WAVEMV_API wmv_status wmv_friedman_chi2(const double* avg_ranks, size_t p,
                                        size_t n_datasets, double* out);
WAVEMV_API wmv_status wmv_friedman_f(double chi2, size_t p, size_t n_datasets,
                                     double* out);
WAVEMV_API wmv_status wmv_nemenyi_cd(size_t p, size_t n_datasets,
                                     double q_alpha, double* out);
/* WMV_ERR_INVALID_ARGUMENT when (p, alpha) is outside the built-in table. */
WAVEMV_API wmv_status wmv_nemenyi_q_alpha(size_t p, double alpha, double* out);

/* mean_accuracy receives one value per grid entry. */
WAVEMV_API wmv_status wmv_kfold_grid_search(const wmv_dataset* data,
                                            const wmv_hyperparams* grid,
                                            size_t grid_size, int k,
                                            uint64_t seed, size_t* best_index,
                                            double* mean_accuracy);

/* norm_bound <= 0 selects the model-derived default. */
WAVEMV_API wmv_status wmv_generalization_bound(
    const wmv_model* model, const wmv_dataset* train, const double* zeta1,
    const double* zeta2, size_t n, double delta, double theta,
    double norm_bound, double* out);

#ifdef __cplusplus
}
#endif

#endif /* WAVEMV_WAVEMV_H_ */
