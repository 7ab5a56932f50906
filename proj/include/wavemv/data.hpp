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

#ifndef WAVEMV_DATA_HPP_
#define WAVEMV_DATA_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wavemv {

// Paired feature matrices of the same n samples under two views, with labels
// in {-1, +1} stored as doubles.
struct TwoViewDataset {
  Eigen::MatrixXd view1;
  Eigen::MatrixXd view2;
  Eigen::VectorXd labels;

  Eigen::Index size() const { return labels.size(); }

  // Equal row counts, labels in {-1, +1}, finite features. Throws kShape,
  // kInvalidArgument or kDomain.
  void Validate() const;

  TwoViewDataset Subset(const std::vector<Eigen::Index>& rows) const;
};

// Derives an independent seed for a named purpose from a base seed
// (splitmix64 finalizer over seed ^ stream).
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// ---------------------------------------------------------------------------
// CSV ingestion.

enum class LabelMap {
  kPlusMinusOne,  // labels must already be -1 / +1
  kZeroOne,       // 0 -> -1, 1 -> +1
};

struct CsvSchema {
  bool has_header = false;
  // Column holding the label; -1 means the last column. nullopt: no labels.
  std::optional<int> label_column = -1;
  LabelMap label_map = LabelMap::kPlusMinusOne;
};

struct CsvTable {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;  // empty when the schema has no label column
};

// Comma separated, '.' decimal point. Ragged rows, non-numeric cells and
// unknown labels raise kFormat with the 1-based line number; a missing file
// raises kIo.
CsvTable LoadCsv(const std::string& path, const CsvSchema& schema);
CsvTable ParseCsv(const std::string& text, const CsvSchema& schema);

// Writes view1.csv / view2.csv. With labels_path empty the labels are appended
// to view1 as its last column; otherwise they go to their own file.
void WriteTwoViewCsv(const TwoViewDataset& data, const std::string& view1_path,
                     const std::string& view2_path,
                     const std::string& labels_path);

void WriteMatrixCsv(const Eigen::MatrixXd& m, const std::string& path);

// ---------------------------------------------------------------------------
// Second view from principal components.

struct PcaProjection {
  Eigen::RowVectorXd mean;
  Eigen::MatrixXd components;        // m x k, columns are unit loadings
  Eigen::VectorXd explained_ratio;   // k leading variance fractions

  Eigen::MatrixXd Transform(const Eigen::MatrixXd& x) const;
};

// Centers the columns and keeps the smallest k leading components whose
// cumulative explained variance reaches `variance_threshold`. Each component
// is signed so its largest-magnitude loading is positive. Throws kInput for
// n < 2, kInvalidArgument for a threshold outside (0, 1], kDegenerate when
// every column is constant.
PcaProjection FitPca(const Eigen::MatrixXd& x, double variance_threshold);

Eigen::MatrixXd SynthesizeView2Pca(const Eigen::MatrixXd& view1,
                                   double variance_threshold = 0.95);

// ---------------------------------------------------------------------------
// Splits and preprocessing.

// Seeded uniform shuffle; the training part gets floor(fraction * n + 0.5)
// rows. Throws kInput when either part would be empty.
std::pair<TwoViewDataset, TwoViewDataset> TrainTestSplit(
    const TwoViewDataset& data, double train_fraction, std::uint64_t seed);

struct StandardizeStats {
  Eigen::RowVectorXd mean1, scale1;
  Eigen::RowVectorXd mean2, scale2;

  // Maps standardized features back; constant columns come back as the mean.
  TwoViewDataset Inverse(const TwoViewDataset& data) const;
  TwoViewDataset Apply(const TwoViewDataset& data) const;
};

struct StandardizeResult {
  TwoViewDataset train;
  TwoViewDataset test;
  StandardizeStats stats;
};

// Per-feature z-scores with training mean and population standard deviation.
// Zero-variance columns are centered only.
StandardizeResult Standardize(const TwoViewDataset& train,
                              const TwoViewDataset& test);

// Flips exactly floor(rate * n + 0.5) labels chosen uniformly without
// replacement.
Eigen::VectorXd InjectLabelNoise(const Eigen::VectorXd& labels, double rate,
                                 std::uint64_t seed);

// Dimensions of the synthetic views.
inline constexpr int kSyntheticView1Dims = 2;
inline constexpr int kSyntheticView2Dims = 3;

// n/2 samples per class (n even, n >= 4), labels alternating +1, -1. In each
// view the class means sit at +/- separation along the normalized all-ones
// direction and every coordinate gets independent N(0, noise_std^2) noise.
TwoViewDataset MakeSyntheticTwoView(Eigen::Index n, double separation,
                                    double noise_std, std::uint64_t seed);

}  // namespace wavemv

#endif  // WAVEMV_DATA_HPP_
