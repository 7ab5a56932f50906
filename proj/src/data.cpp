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

#include "wavemv/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

#include "wavemv/error.hpp"

namespace wavemv {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string Where(size_t line_number) {
  return "line " + std::to_string(line_number) + ": ";
}

double ParseCell(std::string_view cell, size_t line_number) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    Fail(ErrorCode::kFormat,
         Where(line_number) + "non-numeric cell '" + std::string(cell) + "'");
  }
  if (!std::isfinite(value)) {
    Fail(ErrorCode::kFormat, Where(line_number) + "non-finite value");
  }
  return value;
}

double MapLabel(double raw, LabelMap map, size_t line_number) {
  switch (map) {
    case LabelMap::kPlusMinusOne:
      if (raw == 1.0 || raw == -1.0) return raw;
      break;
    case LabelMap::kZeroOne:
      if (raw == 0.0) return -1.0;
      if (raw == 1.0) return 1.0;
      break;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", raw);
  Fail(ErrorCode::kFormat, Where(line_number) + "unknown label " + buf);
}

void WriteRow(std::ostream& out, const Eigen::RowVectorXd& row) {
  char buf[64];
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
    if (j) out << ',';
    out << buf;
  }
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void TwoViewDataset::Validate() const {
  const Eigen::Index n = labels.size();
  if (view1.rows() != n || view2.rows() != n) {
    Fail(ErrorCode::kShape, "dataset views have " +
                                std::to_string(view1.rows()) + " and " +
                                std::to_string(view2.rows()) +
                                " rows for " + std::to_string(n) + " labels");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      Fail(ErrorCode::kInvalidArgument,
           "label at row " + std::to_string(i) + " is not -1 or +1");
    }
  }
  if (!view1.allFinite() || !view2.allFinite()) {
    Fail(ErrorCode::kDomain, "dataset contains non-finite features");
  }
}

TwoViewDataset TwoViewDataset::Subset(
    const std::vector<Eigen::Index>& rows) const {
  TwoViewDataset out;
  const auto k = static_cast<Eigen::Index>(rows.size());
  out.view1.resize(k, view1.cols());
  out.view2.resize(k, view2.cols());
  out.labels.resize(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    out.view1.row(r) = view1.row(rows[r]);
    out.view2.row(r) = view2.row(rows[r]);
    out.labels[r] = labels[rows[r]];
  }
  return out;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CsvTable ParseCsv(const std::string& text, const CsvSchema& schema) {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  size_t width = 0;
  size_t line_number = 0;
  std::istringstream in(text);
  std::string line;
  bool header_pending = schema.has_header;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = SplitFields(line);
    if (rows.empty() && labels.empty()) {
      width = fields.size();
    } else if (fields.size() != width) {
      Fail(ErrorCode::kFormat, Where(line_number) + "ragged row with " +
                                   std::to_string(fields.size()) +
                                   " fields, expected " +
                                   std::to_string(width));
    }
    std::optional<size_t> label_col;
    if (schema.label_column) {
      const int c = *schema.label_column;
      const int resolved = c < 0 ? static_cast<int>(width) + c : c;
      if (resolved < 0 || resolved >= static_cast<int>(width)) {
        Fail(ErrorCode::kFormat,
             Where(line_number) + "label column out of range");
      }
      label_col = static_cast<size_t>(resolved);
    }
    std::vector<double> row;
    row.reserve(width);
    for (size_t j = 0; j < fields.size(); ++j) {
      const double v = ParseCell(fields[j], line_number);
      if (label_col && j == *label_col) {
        labels.push_back(MapLabel(v, schema.label_map, line_number));
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) Fail(ErrorCode::kFormat, "no data rows");
  CsvTable table;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.front().size());
  table.features.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) table.features(i, j) = rows[i][j];
  }
  table.labels = Eigen::Map<const Eigen::VectorXd>(
      labels.data(), static_cast<Eigen::Index>(labels.size()));
  return table;
}

CsvTable LoadCsv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCsv(buffer.str(), schema);
  } catch (const Error& e) {
    Fail(e.code(), path + ": " + e.what());
  }
}

void WriteMatrixCsv(const Eigen::MatrixXd& m, const std::string& path) {
  auto out = OpenForWrite(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    WriteRow(out, m.row(i));
    out << '\n';
  }
}

void WriteTwoViewCsv(const TwoViewDataset& data, const std::string& view1_path,
                     const std::string& view2_path,
                     const std::string& labels_path) {
  data.Validate();
  if (labels_path.empty()) {
    Eigen::MatrixXd with_labels(data.size(), data.view1.cols() + 1);
    with_labels << data.view1, data.labels;
    WriteMatrixCsv(with_labels, view1_path);
  } else {
    WriteMatrixCsv(data.view1, view1_path);
    WriteMatrixCsv(data.labels, labels_path);
  }
  WriteMatrixCsv(data.view2, view2_path);
}

Eigen::MatrixXd PcaProjection::Transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) {
    Fail(ErrorCode::kShape, "PCA input has " + std::to_string(x.cols()) +
                                " columns, projection expects " +
                                std::to_string(mean.size()));
  }
  return (x.rowwise() - mean) * components;
}

PcaProjection FitPca(const Eigen::MatrixXd& x, double variance_threshold) {
  if (x.rows() < 2) Fail(ErrorCode::kInput, "PCA needs at least 2 rows");
  if (!(variance_threshold > 0.0 && variance_threshold <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "variance threshold must be in (0, 1]");
  }
  PcaProjection pca;
  pca.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - pca.mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  const double cutoff = smax * std::numeric_limits<double>::epsilon() *
                        static_cast<double>(std::max(x.rows(), x.cols()));
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cutoff) ++rank;
  if (rank == 0) {
    Fail(ErrorCode::kDegenerate, "PCA input has zero variance");
  }
  const double total = s.head(rank).squaredNorm();
  Eigen::Index k = 0;
  double cumulative = 0.0;
  while (k < rank) {
    cumulative += s[k] * s[k] / total;
    ++k;
    if (cumulative >= variance_threshold - 1e-12) break;
  }
  pca.components = svd.matrixV().leftCols(k);
  pca.explained_ratio = s.head(k).array().square() / total;
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    pca.components.col(c).cwiseAbs().maxCoeff(&arg);
    if (pca.components(arg, c) < 0) pca.components.col(c) *= -1.0;
  }
  return pca;
}

Eigen::MatrixXd SynthesizeView2Pca(const Eigen::MatrixXd& view1,
                                   double variance_threshold) {
  return FitPca(view1, variance_threshold).Transform(view1);
}

std::pair<TwoViewDataset, TwoViewDataset> TrainTestSplit(
    const TwoViewDataset& data, double train_fraction, std::uint64_t seed) {
  data.Validate();
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "train fraction must be in (0, 1)");
  }
  const Eigen::Index n = data.size();
  const auto n_train =
      static_cast<Eigen::Index>(std::floor(train_fraction * n + 0.5));
  if (n_train < 1 || n_train >= n) {
    Fail(ErrorCode::kInput, "split of " + std::to_string(n) +
                                " rows leaves one side empty");
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Eigen::Index> train(order.begin(), order.begin() + n_train);
  std::vector<Eigen::Index> test(order.begin() + n_train, order.end());
  return {data.Subset(train), data.Subset(test)};
}

namespace {

void ColumnStats(const Eigen::MatrixXd& x, Eigen::RowVectorXd& mean,
                 Eigen::RowVectorXd& scale) {
  mean = x.colwise().mean();
  scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var =
        (x.col(j).array() - mean[j]).square().sum() / static_cast<double>(x.rows());
    scale[j] = var > 0 ? std::sqrt(var) : 0.0;
  }
}

Eigen::MatrixXd ApplyStats(const Eigen::MatrixXd& x,
                           const Eigen::RowVectorXd& mean,
                           const Eigen::RowVectorXd& scale) {
  if (x.cols() != mean.size()) {
    Fail(ErrorCode::kShape, "standardize: feature count mismatch");
  }
  Eigen::MatrixXd out = x.rowwise() - mean;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (scale[j] > 0) out.col(j) /= scale[j];
  }
  return out;
}

Eigen::MatrixXd InverseStats(const Eigen::MatrixXd& x,
                             const Eigen::RowVectorXd& mean,
                             const Eigen::RowVectorXd& scale) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (scale[j] > 0) out.col(j) *= scale[j];
  }
  return out.rowwise() + mean;
}

}  // namespace

TwoViewDataset StandardizeStats::Apply(const TwoViewDataset& data) const {
  return TwoViewDataset{ApplyStats(data.view1, mean1, scale1),
                        ApplyStats(data.view2, mean2, scale2), data.labels};
}

TwoViewDataset StandardizeStats::Inverse(const TwoViewDataset& data) const {
  return TwoViewDataset{InverseStats(data.view1, mean1, scale1),
                        InverseStats(data.view2, mean2, scale2), data.labels};
}

StandardizeResult Standardize(const TwoViewDataset& train,
                              const TwoViewDataset& test) {
  if (train.size() == 0) Fail(ErrorCode::kInput, "standardize: empty train");
  StandardizeResult r;
  ColumnStats(train.view1, r.stats.mean1, r.stats.scale1);
  ColumnStats(train.view2, r.stats.mean2, r.stats.scale2);
  r.train = r.stats.Apply(train);
  r.test = r.stats.Apply(test);
  return r;
}

Eigen::VectorXd InjectLabelNoise(const Eigen::VectorXd& labels, double rate,
                                 std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "noise rate must be in [0, 1]");
  }
  const Eigen::Index n = labels.size();
  const auto flips = static_cast<Eigen::Index>(std::floor(rate * n + 0.5));
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  Eigen::VectorXd out = labels;
  for (Eigen::Index k = 0; k < std::min(flips, n); ++k) out[order[k]] *= -1.0;
  return out;
}

TwoViewDataset MakeSyntheticTwoView(Eigen::Index n, double separation,
                                    double noise_std, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) {
    Fail(ErrorCode::kInvalidArgument, "synthetic n must be even and >= 4");
  }
  if (!(noise_std >= 0.0) || !std::isfinite(separation)) {
    Fail(ErrorCode::kInvalidArgument, "bad synthetic noise or separation");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TwoViewDataset d;
  d.view1.resize(n, kSyntheticView1Dims);
  d.view2.resize(n, kSyntheticView2Dims);
  d.labels.resize(n);
  const double u1 = 1.0 / std::sqrt(static_cast<double>(kSyntheticView1Dims));
  const double u2 = 1.0 / std::sqrt(static_cast<double>(kSyntheticView2Dims));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = i % 2 == 0 ? 1.0 : -1.0;
    d.labels[i] = y;
    for (int j = 0; j < kSyntheticView1Dims; ++j) {
      d.view1(i, j) = y * separation * u1 + noise_std * normal(rng);
    }
    for (int j = 0; j < kSyntheticView2Dims; ++j) {
      d.view2(i, j) = y * separation * u2 + noise_std * normal(rng);
    }
  }
  return d;
}

}  // namespace wavemv
