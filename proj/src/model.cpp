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

#include "wavemv/model.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wavemv/error.hpp"

namespace wavemv {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "wavemv-model";

json VectorToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::VectorXd VectorFromJson(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd MatrixFromJson(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 ||
      static_cast<size_t>(rows * cols) != data.size()) {
    Fail(ErrorCode::kFormat, "matrix data length does not match its shape");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = data[i * cols + k];
  }
  return m;
}

json WaveToJson(const WaveParams& w) {
  return json{{"lambda", w.lambda}, {"a", w.a}};
}

WaveParams WaveFromJson(const json& j) {
  return WaveParams{j.at("lambda").get<double>(), j.at("a").get<double>()};
}

json HyperparamsToJson(const Hyperparams& hp) {
  return json{{"gamma", hp.gamma},
              {"c1", hp.c1},
              {"c2", hp.c2},
              {"d", hp.d},
              {"wave1", WaveToJson(hp.wave1)},
              {"wave2", WaveToJson(hp.wave2)},
              {"sigma1", hp.kernel1.sigma},
              {"sigma2", hp.kernel2.sigma},
              {"kappa", {hp.kappa1, hp.kappa2, hp.kappa3, hp.kappa4}},
              {"tau", {hp.tau1, hp.tau2}},
              {"gd_rate", hp.gd_rate},
              {"t1_max", hp.t1_max},
              {"t2_max", hp.t2_max},
              {"tol_obj", hp.tol_obj},
              {"tol_res", hp.tol_res},
              {"tol_grad", hp.tol_grad}};
}

Hyperparams HyperparamsFromJson(const json& j) {
  Hyperparams hp;
  hp.gamma = j.at("gamma").get<double>();
  hp.c1 = j.at("c1").get<double>();
  hp.c2 = j.at("c2").get<double>();
  hp.d = j.at("d").get<double>();
  hp.wave1 = WaveFromJson(j.at("wave1"));
  hp.wave2 = WaveFromJson(j.at("wave2"));
  hp.kernel1.sigma = j.at("sigma1").get<double>();
  hp.kernel2.sigma = j.at("sigma2").get<double>();
  const auto kappa = j.at("kappa").get<std::vector<double>>();
  const auto tau = j.at("tau").get<std::vector<double>>();
  if (kappa.size() != 4 || tau.size() != 2) {
    Fail(ErrorCode::kFormat, "hyperparams: kappa needs 4 and tau 2 entries");
  }
  hp.kappa1 = kappa[0];
  hp.kappa2 = kappa[1];
  hp.kappa3 = kappa[2];
  hp.kappa4 = kappa[3];
  hp.tau1 = tau[0];
  hp.tau2 = tau[1];
  hp.gd_rate = j.at("gd_rate").get<double>();
  hp.t1_max = j.at("t1_max").get<int>();
  hp.t2_max = j.at("t2_max").get<int>();
  hp.tol_obj = j.at("tol_obj").get<double>();
  hp.tol_res = j.at("tol_res").get<double>();
  hp.tol_grad = j.at("tol_grad").get<double>();
  return hp;
}

void CheckFeatures(const TrainedModel& m, Eigen::Index cols1,
                   Eigen::Index cols2) {
  if (cols1 != m.support1.cols() || cols2 != m.support2.cols()) {
    Fail(ErrorCode::kShape,
         "test features have " + std::to_string(cols1) + "/" +
             std::to_string(cols2) + " columns, model expects " +
             std::to_string(m.support1.cols()) + "/" +
             std::to_string(m.support2.cols()));
  }
}

}  // namespace

void TrainedModel::Validate() const {
  if (alpha1.size() != support1.rows() || alpha2.size() != support2.rows() ||
      support1.rows() != support2.rows()) {
    Fail(ErrorCode::kShape, "model coefficients do not match support rows");
  }
  if (!(gamma > 0)) Fail(ErrorCode::kInvalidArgument, "model gamma must be > 0");
  kernel1.Validate();
  kernel2.Validate();
  if (!alpha1.allFinite() || !alpha2.allFinite() || !support1.allFinite() ||
      !support2.allFinite()) {
    Fail(ErrorCode::kDomain, "model contains non-finite values");
  }
}

FitResult Fit(const TwoViewDataset& data, const Hyperparams& hp) {
  data.Validate();
  hp.Validate();
  if (data.size() < 2) {
    Fail(ErrorCode::kInput, "fit needs at least 2 samples");
  }
  const GramPair grams =
      BuildGramPair(data.view1, hp.kernel1, data.view2, hp.kernel2);
  SolveResult solved = AdmmSolve(grams, data.labels, hp);

  FitResult out;
  out.model.alpha1 = solved.state.alpha1;
  out.model.alpha2 = solved.state.alpha2;
  out.model.gamma = hp.gamma;
  out.model.kernel1 = hp.kernel1;
  out.model.kernel2 = hp.kernel2;
  out.model.support1 = data.view1;
  out.model.support2 = data.view2;
  out.model.hyperparams = hp;
  out.trace = std::move(solved.trace);
  out.state = std::move(solved.state);
  out.converged = solved.converged;
  return out;
}

double DecisionValue(const TrainedModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x1,
                     const Eigen::Ref<const Eigen::VectorXd>& x2) {
  CheckFeatures(model, x1.size(), x2.size());
  double f1 = 0.0;
  double f2 = 0.0;
  for (Eigen::Index i = 0; i < model.alpha1.size(); ++i) {
    f1 += model.alpha1[i] *
          GaussianKernel(model.support1.row(i).transpose(), x1, model.kernel1);
    f2 += model.alpha2[i] *
          GaussianKernel(model.support2.row(i).transpose(), x2, model.kernel2);
  }
  return model.gamma * f1 + f2;
}

Eigen::VectorXd DecisionFunction(const TrainedModel& model,
                                 const Eigen::MatrixXd& view1,
                                 const Eigen::MatrixXd& view2) {
  CheckFeatures(model, view1.cols(), view2.cols());
  if (view1.rows() != view2.rows()) {
    Fail(ErrorCode::kShape, "test views have different row counts");
  }
  const Eigen::MatrixXd c1 = CrossGram(model.support1, view1, model.kernel1);
  const Eigen::MatrixXd c2 = CrossGram(model.support2, view2, model.kernel2);
  return model.gamma * (c1 * model.alpha1) + c2 * model.alpha2;
}

int PredictLabel(const TrainedModel& model,
                 const Eigen::Ref<const Eigen::VectorXd>& x1,
                 const Eigen::Ref<const Eigen::VectorXd>& x2) {
  return SignWithTie(DecisionValue(model, x1, x2));
}

Eigen::VectorXd Predict(const TrainedModel& model, const Eigen::MatrixXd& view1,
                        const Eigen::MatrixXd& view2) {
  Eigen::VectorXd f = DecisionFunction(model, view1, view2);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = SignWithTie(f[i]);
  return f;
}

std::string ModelToJson(const TrainedModel& model) {
  model.Validate();
  json j;
  j["format"] = kFormatTag;
  j["schema_version"] = model.schema_version;
  j["gamma"] = model.gamma;
  j["kernel1"] = {{"type", "gaussian"}, {"sigma", model.kernel1.sigma}};
  j["kernel2"] = {{"type", "gaussian"}, {"sigma", model.kernel2.sigma}};
  j["hyperparams"] = HyperparamsToJson(model.hyperparams);
  j["alpha1"] = VectorToJson(model.alpha1);
  j["alpha2"] = VectorToJson(model.alpha2);
  j["support1"] = MatrixToJson(model.support1);
  j["support2"] = MatrixToJson(model.support2);
  if (model.view2_projection) {
    const auto& p = *model.view2_projection;
    j["view2_projection"] = {
        {"mean", VectorToJson(p.mean.transpose())},
        {"components", MatrixToJson(p.components)},
        {"explained_ratio", VectorToJson(p.explained_ratio)}};
  } else {
    j["view2_projection"] = nullptr;
  }
  return j.dump(1) + "\n";
}

TrainedModel ModelFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("model file is not valid JSON: ") +
                                 e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormatTag) {
      Fail(ErrorCode::kFormat, "not a wavemv model file");
    }
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      Fail(ErrorCode::kUnsupportedVersion,
           "model schema version " + std::to_string(version) +
               " is not supported (expected " +
               std::to_string(kModelSchemaVersion) + ")");
    }
    TrainedModel m;
    m.schema_version = version;
    m.gamma = j.at("gamma").get<double>();
    if (j.at("kernel1").at("type") != "gaussian" ||
        j.at("kernel2").at("type") != "gaussian") {
      Fail(ErrorCode::kFormat, "only gaussian kernels are supported");
    }
    m.kernel1.sigma = j.at("kernel1").at("sigma").get<double>();
    m.kernel2.sigma = j.at("kernel2").at("sigma").get<double>();
    m.hyperparams = HyperparamsFromJson(j.at("hyperparams"));
    m.alpha1 = VectorFromJson(j.at("alpha1"));
    m.alpha2 = VectorFromJson(j.at("alpha2"));
    m.support1 = MatrixFromJson(j.at("support1"));
    m.support2 = MatrixFromJson(j.at("support2"));
    const json& proj = j.at("view2_projection");
    if (!proj.is_null()) {
      PcaProjection p;
      p.mean = VectorFromJson(proj.at("mean")).transpose();
      p.components = MatrixFromJson(proj.at("components"));
      p.explained_ratio = VectorFromJson(proj.at("explained_ratio"));
      if (p.components.rows() != p.mean.size()) {
        Fail(ErrorCode::kFormat, "view2 projection shape mismatch");
      }
      m.view2_projection = std::move(p);
    }
    try {
      m.Validate();
    } catch (const Error& e) {
      Fail(ErrorCode::kFormat, std::string("inconsistent model: ") + e.what());
    }
    return m;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("malformed model file: ") + e.what());
  }
}

void SaveModel(const TrainedModel& model, const std::string& path) {
  const std::string text = ModelToJson(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

TrainedModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ModelFromJson(buffer.str());
}

}  // namespace wavemv
