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

#include "wavemv/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wavemv/error.hpp"

namespace wavemv {
namespace {

void CheckFinite(double h) {
  if (!std::isfinite(h)) {
    Fail(ErrorCode::kDomain, "wave loss argument is not finite");
  }
}

void CheckLabel(int y) {
  if (y != 1 && y != -1) {
    Fail(ErrorCode::kInvalidArgument,
         "label must be -1 or +1, got " + std::to_string(y));
  }
}

// log(lambda * h^2 * exp(a h)) for h != 0. Working in the log domain means
// lambda*g/(1+lambda*g) is a logistic function of this value, which never
// overflows, so no clamping of the exponent is needed.
double LogScaledCore(double h, const WaveParams& p) {
  return std::log(p.lambda) + 2.0 * std::log(std::fabs(h)) + p.a * h;
}

// 1 / (1 + exp(-t)).
double Logistic(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// s(1-s) with s = Logistic(t), computed without cancellation.
double LogisticSlope(double t) {
  const double e = std::exp(-std::fabs(t));
  return e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

void WaveParams::Validate() const {
  if (!std::isfinite(lambda) || !(lambda > 0)) {
    Fail(ErrorCode::kInvalidArgument, "wave loss lambda must be positive");
  }
  if (!std::isfinite(a)) {
    Fail(ErrorCode::kInvalidArgument, "wave loss shape a must be finite");
  }
}

double WaveLoss(double h, const WaveParams& params) {
  CheckFinite(h);
  params.Validate();
  if (h == 0.0) return 0.0;
  // Far out the exact value rounds to the ceiling itself; report the largest
  // double below it so the loss stays strictly under 1/lambda.
  const double ceiling = 1.0 / params.lambda;
  return std::min(Logistic(LogScaledCore(h, params)) / params.lambda,
                  std::nextafter(ceiling, 0.0));
}

double WaveLossGrad(double h, const WaveParams& params) {
  CheckFinite(h);
  params.Validate();
  if (h == 0.0) return 0.0;
  // Below this magnitude 2/h would overflow; the derivative is 2h to within
  // relative error |a h|.
  if (std::fabs(h) < 1e-100) return 2.0 * h;
  // g'/(1+lambda g)^2 with g = h^2 e^{ah}, g' = (2/h + a) g.
  const double t = LogScaledCore(h, params);
  return (2.0 / h + params.a) * LogisticSlope(t) / params.lambda;
}

double LabeledWaveLoss(double zeta, int y, const WaveParams& params) {
  CheckLabel(y);
  return WaveLoss(zeta, WaveParams{params.lambda, params.a * y});
}

double LabeledWaveLossGrad(double zeta, int y, const WaveParams& params) {
  CheckLabel(y);
  return WaveLossGrad(zeta, WaveParams{params.lambda, params.a * y});
}

}  // namespace wavemv
