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

// Wave loss: L(h) = (1/lambda) * (1 - 1 / (1 + lambda * h^2 * exp(a * h))).
//
// The loss is bounded by 1/lambda, smooth, and asymmetric for a != 0. Inside
// the training objective it is evaluated on a slack value with the label
// folded into the exponent, exp(a * zeta * y), which is the same as evaluating
// the plain loss with shape parameter a * y.
//
// All functions are pure and thread-safe.

#ifndef WAVEMV_LOSS_HPP_
#define WAVEMV_LOSS_HPP_

namespace wavemv {

struct WaveParams {
  double lambda = 0.5;  // bounding parameter; the loss ceiling is 1/lambda
  double a = 1.0;       // shape parameter, any finite sign

  // Throws kInvalidArgument unless lambda > 0 and both fields are finite.
  void Validate() const;
};

// Throws kDomain for non-finite h.
double WaveLoss(double h, const WaveParams& params);

// dL/dh = (2h + a h^2) exp(a h) / (1 + lambda h^2 exp(a h))^2.
double WaveLossGrad(double h, const WaveParams& params);

// y must be -1 or +1 (kInvalidArgument otherwise).
double LabeledWaveLoss(double zeta, int y, const WaveParams& params);
double LabeledWaveLossGrad(double zeta, int y, const WaveParams& params);

}  // namespace wavemv

#endif  // WAVEMV_LOSS_HPP_
