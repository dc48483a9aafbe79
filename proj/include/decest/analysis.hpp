// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "decest/codebook.hpp"
#include "decest/model.hpp"
#include "decest/rng.hpp"

#include <vector>

namespace decest {

struct PmfDerivatives {
    std::vector<double> first;
    std::vector<double> second;
};

/// d/dtheta and d^2/dtheta^2 of pmf_quantized, outer cells included.
PmfDerivatives pmf_derivatives(double theta, const Quantizer& q, double sigma_s);

struct FisherEstimate {
    double information; // per-sensor Fisher information
    double std_error;
    long mc_samples;
};

/// Per-sensor Fisher information about theta carried by one received block
/// when the channel is unknown: E[(d/dtheta log p(y | theta))^2], by Monte
/// Carlo over level, fading and noise draws.
FisherEstimate fisher_information_unknown_csi(double theta, const SystemParams& params, const Codebook& cb,
                                              long mc_samples, Rng& rng);

struct CrlbResult {
    double theta;
    int n_sensors;
    double bound;
    long mc_samples;
    double std_error;
    double information; // per-sensor
};

/// 1 / (N * I_1) from an already estimated per-sensor information.
CrlbResult crlb_from_information(double theta, int n_sensors, const FisherEstimate& info);

/// Requires mc_samples >= 1000. Throws std::domain_error when the
/// information estimate is not positive.
CrlbResult crlb_unknown_csi(double theta, const SystemParams& params, const Codebook& cb, long mc_samples, Rng& rng);

} // namespace decest
