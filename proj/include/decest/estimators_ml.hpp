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

#include "decest/channel.hpp"
#include "decest/codebook.hpp"
#include "decest/likelihood.hpp"
#include "decest/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace decest {

struct EstimateReport {
    double theta_hat = 0.0;
    std::optional<double> loglik_at_max; // grid estimators only
    int iterations = 0;                  // 0 for one-shot estimators
    CVector h_hat;                       // channel estimates, when formed
    int discarded = 0;                   // sensors dropped (CRC fusion)
    bool no_information = false;         // every sensor was dropped
    std::vector<double> trace;           // theta_hat after each iteration
};

struct ChannelEstimate {
    CVector h_hat;
    double error_variance; // L sigma_c^2 / (L sigma_c^2 + L_p E_d)
    double kappa;          // sqrt(E_d) L / (L sigma_c^2 + L_p E_d)
};

/// kappa * c_p^H y_p: linear MMSE estimate of h from the pilot samples.
cplx mmse_channel_estimate(std::span<const cplx> y_p, std::span<const cplx> c_p, double energy, double sigma_c,
                           int length, int training_len);

double mmse_kappa(double energy, double sigma_c, int length, int training_len);

/// Per-sensor pilot-based estimates for a batch sent with a training codebook.
ChannelEstimate estimate_channels(const ChannelBatch& batch, const Codebook& cb);

/// Grid MLE with the true channel coefficients.
EstimateReport mle_known_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                             const GridSpec& grid);

/// Grid MLE without channel knowledge. A codebook with a pilot switches to the
/// pilot/data form of the same likelihood.
EstimateReport mle_unknown_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                               const GridSpec& grid);

/// Two-stage estimator: MMSE channel estimates from the pilot, then a
/// coherent grid MLE that treats them as exact.
EstimateReport mle_est_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                           const GridSpec& grid);

/// Same as mle_est_csi with caller-provided channel estimates.
EstimateReport mle_est_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                           const GridSpec& grid, std::span<const cplx> h_hat);

/// Closed-form MLE for amplify-and-forward with known channels.
EstimateReport mle_af(std::span<const cplx> y, std::span<const cplx> h, double gain, double energy, double sigma_s,
                      double sigma_c);

} // namespace decest
