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
#include "decest/estimators_ml.hpp"
#include "decest/likelihood.hpp"
#include "decest/model.hpp"

#include <span>
#include <vector>

namespace decest {

/// Iterative suboptimal estimator state. All sensors share one prior row.
struct SuboptState {
    std::vector<double> log_prior; // normalized, length M
    std::vector<double> s_hat;     // posterior mean of each sensor's level
    std::vector<double> s_var;     // posterior variance, clamped at 0
    double theta_hat = 0.0;
    int iteration = 0;
};

struct LevelPosterior {
    std::vector<double> mean;
    std::vector<double> var;
};

/// E-step: per-sensor posterior mean and variance of the quantized value under
/// weights logw[i][m] + log_prior[m]. Throws std::domain_error naming the
/// sensor when every weight is -inf.
LevelPosterior posterior_levels(const LikelihoodTable& table, std::span<const double> log_prior, const Quantizer& q);

/// M-step: sum s_hat/(sigma_s^2 + v) / sum 1/(sigma_s^2 + v).
double weighted_blue(std::span<const double> s_hat, std::span<const double> s_var, double sigma_s);

/// Modified EM: uniform prior, posterior-mean E-step, variance-weighted BLUE
/// M-step, prior refresh from the midpoint PMF approximation. Stops after
/// max_iters or when theta moves less than 1e-6.
EstimateReport subopt_from_table(const LikelihoodTable& table, const SystemParams& params, int max_iters = 2);

/// known_csi selects coherent weights; otherwise the non-coherent (or
/// pilot/data) weights are used.
EstimateReport subopt_estimate(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                               int max_iters = 2, bool known_csi = true);

/// Maximal-ratio combining of all sensors, nearest-codeword detection, then
/// reconstruction of the detected level.
EstimateReport mrc_estimate(const ChannelBatch& batch, const Codebook& cb, const Quantizer& q);

/// Principal eigenvector of sum y_i y_i^H by power iteration (tolerance 1e-10,
/// at most 500 steps), with a dense Hermitian eigensolve when it stalls.
CVector principal_eigenvector(const CMatrix& r, bool* used_fallback = nullptr);

/// Subspace detection: argmax_m |v^H c_m| over the principal eigenvector v.
/// Rejects codebooks with phase-ambiguous column pairs.
EstimateReport subspace_estimate(const CMatrix& y, const Codebook& cb, const Quantizer& q);

/// Demodulate each sensor, reconstruct its level and average. With use_crc,
/// symbols are sliced individually and words failing the CRC are dropped;
/// when nothing survives, theta_hat = 0 and no_information is set.
EstimateReport fusion_estimate(const ChannelBatch& batch, const Codebook& cb, const Quantizer& q, bool use_crc);

double blue_estimate(const ObservationVector& x);
double quasi_blue_estimate(const QuantizedVector& s);

/// sigma_s^2 / N
double blue_bound(double sigma_s, int n_sensors);
/// (sigma_s^2 + step^2/12) / N
double quasi_blue_bound(double sigma_s, double step, int n_sensors);

} // namespace decest
