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

#include "decest/estimators_ml.hpp"

#include <cmath>
#include <stdexcept>

namespace decest {

namespace {

void check_levels(const Codebook& cb, const SystemParams& params, const char* who) {
    if (cb.size() != params.quantizer.levels())
        throw std::invalid_argument(std::string(who) + ": codebook has " + std::to_string(cb.size()) +
                                    " columns, quantizer has " + std::to_string(params.quantizer.levels()) +
                                    " levels");
}

EstimateReport grid_report(const LikelihoodTable& table, const SystemParams& params, const GridSpec& grid) {
    const auto best = maximize_loglik(table, params.quantizer, params.sigma_s, grid);
    EstimateReport r;
    r.theta_hat = best.theta;
    r.loglik_at_max = best.value;
    return r;
}

} // namespace

double mmse_kappa(double energy, double sigma_c, int length, int training_len) {
    const double L = length;
    return std::sqrt(energy) * L / (L * sigma_c * sigma_c + training_len * energy);
}

cplx mmse_channel_estimate(std::span<const cplx> y_p, std::span<const cplx> c_p, double energy, double sigma_c,
                           int length, int training_len) {
    if (training_len < 1 || static_cast<int>(c_p.size()) != training_len)
        throw std::invalid_argument("mmse_channel_estimate: need a pilot of training_len >= 1 symbols");
    return mmse_kappa(energy, sigma_c, length, training_len) * inner(c_p, y_p);
}

ChannelEstimate estimate_channels(const ChannelBatch& batch, const Codebook& cb) {
    const int Lp = cb.training_len();
    if (Lp < 1)
        throw std::invalid_argument("estimate_channels: codebook has no pilot");
    if (batch.y.cols() != static_cast<std::size_t>(cb.length()))
        throw std::invalid_argument("estimate_channels: received length does not match codebook");
    const double L = cb.length();
    const double s2 = batch.sigma_c * batch.sigma_c;
    ChannelEstimate est;
    est.kappa = mmse_kappa(batch.energy, batch.sigma_c, cb.length(), Lp);
    est.error_variance = L * s2 / (L * s2 + Lp * batch.energy);
    est.h_hat.resize(batch.y.rows());
    for (std::size_t i = 0; i < batch.y.rows(); ++i)
        est.h_hat[i] = est.kappa * inner(cb.pilot(), batch.y.row(i).first(static_cast<std::size_t>(Lp)));
    return est;
}

EstimateReport mle_known_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                             const GridSpec& grid) {
    check_levels(cb, params, "mle_known_csi");
    return grid_report(table_known_csi(batch, cb), params, grid);
}

EstimateReport mle_unknown_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                               const GridSpec& grid) {
    check_levels(cb, params, "mle_unknown_csi");
    return grid_report(table_unknown_csi(batch, cb), params, grid);
}

EstimateReport mle_est_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                           const GridSpec& grid, std::span<const cplx> h_hat) {
    check_levels(cb, params, "mle_est_csi");
    auto r = grid_report(table_est_csi(batch, cb, h_hat), params, grid);
    r.h_hat.assign(h_hat.begin(), h_hat.end());
    return r;
}

EstimateReport mle_est_csi(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                           const GridSpec& grid) {
    if (cb.training_len() < 1)
        throw std::invalid_argument("mle_est_csi: codebook has no pilot");
    const auto est = estimate_channels(batch, cb);
    return mle_est_csi(batch, cb, params, grid, est.h_hat);
}

EstimateReport mle_af(std::span<const cplx> y, std::span<const cplx> h, double gain, double energy, double sigma_s,
                      double sigma_c) {
    if (y.size() != h.size() || y.empty())
        throw std::invalid_argument("mle_af: need matching, nonempty y and h");
    const double amp = std::sqrt(energy) * gain;
    const double s2c = sigma_c * sigma_c;
    double num = 0.0;
    double den = 0.0;
    // Noiseless sensors (zero variance) dominate every noisy one.
    double exact_num = 0.0;
    double exact_den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double g = std::norm(h[i]);
        if (g == 0.0)
            continue;
        const double stat = std::real(std::conj(h[i]) * y[i]);
        const double var = s2c + 2.0 * energy * gain * gain * g * sigma_s * sigma_s;
        if (var == 0.0) {
            exact_num += stat;
            exact_den += amp * g;
        } else {
            num += stat / var;
            den += amp * g / var;
        }
    }
    EstimateReport r;
    if (exact_den > 0.0)
        r.theta_hat = exact_num / exact_den;
    else if (den > 0.0)
        r.theta_hat = num / den;
    else
        throw std::domain_error("mle_af: every channel coefficient is zero");
    return r;
}

} // namespace decest
