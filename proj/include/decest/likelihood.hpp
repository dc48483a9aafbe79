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
#include "decest/model.hpp"
#include "decest/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace decest {

// Per-codeword log-weights log p(y_i | ., c_m), with every term that does not
// depend on m dropped.

/// -||y - sqrt(E_d) h c_m||^2 / sigma_c^2
double logw_known_csi(std::span<const cplx> y, cplx h, std::span<const cplx> c_m, double energy, double sigma_c);

/// beta |y^H c_m|^2, beta = E_d / (sigma_c^2 (E_d + sigma_c^2))
double logw_unknown_csi(std::span<const cplx> y, std::span<const cplx> c_m, double energy, double sigma_c);

/// beta |y_d^H c_dm|^2 + 2 beta Re{c_p^H y_p y_d^H c_dm}
double logw_training(std::span<const cplx> y_p, std::span<const cplx> y_d, std::span<const cplx> c_p,
                     std::span<const cplx> c_dm, double energy, double sigma_c);

/// (2 sqrt(E_d) / sigma_c^2) Re{h_hat y_d^H c_dm}: channel estimate used as if exact.
double logw_est_csi(std::span<const cplx> y_d, cplx h_hat, std::span<const cplx> c_dm, double energy,
                    double sigma_c);

/// beta = E_d / (sigma_c^2 (E_d + sigma_c^2))
double noncoherent_beta(double energy, double sigma_c);

enum class LikelihoodKind { KnownCsi, UnknownCsi, Training, EstimatedCsi };

/// N x M table of log-weights; theta enters the likelihood only through the PMF.
struct LikelihoodTable {
    RMatrix logw;
    LikelihoodKind kind = LikelihoodKind::KnownCsi;

    std::size_t sensors() const noexcept { return logw.rows(); }
    std::size_t levels() const noexcept { return logw.cols(); }
};

LikelihoodTable table_known_csi(const ChannelBatch& batch, const Codebook& cb);
/// Full-word non-coherent kernel, or the pilot/data split when cb has a pilot.
LikelihoodTable table_unknown_csi(const ChannelBatch& batch, const Codebook& cb);
LikelihoodTable table_est_csi(const ChannelBatch& batch, const Codebook& cb, std::span<const cplx> h_hat);

/// Concatenate sensors of two tables with the same level count.
LikelihoodTable stack(const LikelihoodTable& a, const LikelihoodTable& b);

double logsumexp(std::span<const double> v);

/// sum_i logsumexp_m(logw[i][m] + log p(S_m | theta)).
/// Throws std::domain_error when the PMF row leaves no mass on any codeword.
double loglik(double theta, const LikelihoodTable& table, const Quantizer& q, double sigma_s);

/// Same sum with an explicit PMF vector (size = table.levels()).
double loglik_with_pmf(const LikelihoodTable& table, std::span<const double> pmf);

struct GridSpec {
    double lo = -1.0;
    double hi = 1.0;
    double step = 1e-2;

    void validate() const;
};

/// [-V, V] with step = quantizer step / N.
GridSpec default_grid(const SystemParams& params);

/// Evenly spaced points from lo to hi inclusive; spacing is the largest value
/// not exceeding step that divides hi - lo.
std::vector<double> grid_points(const GridSpec& grid);

struct GridMax {
    double theta;
    double value;
};

/// Smallest grid point attaining the maximum.
GridMax grid_maximize(const std::function<double(double)>& f, const GridSpec& grid);

/// Grid search of loglik; reuses the theta-independent exponentials across
/// grid points.
GridMax maximize_loglik(const LikelihoodTable& table, const Quantizer& q, double sigma_s, const GridSpec& grid);

} // namespace decest
