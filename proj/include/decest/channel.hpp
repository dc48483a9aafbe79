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

#include "decest/rng.hpp"
#include "decest/types.hpp"

#include <span>
#include <vector>

namespace decest {

/// One observation period over the orthogonal MAC: row i of y is sensor i's
/// L received samples, h[i] its block-fading coefficient.
struct ChannelBatch {
    CVector h;
    CMatrix y;
    double energy = 1.0;  // E_d
    double sigma_c = 1.0; // total complex noise std per sample
};

struct SnrSpec {
    double gamma_s_db = 20.0;
    double gamma_c_db = 6.0;
};

/// Draws from CN(0, variance): real and imaginary parts each N(0, variance/2).
cplx complex_gaussian(Rng& rng, double variance = 1.0);

/// i.i.d. CN(0,1) fading coefficients.
CVector sample_channel(int n_sensors, Rng& rng);

/// y_i = sqrt(E_d) h_i c_i + n_i with n_i ~ CN(0, sigma_c^2 I).
ChannelBatch transmit(std::span<const CVector> messages, std::span<const cplx> h, double energy, double sigma_c,
                      Rng& rng);

/// Same as transmit but with caller-supplied unit-variance noise (N x L),
/// scaled by sigma_c. Lets several SNR points share one noise draw.
ChannelBatch transmit_with_noise(std::span<const CVector> messages, std::span<const cplx> h, double energy,
                                 double sigma_c, const CMatrix& unit_noise);

/// sigma_s = W * 10^(-gamma_s/20)
double sigma_s_from_gamma_s(double gamma_s_db, double granular_half_width);
double gamma_s_from_sigma_s(double sigma_s, double granular_half_width);

/// N0 = E_d * 10^(-gamma_c/10), sigma_c = sqrt(N0). N0 is identified with
/// the total complex noise variance sigma_c^2.
double sigma_c_from_gamma_c(double gamma_c_db, double energy);
double gamma_c_from_sigma_c(double sigma_c, double energy);

} // namespace decest
