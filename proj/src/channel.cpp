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

#include "decest/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace decest {

cplx complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double s = std::sqrt(0.5 * variance);
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {s * re, s * im};
}

CVector sample_channel(int n_sensors, Rng& rng) {
    if (n_sensors < 1)
        throw std::invalid_argument("sample_channel: need at least one sensor");
    CVector h(static_cast<std::size_t>(n_sensors));
    for (auto& v : h)
        v = complex_gaussian(rng);
    return h;
}

namespace {

void check_dims(std::span<const CVector> messages, std::span<const cplx> h) {
    if (messages.size() != h.size())
        throw std::invalid_argument("transmit: " + std::to_string(messages.size()) + " messages for " +
                                    std::to_string(h.size()) + " channels");
    if (messages.empty())
        throw std::invalid_argument("transmit: no sensors");
    const auto L = messages.front().size();
    for (const auto& c : messages)
        if (c.size() != L || L == 0)
            throw std::invalid_argument("transmit: messages must share a nonzero length");
}

} // namespace

ChannelBatch transmit_with_noise(std::span<const CVector> messages, std::span<const cplx> h, double energy,
                                 double sigma_c, const CMatrix& unit_noise) {
    check_dims(messages, h);
    const std::size_t N = messages.size();
    const std::size_t L = messages.front().size();
    if (unit_noise.rows() != N || unit_noise.cols() != L)
        throw std::invalid_argument("transmit: noise matrix shape mismatch");
    if (!(energy > 0.0) || !(sigma_c >= 0.0))
        throw std::invalid_argument("transmit: energy must be > 0 and sigma_c >= 0");
    ChannelBatch b;
    b.h.assign(h.begin(), h.end());
    b.y = CMatrix(N, L);
    b.energy = energy;
    b.sigma_c = sigma_c;
    const double amp = std::sqrt(energy);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t l = 0; l < L; ++l)
            b.y(i, l) = amp * h[i] * messages[i][l] + sigma_c * unit_noise(i, l);
    return b;
}

ChannelBatch transmit(std::span<const CVector> messages, std::span<const cplx> h, double energy, double sigma_c,
                      Rng& rng) {
    check_dims(messages, h);
    CMatrix noise(messages.size(), messages.front().size());
    for (std::size_t i = 0; i < noise.rows(); ++i)
        for (auto& v : noise.row(i))
            v = complex_gaussian(rng);
    return transmit_with_noise(messages, h, energy, sigma_c, noise);
}

double sigma_s_from_gamma_s(double gamma_s_db, double granular_half_width) {
    return granular_half_width * std::pow(10.0, -gamma_s_db / 20.0);
}

double gamma_s_from_sigma_s(double sigma_s, double granular_half_width) {
    return 20.0 * std::log10(granular_half_width / sigma_s);
}

double sigma_c_from_gamma_c(double gamma_c_db, double energy) {
    return std::sqrt(energy * std::pow(10.0, -gamma_c_db / 10.0));
}

double gamma_c_from_sigma_c(double sigma_c, double energy) {
    return 10.0 * std::log10(energy / (sigma_c * sigma_c));
}

} // namespace decest
