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

#include "decest/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace decest {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double q_function(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

Quantizer::Quantizer(int levels, double granular_half_width)
    : levels_(levels), half_width_(granular_half_width) {
    if (levels < 2)
        throw std::invalid_argument("Quantizer: need at least 2 levels, got " + std::to_string(levels));
    if (!(granular_half_width > 0.0) || !std::isfinite(granular_half_width))
        throw std::invalid_argument("Quantizer: granular half-width must be positive");
    step_ = 2.0 * half_width_ / (levels_ - 1);
}

std::vector<double> Quantizer::level_values() const {
    std::vector<double> out(static_cast<std::size_t>(levels_));
    for (int m = 0; m < levels_; ++m)
        out[static_cast<std::size_t>(m)] = level(m);
    return out;
}

double Quantizer::lower_edge(int m) const noexcept {
    return m == 0 ? -kInf : upper_edge(m - 1);
}

double Quantizer::upper_edge(int m) const noexcept {
    // shared with lower_edge(m + 1) so adjacent cells meet exactly
    return m == levels_ - 1 ? kInf : (m + 0.5) * step_ - half_width_;
}

void SystemParams::validate() const {
    if (n_sensors < 1)
        throw std::invalid_argument("SystemParams: n_sensors must be >= 1");
    if (!(theta_range > 0.0))
        throw std::invalid_argument("SystemParams: theta_range must be > 0");
    if (!(sigma_s > 0.0))
        throw std::invalid_argument("SystemParams: sigma_s must be > 0");
    if (!(sigma_c >= 0.0))
        throw std::invalid_argument("SystemParams: sigma_c must be >= 0");
    if (!(energy_per_observation > 0.0))
        throw std::invalid_argument("SystemParams: energy_per_observation must be > 0");
    if (scheme == Scheme::TrainingPrefixed && training_len < 1)
        throw std::invalid_argument("SystemParams: training-prefixed scheme needs training_len >= 1");
}

ObservationVector sample_observations(double theta, const SystemParams& params, Rng& rng) {
    if (!(std::abs(theta) <= params.theta_range))
        throw std::invalid_argument("sample_observations: theta outside [-V, +V]");
    std::normal_distribution<double> gauss(0.0, 1.0);
    ObservationVector x;
    x.values.resize(static_cast<std::size_t>(params.n_sensors));
    for (auto& v : x.values)
        v = theta + params.sigma_s * gauss(rng);
    return x;
}

QuantizedSample quantize(double x, const Quantizer& q) {
    const int top = q.levels() - 1;
    if (std::isnan(x))
        throw std::invalid_argument("quantize: NaN input");
    double r = std::round((x + q.granular_half_width()) / q.step());
    int m = static_cast<int>(std::clamp(r, 0.0, static_cast<double>(top)));
    // Settle rounding at the half-open boundaries using the same edge formula
    // the cell definition uses.
    while (m > 0 && x <= q.lower_edge(m))
        --m;
    while (m < top && x > q.upper_edge(m))
        ++m;
    return {m, q.level(m)};
}

QuantizedVector quantize(const ObservationVector& x, const Quantizer& q) {
    QuantizedVector out;
    out.indices.reserve(x.values.size());
    out.values.reserve(x.values.size());
    for (double v : x.values) {
        auto s = quantize(v, q);
        out.indices.push_back(s.index);
        out.values.push_back(s.value);
    }
    return out;
}

void pmf_quantized(double theta, const Quantizer& q, double sigma_s, std::span<double> out) {
    if (!(sigma_s > 0.0))
        throw std::invalid_argument("pmf_quantized: sigma_s must be > 0");
    if (out.size() != static_cast<std::size_t>(q.levels()))
        throw std::invalid_argument("pmf_quantized: output size mismatch");
    const int M = q.levels();
    // Boundary b between cells b-1 and b sits at S_b - step/2. Keep both tails
    // per boundary: the small one comes from erfc, the other from 1 - small.
    double z_lo = -kInf;
    double upper_lo = 1.0; // Q(z_lo)
    double lower_lo = 0.0; // 1 - Q(z_lo)
    for (int m = 0; m < M; ++m) {
        double z_hi = kInf;
        double upper_hi = 0.0;
        double lower_hi = 1.0;
        if (m < M - 1) {
            z_hi = (q.upper_edge(m) - theta) / sigma_s;
            if (z_hi >= 0.0) {
                upper_hi = q_function(z_hi);
                lower_hi = 1.0 - upper_hi;
            } else {
                lower_hi = q_function(-z_hi);
                upper_hi = 1.0 - lower_hi;
            }
        }
        double p;
        if (z_lo >= 0.0)
            p = upper_lo - upper_hi;
        else if (z_hi <= 0.0)
            p = lower_hi - lower_lo;
        else
            p = 1.0 - upper_hi - lower_lo;
        out[static_cast<std::size_t>(m)] = std::max(p, 0.0);
        z_lo = z_hi;
        upper_lo = upper_hi;
        lower_lo = lower_hi;
    }
}

std::vector<double> pmf_quantized(double theta, const Quantizer& q, double sigma_s) {
    std::vector<double> out(static_cast<std::size_t>(q.levels()));
    pmf_quantized(theta, q, sigma_s, out);
    return out;
}

std::vector<double> log_pmf_approx(double theta, const Quantizer& q, double sigma_s) {
    if (!(sigma_s > 0.0))
        throw std::invalid_argument("pmf_approx: sigma_s must be > 0");
    const double log_scale = std::log(q.step() / (std::sqrt(2.0 * std::numbers::pi) * sigma_s));
    std::vector<double> out(static_cast<std::size_t>(q.levels()));
    for (int m = 0; m < q.levels(); ++m) {
        const double z = (q.level(m) - theta) / sigma_s;
        out[static_cast<std::size_t>(m)] = log_scale - 0.5 * z * z;
    }
    return out;
}

std::vector<double> pmf_approx(double theta, const Quantizer& q, double sigma_s) {
    auto out = log_pmf_approx(theta, q, sigma_s);
    for (auto& v : out)
        v = std::exp(v);
    return out;
}

} // namespace decest
