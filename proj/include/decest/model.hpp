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

#include <cstddef>
#include <vector>

namespace decest {

/// Upper-tail probability of the standard normal, Q(x) = P(Z > x).
double q_function(double x);

/// Standard normal density.
double normal_pdf(double x);

/// M-level uniform quantizer with granular region [-W, +W]. Levels are
/// S_m = m*step - W. Cells are half-open (S_m - step/2, S_m + step/2], the
/// two outer cells extend to -inf and +inf.
class Quantizer {
public:
    Quantizer(int levels, double granular_half_width);

    int levels() const noexcept { return levels_; }
    double granular_half_width() const noexcept { return half_width_; }
    double step() const noexcept { return step_; }

    double level(int m) const noexcept { return m * step_ - half_width_; }
    std::vector<double> level_values() const;

    /// Lower and upper boundary of cell m (+-inf for the outer cells).
    double lower_edge(int m) const noexcept;
    double upper_edge(int m) const noexcept;

private:
    int levels_;
    double half_width_;
    double step_;
};

struct QuantizedSample {
    int index;
    double value;
};

enum class Scheme { NaturalBinary, CrcCoded, TrainingPrefixed, AnalogAF };

struct SystemParams {
    int n_sensors = 10;
    double theta_range = 1.0;             // V
    double sigma_s = 0.1;
    double sigma_c = 1.0;
    double energy_per_observation = 1.0;  // E_d
    Quantizer quantizer{16, 1.0};
    Scheme scheme = Scheme::NaturalBinary;
    int training_len = 0;                 // only for TrainingPrefixed

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

struct ObservationVector {
    std::vector<double> values;
};

struct QuantizedVector {
    std::vector<int> indices;
    std::vector<double> values;
};

/// x_i = theta + n_i, n_i ~ N(0, sigma_s^2). Rejects |theta| > V.
ObservationVector sample_observations(double theta, const SystemParams& params, Rng& rng);

QuantizedSample quantize(double x, const Quantizer& q);
QuantizedVector quantize(const ObservationVector& x, const Quantizer& q);

/// Exact cell probabilities p(S_m | theta). Outer cells carry the tails, so
/// the vector sums to one.
std::vector<double> pmf_quantized(double theta, const Quantizer& q, double sigma_s);

/// In-place variant for hot loops. out.size() must equal q.levels().
void pmf_quantized(double theta, const Quantizer& q, double sigma_s, std::span<double> out);

/// Midpoint approximation step/(sqrt(2 pi) sigma_s) * exp(-(S_m - theta)^2 / 2 sigma_s^2).
/// Not normalized: the weights sum to roughly one only when step << sigma_s
/// and theta is well inside the granular region.
std::vector<double> pmf_approx(double theta, const Quantizer& q, double sigma_s);

/// log of pmf_approx, without underflow.
std::vector<double> log_pmf_approx(double theta, const Quantizer& q, double sigma_s);

} // namespace decest
