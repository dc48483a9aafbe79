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

#include "decest/analysis.hpp"

#include "decest/channel.hpp"
#include "decest/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace decest {

PmfDerivatives pmf_derivatives(double theta, const Quantizer& q, double sigma_s) {
    if (!(sigma_s > 0.0))
        throw std::invalid_argument("pmf_derivatives: sigma_s must be > 0");
    const int M = q.levels();
    PmfDerivatives d;
    d.first.resize(static_cast<std::size_t>(M));
    d.second.resize(static_cast<std::size_t>(M));
    // phi(z) and z*phi(z) at each edge; both vanish at +-inf.
    auto edge_terms = [&](double edge, double& phi, double& zphi) {
        if (!std::isfinite(edge)) {
            phi = 0.0;
            zphi = 0.0;
            return;
        }
        const double z = (edge - theta) / sigma_s;
        phi = normal_pdf(z);
        zphi = z * phi;
    };
    for (int m = 0; m < M; ++m) {
        double phi_lo, zphi_lo, phi_hi, zphi_hi;
        edge_terms(q.lower_edge(m), phi_lo, zphi_lo);
        edge_terms(q.upper_edge(m), phi_hi, zphi_hi);
        d.first[static_cast<std::size_t>(m)] = (phi_lo - phi_hi) / sigma_s;
        d.second[static_cast<std::size_t>(m)] = (zphi_lo - zphi_hi) / (sigma_s * sigma_s);
    }
    return d;
}

FisherEstimate fisher_information_unknown_csi(double theta, const SystemParams& params, const Codebook& cb,
                                              long mc_samples, Rng& rng) {
    const auto& q = params.quantizer;
    if (cb.size() != q.levels())
        throw std::invalid_argument("fisher_information_unknown_csi: codebook does not match quantizer");
    if (!(params.sigma_c > 0.0))
        throw std::invalid_argument("fisher_information_unknown_csi: sigma_c must be > 0");
    if (mc_samples < 1)
        throw std::invalid_argument("fisher_information_unknown_csi: need samples");
    const auto pmf = pmf_quantized(theta, q, params.sigma_s);
    const auto der = pmf_derivatives(theta, q, params.sigma_s);
    std::discrete_distribution<int> pick(pmf.begin(), pmf.end());
    const auto M = static_cast<std::size_t>(q.levels());
    const auto L = static_cast<std::size_t>(cb.length());
    const double amp = std::sqrt(params.energy_per_observation);
    CVector y(L);
    std::vector<double> lw(M);
    // Welford accumulation of the squared score.
    double mean = 0.0, m2 = 0.0;
    for (long k = 0; k < mc_samples; ++k) {
        const int m = pick(rng);
        const cplx h = complex_gaussian(rng);
        const auto c = cb.column(m);
        for (std::size_t l = 0; l < L; ++l)
            y[l] = amp * h * c[l] + params.sigma_c * complex_gaussian(rng);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < M; ++j) {
            lw[j] = logw_unknown_csi(y, cb.column(static_cast<int>(j)), params.energy_per_observation, params.sigma_c);
            mx = std::max(mx, lw[j]);
        }
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const double e = std::exp(lw[j] - mx);
            num += e * der.first[j];
            den += e * pmf[j];
        }
        const double score = num / den;
        const double s2 = score * score;
        const double delta = s2 - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (s2 - mean);
    }
    FisherEstimate f;
    f.information = mean;
    f.mc_samples = mc_samples;
    f.std_error = mc_samples > 1 ? std::sqrt(m2 / static_cast<double>(mc_samples - 1) / static_cast<double>(mc_samples))
                                 : std::numeric_limits<double>::infinity();
    return f;
}

CrlbResult crlb_from_information(double theta, int n_sensors, const FisherEstimate& info) {
    if (n_sensors < 1)
        throw std::invalid_argument("crlb: n_sensors must be >= 1");
    if (!(info.information > 0.0))
        throw std::domain_error("crlb: Fisher information estimate is not positive; increase samples");
    CrlbResult r;
    r.theta = theta;
    r.n_sensors = n_sensors;
    r.information = info.information;
    r.bound = 1.0 / (n_sensors * info.information);
    r.mc_samples = info.mc_samples;
    r.std_error = r.bound * info.std_error / info.information;
    return r;
}

CrlbResult crlb_unknown_csi(double theta, const SystemParams& params, const Codebook& cb, long mc_samples, Rng& rng) {
    if (mc_samples < 1000)
        throw std::invalid_argument("crlb_unknown_csi: need at least 1000 Monte Carlo samples");
    const auto info = fisher_information_unknown_csi(theta, params, cb, mc_samples, rng);
    return crlb_from_information(theta, params.n_sensors, info);
}

} // namespace decest
