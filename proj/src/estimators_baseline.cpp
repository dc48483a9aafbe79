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

#include "decest/estimators_baseline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace decest {

LevelPosterior posterior_levels(const LikelihoodTable& table, std::span<const double> log_prior, const Quantizer& q) {
    const std::size_t M = table.levels();
    if (log_prior.size() != M || static_cast<std::size_t>(q.levels()) != M)
        throw std::invalid_argument("posterior_levels: prior/table/quantizer sizes differ");
    LevelPosterior out;
    out.mean.resize(table.sensors());
    out.var.resize(table.sensors());
    std::vector<double> w(M);
    for (std::size_t i = 0; i < table.sensors(); ++i) {
        const auto row = table.logw.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < M; ++m) {
            w[m] = row[m] + log_prior[m];
            if (!std::isnan(w[m]))
                mx = std::max(mx, w[m]);
        }
        if (!std::isfinite(mx))
            throw std::domain_error("posterior_levels: all codeword weights vanish for sensor " + std::to_string(i));
        double z = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const double e = std::exp(w[m] - mx);
            const double s = q.level(static_cast<int>(m));
            z += e;
            s1 += e * s;
            s2 += e * s * s;
        }
        const double mean = s1 / z;
        out.mean[i] = mean;
        out.var[i] = std::max(s2 / z - mean * mean, 0.0);
    }
    return out;
}

double weighted_blue(std::span<const double> s_hat, std::span<const double> s_var, double sigma_s) {
    if (s_hat.size() != s_var.size() || s_hat.empty())
        throw std::invalid_argument("weighted_blue: need matching, nonempty inputs");
    double num = 0.0, den = 0.0;
    const double s2 = sigma_s * sigma_s;
    for (std::size_t i = 0; i < s_hat.size(); ++i) {
        const double w = 1.0 / (s2 + s_var[i]);
        num += w * s_hat[i];
        den += w;
    }
    return num / den;
}

EstimateReport subopt_from_table(const LikelihoodTable& table, const SystemParams& params, int max_iters) {
    if (max_iters < 1)
        throw std::invalid_argument("subopt_estimate: max_iters must be >= 1");
    const auto& q = params.quantizer;
    if (table.levels() != static_cast<std::size_t>(q.levels()))
        throw std::invalid_argument("subopt_estimate: table level count does not match quantizer");
    SuboptState st;
    st.log_prior.assign(table.levels(), -std::log(static_cast<double>(table.levels())));
    EstimateReport r;
    for (int it = 1; it <= max_iters; ++it) {
        auto post = posterior_levels(table, st.log_prior, q);
        st.s_hat = std::move(post.mean);
        st.s_var = std::move(post.var);
        const double prev = st.theta_hat;
        st.theta_hat = weighted_blue(st.s_hat, st.s_var, params.sigma_s);
        st.iteration = it;
        r.trace.push_back(st.theta_hat);
        if (it > 1 && std::abs(st.theta_hat - prev) < 1e-6)
            break;
        auto lp = log_pmf_approx(st.theta_hat, q, params.sigma_s);
        const double norm = logsumexp(lp);
        for (auto& v : lp)
            v -= norm;
        st.log_prior = std::move(lp);
    }
    r.theta_hat = st.theta_hat;
    r.iterations = st.iteration;
    return r;
}

EstimateReport subopt_estimate(const ChannelBatch& batch, const Codebook& cb, const SystemParams& params,
                               int max_iters, bool known_csi) {
    if (!(batch.sigma_c > 0.0))
        throw std::invalid_argument("subopt_estimate: sigma_c must be > 0");
    const auto table = known_csi ? table_known_csi(batch, cb) : table_unknown_csi(batch, cb);
    return subopt_from_table(table, params, max_iters);
}

namespace {

int nearest_column(std::span<const cplx> v, const Codebook& cb) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int m = 0; m < cb.size(); ++m) {
        const auto c = cb.column(m);
        double d = 0.0;
        for (std::size_t l = 0; l < v.size(); ++l)
            d += std::norm(v[l] - c[l]);
        if (d < best_d) {
            best_d = d;
            best = m;
        }
    }
    return best;
}

} // namespace

EstimateReport mrc_estimate(const ChannelBatch& batch, const Codebook& cb, const Quantizer& q) {
    if (cb.size() != q.levels())
        throw std::invalid_argument("mrc_estimate: codebook size does not match quantizer");
    if (batch.y.cols() != static_cast<std::size_t>(cb.length()))
        throw std::invalid_argument("mrc_estimate: received length does not match codebook");
    const std::size_t L = batch.y.cols();
    CVector comb(L, cplx{0.0, 0.0});
    double gain = 0.0;
    for (std::size_t i = 0; i < batch.y.rows(); ++i) {
        const cplx hc = std::conj(batch.h[i]);
        gain += std::norm(batch.h[i]);
        const auto y = batch.y.row(i);
        for (std::size_t l = 0; l < L; ++l)
            comb[l] += hc * y[l];
    }
    if (!(gain > 0.0))
        throw std::domain_error("mrc_estimate: zero channel energy");
    const double scale = 1.0 / (std::sqrt(batch.energy) * gain);
    for (auto& v : comb)
        v *= scale;
    EstimateReport r;
    r.theta_hat = q.level(nearest_column(comb, cb));
    return r;
}

CVector principal_eigenvector(const CMatrix& r, bool* used_fallback) {
    const std::size_t L = r.rows();
    if (L == 0 || r.cols() != L)
        throw std::invalid_argument("principal_eigenvector: need a square nonempty matrix");
    if (used_fallback)
        *used_fallback = false;
    // Start from the column with the most energy.
    std::size_t start = 0;
    double best = -1.0;
    for (std::size_t c = 0; c < L; ++c) {
        double e = 0.0;
        for (std::size_t k = 0; k < L; ++k)
            e += std::norm(r(k, c));
        if (e > best) {
            best = e;
            start = c;
        }
    }
    CVector v(L), next(L);
    for (std::size_t k = 0; k < L; ++k)
        v[k] = r(k, start);
    double nv = std::sqrt(norm2(v));
    if (nv > 0.0) {
        for (auto& x : v)
            x /= nv;
        for (int it = 0; it < 500; ++it) {
            for (std::size_t a = 0; a < L; ++a) {
                cplx acc{0.0, 0.0};
                for (std::size_t b = 0; b < L; ++b)
                    acc += r(a, b) * v[b];
                next[a] = acc;
            }
            const double nn = std::sqrt(norm2(next));
            if (!(nn > 0.0))
                break;
            double diff = 0.0;
            for (std::size_t k = 0; k < L; ++k) {
                next[k] /= nn;
                diff += std::norm(next[k] - v[k]);
            }
            v.swap(next);
            if (std::sqrt(diff) < 1e-10)
                return v;
        }
    }
    if (used_fallback)
        *used_fallback = true;
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = r(a, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("principal_eigenvector: eigensolver failed");
    const auto col = es.eigenvectors().col(static_cast<Eigen::Index>(L) - 1);
    for (std::size_t k = 0; k < L; ++k)
        v[k] = col(static_cast<Eigen::Index>(k));
    return v;
}

EstimateReport subspace_estimate(const CMatrix& y, const Codebook& cb, const Quantizer& q) {
    if (cb.size() != q.levels())
        throw std::invalid_argument("subspace_estimate: codebook size does not match quantizer");
    if (y.rows() < 1 || y.cols() != static_cast<std::size_t>(cb.length()))
        throw std::invalid_argument("subspace_estimate: received block does not match codebook");
    if (!detect_phase_ambiguity(cb).empty())
        throw std::invalid_argument("subspace_estimate: codebook has phase-ambiguous columns");
    const std::size_t L = y.cols();
    CMatrix r(L, L);
    for (std::size_t i = 0; i < y.rows(); ++i) {
        const auto row = y.row(i);
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = 0; b < L; ++b)
                r(a, b) += row[a] * std::conj(row[b]);
    }
    const auto v = principal_eigenvector(r);
    int best = 0;
    double best_v = -1.0;
    for (int m = 0; m < cb.size(); ++m) {
        const double c = std::abs(inner(v, cb.column(m)));
        if (c > best_v) {
            best_v = c;
            best = m;
        }
    }
    EstimateReport rep;
    rep.theta_hat = q.level(best);
    return rep;
}

EstimateReport fusion_estimate(const ChannelBatch& batch, const Codebook& cb, const Quantizer& q, bool use_crc) {
    if (cb.size() != q.levels())
        throw std::invalid_argument("fusion_estimate: codebook size does not match quantizer");
    if (batch.y.cols() != static_cast<std::size_t>(cb.length()))
        throw std::invalid_argument("fusion_estimate: received length does not match codebook");
    if (use_crc && cb.kind() != CodebookKind::CrcCoded)
        throw std::invalid_argument("fusion_estimate: CRC check requested for a codebook without CRC");
    EstimateReport r;
    double sum = 0.0;
    int kept = 0;
    const auto Lp = static_cast<std::size_t>(cb.training_len());
    for (std::size_t i = 0; i < batch.y.rows(); ++i) {
        const auto y = batch.y.row(i);
        int m_hat = 0;
        if (use_crc) {
            // Symbol-by-symbol coherent slicing, then the CRC decides.
            const cplx hc = std::conj(batch.h[i]);
            std::vector<std::uint8_t> bits(y.size() - Lp);
            for (std::size_t l = Lp; l < y.size(); ++l)
                bits[l - Lp] = std::real(hc * y[l]) > 0.0 ? 1 : 0;
            if (!crc4_check(bits)) {
                ++r.discarded;
                continue;
            }
            m_hat = 0;
            for (int b = 0; b < cb.data_bits(); ++b)
                m_hat = (m_hat << 1) | bits[static_cast<std::size_t>(b)];
        } else {
            double best = -std::numeric_limits<double>::infinity();
            const cplx g = std::sqrt(batch.energy) * batch.h[i];
            for (int m = 0; m < cb.size(); ++m) {
                const auto c = cb.column(m);
                double d = 0.0;
                for (std::size_t l = 0; l < y.size(); ++l)
                    d += std::norm(y[l] - g * c[l]);
                if (-d > best) {
                    best = -d;
                    m_hat = m;
                }
            }
        }
        sum += q.level(m_hat);
        ++kept;
    }
    if (kept == 0) {
        r.theta_hat = 0.0;
        r.no_information = true;
    } else {
        r.theta_hat = sum / kept;
    }
    return r;
}

double blue_estimate(const ObservationVector& x) {
    if (x.values.empty())
        throw std::invalid_argument("blue_estimate: no observations");
    return std::accumulate(x.values.begin(), x.values.end(), 0.0) / static_cast<double>(x.values.size());
}

double quasi_blue_estimate(const QuantizedVector& s) {
    if (s.values.empty())
        throw std::invalid_argument("quasi_blue_estimate: no observations");
    return std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(s.values.size());
}

double blue_bound(double sigma_s, int n_sensors) {
    return sigma_s * sigma_s / n_sensors;
}

double quasi_blue_bound(double sigma_s, double step, int n_sensors) {
    return (sigma_s * sigma_s + step * step / 12.0) / n_sensors;
}

} // namespace decest
