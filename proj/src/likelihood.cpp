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

#include "decest/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace decest {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_noise(double sigma_c, const char* who) {
    if (!(sigma_c > 0.0))
        throw std::invalid_argument(std::string(who) + ": sigma_c must be > 0");
}

// Evaluates the log-likelihood at many theta values for one table. The
// theta-free factor exp(logw - rowmax) is computed once; rows whose weighted
// sum underflows fall back to an exact log-sum-exp.
class LoglikEvaluator {
public:
    explicit LoglikEvaluator(const LikelihoodTable& table)
        : table_(table), scaled_(table.sensors(), table.levels()), rowmax_(table.sensors()) {
        for (std::size_t i = 0; i < table.sensors(); ++i) {
            const auto row = table.logw.row(i);
            double mx = kNegInf;
            for (double v : row) {
                if (!std::isfinite(v))
                    throw std::invalid_argument("loglik: non-finite log-weight for sensor " + std::to_string(i));
                mx = std::max(mx, v);
            }
            rowmax_[i] = mx;
            auto out = scaled_.row(i);
            for (std::size_t m = 0; m < row.size(); ++m)
                out[m] = std::exp(row[m] - mx);
        }
    }

    double operator()(std::span<const double> pmf) const {
        if (pmf.size() != table_.levels())
            throw std::invalid_argument("loglik: PMF size does not match table");
        double total = 0.0;
        for (std::size_t i = 0; i < table_.sensors(); ++i) {
            const auto s = scaled_.row(i);
            double acc = 0.0;
            for (std::size_t m = 0; m < pmf.size(); ++m)
                acc += s[m] * pmf[m];
            if (acc > 1e-250) {
                total += std::log(acc) + rowmax_[i];
                continue;
            }
            // Mass sits where the PMF is tiny: redo in the log domain.
            const auto row = table_.logw.row(i);
            double mx = kNegInf;
            for (std::size_t m = 0; m < pmf.size(); ++m)
                if (pmf[m] > 0.0)
                    mx = std::max(mx, row[m] + std::log(pmf[m]));
            if (mx == kNegInf)
                throw std::domain_error("loglik: PMF assigns no mass to any codeword (sensor " +
                                        std::to_string(i) + ")");
            double sum = 0.0;
            for (std::size_t m = 0; m < pmf.size(); ++m)
                if (pmf[m] > 0.0)
                    sum += std::exp(row[m] + std::log(pmf[m]) - mx);
            total += mx + std::log(sum);
        }
        return total;
    }

private:
    const LikelihoodTable& table_;
    RMatrix scaled_;
    std::vector<double> rowmax_;
};

} // namespace

double noncoherent_beta(double energy, double sigma_c) {
    const double s2 = sigma_c * sigma_c;
    return energy / (s2 * (energy + s2));
}

double logw_known_csi(std::span<const cplx> y, cplx h, std::span<const cplx> c_m, double energy, double sigma_c) {
    require_noise(sigma_c, "logw_known_csi");
    if (y.size() != c_m.size())
        throw std::invalid_argument("logw_known_csi: length mismatch");
    const cplx g = std::sqrt(energy) * h;
    double d = 0.0;
    for (std::size_t l = 0; l < y.size(); ++l)
        d += std::norm(y[l] - g * c_m[l]);
    return -d / (sigma_c * sigma_c);
}

double logw_unknown_csi(std::span<const cplx> y, std::span<const cplx> c_m, double energy, double sigma_c) {
    require_noise(sigma_c, "logw_unknown_csi");
    return noncoherent_beta(energy, sigma_c) * std::norm(inner(y, c_m));
}

double logw_training(std::span<const cplx> y_p, std::span<const cplx> y_d, std::span<const cplx> c_p,
                     std::span<const cplx> c_dm, double energy, double sigma_c) {
    require_noise(sigma_c, "logw_training");
    if (c_p.empty() || y_p.size() != c_p.size())
        throw std::invalid_argument("logw_training: missing or mismatched pilot");
    const double beta = noncoherent_beta(energy, sigma_c);
    const cplx data = inner(y_d, c_dm);
    const cplx pilot = inner(c_p, y_p);
    return beta * std::norm(data) + 2.0 * beta * std::real(pilot * data);
}

double logw_est_csi(std::span<const cplx> y_d, cplx h_hat, std::span<const cplx> c_dm, double energy,
                    double sigma_c) {
    require_noise(sigma_c, "logw_est_csi");
    return 2.0 * std::sqrt(energy) / (sigma_c * sigma_c) * std::real(h_hat * inner(y_d, c_dm));
}

namespace {

void check_batch(const ChannelBatch& batch, const Codebook& cb, const char* who) {
    if (batch.y.cols() != static_cast<std::size_t>(cb.length()))
        throw std::invalid_argument(std::string(who) + ": received length " + std::to_string(batch.y.cols()) +
                                    " does not match codebook length " + std::to_string(cb.length()));
    if (batch.h.size() != batch.y.rows())
        throw std::invalid_argument(std::string(who) + ": channel vector length mismatch");
}

} // namespace

LikelihoodTable table_known_csi(const ChannelBatch& batch, const Codebook& cb) {
    check_batch(batch, cb, "table_known_csi");
    LikelihoodTable t{RMatrix(batch.y.rows(), static_cast<std::size_t>(cb.size())), LikelihoodKind::KnownCsi};
    for (std::size_t i = 0; i < batch.y.rows(); ++i)
        for (int m = 0; m < cb.size(); ++m)
            t.logw(i, static_cast<std::size_t>(m)) =
                logw_known_csi(batch.y.row(i), batch.h[i], cb.column(m), batch.energy, batch.sigma_c);
    return t;
}

LikelihoodTable table_unknown_csi(const ChannelBatch& batch, const Codebook& cb) {
    check_batch(batch, cb, "table_unknown_csi");
    const auto Lp = static_cast<std::size_t>(cb.training_len());
    LikelihoodTable t{RMatrix(batch.y.rows(), static_cast<std::size_t>(cb.size())),
                      Lp > 0 ? LikelihoodKind::Training : LikelihoodKind::UnknownCsi};
    for (std::size_t i = 0; i < batch.y.rows(); ++i) {
        const auto y = batch.y.row(i);
        for (int m = 0; m < cb.size(); ++m) {
            double v;
            if (Lp > 0)
                v = logw_training(y.first(Lp), y.subspan(Lp), cb.pilot(), cb.data_part(m), batch.energy,
                                  batch.sigma_c);
            else
                v = logw_unknown_csi(y, cb.column(m), batch.energy, batch.sigma_c);
            t.logw(i, static_cast<std::size_t>(m)) = v;
        }
    }
    return t;
}

LikelihoodTable table_est_csi(const ChannelBatch& batch, const Codebook& cb, std::span<const cplx> h_hat) {
    check_batch(batch, cb, "table_est_csi");
    if (h_hat.size() != batch.y.rows())
        throw std::invalid_argument("table_est_csi: channel estimate length mismatch");
    const auto Lp = static_cast<std::size_t>(cb.training_len());
    LikelihoodTable t{RMatrix(batch.y.rows(), static_cast<std::size_t>(cb.size())), LikelihoodKind::EstimatedCsi};
    for (std::size_t i = 0; i < batch.y.rows(); ++i)
        for (int m = 0; m < cb.size(); ++m)
            t.logw(i, static_cast<std::size_t>(m)) =
                logw_est_csi(batch.y.row(i).subspan(Lp), h_hat[i], cb.data_part(m), batch.energy, batch.sigma_c);
    return t;
}

LikelihoodTable stack(const LikelihoodTable& a, const LikelihoodTable& b) {
    if (a.levels() != b.levels())
        throw std::invalid_argument("stack: level counts differ");
    LikelihoodTable t{RMatrix(a.sensors() + b.sensors(), a.levels()), a.kind};
    for (std::size_t i = 0; i < a.sensors(); ++i)
        std::copy(a.logw.row(i).begin(), a.logw.row(i).end(), t.logw.row(i).begin());
    for (std::size_t i = 0; i < b.sensors(); ++i)
        std::copy(b.logw.row(i).begin(), b.logw.row(i).end(), t.logw.row(a.sensors() + i).begin());
    return t;
}

double logsumexp(std::span<const double> v) {
    double mx = kNegInf;
    for (double x : v)
        mx = std::max(mx, x);
    if (mx == kNegInf)
        return kNegInf;
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - mx);
    return mx + std::log(s);
}

double loglik_with_pmf(const LikelihoodTable& table, std::span<const double> pmf) {
    return LoglikEvaluator(table)(pmf);
}

double loglik(double theta, const LikelihoodTable& table, const Quantizer& q, double sigma_s) {
    if (table.levels() != static_cast<std::size_t>(q.levels()))
        throw std::invalid_argument("loglik: table level count does not match quantizer");
    return loglik_with_pmf(table, pmf_quantized(theta, q, sigma_s));
}

void GridSpec::validate() const {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("GridSpec: need finite lo < hi");
    if (!(step > 0.0))
        throw std::invalid_argument("GridSpec: step must be > 0");
}

GridSpec default_grid(const SystemParams& params) {
    return {-params.theta_range, params.theta_range, params.quantizer.step() / params.n_sensors};
}

std::vector<double> grid_points(const GridSpec& grid) {
    grid.validate();
    const double span = grid.hi - grid.lo;
    const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(span / grid.step - 1e-9)));
    std::vector<double> pts(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k)
        pts[k] = grid.lo + span * static_cast<double>(k) / static_cast<double>(intervals);
    pts.back() = grid.hi;
    return pts;
}

GridMax grid_maximize(const std::function<double(double)>& f, const GridSpec& grid) {
    const auto pts = grid_points(grid);
    if (pts.empty())
        throw std::invalid_argument("grid_maximize: empty grid");
    GridMax best{pts.front(), f(pts.front())};
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double v = f(pts[k]);
        if (v > best.value || (std::isnan(best.value) && !std::isnan(v)))
            best = {pts[k], v};
    }
    return best;
}

GridMax maximize_loglik(const LikelihoodTable& table, const Quantizer& q, double sigma_s, const GridSpec& grid) {
    if (table.levels() != static_cast<std::size_t>(q.levels()))
        throw std::invalid_argument("maximize_loglik: table level count does not match quantizer");
    const LoglikEvaluator eval(table);
    std::vector<double> pmf(static_cast<std::size_t>(q.levels()));
    return grid_maximize(
        [&](double theta) {
            pmf_quantized(theta, q, sigma_s, pmf);
            return eval(pmf);
        },
        grid);
}

} // namespace decest
