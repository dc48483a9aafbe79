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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "decest/analysis.hpp"
#include "decest/channel.hpp"
#include "decest/codebook.hpp"
#include "decest/estimators_baseline.hpp"
#include "decest/estimators_ml.hpp"
#include "decest/harness.hpp"
#include "decest/likelihood.hpp"
#include "decest/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace decest;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Paired {
    double mean; // mean of a - b
    double se;
};

Paired paired(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<double>(a.size());
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t)
        s += a[t] - b[t];
    const double m = s / n;
    double ss = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t)
        ss += std::pow(a[t] - b[t] - m, 2);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

Scenario base(std::string name, std::vector<double> gamma_c, std::vector<std::string> est, long trials) {
    Scenario s;
    s.name = std::move(name);
    s.sweep.values = std::move(gamma_c);
    s.estimators = std::move(est);
    s.trials = trials;
    s.seed = 20240601;
    return s;
}

std::size_t point_index(const ScenarioResult& r, double v) {
    for (std::size_t p = 0; p < r.points.size(); ++p)
        if (r.points[p].sweep_value == v)
            return p;
    throw std::logic_error("missing sweep point");
}

// 1 ------------------------------------------------------------------------
Outcome blue_anchor() {
    auto s = base("blue", {6.0}, {"blue"}, 100000);
    const auto t0 = Clock::now();
    const auto t = run_scenario(s);
    const double secs = seconds_since(t0);
    const double mse = t.rows[0].mse;
    const double rel = std::abs(mse / 1e-3 - 1.0);
    return {rel <= 0.03 && secs < 10.0, fmt("MSE=%.6g (target 1.0e-3, rel err %.2f%%, tol 3%%), runtime %.2fs (< 10s)",
                                             mse, 100.0 * rel, secs)};
}

// 2 ------------------------------------------------------------------------
Outcome quasi_blue_anchor() {
    auto s = base("qblue", {300.0}, {"qblue"}, 100000); // 300 dB: noiseless channel
    s.theta_source = ThetaSource::LevelGrid;
    const auto t = run_scenario(s);
    const double bound = quasi_blue_bound(0.1, 2.0 / 15.0, 10);
    const double mse = t.rows[0].mse;
    return {mse <= bound * 1.05, fmt("MSE=%.6g, bound (sigma_s^2+D^2/12)/N=%.6g, limit x1.05=%.6g, theta on level-aligned grid",
                                     mse, bound, bound * 1.05)};
}

// 3 ------------------------------------------------------------------------
Outcome high_snr() {
    auto s = base("hi", {15.0}, {"mle-csi", "mrc", "fusion", "af"}, 10000);
    const auto r = run_scenario_detailed(s);
    const auto mle = r.squared_errors(0, "mle-csi");
    const double bound = quasi_blue_bound(0.1, 2.0 / 15.0, 10);
    const double m = mean_of(mle);
    bool ok = m <= 2.0 * bound;
    std::string d = fmt("mle-csi MSE=%.5g (2x quasi-BLUE=%.5g)", m, 2.0 * bound);
    for (const char* e : {"mrc", "fusion", "af"}) {
        const auto p = paired(r.squared_errors(0, e), mle);
        const bool gap = p.mean > 3.0 * p.se;
        ok = ok && gap;
        d += fmt("; %s-mle=%.4g (%.1f paired SE)", e, p.mean, p.mean / p.se);
    }
    return {ok, d};
}

// 4 ------------------------------------------------------------------------
Outcome af_inferior() {
    auto s = base("af", {3, 6, 9, 12, 15}, {"mle-csi", "af"}, 10000);
    const auto r = run_scenario_detailed(s);
    bool ok = true;
    std::string d;
    for (std::size_t p = 0; p < r.points.size(); ++p) {
        const auto pr = paired(r.squared_errors(p, "af"), r.squared_errors(p, "mle-csi"));
        ok = ok && pr.mean > 3.0 * pr.se;
        d += fmt("%s%gdB: af-mle=%.3g (%.1f SE)", p ? "; " : "", r.points[p].sweep_value, pr.mean, pr.mean / pr.se);
    }
    return {ok, d};
}

// 5 ------------------------------------------------------------------------
Outcome subopt_convergence() {
    auto s = base("conv", {3, 6, 9},
                  {"subopt-csi@2", "subopt-csi@3", "subopt-nocsi/tp2@2", "subopt-nocsi/tp2@3"}, 10000);
    const auto t = run_scenario(s);
    bool ok = true;
    std::string d;
    for (double g : {3.0, 6.0, 9.0})
        for (const char* v : {"subopt-csi", "subopt-nocsi/tp2"}) {
            const double a = t.find(g, std::string(v) + "@2")->mse;
            const double b = t.find(g, std::string(v) + "@3")->mse;
            const double rel = std::abs(b - a) / a;
            ok = ok && rel < 0.01;
            d += fmt("%s%s@%gdB %.3f%%", d.empty() ? "" : "; ", v, g, 100.0 * rel);
        }
    return {ok, "relative MSE change iter 2->3 (< 1%): " + d};
}

// 6 ------------------------------------------------------------------------
Outcome phase_ambiguity() {
    auto s = base("amb", {3, 9, 12, 15}, {"mle-nocsi/tn", "mle-training/tp2", "mle-training/tp5"}, 10000);
    const auto r = run_scenario_detailed(s);
    const auto& t = r.table;
    const double tn3 = t.find(3, "mle-nocsi/tn")->mse, tn15 = t.find(15, "mle-nocsi/tn")->mse;
    const double tp3 = t.find(3, "mle-training/tp2")->mse, tp15 = t.find(15, "mle-training/tp2")->mse;
    const bool plateau = tn15 >= 0.5 * tn3;
    const bool improves = tp3 / tp15 > 10.0;
    bool order = true;
    std::string d = fmt("tn: %.4g->%.4g (ratio %.2f, need >= 0.5); tp2: %.4g->%.4g (gain %.1fx, need > 10)", tn3, tn15,
                        tn15 / tn3, tp3, tp15, tp3 / tp15);
    for (double g : {9.0, 12.0, 15.0}) {
        const auto p = point_index(r, g);
        const auto pr = paired(r.squared_errors(p, "mle-training/tp2"), r.squared_errors(p, "mle-training/tp5"));
        const bool ok = pr.mean <= 2.0 * pr.se;
        order = order && ok;
        d += fmt("; %gdB tp2-tp5=%.3g (%.1f SE)", g, pr.mean, pr.mean / pr.se);
    }
    return {plateau && improves && order, d};
}

// 7 ------------------------------------------------------------------------
Outcome coherent_vs_training() {
    auto s = base("coh", {0, 3, 6}, {"mle-est-csi/tp2", "mle-training/tp2"}, 10000);
    const auto r = run_scenario_detailed(s);
    bool ok = true;
    std::string d;
    for (std::size_t p = 0; p < r.points.size(); ++p) {
        const auto pr = paired(r.squared_errors(p, "mle-est-csi/tp2"), r.squared_errors(p, "mle-training/tp2"));
        ok = ok && pr.mean >= 0.0;
        d += fmt("%s%gdB est-train=%.3g (%.1f SE)", p ? "; " : "", r.points[p].sweep_value, pr.mean, pr.mean / pr.se);
    }
    return {ok, d};
}

// 8 ------------------------------------------------------------------------
Outcome bit_rate() {
    auto hi = builtin_scenario("fig2");
    auto lo = builtin_scenario("fig2-low");
    hi.trials = lo.trials = 10000;
    const auto rh = run_scenario_detailed(hi);
    const auto rl = run_scenario_detailed(lo);
    // points: 0 -> K=1, 2 -> K=4; theta and the first observations are shared
    const auto ph = paired(rh.squared_errors(0, "mle-csi"), rh.squared_errors(2, "mle-csi"));
    const auto pl = paired(rl.squared_errors(2, "mle-csi"), rl.squared_errors(0, "mle-csi"));
    const bool ok = ph.mean > 3.0 * ph.se && pl.mean > 3.0 * pl.se;
    return {ok, fmt("30dB: MSE K1=%.4g K4=%.4g (K1-K4 %.1f SE); 5dB: MSE K1=%.4g K4=%.4g (K4-K1 %.1f SE)",
                    rh.table.rows[0].mse, rh.table.rows[4].mse, ph.mean / ph.se, rl.table.rows[0].mse,
                    rl.table.rows[4].mse, pl.mean / pl.se)};
}

// 9 ------------------------------------------------------------------------
Outcome one_over_n() {
    auto s = base("n", {}, {"mle-csi"}, 10000);
    s.sweep.kind = SweepKind::NSensors;
    s.sweep.values = {10, 40};
    s.gamma_c_db = 6.0;
    const auto t = run_scenario(s);
    const double ratio = t.rows[1].mse / t.rows[0].mse;

    SystemParams p;
    p.sigma_c = sigma_c_from_gamma_c(6.0, 1.0);
    const auto cb = build_training(16, 2);
    p.n_sensors = 10;
    auto r1 = derive_stream(7, 0, "crlb");
    const auto a = crlb_unknown_csi(0.0, p, cb, 20000, r1);
    p.n_sensors = 20;
    auto r2 = derive_stream(7, 0, "crlb");
    const auto b = crlb_unknown_csi(0.0, p, cb, 20000, r2);
    const bool halves = b.bound == a.bound / 2.0;
    return {ratio >= 0.20 && ratio <= 0.35 && halves,
            fmt("MSE(N=40)/MSE(N=10)=%.4f in [0.20,0.35]; CRLB N=10 %.6g, N=20 %.6g (exact half: %s)", ratio, a.bound,
                b.bound, halves ? "yes" : "no")};
}

// 10 -----------------------------------------------------------------------
// Independent brute force: kernels written from their densities, pmf by
// Simpson quadrature, likelihood summed in the linear domain.
double simpson_cell(double a, double b, double mu, double sd) {
    a = std::max(a, mu - 40.0 * sd);
    b = std::min(b, mu + 40.0 * sd);
    if (b <= a)
        return 0.0;
    const int n = 20000;
    const double h = (b - a) / n;
    auto f = [&](double x) { return std::exp(-0.5 * std::pow((x - mu) / sd, 2)) / (sd * std::sqrt(2.0 * M_PI)); };
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k)
        s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

Outcome oracles() {
    auto rng = derive_stream(10, 0, "oracle");
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    int cases = 0;
    for (int inst = 0; inst < 60; ++inst) {
        const int N = 1 + inst % 3;
        const int M = inst % 2 ? 4 : 2;
        const bool pilot = inst % 4 >= 2;
        const Codebook cb = pilot ? build_training(M, 2) : build_natural_binary(M); // L <= 4
        const Quantizer q(M, 1.0);
        const double E = 1.0 + 0.5 * (inst % 3), sc = 0.6 + 0.1 * (inst % 5), ss = 0.3;
        std::vector<CVector> msgs;
        for (int i = 0; i < N; ++i) {
            const auto c = cb.column(static_cast<int>(rng() % M));
            msgs.emplace_back(c.begin(), c.end());
        }
        const auto h = sample_channel(N, rng);
        const auto batch = transmit(msgs, h, E, sc, rng);
        const auto L = static_cast<std::size_t>(cb.length());

        // density-level kernels, linear domain
        auto p_known = [&](int i, int m) {
            double d = 0.0;
            for (std::size_t l = 0; l < L; ++l)
                d += std::norm(batch.y(i, l) - std::sqrt(E) * h[i] * cb.column(m)[l]);
            return std::exp(-d / (sc * sc)) / std::pow(M_PI * sc * sc, static_cast<double>(L));
        };
        auto p_unknown = [&](int i, int m) {
            // CN(0, sc^2 I + E c c^H): inverse by Sherman-Morrison written out
            const auto c = cb.column(m);
            cplx ch_y = 0.0;
            double yy = 0.0;
            for (std::size_t l = 0; l < L; ++l) {
                ch_y += std::conj(c[l]) * batch.y(i, l);
                yy += std::norm(batch.y(i, l));
            }
            const double quad = yy / (sc * sc) - E * std::norm(ch_y) / (sc * sc * (sc * sc + E));
            const double det = std::pow(sc * sc, static_cast<double>(L)) * (1.0 + E / (sc * sc));
            return std::exp(-quad) / (std::pow(M_PI, static_cast<double>(L)) * det);
        };
        auto naive = [&](double th, const std::function<double(int, int)>& dens) {
            std::vector<double> pmf(static_cast<std::size_t>(M));
            for (int m = 0; m < M; ++m)
                pmf[static_cast<std::size_t>(m)] = simpson_cell(m == 0 ? -1e9 : q.lower_edge(m),
                                                                m == M - 1 ? 1e9 : q.upper_edge(m), th, ss);
            double ll = 0.0;
            for (int i = 0; i < N; ++i) {
                double s = 0.0;
                for (int m = 0; m < M; ++m)
                    s += dens(i, m) * pmf[static_cast<std::size_t>(m)];
                ll += std::log(s);
            }
            return ll;
        };
        const auto tk = table_known_csi(batch, cb);
        const auto tu = table_unknown_csi(batch, cb); // pilot/data split when cb has a pilot
        struct Pair {
            const LikelihoodTable* table;
            std::function<double(int, int)> dens;
        };
        std::vector<Pair> pairs{{&tk, p_known}, {&tu, p_unknown}};

        // estimated CSI: the data block as if h were the pilot-based estimate
        LikelihoodTable te;
        if (pilot) {
            const auto Lp = static_cast<std::size_t>(cb.training_len());
            CVector h_hat(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i) {
                const auto row = batch.y.row(static_cast<std::size_t>(i));
                h_hat[static_cast<std::size_t>(i)] =
                    mmse_channel_estimate(row.first(Lp), cb.pilot(), E, sc, cb.length(), cb.training_len());
            }
            te = table_est_csi(batch, cb, h_hat);
            pairs.push_back({&te, [&, h_hat, Lp](int i, int m) {
                                 double d = 0.0;
                                 for (std::size_t l = Lp; l < L; ++l)
                                     d += std::norm(batch.y(i, l) - std::sqrt(E) * h_hat[static_cast<std::size_t>(i)] *
                                                                        cb.column(m)[l]);
                                 return std::exp(-d / (sc * sc));
                             }});
        }
        // theta enters only through the PMF; compare loglik differences
        const double t0 = u(rng);
        std::vector<double> base;
        for (const auto& pr : pairs)
            base.push_back(loglik(t0, *pr.table, q, ss) - naive(t0, pr.dens));
        for (int k = 0; k < 4; ++k) {
            const double th = u(rng);
            for (std::size_t j = 0; j < pairs.size(); ++j) {
                worst = std::max(worst, std::abs(loglik(th, *pairs[j].table, q, ss) - naive(th, pairs[j].dens) - base[j]));
                ++cases;
            }
        }
    }
    const bool ll_ok = worst <= 1e-9;

    // MMSE channel estimate error variance
    const auto cb = build_training(16, 2);
    const double E = 1.0, sc = sigma_c_from_gamma_c(3.0, 1.0);
    double acc = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        const cplx hk = complex_gaussian(rng);
        CVector yp(2);
        for (std::size_t l = 0; l < 2; ++l)
            yp[l] = std::sqrt(E) * hk * cb.pilot()[l] + sc * complex_gaussian(rng);
        acc += std::norm(mmse_channel_estimate(yp, cb.pilot(), E, sc, 6, 2) - hk);
    }
    const double target = 6.0 * sc * sc / (6.0 * sc * sc + 2.0 * E);
    const double rel = std::abs(acc / n / target - 1.0);
    const bool mmse_ok = rel <= 0.03;

    // pmf derivatives vs central differences
    const Quantizer q(16, 1.0);
    double wd = 0.0;
    for (double th : {-0.9, -0.31, 0.0, 0.44, 0.97}) {
        const auto d = pmf_derivatives(th, q, 0.1);
        const double hstep = 1e-5;
        const auto pp = pmf_quantized(th + hstep, q, 0.1), p0 = pmf_quantized(th, q, 0.1),
                   pm = pmf_quantized(th - hstep, q, 0.1);
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t m = 0; m < 16; ++m) {
            s1 = std::max(s1, std::abs(d.first[m]));
            s2 = std::max(s2, std::abs(d.second[m]));
        }
        for (std::size_t m = 0; m < 16; ++m) {
            wd = std::max(wd, std::abs((pp[m] - pm[m]) / (2 * hstep) - d.first[m]) / s1);
            wd = std::max(wd, std::abs((pp[m] - 2 * p0[m] + pm[m]) / (hstep * hstep) - d.second[m]) / s2);
        }
    }
    const bool der_ok = wd <= 1e-6;
    return {ll_ok && mmse_ok && der_ok,
            fmt("loglik vs brute force: max dev %.2e over %d evaluations (tol 1e-9); MMSE error var rel err %.2f%% "
                "(tol 3%%); pmf derivative FD max rel dev %.2e (tol 1e-6)",
                worst, cases, 100.0 * rel, wd)};
}

// 11 -----------------------------------------------------------------------
Outcome special_cases() {
    // (a) noiseless observations: MLE and MRC reconstruct the same level
    const auto tn = build_natural_binary(16);
    int agree = 0, total = 0, within_step = 0;
    for (double g : {9.0, 12.0, 15.0}) {
        SystemParams p;
        p.sigma_s = 1e-6;
        p.sigma_c = sigma_c_from_gamma_c(g, 1.0);
        const auto grid = default_grid(p);
        for (int t = 0; t < 1000; ++t) {
            auto rng = derive_stream(11, static_cast<std::uint64_t>(t), "special");
            const int m = static_cast<int>(rng() % 16);
            const auto x = sample_observations(p.quantizer.level(m), p, rng);
            const auto s = quantize(x, p.quantizer);
            std::vector<CVector> msgs;
            for (int idx : s.indices)
                msgs.emplace_back(tn.column(idx).begin(), tn.column(idx).end());
            const auto b = transmit(msgs, sample_channel(10, rng), 1.0, p.sigma_c, rng);
            const double mle = mle_known_csi(b, tn, p, grid).theta_hat;
            const double mrc = mrc_estimate(b, tn, p.quantizer).theta_hat;
            agree += quantize(mle, p.quantizer).value == mrc;
            within_step += std::abs(mle - mrc) <= grid.step;
            ++total;
        }
    }
    const double frac = static_cast<double>(agree) / total;

    // (b) noiseless channel, M = 256: MLE vs the sample mean of x
    SystemParams p;
    p.quantizer = Quantizer(256, 1.0);
    p.sigma_c = 1e-8;
    const auto cb = build_natural_binary(256);
    const auto grid = default_grid(p);
    int ok_raw = 0, ok_quant = 0;
    double worst_raw = 0.0, worst_quant = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        auto rng = derive_stream(12, static_cast<std::uint64_t>(t), "special");
        // keep 6 sigma_s clear of the outer cells so no observation is censored
        std::uniform_real_distribution<double> u(-0.4, 0.4);
        const auto x = sample_observations(u(rng), p, rng);
        const auto s = quantize(x, p.quantizer);
        std::vector<CVector> msgs;
        for (int idx : s.indices)
            msgs.emplace_back(cb.column(idx).begin(), cb.column(idx).end());
        const auto b = transmit(msgs, sample_channel(10, rng), 1.0, p.sigma_c, rng);
        const double th = mle_known_csi(b, cb, p, grid).theta_hat;
        const double dr = std::abs(th - mean_of(x.values));
        const double dq = std::abs(th - mean_of(s.values));
        ok_raw += dr <= grid.step;
        ok_quant += dq <= grid.step;
        worst_raw = std::max(worst_raw, dr);
        worst_quant = std::max(worst_quant, dq);
    }
    const bool pass_a = frac >= 0.99;
    const bool pass_b = ok_raw == trials;
    return {pass_a && pass_b,
            fmt("(a) sigma_s=1e-6, gamma_c>=9dB: MLE cell == MRC level in %.2f%% of %d trials (need >= 99%%; "
                "|mle-mrc|<=step in %.2f%%); (b) sigma_c=1e-8, M=256: |mle-mean(x)|<=step in %d/%d trials, worst "
                "%.3g vs step %.3g (vs mean of quantized x: %d/%d, worst %.3g)",
                100.0 * frac, total, 100.0 * within_step / total, ok_raw, trials, worst_raw, grid.step, ok_quant,
                trials, worst_quant)};
}

// 12 -----------------------------------------------------------------------
Outcome complexity() {
    SystemParams p;
    p.sigma_c = sigma_c_from_gamma_c(9.0, 1.0);
    const auto cb = build_natural_binary(16);
    const auto grid = default_grid(p);
    std::vector<ChannelBatch> batches;
    for (int t = 0; t < 2000; ++t) {
        auto rng = derive_stream(13, static_cast<std::uint64_t>(t), "cx");
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const auto s = quantize(sample_observations(u(rng), p, rng), p.quantizer);
        std::vector<CVector> msgs;
        for (int idx : s.indices)
            msgs.emplace_back(cb.column(idx).begin(), cb.column(idx).end());
        batches.push_back(transmit(msgs, sample_channel(10, rng), 1.0, p.sigma_c, rng));
    }
    double sink = 0.0;
    auto t0 = Clock::now();
    for (const auto& b : batches)
        sink += mle_known_csi(b, cb, p, grid).theta_hat;
    const double t_mle = seconds_since(t0);
    t0 = Clock::now();
    for (int rep = 0; rep < 5; ++rep)
        for (const auto& b : batches)
            sink += subopt_estimate(b, cb, p, 2, true).theta_hat;
    const double t_sub = seconds_since(t0) / 5.0;
    const double ratio = t_mle / t_sub;
    return {ratio > 10.0, fmt("MLE %.3fs vs suboptimal %.3fs per 2000 trials: ratio %.1f (need > 10)%s", t_mle, t_sub,
                              ratio, sink == 12345.678 ? " " : "")};
}

// 13 -----------------------------------------------------------------------
Outcome determinism() {
    bool ok = true;
    std::string d;
    for (const char* name : {"fig4", "fig8", "fig2"}) {
        auto s = builtin_scenario(name);
        s.trials = 150;
        std::string ref;
        for (unsigned w : {1u, 4u, 16u}) {
            std::ostringstream os;
            emit_csv(run_scenario(s, w), os);
            if (w == 1)
                ref = os.str();
            else
                ok = ok && os.str() == ref;
        }
        d += fmt("%s%s (%zu bytes)", d.empty() ? "" : ", ", name, ref.size());
    }
    return {ok, "byte-identical CSV with 1, 4 and 16 workers: " + d};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
        {"C1 BLUE anchor", blue_anchor},
        {"C2 quasi-BLUE anchor", quasi_blue_anchor},
        {"C3 high-SNR convergence of known-CSI MLE", high_snr},
        {"C4 AF inferior to digital MLE in fading", af_inferior},
        {"C5 suboptimal estimator converges in two iterations", subopt_convergence},
        {"C6 phase ambiguity and training length", phase_ambiguity},
        {"C7 coherent (estimated CSI) vs training MLE", coherent_vs_training},
        {"C8 bit-rate trade-off", bit_rate},
        {"C9 1/N scaling", one_over_n},
        {"C10 oracle equivalences", oracles},
        {"C11 special-case reductions", special_cases},
        {"C12 complexity ordering", complexity},
        {"C13 determinism across worker counts", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
