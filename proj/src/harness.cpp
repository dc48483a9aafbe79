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

#include "decest/harness.hpp"

#include "decest/channel.hpp"
#include "decest/codebook.hpp"
#include "decest/estimators_baseline.hpp"
#include "decest/estimators_ml.hpp"
#include "decest/model.hpp"
#include "decest/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace decest {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, std::string, std::less<>>& default_codebooks() {
    static const std::map<std::string, std::string, std::less<>> m = {
        {"blue", ""},          {"qblue", ""},        {"af", ""},
        {"mle-csi", "tn"},     {"subopt-csi", "tn"}, {"mrc", "tn"},
        {"fusion", "tn"},      {"fusion-crc", "tc"}, {"mle-nocsi", "tn"},
        {"mle-training", "tp2"}, {"mle-est-csi", "tp2"}, {"subopt-nocsi", "tp2"},
        {"subspace", "tp2"},
    };
    return m;
}

bool valid_codebook_token(std::string_view t) {
    if (t == "tn" || t == "tc")
        return true;
    if (t.size() > 2 && t.substr(0, 2) == "tp") {
        for (char c : t.substr(2))
            if (c < '0' || c > '9')
                return false;
        return std::stoi(std::string(t.substr(2))) >= 1;
    }
    return false;
}

Codebook make_codebook(const std::string& token, int levels) {
    if (token == "tn")
        return build_natural_binary(levels);
    if (token == "tc")
        return build_crc(levels);
    return build_training(levels, std::stoi(token.substr(2)));
}

struct PointConfig {
    double sweep_value = 0.0;
    SystemParams params;
    GridSpec grid;
    AfMessage af{1.0};
    std::map<std::string, Codebook> codebooks;
    std::vector<std::string> errors; // per estimator, precomputed incompatibilities
};

PointConfig make_point(const Scenario& sc, const std::vector<EstimatorSpec>& specs, std::size_t idx) {
    PointConfig p;
    int n = sc.n_sensors;
    int levels = sc.levels;
    double energy = sc.energy_per_observation;
    double sigma_c = sigma_c_from_gamma_c(sc.gamma_c_db, sc.energy_per_observation);
    switch (sc.sweep.kind) {
    case SweepKind::GammaC:
        p.sweep_value = sc.sweep.values[idx];
        sigma_c = sigma_c_from_gamma_c(p.sweep_value, energy);
        break;
    case SweepKind::NSensors:
        p.sweep_value = sc.sweep.values[idx];
        n = static_cast<int>(p.sweep_value);
        break;
    case SweepKind::BitRate: {
        const auto& b = sc.sweep.bitrate[idx];
        p.sweep_value = b.bits;
        n = b.n_sensors;
        levels = 1 << b.bits;
        energy = sc.energy_per_observation * b.energy_mult;
        break;
    }
    }
    p.params.n_sensors = n;
    p.params.theta_range = sc.theta_range;
    p.params.sigma_s = sigma_s_from_gamma_s(sc.gamma_s_db, sc.granular_half_width);
    p.params.sigma_c = sigma_c;
    p.params.energy_per_observation = energy;
    p.params.quantizer = Quantizer(levels, sc.granular_half_width);
    p.params.validate();
    p.grid = default_grid(p.params);
    p.af = make_af_message(sc.theta_range, p.params.sigma_s);

    p.errors.resize(specs.size());
    for (std::size_t e = 0; e < specs.size(); ++e) {
        const auto& s = specs[e];
        if (s.codebook.empty())
            continue;
        auto it = p.codebooks.find(s.codebook);
        if (it == p.codebooks.end())
            it = p.codebooks.emplace(s.codebook, make_codebook(s.codebook, levels)).first;
        const Codebook& cb = it->second;
        const bool has_pilot = cb.training_len() > 0;
        if ((s.id == "mle-training" || s.id == "mle-est-csi") && !has_pilot)
            p.errors[e] = s.id + " needs a pilot-prefixed codebook, got " + s.codebook;
        else if (s.id == "fusion-crc" && cb.kind() != CodebookKind::CrcCoded)
            p.errors[e] = "fusion-crc needs the CRC codebook, got " + s.codebook;
        else if (s.id == "subspace" && !detect_phase_ambiguity(cb).empty())
            p.errors[e] = "subspace estimator is undefined for phase-ambiguous codebook " + s.codebook;
        else if (!(sigma_c > 0.0) && s.id != "fusion" && s.id != "fusion-crc" && s.id != "mrc" && s.id != "subspace")
            p.errors[e] = s.id + " needs sigma_c > 0";
    }
    return p;
}

double draw_theta(const Scenario& sc, const Quantizer& q, Rng& rng) {
    switch (sc.theta_source) {
    case ThetaSource::Fixed:
        return sc.theta_fixed;
    case ThetaSource::LevelGrid: {
        // 16 points per quantization cell, offset half a sub-step from -V.
        const double sub = q.step() / 16.0;
        const auto count = static_cast<long>(std::floor(2.0 * sc.theta_range / sub + 1e-9));
        std::uniform_int_distribution<long> pick(0, std::max(0L, count - 1));
        return -sc.theta_range + (static_cast<double>(pick(rng)) + 0.5) * sub;
    }
    case ThetaSource::Uniform:
    default: {
        std::uniform_real_distribution<double> u(-sc.theta_range, sc.theta_range);
        return u(rng);
    }
    }
}

CMatrix unit_noise(std::size_t rows, std::size_t cols, Rng& rng) {
    CMatrix n(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (auto& v : n.row(i))
            v = complex_gaussian(rng);
    return n;
}

struct TrialOutput {
    double theta;
    std::vector<double> estimate;
    std::vector<int> iterations;
    std::vector<std::string> error;
};

TrialOutput run_trial(const Scenario& sc, const PointConfig& pc, const std::vector<EstimatorSpec>& specs,
                      long trial) {
    const auto t = static_cast<std::uint64_t>(trial);
    const auto& params = pc.params;
    const auto& q = params.quantizer;
    const auto N = static_cast<std::size_t>(params.n_sensors);

    auto theta_rng = derive_stream(sc.seed, t, "theta");
    auto obs_rng = derive_stream(sc.seed, t, "obs");
    auto chan_rng = derive_stream(sc.seed, t, "channel");

    TrialOutput out;
    out.theta = draw_theta(sc, q, theta_rng);
    const auto x = sample_observations(out.theta, params, obs_rng);
    const auto s = quantize(x, q);
    const auto h = sample_channel(params.n_sensors, chan_rng);

    std::map<std::string, ChannelBatch> batches;
    for (const auto& [token, cb] : pc.codebooks) {
        auto noise_rng = derive_stream(sc.seed, t, "noise/" + token);
        std::vector<CVector> msgs(N);
        for (std::size_t i = 0; i < N; ++i) {
            const auto c = cb.column(s.indices[i]);
            msgs[i].assign(c.begin(), c.end());
        }
        const auto noise = unit_noise(N, static_cast<std::size_t>(cb.length()), noise_rng);
        batches.emplace(token, transmit_with_noise(msgs, h, params.energy_per_observation, params.sigma_c, noise));
    }

    out.estimate.assign(specs.size(), kNaN);
    out.iterations.assign(specs.size(), 0);
    out.error.resize(specs.size());
    for (std::size_t e = 0; e < specs.size(); ++e) {
        if (!pc.errors[e].empty())
            continue;
        const auto& sp = specs[e];
        try {
            EstimateReport r;
            if (sp.id == "blue") {
                r.theta_hat = blue_estimate(x);
            } else if (sp.id == "qblue") {
                r.theta_hat = quasi_blue_estimate(s);
            } else if (sp.id == "af") {
                auto af_rng = derive_stream(sc.seed, t, "noise/af");
                CVector y(N);
                const double amp = std::sqrt(params.energy_per_observation);
                for (std::size_t i = 0; i < N; ++i)
                    y[i] = amp * h[i] * af_message(x.values[i], pc.af) + params.sigma_c * complex_gaussian(af_rng);
                r = mle_af(y, h, pc.af.gain, params.energy_per_observation, params.sigma_s, params.sigma_c);
            } else {
                const Codebook& cb = pc.codebooks.at(sp.codebook);
                const ChannelBatch& b = batches.at(sp.codebook);
                if (sp.id == "mle-csi")
                    r = mle_known_csi(b, cb, params, pc.grid);
                else if (sp.id == "mle-nocsi" || sp.id == "mle-training")
                    r = mle_unknown_csi(b, cb, params, pc.grid);
                else if (sp.id == "mle-est-csi")
                    r = mle_est_csi(b, cb, params, pc.grid);
                else if (sp.id == "subopt-csi")
                    r = subopt_estimate(b, cb, params, sp.iterations, true);
                else if (sp.id == "subopt-nocsi")
                    r = subopt_estimate(b, cb, params, sp.iterations, false);
                else if (sp.id == "mrc")
                    r = mrc_estimate(b, cb, q);
                else if (sp.id == "subspace")
                    r = subspace_estimate(b.y, cb, q);
                else if (sp.id == "fusion")
                    r = fusion_estimate(b, cb, q, false);
                else if (sp.id == "fusion-crc")
                    r = fusion_estimate(b, cb, q, true);
                else
                    throw std::invalid_argument("unknown estimator " + sp.id);
            }
            out.estimate[e] = r.theta_hat;
            out.iterations[e] = r.iterations;
        } catch (const std::exception& ex) {
            out.error[e] = ex.what();
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------- specs

const std::vector<std::string>& known_estimator_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : default_codebooks())
            v.push_back(k);
        return v;
    }();
    return ids;
}

EstimatorSpec parse_estimator(std::string_view text) {
    EstimatorSpec s;
    s.label = std::string(text);
    std::string_view rest = text;
    if (const auto at = rest.find('@'); at != std::string_view::npos) {
        const std::string it(rest.substr(at + 1));
        if (it.empty() || it.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("estimator '" + s.label + "': bad iteration count");
        s.iterations = std::stoi(it);
        if (s.iterations < 1)
            throw std::invalid_argument("estimator '" + s.label + "': iteration count must be >= 1");
        rest = rest.substr(0, at);
    }
    std::string_view cb;
    if (const auto slash = rest.find('/'); slash != std::string_view::npos) {
        cb = rest.substr(slash + 1);
        rest = rest.substr(0, slash);
    }
    s.id = std::string(rest);
    const auto& defaults = default_codebooks();
    const auto it = defaults.find(s.id);
    if (it == defaults.end())
        throw std::invalid_argument("unknown estimator id '" + s.id + "'");
    if (s.iterations != 2 && text.find('@') != std::string_view::npos && s.id.rfind("subopt", 0) != 0)
        throw std::invalid_argument("estimator '" + s.label + "': only subopt estimators take an iteration count");
    if (!cb.empty()) {
        if (it->second.empty())
            throw std::invalid_argument("estimator '" + s.id + "' does not use a codebook");
        if (!valid_codebook_token(cb))
            throw std::invalid_argument("estimator '" + s.label + "': unknown codebook '" + std::string(cb) + "'");
        s.codebook = std::string(cb);
    } else {
        s.codebook = it->second;
    }
    return s;
}

void Scenario::validate() const {
    if (trials < 1)
        throw std::invalid_argument("scenario '" + name + "': trials must be >= 1");
    if (estimators.empty())
        throw std::invalid_argument("scenario '" + name + "': no estimators");
    for (const auto& e : estimators)
        parse_estimator(e);
    if (sweep.size() == 0)
        throw std::invalid_argument("scenario '" + name + "': empty sweep");
    if (sweep.kind == SweepKind::NSensors)
        for (double v : sweep.values)
            if (v < 1 || v != std::floor(v))
                throw std::invalid_argument("scenario '" + name + "': sensor counts must be positive integers");
    if (sweep.kind == SweepKind::BitRate)
        for (const auto& b : sweep.bitrate)
            if (b.bits < 1 || b.bits > 12 || b.n_sensors < 1 || !(b.energy_mult > 0.0))
                throw std::invalid_argument("scenario '" + name + "': invalid bit-rate point");
    if (n_sensors < 1 || levels < 2 || !(granular_half_width > 0.0) || !(theta_range > 0.0) ||
        !(energy_per_observation > 0.0))
        throw std::invalid_argument("scenario '" + name + "': invalid system parameters");
    if (theta_source == ThetaSource::Fixed && !(std::abs(theta_fixed) <= theta_range))
        throw std::invalid_argument("scenario '" + name + "': fixed theta outside [-V, V]");
}

// ---------------------------------------------------------------- running

const MseRow* MseTable::find(double sweep_value, std::string_view estimator) const {
    for (const auto& r : rows)
        if (r.sweep_value == sweep_value && r.estimator == estimator)
            return &r;
    return nullptr;
}

std::vector<double> ScenarioResult::squared_errors(std::size_t point, std::string_view estimator) const {
    const auto it = std::find(estimators.begin(), estimators.end(), estimator);
    if (it == estimators.end())
        throw std::invalid_argument("squared_errors: unknown estimator " + std::string(estimator));
    const auto e = static_cast<std::size_t>(it - estimators.begin());
    const auto& p = points.at(point);
    std::vector<double> out(p.theta.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double d = p.estimate[e][t] - p.theta[t];
        out[t] = d * d;
    }
    return out;
}

ScenarioResult run_scenario_detailed(const Scenario& sc, unsigned workers) {
    sc.validate();
    std::vector<EstimatorSpec> specs;
    for (const auto& e : sc.estimators)
        specs.push_back(parse_estimator(e));
    workers = std::max(1u, workers);

    ScenarioResult res;
    res.estimators = sc.estimators;
    const auto T = static_cast<std::size_t>(sc.trials);
    for (std::size_t pidx = 0; pidx < sc.sweep.size(); ++pidx) {
        const PointConfig pc = make_point(sc, specs, pidx);
        std::vector<TrialOutput> outs(T);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t t = next++; t < T; t = next++)
                outs[t] = run_trial(sc, pc, specs, static_cast<long>(t));
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(work);
            for (auto& th : pool)
                th.join();
        }

        PointResult pr;
        pr.sweep_value = pc.sweep_value;
        pr.theta.resize(T);
        pr.estimate.assign(specs.size(), std::vector<double>(T, kNaN));
        pr.iterations.assign(specs.size(), std::vector<int>(T, 0));
        pr.errors = pc.errors;
        for (std::size_t t = 0; t < T; ++t) {
            pr.theta[t] = outs[t].theta;
            for (std::size_t e = 0; e < specs.size(); ++e) {
                pr.estimate[e][t] = outs[t].estimate[e];
                pr.iterations[e][t] = outs[t].iterations[e];
                if (pr.errors[e].empty() && !outs[t].error[e].empty())
                    pr.errors[e] = outs[t].error[e];
            }
        }
        for (std::size_t e = 0; e < specs.size(); ++e) {
            MseRow row;
            row.sweep_value = pc.sweep_value;
            row.estimator = specs[e].label;
            row.trials = sc.trials;
            row.error = pr.errors[e];
            if (!row.error.empty()) {
                row.mse = row.std_err = row.mean_iters = kNaN;
            } else {
                // Trial-ordered accumulation keeps the sums reproducible.
                double sum = 0.0, sum_it = 0.0;
                for (std::size_t t = 0; t < T; ++t) {
                    const double d = pr.estimate[e][t] - pr.theta[t];
                    sum += d * d;
                    sum_it += pr.iterations[e][t];
                }
                row.mse = sum / static_cast<double>(T);
                row.mean_iters = sum_it / static_cast<double>(T);
                if (T > 1) {
                    double ss = 0.0;
                    for (std::size_t t = 0; t < T; ++t) {
                        const double d = pr.estimate[e][t] - pr.theta[t];
                        const double dev = d * d - row.mse;
                        ss += dev * dev;
                    }
                    row.std_err = std::sqrt(ss / static_cast<double>(T - 1) / static_cast<double>(T));
                } else {
                    row.std_err = kNaN;
                }
            }
            res.table.rows.push_back(std::move(row));
        }
        res.points.push_back(std::move(pr));
    }
    return res;
}

MseTable run_scenario(const Scenario& sc, unsigned workers) {
    return run_scenario_detailed(sc, workers).table;
}

// ---------------------------------------------------------------- presets

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> v;
    const std::vector<double> gamma_c_sweep = {0, 3, 6, 9, 12, 15};

    {
        Scenario s;
        s.name = "fig2";
        s.description = "Bit-rate trade-off at equal total energy and bandwidth, gamma_s = 30 dB; "
                        "noise fixed by gamma_c = 0 dB at unit energy (6 dB for K=4, 3 dB for K=2)";
        s.sweep.kind = SweepKind::BitRate;
        s.sweep.bitrate = {{1, 40, 1.0}, {2, 20, 2.0}, {4, 10, 4.0}};
        s.gamma_s_db = 30.0;
        s.gamma_c_db = 0.0;
        s.estimators = {"mle-csi", "qblue"};
        v.push_back(s);
        s.name = "fig2-low";
        s.description = "Bit-rate trade-off as fig2 at gamma_s = 5 dB";
        s.gamma_s_db = 5.0;
        v.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig3";
        s.description = "Suboptimal estimator convergence vs iteration count, N = 10, gamma_s = 20 dB";
        s.sweep.values = {3, 6, 9};
        for (int it = 1; it <= 5; ++it)
            s.estimators.push_back("subopt-csi@" + std::to_string(it));
        for (int it = 1; it <= 5; ++it)
            s.estimators.push_back("subopt-nocsi/tp2@" + std::to_string(it));
        v.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig4";
        s.description = "Known-CSI estimators vs gamma_c, N = 10, gamma_s = 20 dB, M = 16";
        s.sweep.values = gamma_c_sweep;
        s.estimators = {"mle-csi", "subopt-csi", "mrc", "fusion", "fusion-crc", "af", "qblue", "blue"};
        v.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig5";
        s.description = "Unknown-CSI MLEs with 0, 2 and 5 training symbols vs gamma_c, N = 10, gamma_s = 20 dB";
        s.sweep.values = gamma_c_sweep;
        s.estimators = {"mle-nocsi/tn",    "mle-training/tp2", "mle-training/tp5",
                        "mle-est-csi/tp2", "mle-est-csi/tp5",  "mle-csi"};
        v.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig6";
        s.description = "MLE vs suboptimal with known CSI and with two training symbols, N = 10, gamma_s = 20 dB";
        s.sweep.values = gamma_c_sweep;
        s.estimators = {"mle-csi", "subopt-csi", "mle-training/tp2", "subopt-nocsi/tp2"};
        v.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig7";
        s.description = "Known-CSI estimators vs N, gamma_c = 6 dB, gamma_s = 20 dB";
        s.sweep.kind = SweepKind::NSensors;
        s.sweep.values = {5, 10, 20, 40};
        s.estimators = {"mle-csi", "subopt-csi", "mrc", "fusion", "fusion-crc", "af", "qblue", "blue"};
        v.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig8";
        s.description = "Unknown-CSI estimators vs N, gamma_c = 6 dB, gamma_s = 20 dB";
        s.sweep.kind = SweepKind::NSensors;
        s.sweep.values = {5, 10, 20, 40};
        s.estimators = {"mle-nocsi/tn", "mle-training/tp2", "mle-training/tp5", "mle-est-csi/tp2",
                        "subopt-nocsi/tp2"};
        v.push_back(s);
    }
    {
        Scenario s;
        s.name = "crlb-scaling";
        s.description = "Unknown-CSI MSE vs N at gamma_c = 6 dB; compare with the crlb subcommand";
        s.sweep.kind = SweepKind::NSensors;
        s.sweep.values = {5, 10, 20, 40};
        s.estimators = {"mle-training/tp2", "subopt-nocsi/tp2"};
        v.push_back(s);
    }
    return v;
}

Scenario builtin_scenario(std::string_view name) {
    for (auto& s : builtin_scenarios())
        if (s.name == name)
            return s;
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- JSON

std::string to_string(SweepKind kind) {
    switch (kind) {
    case SweepKind::GammaC: return "gamma_c";
    case SweepKind::NSensors: return "n_sensors";
    case SweepKind::BitRate: return "bitrate";
    }
    return "unknown";
}

std::string to_string(ThetaSource src) {
    switch (src) {
    case ThetaSource::Uniform: return "uniform";
    case ThetaSource::LevelGrid: return "level_grid";
    case ThetaSource::Fixed: return "fixed";
    }
    return "unknown";
}

std::string scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["description"] = sc.description;
    j["sweep"] = to_string(sc.sweep.kind);
    if (sc.sweep.kind == SweepKind::BitRate) {
        json pts = json::array();
        for (const auto& b : sc.sweep.bitrate)
            pts.push_back({b.bits, b.n_sensors, b.energy_mult});
        j["sweep_values"] = pts;
    } else {
        j["sweep_values"] = sc.sweep.values;
    }
    j["n_sensors"] = sc.n_sensors;
    j["levels"] = sc.levels;
    j["granular_half_width"] = sc.granular_half_width;
    j["theta_range"] = sc.theta_range;
    j["energy_per_observation"] = sc.energy_per_observation;
    j["gamma_s_db"] = sc.gamma_s_db;
    j["gamma_c_db"] = sc.gamma_c_db;
    j["estimators"] = sc.estimators;
    j["trials"] = sc.trials;
    j["seed"] = sc.seed;
    j["theta_source"] = to_string(sc.theta_source);
    j["theta"] = sc.theta_fixed;
    return j.dump(2);
}

Scenario scenario_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario: malformed JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("scenario: top level must be an object");
    static const std::vector<std::string> allowed = {
        "name",       "description", "sweep",      "sweep_values", "n_sensors",  "levels",
        "granular_half_width", "theta_range", "energy_per_observation", "gamma_s_db", "gamma_c_db",
        "estimators", "trials",      "seed",       "theta_source", "theta"};
    for (const auto& [k, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw std::invalid_argument("scenario: unknown key '" + k + "'");
    Scenario sc;
    try {
        sc.name = j.value("name", std::string("custom"));
        sc.description = j.value("description", std::string());
        const auto sweep = j.value("sweep", std::string("gamma_c"));
        if (sweep == "gamma_c")
            sc.sweep.kind = SweepKind::GammaC;
        else if (sweep == "n_sensors")
            sc.sweep.kind = SweepKind::NSensors;
        else if (sweep == "bitrate")
            sc.sweep.kind = SweepKind::BitRate;
        else
            throw std::invalid_argument("scenario: unknown sweep '" + sweep + "'");
        if (!j.contains("sweep_values"))
            throw std::invalid_argument("scenario: missing sweep_values");
        if (sc.sweep.kind == SweepKind::BitRate) {
            for (const auto& p : j.at("sweep_values")) {
                if (!p.is_array() || p.size() != 3)
                    throw std::invalid_argument("scenario: bitrate points are [bits, n_sensors, energy_mult]");
                sc.sweep.bitrate.push_back({p[0].get<int>(), p[1].get<int>(), p[2].get<double>()});
            }
        } else {
            sc.sweep.values = j.at("sweep_values").get<std::vector<double>>();
        }
        sc.n_sensors = j.value("n_sensors", sc.n_sensors);
        sc.levels = j.value("levels", sc.levels);
        sc.granular_half_width = j.value("granular_half_width", sc.granular_half_width);
        sc.theta_range = j.value("theta_range", sc.theta_range);
        sc.energy_per_observation = j.value("energy_per_observation", sc.energy_per_observation);
        sc.gamma_s_db = j.value("gamma_s_db", sc.gamma_s_db);
        sc.gamma_c_db = j.value("gamma_c_db", sc.gamma_c_db);
        sc.estimators = j.value("estimators", std::vector<std::string>{});
        sc.trials = j.value("trials", sc.trials);
        sc.seed = j.value("seed", sc.seed);
        const auto src = j.value("theta_source", std::string("uniform"));
        if (src == "uniform")
            sc.theta_source = ThetaSource::Uniform;
        else if (src == "level_grid")
            sc.theta_source = ThetaSource::LevelGrid;
        else if (src == "fixed")
            sc.theta_source = ThetaSource::Fixed;
        else
            throw std::invalid_argument("scenario: unknown theta_source '" + src + "'");
        sc.theta_fixed = j.value("theta", 0.0);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scenario: wrong value type: ") + e.what());
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return scenario_from_json(ss.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write scenario file '" + path + "'");
    out << scenario_to_json(sc) << '\n';
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

// ---------------------------------------------------------------- CSV

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

void emit_csv(const MseTable& table, std::ostream& os) {
    os << kCsvHeader << '\n';
    for (const auto& r : table.rows)
        os << format_double(r.sweep_value) << ',' << r.estimator << ',' << format_double(r.mse) << ','
           << format_double(r.std_err) << ',' << r.trials << ',' << format_double(r.mean_iters) << '\n';
}

void emit_csv(const MseTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    emit_csv(table, out);
    out.flush();
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

MseTable parse_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw std::invalid_argument("parse_csv: missing or unexpected header");
    MseTable t;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            f.push_back(cell);
        if (f.size() != 6)
            throw std::invalid_argument("parse_csv: line " + std::to_string(line_no) + " has " +
                                        std::to_string(f.size()) + " fields");
        MseRow r;
        try {
            r.sweep_value = std::stod(f[0]);
            r.estimator = f[1];
            r.mse = std::stod(f[2]);
            r.std_err = std::stod(f[3]);
            r.trials = std::stol(f[4]);
            r.mean_iters = std::stod(f[5]);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_csv: bad number on line " + std::to_string(line_no));
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

} // namespace decest
