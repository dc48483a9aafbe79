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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace decest {

enum class SweepKind { GammaC, NSensors, BitRate };
enum class ThetaSource { Uniform, LevelGrid, Fixed };

/// (bits per observation, sensors, energy multiplier) for equal-resource comparisons.
struct BitRatePoint {
    int bits = 4;
    int n_sensors = 10;
    double energy_mult = 1.0;

    bool operator==(const BitRatePoint&) const = default;
};

struct Sweep {
    SweepKind kind = SweepKind::GammaC;
    std::vector<double> values;          // gamma_c in dB, or N
    std::vector<BitRatePoint> bitrate;   // BitRate only

    std::size_t size() const noexcept { return kind == SweepKind::BitRate ? bitrate.size() : values.size(); }
    bool operator==(const Sweep&) const = default;
};

/// One Monte Carlo experiment. Fields not being swept stay fixed; in a
/// BitRate sweep gamma_c_db fixes the noise level at unit energy and each
/// point scales the energy.
struct Scenario {
    std::string name;
    std::string description;
    Sweep sweep;
    int n_sensors = 10;
    int levels = 16;
    double granular_half_width = 1.0;
    double theta_range = 1.0;
    double energy_per_observation = 1.0;
    double gamma_s_db = 20.0;
    double gamma_c_db = 6.0;
    std::vector<std::string> estimators;
    long trials = 10000;
    std::uint64_t seed = 1;
    ThetaSource theta_source = ThetaSource::Uniform;
    double theta_fixed = 0.0;

    void validate() const;
    bool operator==(const Scenario&) const = default;
};

/// Estimator selector: "<id>[/<codebook>][@<iterations>]". Codebooks are
/// "tn" (natural binary), "tc" (CRC) and "tp<L_p>" (pilot-prefixed).
struct EstimatorSpec {
    std::string label;
    std::string id;
    std::string codebook; // empty for blue, qblue and af
    int iterations = 2;   // subopt only
};

EstimatorSpec parse_estimator(std::string_view text);
const std::vector<std::string>& known_estimator_ids();

struct MseRow {
    double sweep_value = 0.0;
    std::string estimator;
    double mse = 0.0;
    double std_err = 0.0;
    long trials = 0;
    double mean_iters = 0.0;
    std::string error; // nonempty when the estimator could not run at this point

    bool operator==(const MseRow&) const = default;
};

struct MseTable {
    std::vector<MseRow> rows;

    const MseRow* find(double sweep_value, std::string_view estimator) const;
};

struct PointResult {
    double sweep_value = 0.0;
    std::vector<double> theta;                 // per trial
    std::vector<std::vector<double>> estimate; // [estimator][trial]
    std::vector<std::vector<int>> iterations;  // [estimator][trial]
    std::vector<std::string> errors;           // [estimator]
};

struct ScenarioResult {
    MseTable table;
    std::vector<std::string> estimators;
    std::vector<PointResult> points;

    /// Per-trial squared errors of one estimator at one point.
    std::vector<double> squared_errors(std::size_t point, std::string_view estimator) const;
};

/// Runs every estimator on the same per-trial realization. Results do not
/// depend on the worker count.
ScenarioResult run_scenario_detailed(const Scenario& sc, unsigned workers = 1);
MseTable run_scenario(const Scenario& sc, unsigned workers = 1);

std::vector<Scenario> builtin_scenarios();
/// Throws std::invalid_argument for unknown names.
Scenario builtin_scenario(std::string_view name);

std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(std::string_view text);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

inline constexpr std::string_view kCsvHeader = "sweep_value,estimator,mse,std_err,trials,mean_iters";

void emit_csv(const MseTable& table, std::ostream& os);
/// Throws std::runtime_error mentioning the path on I/O failure.
void emit_csv(const MseTable& table, const std::string& path);
MseTable parse_csv(std::istream& is);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

std::string to_string(SweepKind kind);
std::string to_string(ThetaSource src);

} // namespace decest
