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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace decest;
using Catch::Approx;

namespace {

Scenario small(std::vector<std::string> est, long trials = 200) {
    Scenario s;
    s.name = "t";
    s.sweep.values = {3.0, 12.0};
    s.estimators = std::move(est);
    s.trials = trials;
    s.seed = 42;
    return s;
}

std::string csv_of(const MseTable& t) {
    std::ostringstream os;
    emit_csv(t, os);
    return os.str();
}

} // namespace

TEST_CASE("estimator selectors") {
    auto a = parse_estimator("mle-csi");
    CHECK(a.id == "mle-csi");
    CHECK(a.codebook == "tn");
    auto b = parse_estimator("mle-training/tp5");
    CHECK(b.codebook == "tp5");
    auto c = parse_estimator("subopt-nocsi/tp2@4");
    CHECK(c.id == "subopt-nocsi");
    CHECK(c.codebook == "tp2");
    CHECK(c.iterations == 4);
    CHECK(c.label == "subopt-nocsi/tp2@4");
    CHECK(parse_estimator("blue").codebook.empty());
    CHECK(parse_estimator("fusion-crc").codebook == "tc");
    CHECK_THROWS_AS(parse_estimator("nope"), std::invalid_argument);
    CHECK_THROWS_AS(parse_estimator("blue/tn"), std::invalid_argument);
    CHECK_THROWS_AS(parse_estimator("mle-csi/tq"), std::invalid_argument);
    CHECK_THROWS_AS(parse_estimator("subopt-csi@0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_estimator("mle-csi@3"), std::invalid_argument);
    CHECK(known_estimator_ids().size() == 13);
}

TEST_CASE("built-in scenarios") {
    const auto all = builtin_scenarios();
    for (const char* name : {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "crlb-scaling"})
        CHECK_NOTHROW(builtin_scenario(name));
    CHECK_THROWS_AS(builtin_scenario("fig9"), std::invalid_argument);

    const auto f4 = builtin_scenario("fig4");
    CHECK(f4.n_sensors == 10);
    CHECK(f4.gamma_s_db == 20.0);
    CHECK(f4.levels == 16);
    for (const char* e : {"mle-csi", "subopt-csi", "mrc", "fusion", "fusion-crc", "af"})
        CHECK(std::find(f4.estimators.begin(), f4.estimators.end(), e) != f4.estimators.end());

    const auto f5 = builtin_scenario("fig5");
    bool tn = false, tp2 = false, tp5 = false;
    for (const auto& e : f5.estimators) {
        const auto s = parse_estimator(e);
        tn |= s.id == "mle-nocsi" && s.codebook == "tn";
        tp2 |= s.codebook == "tp2";
        tp5 |= s.codebook == "tp5";
    }
    CHECK((tn && tp2 && tp5));

    const auto f2 = builtin_scenario("fig2");
    REQUIRE(f2.sweep.kind == SweepKind::BitRate);
    CHECK(f2.sweep.bitrate == std::vector<BitRatePoint>{{1, 40, 1.0}, {2, 20, 2.0}, {4, 10, 4.0}});

    for (const auto& s : all) {
        CHECK(!s.description.empty());
        CHECK_NOTHROW(s.validate());
        CHECK(scenario_from_json(scenario_to_json(s)) == s);
    }
}

TEST_CASE("scenario files") {
    CHECK_THROWS_AS(scenario_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(R"({"sweep_values":[1],"estimators":["blue"],"bogus":1})"), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(R"({"sweep_values":[1],"estimators":["what"]})"), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(R"({"sweep_values":[1],"estimators":["blue"],"trials":0})"), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(R"({"sweep_values":"x","estimators":["blue"]})"), std::invalid_argument);
    const auto s = scenario_from_json(R"({"name":"mine","sweep":"n_sensors","sweep_values":[5,10],
        "estimators":["blue","mle-csi"],"trials":7,"seed":3,"theta_source":"fixed","theta":0.25})");
    CHECK(s.sweep.kind == SweepKind::NSensors);
    CHECK(s.trials == 7);
    CHECK(s.theta_source == ThetaSource::Fixed);

    const auto dir = std::filesystem::temp_directory_path() / "decest_harness_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "s.json").string();
    save_scenario(s, path);
    CHECK(load_scenario(path) == s);
    CHECK_THROWS_AS(load_scenario((dir / "missing.json").string()), std::runtime_error);
}

TEST_CASE("running scenarios") {
    SECTION("single trial MSE is the squared error") {
        auto s = small({"mle-csi", "blue"}, 1);
        const auto r = run_scenario_detailed(s);
        for (std::size_t p = 0; p < 2; ++p)
            for (const char* e : {"mle-csi", "blue"}) {
                const auto se = r.squared_errors(p, e);
                REQUIRE(se.size() == 1);
                const auto* row = r.table.find(r.points[p].sweep_value, e);
                REQUIRE(row);
                CHECK(row->mse == se[0]);
                CHECK(std::isnan(row->std_err));
            }
    }
    SECTION("rows are well formed") {
        auto s = small({"mle-csi", "subopt-csi", "af"});
        const auto t = run_scenario(s);
        REQUIRE(t.rows.size() == 6);
        for (const auto& r : t.rows) {
            CHECK(r.mse >= 0.0);
            CHECK(r.std_err > 0.0);
            CHECK(r.trials == 200);
            CHECK(r.error.empty());
        }
        CHECK(t.find(3.0, "subopt-csi")->mean_iters == 2.0);
    }
    SECTION("incompatible estimator gives an error row and the run continues") {
        auto s = small({"subspace/tn", "mle-training/tn", "fusion-crc/tn", "mle-csi"});
        const auto t = run_scenario(s);
        REQUIRE(t.rows.size() == 8);
        for (const auto& r : t.rows) {
            if (r.estimator == "mle-csi") {
                CHECK(r.error.empty());
                CHECK(std::isfinite(r.mse));
            } else {
                CHECK(!r.error.empty());
                CHECK(std::isnan(r.mse));
            }
        }
    }
    SECTION("paired trials: adding estimators leaves the others unchanged") {
        const auto a = run_scenario(small({"mle-csi"}));
        const auto b = run_scenario(small({"mrc", "mle-csi", "mle-training/tp2", "af"}));
        for (double v : {3.0, 12.0})
            CHECK(a.find(v, "mle-csi")->mse == b.find(v, "mle-csi")->mse);
        const auto d = run_scenario_detailed(small({"blue", "qblue"}));
        CHECK(d.points[0].theta == d.points[1].theta);
    }
    SECTION("worker count does not change the output") {
        auto s = small({"mle-csi", "subopt-nocsi/tp2", "fusion-crc"}, 300);
        CHECK(csv_of(run_scenario(s, 1)) == csv_of(run_scenario(s, 3)));
    }
    SECTION("level-grid and fixed theta sources") {
        auto s = small({"qblue"}, 500);
        s.theta_source = ThetaSource::LevelGrid;
        const auto d = run_scenario_detailed(s);
        const double sub = (2.0 / 15.0) / 16.0;
        for (double th : d.points[0].theta) {
            const double k = (th + 1.0) / sub - 0.5;
            CHECK(std::abs(k - std::round(k)) < 1e-9);
            CHECK(std::abs(th) <= 1.0);
        }
        s.theta_source = ThetaSource::Fixed;
        s.theta_fixed = -0.4;
        const auto f = run_scenario_detailed(s);
        for (double th : f.points[1].theta)
            CHECK(th == -0.4);
    }
    SECTION("mle-csi MSE is non-increasing across the fig4 sweep") {
        auto s = builtin_scenario("fig4");
        s.estimators = {"mle-csi"};
        s.trials = 2000;
        const auto t = run_scenario(s);
        for (std::size_t k = 1; k < t.rows.size(); ++k)
            CHECK(t.rows[k].mse <= t.rows[k - 1].mse + 2.0 * std::hypot(t.rows[k].std_err, t.rows[k - 1].std_err));
    }
    SECTION("bit-rate sweep") {
        auto s = builtin_scenario("fig2");
        s.trials = 50;
        const auto t = run_scenario(s);
        REQUIRE(t.rows.size() == 6);
        CHECK(t.rows[0].sweep_value == 1.0);
        CHECK(t.rows[4].sweep_value == 4.0);
    }
}

TEST_CASE("CSV output") {
    MseTable empty;
    CHECK(csv_of(empty) == std::string(kCsvHeader) + "\n");

    const auto t = run_scenario(small({"mle-csi", "qblue", "subspace/tn"}, 100));
    const auto text = csv_of(t);
    CHECK(text.back() == '\n');
    std::istringstream is(text);
    const auto back = parse_csv(is);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const auto& a = t.rows[k];
        const auto& b = back.rows[k];
        CHECK(a.sweep_value == b.sweep_value);
        CHECK(a.estimator == b.estimator);
        CHECK(a.trials == b.trials);
        if (a.error.empty()) {
            CHECK(std::abs(a.mse - b.mse) <= 1e-12 * std::abs(a.mse));
            CHECK(a.mse == b.mse);
            CHECK(a.std_err == b.std_err);
            CHECK(a.mean_iters == b.mean_iters);
        } else {
            CHECK(std::isnan(b.mse));
        }
    }

    const auto dir = std::filesystem::temp_directory_path() / "decest_harness_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "t.csv").string();
    emit_csv(t, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == text);

    const std::string bad = (dir / "no" / "such" / "dir" / "x.csv").string();
    try {
        emit_csv(t, bad);
        FAIL("expected an I/O error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(bad) != std::string::npos);
    }
    std::istringstream wrong("a,b\n");
    CHECK_THROWS_AS(parse_csv(wrong), std::invalid_argument);
    CHECK(format_double(0.1) == "0.10000000000000001");
}
