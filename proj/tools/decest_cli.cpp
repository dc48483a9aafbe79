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

#include "decest/decest.h"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

namespace {

int report(decest_status s, const char* what) {
    std::cerr << "decest: " << what << ": " << decest_last_error() << '\n';
    return s == DECEST_INVALID_ARGUMENT || s == DECEST_PARSE ? 2 : 3;
}

struct ScenarioDeleter {
    void operator()(decest_scenario* p) const { decest_scenario_free(p); }
};
struct TableDeleter {
    void operator()(decest_table* p) const { decest_table_free(p); }
};
struct CodebookDeleter {
    void operator()(decest_codebook* p) const { decest_codebook_free(p); }
};

int cmd_run(const std::string& scenario, long trials, unsigned long long seed, bool seed_set, const std::string& out,
            unsigned workers, const std::string& save_config) {
    decest_scenario* raw = nullptr;
    if (auto s = decest_scenario_load(scenario.c_str(), &raw); s != DECEST_OK)
        return report(s, "loading scenario");
    std::unique_ptr<decest_scenario, ScenarioDeleter> sc(raw);
    if (trials > 0)
        if (auto s = decest_scenario_set_trials(sc.get(), trials); s != DECEST_OK)
            return report(s, "setting trials");
    if (seed_set)
        decest_scenario_set_seed(sc.get(), seed);
    if (!save_config.empty())
        if (auto s = decest_scenario_save(sc.get(), save_config.c_str()); s != DECEST_OK)
            return report(s, "saving scenario");

    std::cerr << "running scenario " << decest_scenario_name(sc.get()) << " with " << workers << " worker(s)\n";
    decest_table* traw = nullptr;
    if (auto s = decest_run(sc.get(), workers, &traw); s != DECEST_OK)
        return report(s, "running scenario");
    std::unique_ptr<decest_table, TableDeleter> table(traw);

    for (size_t i = 0; i < decest_table_rows(table.get()); ++i) {
        decest_row row;
        decest_table_row(table.get(), i, &row);
        if (row.error[0] != '\0')
            std::cerr << "warning: " << row.estimator << " at " << row.sweep_value << ": " << row.error << '\n';
    }
    if (auto s = decest_table_write_csv(table.get(), out.c_str()); s != DECEST_OK)
        return report(s, "writing CSV");
    if (out != "-")
        std::cerr << "wrote " << decest_table_rows(table.get()) << " rows to " << out << '\n';
    return 0;
}

int cmd_crlb(const decest_crlb_params& p, const std::string& out) {
    decest_crlb_result r;
    if (auto s = decest_crlb(&p, &r); s != DECEST_OK)
        return report(s, "computing bound");
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (out != "-") {
        file.open(out);
        if (!file) {
            std::cerr << "decest: cannot open '" << out << "' for writing\n";
            return 3;
        }
        os = &file;
    }
    os->precision(17);
    *os << "theta,n_sensors,gamma_c_db,bound,std_err,mc_samples\n"
        << p.theta << ',' << p.n_sensors << ',' << p.gamma_c_db << ',' << r.bound << ',' << r.std_error << ','
        << r.mc_samples << '\n';
    os->flush();
    if (!*os) {
        std::cerr << "decest: write failed for '" << out << "'\n";
        return 3;
    }
    return 0;
}

int cmd_codebook_check(const std::string& kind, int m, int lp, const std::string& file, const std::string& export_path) {
    decest_codebook* raw = nullptr;
    decest_status s = file.empty() ? decest_codebook_build(kind.c_str(), m, lp, &raw)
                                   : decest_codebook_load(file.c_str(), &raw);
    if (s != DECEST_OK)
        return report(s, "building codebook");
    std::unique_ptr<decest_codebook, CodebookDeleter> cb(raw);
    if (!export_path.empty())
        if (auto e = decest_codebook_save(cb.get(), export_path.c_str()); e != DECEST_OK)
            return report(e, "exporting codebook");
    size_t count = 0;
    decest_codebook_ambiguities(cb.get(), nullptr, 0, &count);
    std::vector<decest_ambiguity> pairs(count);
    decest_codebook_ambiguities(cb.get(), pairs.data(), pairs.size(), &count);
    std::cout << "codebook L=" << decest_codebook_length(cb.get()) << " M=" << decest_codebook_size(cb.get())
              << " ambiguous_pairs=" << count << '\n';
    for (const auto& a : pairs)
        std::cout << a.m << ' ' << a.n << ' ' << a.phase << '\n';
    return count == 0 ? 0 : 1;
}

int cmd_list() {
    for (size_t i = 0; i < decest_builtin_count(); ++i)
        std::cout << decest_builtin_name(i) << '\t' << decest_builtin_description(i) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo runner for distributed estimation over fading channels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(decest_version()));

    std::string scenario, out = "-", save_config;
    long trials = 0;
    unsigned long long seed = 0;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    auto* run = app.add_subcommand("run", "Run a scenario and write the MSE table as CSV");
    run->add_option("--scenario", scenario, "Built-in scenario name or JSON scenario file")->required();
    run->add_option("--trials", trials, "Override the number of Monte Carlo trials")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "Override the RNG seed");
    run->add_option("--out", out, "Output CSV path ('-' for standard output)");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--save-config", save_config, "Also write the effective scenario as JSON");

    decest_crlb_params cp;
    decest_crlb_defaults(&cp);
    std::string crlb_out = "-";
    auto* crlb = app.add_subcommand("crlb", "Monte Carlo CRLB for unknown CSI with a pilot-prefixed codebook");
    crlb->add_option("--gamma-c", cp.gamma_c_db, "Channel SNR in dB")->required();
    crlb->add_option("--n", cp.n_sensors, "Number of sensors")->required()->check(CLI::PositiveNumber);
    crlb->add_option("--samples", cp.samples, "Monte Carlo samples (>= 1000)")->required();
    crlb->add_option("--out", crlb_out, "Output CSV path ('-' for standard output)");
    crlb->add_option("--theta", cp.theta, "Parameter value");
    crlb->add_option("--gamma-s", cp.gamma_s_db, "Observation SNR in dB");
    crlb->add_option("--m", cp.levels, "Quantization levels");
    crlb->add_option("--lp", cp.training_len, "Training symbols (0 selects natural binary)");
    crlb->add_option("--seed", cp.seed, "RNG seed");

    std::string kind = "tn", cb_file, cb_export;
    int levels = 16, lp = 2;
    auto* check = app.add_subcommand("codebook-check", "Report phase-ambiguous codeword pairs (exit 1 if any)");
    check->add_option("--kind", kind, "Codebook family")->check(CLI::IsMember({"tn", "tc", "tp"}));
    check->add_option("--m", levels, "Quantization levels");
    check->add_option("--lp", lp, "Training symbols for tp");
    check->add_option("--file", cb_file, "Read the codebook from a text file instead")->check(CLI::ExistingFile);
    check->add_option("--export", cb_export, "Write the codebook in text form");

    auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, std::cerr, std::cerr);
    }

    if (run->parsed())
        return cmd_run(scenario, trials, seed, seed_opt->count() > 0, out, workers, save_config);
    if (crlb->parsed())
        return cmd_crlb(cp, crlb_out);
    if (check->parsed())
        return cmd_codebook_check(kind, levels, lp, cb_file, cb_export);
    if (list->parsed())
        return cmd_list();
    return 2;
}
