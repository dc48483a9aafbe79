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

#include "decest/analysis.hpp"
#include "decest/channel.hpp"
#include "decest/codebook.hpp"
#include "decest/harness.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

struct decest_scenario {
    decest::Scenario sc;
};

struct decest_table {
    decest::MseTable table;
};

struct decest_codebook {
    decest::Codebook cb;
};

namespace {

thread_local std::string g_last_error;

decest_status fail(decest_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <class F>
decest_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const std::invalid_argument& e) {
        return fail(DECEST_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(DECEST_NUMERIC, e.what());
    } catch (const std::out_of_range& e) {
        return fail(DECEST_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(DECEST_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DECEST_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DECEST_INTERNAL, e.what());
    } catch (...) {
        return fail(DECEST_INTERNAL, "unknown error");
    }
}

const std::vector<decest::Scenario>& builtins() {
    static const std::vector<decest::Scenario> v = decest::builtin_scenarios();
    return v;
}

} // namespace

extern "C" {

const char* decest_last_error(void) { return g_last_error.c_str(); }

const char* decest_version(void) { return "1.0.0"; }

size_t decest_builtin_count(void) { return builtins().size(); }

const char* decest_builtin_name(size_t index) {
    return index < builtins().size() ? builtins()[index].name.c_str() : nullptr;
}

const char* decest_builtin_description(size_t index) {
    return index < builtins().size() ? builtins()[index].description.c_str() : nullptr;
}

decest_status decest_scenario_load(const char* name_or_path, decest_scenario** out) {
    if (!name_or_path || !out)
        return fail(DECEST_INVALID_ARGUMENT, "decest_scenario_load: null argument");
    *out = nullptr;
    return guarded([&] {
        const std::string key(name_or_path);
        for (const auto& s : builtins())
            if (s.name == key) {
                *out = new decest_scenario{s};
                return DECEST_OK;
            }
        if (!std::filesystem::exists(key))
            return fail(DECEST_INVALID_ARGUMENT, "'" + key + "' is neither a built-in scenario nor a file");
        try {
            *out = new decest_scenario{decest::load_scenario(key)};
        } catch (const std::invalid_argument& e) {
            return fail(DECEST_PARSE, e.what());
        }
        return DECEST_OK;
    });
}

decest_status decest_scenario_save(const decest_scenario* sc, const char* path) {
    if (!sc || !path)
        return fail(DECEST_INVALID_ARGUMENT, "decest_scenario_save: null argument");
    return guarded([&] {
        decest::save_scenario(sc->sc, path);
        return DECEST_OK;
    });
}

void decest_scenario_free(decest_scenario* sc) { delete sc; }

decest_status decest_scenario_set_trials(decest_scenario* sc, long trials) {
    if (!sc)
        return fail(DECEST_INVALID_ARGUMENT, "decest_scenario_set_trials: null scenario");
    if (trials < 1)
        return fail(DECEST_INVALID_ARGUMENT, "trials must be >= 1");
    sc->sc.trials = trials;
    g_last_error.clear();
    return DECEST_OK;
}

decest_status decest_scenario_set_seed(decest_scenario* sc, uint64_t seed) {
    if (!sc)
        return fail(DECEST_INVALID_ARGUMENT, "decest_scenario_set_seed: null scenario");
    sc->sc.seed = seed;
    g_last_error.clear();
    return DECEST_OK;
}

const char* decest_scenario_name(const decest_scenario* sc) { return sc ? sc->sc.name.c_str() : nullptr; }

decest_status decest_run(const decest_scenario* sc, unsigned workers, decest_table** out) {
    if (!sc || !out)
        return fail(DECEST_INVALID_ARGUMENT, "decest_run: null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new decest_table{decest::run_scenario(sc->sc, workers)};
        return DECEST_OK;
    });
}

void decest_table_free(decest_table* t) { delete t; }

size_t decest_table_rows(const decest_table* t) { return t ? t->table.rows.size() : 0; }

decest_status decest_table_row(const decest_table* t, size_t index, decest_row* out) {
    if (!t || !out)
        return fail(DECEST_INVALID_ARGUMENT, "decest_table_row: null argument");
    if (index >= t->table.rows.size())
        return fail(DECEST_INVALID_ARGUMENT, "decest_table_row: index out of range");
    const auto& r = t->table.rows[index];
    *out = {r.sweep_value, r.estimator.c_str(), r.mse, r.std_err, r.trials, r.mean_iters, r.error.c_str()};
    g_last_error.clear();
    return DECEST_OK;
}

decest_status decest_table_write_csv(const decest_table* t, const char* path) {
    if (!t)
        return fail(DECEST_INVALID_ARGUMENT, "decest_table_write_csv: null table");
    return guarded([&] {
        if (!path || std::string(path) == "-") {
            decest::emit_csv(t->table, std::cout);
            std::cout.flush();
            if (!std::cout)
                return fail(DECEST_IO, "write to standard output failed");
        } else {
            decest::emit_csv(t->table, std::string(path));
        }
        return DECEST_OK;
    });
}

decest_status decest_codebook_build(const char* kind, int levels, int training_len, decest_codebook** out) {
    if (!kind || !out)
        return fail(DECEST_INVALID_ARGUMENT, "decest_codebook_build: null argument");
    *out = nullptr;
    return guarded([&] {
        const std::string k(kind);
        if (k == "tn")
            *out = new decest_codebook{decest::build_natural_binary(levels)};
        else if (k == "tc")
            *out = new decest_codebook{decest::build_crc(levels)};
        else if (k == "tp")
            *out = new decest_codebook{decest::build_training(levels, training_len)};
        else
            return fail(DECEST_INVALID_ARGUMENT, "unknown codebook kind '" + k + "' (expected tn, tc or tp)");
        return DECEST_OK;
    });
}

decest_status decest_codebook_load(const char* path, decest_codebook** out) {
    if (!path || !out)
        return fail(DECEST_INVALID_ARGUMENT, "decest_codebook_load: null argument");
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path);
        if (!in)
            return fail(DECEST_IO, std::string("cannot open codebook file '") + path + "'");
        try {
            *out = new decest_codebook{decest::read_codebook(in)};
        } catch (const std::invalid_argument& e) {
            return fail(DECEST_PARSE, std::string(path) + ": " + e.what());
        }
        return DECEST_OK;
    });
}

decest_status decest_codebook_save(const decest_codebook* cb, const char* path) {
    if (!cb || !path)
        return fail(DECEST_INVALID_ARGUMENT, "decest_codebook_save: null argument");
    return guarded([&] {
        std::ofstream os(path);
        if (!os)
            return fail(DECEST_IO, std::string("cannot open '") + path + "' for writing");
        decest::write_codebook(os, cb->cb);
        os.flush();
        if (!os)
            return fail(DECEST_IO, std::string("write failed for '") + path + "'");
        return DECEST_OK;
    });
}

void decest_codebook_free(decest_codebook* cb) { delete cb; }

int decest_codebook_length(const decest_codebook* cb) { return cb ? cb->cb.length() : 0; }

int decest_codebook_size(const decest_codebook* cb) { return cb ? cb->cb.size() : 0; }

decest_status decest_codebook_ambiguities(const decest_codebook* cb, decest_ambiguity* out, size_t capacity,
                                          size_t* count) {
    if (!cb || !count)
        return fail(DECEST_INVALID_ARGUMENT, "decest_codebook_ambiguities: null argument");
    return guarded([&] {
        const auto pairs = decest::detect_phase_ambiguity(cb->cb);
        *count = pairs.size();
        for (size_t i = 0; out && i < pairs.size() && i < capacity; ++i)
            out[i] = {pairs[i].m, pairs[i].n, pairs[i].phase};
        return DECEST_OK;
    });
}

void decest_crlb_defaults(decest_crlb_params* p) {
    if (!p)
        return;
    *p = {0.0, 10, 16, 2, 20.0, 6.0, 1.0, 1.0, 100000, 1};
}

decest_status decest_crlb(const decest_crlb_params* p, decest_crlb_result* out) {
    if (!p || !out)
        return fail(DECEST_INVALID_ARGUMENT, "decest_crlb: null argument");
    return guarded([&] {
        decest::SystemParams params;
        params.n_sensors = p->n_sensors;
        params.theta_range = p->granular_half_width;
        params.quantizer = decest::Quantizer(p->levels, p->granular_half_width);
        params.sigma_s = decest::sigma_s_from_gamma_s(p->gamma_s_db, p->granular_half_width);
        params.energy_per_observation = p->energy_per_observation;
        params.sigma_c = decest::sigma_c_from_gamma_c(p->gamma_c_db, p->energy_per_observation);
        params.validate();
        const auto cb = p->training_len > 0 ? decest::build_training(p->levels, p->training_len)
                                            : decest::build_natural_binary(p->levels);
        auto rng = decest::derive_stream(p->seed, 0, "crlb");
        const auto r = decest::crlb_unknown_csi(p->theta, params, cb, p->samples, rng);
        *out = {r.bound, r.std_error, r.information, r.mc_samples};
        return DECEST_OK;
    });
}

} // extern "C"
