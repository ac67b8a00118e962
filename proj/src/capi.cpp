#include "myopia/myopia.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "config.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "report.hpp"
#include "simulation.hpp"

struct myopia_config {
    myopia::ExperimentConfig value;
};

struct myopia_metrics {
    myopia::MetricsTable value;
};

namespace {

thread_local std::string last_error;

myopia_status fail(myopia_status status, const std::string& message) {
    last_error = message;
    return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
myopia_status guarded(Fn&& fn) {
    try {
        fn();
        return MYOPIA_OK;
    } catch (const myopia::ConfigError& e) {
        return fail(MYOPIA_ERR_CONFIG, e.what());
    } catch (const myopia::ContractViolation& e) {
        return fail(MYOPIA_ERR_USAGE, e.what());
    } catch (const myopia::Error& e) {
        return fail(MYOPIA_ERR_RUNTIME, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MYOPIA_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(MYOPIA_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(MYOPIA_ERR_RUNTIME, "unknown error");
    }
}

#define MYOPIA_REQUIRE(cond, what) \
    do {                           \
        if (!(cond)) return fail(MYOPIA_ERR_USAGE, what); \
    } while (0)

myopia::Strategy to_strategy(myopia_strategy s) {
    switch (s) {
        case MYOPIA_STRATEGY_MYOPIC: return myopia::Strategy::Myopic;
        case MYOPIA_STRATEGY_GLOBAL: return myopia::Strategy::GlobalTStep;
        case MYOPIA_STRATEGY_AHEAD: return myopia::Strategy::TStepAhead;
    }
    throw myopia::ContractViolation("unknown strategy");
}

// Applies a mutation to a copy and commits it only if the result validates.
template <typename Fn>
myopia_status mutate(myopia_config* config, Fn&& fn) {
    MYOPIA_REQUIRE(config, "config is NULL");
    return guarded([&] {
        auto copy = config->value;
        fn(copy);
        copy.validate();
        config->value = std::move(copy);
    });
}

}  // namespace

extern "C" {

const char* myopia_version(void) { return MYOPIA_VERSION; }

const char* myopia_last_error(void) { return last_error.c_str(); }

size_t myopia_preset_count(void) { return myopia::preset_names().size(); }

const char* myopia_preset_name(size_t i) {
    static const auto names = myopia::preset_names();
    return i < names.size() ? names[i].c_str() : nullptr;
}

myopia_status myopia_config_from_preset(const char* name, myopia_config** out) {
    MYOPIA_REQUIRE(name && out, "NULL argument");
    return guarded([&] { *out = new myopia_config{myopia::preset(name)}; });
}

myopia_status myopia_config_parse(const char* text, myopia_config** out) {
    MYOPIA_REQUIRE(text && out, "NULL argument");
    return guarded([&] { *out = new myopia_config{myopia::parse_config(text)}; });
}

myopia_status myopia_config_load(const char* path, myopia_config** out) {
    MYOPIA_REQUIRE(path && out, "NULL argument");
    return guarded([&] { *out = new myopia_config{myopia::load_config(path)}; });
}

void myopia_config_free(myopia_config* config) { delete config; }

myopia_status myopia_config_text(const myopia_config* config, char* buf, size_t cap, size_t* needed) {
    MYOPIA_REQUIRE(config, "config is NULL");
    MYOPIA_REQUIRE(buf || cap == 0, "buffer is NULL");
    return guarded([&] {
        const auto text = myopia::emit_config(config->value);
        if (needed) *needed = text.size() + 1;
        if (cap > 0) {
            const size_t n = std::min(cap - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
    });
}

myopia_status myopia_config_save(const myopia_config* config, const char* path) {
    MYOPIA_REQUIRE(config && path, "NULL argument");
    return guarded([&] { myopia::write_text_file(path, myopia::emit_config(config->value)); });
}

const char* myopia_config_model(const myopia_config* config) {
    if (!config) return nullptr;
    return myopia::model_kind_name(config->value.model.kind).data();
}

uint64_t myopia_config_seed(const myopia_config* config) { return config ? config->value.seed : 0; }

int myopia_config_replications(const myopia_config* config) {
    return config ? config->value.replications : 0;
}

myopia_status myopia_config_set_strategy(myopia_config* config, myopia_strategy strategy, int horizon) {
    return mutate(config, [&](myopia::ExperimentConfig& c) {
        c.strategy = to_strategy(strategy);
        c.horizon.steps = horizon;
    });
}

myopia_status myopia_config_set_trials(myopia_config* config, int trials) {
    return mutate(config, [&](myopia::ExperimentConfig& c) { c.trials = trials; });
}

myopia_status myopia_config_set_replications(myopia_config* config, int replications) {
    return mutate(config, [&](myopia::ExperimentConfig& c) {
        c.replications = replications;
        c.diagnostics_replications = std::min(c.diagnostics_replications, replications);
    });
}

myopia_status myopia_config_set_seed(myopia_config* config, uint64_t seed) {
    return mutate(config, [&](myopia::ExperimentConfig& c) { c.seed = seed; });
}

myopia_status myopia_config_set_diagnostics(myopia_config* config, int enabled, int replications) {
    return mutate(config, [&](myopia::ExperimentConfig& c) {
        c.diagnostics = enabled != 0;
        c.diagnostics_replications = replications;
    });
}

myopia_status myopia_run(const myopia_config* config, unsigned threads, myopia_metrics** out) {
    MYOPIA_REQUIRE(config && out, "NULL argument");
    return guarded([&] {
        *out = new myopia_metrics{myopia::run_campaign(config->value, myopia::RunOptions{threads})};
    });
}

myopia_status myopia_compare(const myopia_config* config, unsigned threads, myopia_metrics** out,
                             size_t count) {
    MYOPIA_REQUIRE(config && out, "NULL argument");
    MYOPIA_REQUIRE(count >= 3, "compare produces three tables");
    return guarded([&] {
        const auto configs = myopia::comparison_configs(config->value);
        auto tables = myopia::compare_strategies(configs, myopia::RunOptions{threads});
        for (size_t i = 0; i < tables.size(); ++i) out[i] = new myopia_metrics{std::move(tables[i])};
    });
}

void myopia_metrics_free(myopia_metrics* metrics) { delete metrics; }

size_t myopia_metrics_trials(const myopia_metrics* metrics) {
    return metrics ? metrics->value.rows.size() : 0;
}

myopia_status myopia_metrics_row(const myopia_metrics* metrics, size_t index, myopia_trial_row* out) {
    MYOPIA_REQUIRE(metrics && out, "NULL argument");
    MYOPIA_REQUIRE(index < metrics->value.rows.size(), "trial index out of range");
    const auto& r = metrics->value.rows[index];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out->trial = r.trial;
    out->mse_p1 = r.mse.at(0);
    out->mse_p2 = r.mse.size() > 1 ? r.mse[1] : nan;
    out->info_gain = r.info_gain;
    out->has_diagnostics = r.ud_mean.has_value() ? 1 : 0;
    out->ud_mean = r.ud_mean.value_or(nan);
    out->rd_mean = r.rd_mean.value_or(nan);
    out->width_immediate = r.width_immediate.value_or(nan);
    out->width_next = r.width_next.value_or(nan);
    return MYOPIA_OK;
}

double myopia_metrics_min_ud(const myopia_metrics* metrics) { return metrics ? metrics->value.min_ud : 0.0; }

myopia_status myopia_metrics_write_csv(const myopia_metrics* metrics, const char* path) {
    MYOPIA_REQUIRE(metrics && path, "NULL argument");
    return guarded([&] { myopia::write_text_file(path, myopia::metrics_csv(metrics->value)); });
}

myopia_status myopia_metrics_write_curves(const myopia_metrics* metrics, const int* trials,
                                          size_t count, const char* path) {
    MYOPIA_REQUIRE(metrics && path && (trials || count == 0), "NULL argument");
    MYOPIA_REQUIRE(metrics->value.has_diagnostics(), "metrics were computed without diagnostics");
    return guarded([&] {
        myopia::write_text_file(path, myopia::curves_csv(metrics->value, {trials, count}));
    });
}

myopia_status myopia_write_comparison(const myopia_metrics* const* tables, size_t count, const char* path) {
    MYOPIA_REQUIRE(tables && path && count > 0, "NULL argument");
    return guarded([&] {
        std::vector<myopia::MetricsTable> copies;
        for (size_t i = 0; i < count; ++i) {
            if (!tables[i]) throw myopia::ContractViolation("NULL metrics handle");
            copies.push_back(tables[i]->value);
        }
        myopia::write_text_file(path, myopia::comparison_csv(copies));
    });
}

myopia_status myopia_write_manifest(const char* path, const char* command, const myopia_config* config,
                                    const char* const* outputs, size_t count) {
    MYOPIA_REQUIRE(path && command && (outputs || count == 0), "NULL argument");
    return guarded([&] {
        myopia::RunManifest m;
        m.command = command;
        m.engine_version = MYOPIA_VERSION;
        if (config) {
            m.config = myopia::emit_config(config->value);
            m.seed = config->value.seed;
        }
        m.timestamp = myopia::utc_timestamp();
        for (size_t i = 0; i < count; ++i) m.outputs.emplace_back(outputs[i]);
        m.notes = myopia::standard_notes();
        myopia::write_text_file(path, myopia::manifest_json(m));
    });
}

myopia_status myopia_oracle_battery(uint64_t seed, size_t instances, myopia_oracle_report* out) {
    MYOPIA_REQUIRE(out, "NULL argument");
    return guarded([&] {
        const auto r = myopia::run_oracle_battery(seed, instances);
        *out = myopia_oracle_report{r.instances, r.max_deviation, r.worst_monotonicity, r.worst_dominance,
                                    r.worst_decomposition};
    });
}

}  // extern "C"
