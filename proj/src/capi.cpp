#include "aoi/aoi.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "chain.hpp"
#include "sim.hpp"
#include "types.hpp"
#include "xp.hpp"

namespace {

thread_local std::string g_last_error;

aoi_status to_c(aoi::Status s) { return static_cast<aoi_status>(s); }

// Runs fn, translating exceptions into status codes and recording the message.
template <typename Fn>
aoi_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return AOI_OK;
    } catch (const aoi::Error& e) {
        g_last_error = e.what();
        return to_c(e.status());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return AOI_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AOI_ERR_INTERNAL;
    }
}

aoi_status invalid(const char* message) {
    g_last_error = message;
    return AOI_ERR_INVALID_ARGUMENT;
}

aoi::Scheme to_scheme(aoi_scheme s) {
    if (s < AOI_SINGLE_NOARQ || s > AOI_TWO_ARQ) {
        throw aoi::Error(aoi::Status::InvalidArgument, "unknown scheme value");
    }
    return static_cast<aoi::Scheme>(s);
}

aoi_row to_c_row(const aoi::xp::SweepRow& row) {
    aoi_row out{};
    out.scheme = static_cast<aoi_scheme>(row.scheme);
    out.p1 = row.p1;
    out.p2 = row.p2;
    out.analytic_aoi = row.analytic_aoi;
    out.solver_aoi = row.solver_aoi;
    out.sim_aoi = row.sim_aoi;
    out.sim_std_error = row.sim_std_error;
    out.cycles = row.cycles;
    out.disagree = row.disagree ? 1 : 0;
    out.error = static_cast<int32_t>(row.error);
    return out;
}

aoi::sim::SimConfig to_sim_config(const aoi_sim_config& c) {
    aoi::sim::SimConfig config;
    config.scheme = to_scheme(c.scheme);
    config.params = {c.p1, c.p2};
    config.horizon = c.horizon;
    config.seed = c.seed;
    config.warmup_cycles = c.warmup_cycles;
    return config;
}

}  // namespace

struct aoi_chain {
    aoi::chain::ChainSpec spec;
    std::vector<std::string> violations;
};

struct aoi_sim_run {
    aoi::sim::SimResult result;
};

struct aoi_sweep {
    std::vector<aoi::xp::SweepRow> rows;
    aoi::xp::PlotMeta meta;
};

extern "C" {

const char* aoi_version(void) { return aoi::kVersion; }

const char* aoi_rng_name(void) { return aoi::kRngName; }

const char* aoi_status_message(aoi_status status) {
    switch (status) {
        case AOI_OK: return "ok";
        case AOI_ERR_INVALID_ARGUMENT: return "invalid argument";
        case AOI_ERR_UNREACHABLE_TARGET: return "target state unreachable";
        case AOI_ERR_NO_CYCLES: return "no completed cycles";
        case AOI_ERR_IO: return "i/o failure";
        case AOI_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* aoi_last_error(void) { return g_last_error.c_str(); }

const char* aoi_scheme_token(aoi_scheme scheme) {
    switch (scheme) {
        case AOI_SINGLE_NOARQ: return "single-noarq";
        case AOI_SINGLE_ARQ: return "single-arq";
        case AOI_TWO_NOARQ: return "two-noarq";
        case AOI_TWO_ARQ: return "two-arq";
    }
    return "";
}

aoi_status aoi_scheme_parse(const char* token, aoi_scheme* out_scheme) {
    if (!token || !out_scheme) return invalid("token and out_scheme must be non-null");
    return guarded([&] {
        *out_scheme = static_cast<aoi_scheme>(aoi::parse_scheme(token));
    });
}

aoi_status aoi_analytic(aoi_scheme scheme, double p1, double p2, double* out_aoi,
                        aoi_moments* out_moments) {
    if (!out_aoi) return invalid("out_aoi must be non-null");
    return guarded([&] {
        const auto result = aoi::analytic::evaluate(to_scheme(scheme), {p1, p2});
        *out_aoi = result.average_aoi;
        if (out_moments) {
            out_moments->e_z = result.moments.e_z;
            out_moments->e_z2 = result.moments.e_z2;
            out_moments->e_tau_z = result.moments.e_tau_z;
        }
    });
}

aoi_status aoi_gap(double p1, double p2, double* out_gap) {
    if (!out_gap) return invalid("out_gap must be non-null");
    return guarded([&] { *out_gap = aoi::analytic::gap({p1, p2}); });
}

aoi_status aoi_average_from_moments(const aoi_moments* moments, double* out_aoi) {
    if (!moments || !out_aoi) return invalid("moments and out_aoi must be non-null");
    return guarded([&] {
        *out_aoi = aoi::analytic::average_from_moments(
            {moments->e_z, moments->e_z2, moments->e_tau_z});
    });
}

aoi_status aoi_chain_build(aoi_scheme scheme, double p1, double p2, aoi_chain** out_chain) {
    if (!out_chain) return invalid("out_chain must be non-null");
    return guarded([&] {
        auto spec = aoi::chain::build_chain(to_scheme(scheme), {p1, p2});
        auto violations = aoi::chain::validate(spec);
        *out_chain = new aoi_chain{std::move(spec), std::move(violations)};
    });
}

aoi_status aoi_chain_create(const double* transition_row_major, size_t n, size_t target,
                            aoi_chain** out_chain) {
    if (!transition_row_major || !out_chain) {
        return invalid("transition and out_chain must be non-null");
    }
    if (n == 0) return invalid("chain needs at least one state");
    if (target >= n) return invalid("target index out of range");
    return guarded([&] {
        aoi::chain::ChainSpec spec;
        spec.target = target;
        spec.transition.resize(n, std::vector<double>(n, 0.0));
        spec.state_labels.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            spec.state_labels.push_back(i == target ? "s" : std::to_string(i));
            for (size_t j = 0; j < n; ++j) {
                spec.transition[i][j] = transition_row_major[i * n + j];
            }
        }
        auto violations = aoi::chain::validate(spec);
        *out_chain = new aoi_chain{std::move(spec), std::move(violations)};
    });
}

void aoi_chain_free(aoi_chain* chain) { delete chain; }

size_t aoi_chain_size(const aoi_chain* chain) { return chain ? chain->spec.size() : 0; }

const char* aoi_chain_label(const aoi_chain* chain, size_t state) {
    if (!chain || state >= chain->spec.state_labels.size()) return "";
    return chain->spec.state_labels[state].c_str();
}

aoi_status aoi_chain_entry(const aoi_chain* chain, size_t row, size_t col, double* out_p) {
    if (!chain || !out_p) return invalid("chain and out_p must be non-null");
    if (row >= chain->spec.size() || col >= chain->spec.size()) {
        return invalid("row or column out of range");
    }
    *out_p = chain->spec.transition[row][col];
    return AOI_OK;
}

size_t aoi_chain_violation_count(const aoi_chain* chain) {
    return chain ? chain->violations.size() : 0;
}

const char* aoi_chain_violation(const aoi_chain* chain, size_t index) {
    if (!chain || index >= chain->violations.size()) return "";
    return chain->violations[index].c_str();
}

aoi_status aoi_chain_hitting_moments(const aoi_chain* chain, double* out_mean,
                                     double* out_second_moment) {
    if (!chain || !out_mean) return invalid("chain and out_mean must be non-null");
    return guarded([&] {
        const auto mean = aoi::chain::mean_hitting(chain->spec);
        std::vector<double> second;
        if (out_second_moment) second = aoi::chain::second_moment_hitting(chain->spec, mean);
        for (size_t i = 0; i < mean.size(); ++i) {
            out_mean[i] = mean[i];
            if (out_second_moment) out_second_moment[i] = second[i];
        }
    });
}

aoi_status aoi_sim_run_new(const aoi_sim_config* config, aoi_sim_run** out_run) {
    if (!config || !out_run) return invalid("config and out_run must be non-null");
    return guarded([&] {
        *out_run = new aoi_sim_run{aoi::sim::simulate(to_sim_config(*config))};
    });
}

void aoi_sim_run_free(aoi_sim_run* run) { delete run; }

uint64_t aoi_sim_run_cycle_count(const aoi_sim_run* run) {
    return run ? run->result.cycles.size() : 0;
}

aoi_status aoi_sim_run_cycle(const aoi_sim_run* run, uint64_t index, uint64_t* out_z,
                             uint64_t* out_tau) {
    if (!run || !out_z || !out_tau) return invalid("run, out_z and out_tau must be non-null");
    if (index >= run->result.cycles.size()) return invalid("cycle index out of range");
    out_z[0] = run->result.cycles[index].z;
    out_tau[0] = run->result.cycles[index].tau;
    return AOI_OK;
}

aoi_status aoi_sim_run_stats(const aoi_sim_run* run, aoi_sim_stats* out_stats) {
    if (!run || !out_stats) return invalid("run and out_stats must be non-null");
    return guarded([&] {
        const auto s = aoi::sim::stats(run->result.cycles, run->result.config.warmup_cycles);
        out_stats->average_aoi = s.average_aoi;
        out_stats->cycle_count = s.cycle_count;
        out_stats->e_z = s.e_z;
        out_stats->e_z2 = s.e_z2;
        out_stats->e_tau_z = s.e_tau_z;
        out_stats->std_error = s.std_error;
    });
}

aoi_status aoi_sim_trace(const aoi_sim_config* config, uint64_t max_slots, uint64_t* out_aoi) {
    if (!config || !out_aoi) return invalid("config and out_aoi must be non-null");
    return guarded([&] {
        const auto trace = aoi::sim::instantaneous_trace(to_sim_config(*config), max_slots);
        std::memcpy(out_aoi, trace.data(), trace.size() * sizeof(uint64_t));
    });
}

uint64_t aoi_derive_seed(uint64_t base, uint64_t scheme_index, uint64_t i, uint64_t j,
                         uint64_t replication) {
    return aoi::sim::derive_seed(base, scheme_index, i, j, replication);
}

aoi_status aoi_verify(aoi_scheme scheme, double p1, double p2, uint64_t horizon, uint64_t seed,
                      aoi_row* out_row) {
    if (!out_row) return invalid("out_row must be non-null");
    return guarded([&] {
        *out_row = to_c_row(aoi::xp::verify(to_scheme(scheme), {p1, p2}, horizon, seed));
    });
}

aoi_status aoi_sweep_run(const aoi_sweep_spec* spec, aoi_sweep** out_sweep) {
    if (!spec || !out_sweep) return invalid("spec and out_sweep must be non-null");
    if ((spec->n_schemes && !spec->schemes) || (spec->n_p1 && !spec->p1_values) ||
        (spec->n_p2 && !spec->p2_values)) {
        return invalid("spec arrays must be non-null when their counts are nonzero");
    }
    return guarded([&] {
        aoi::xp::SweepSpec s;
        for (size_t i = 0; i < spec->n_schemes; ++i) {
            s.schemes.push_back(to_scheme(spec->schemes[i]));
        }
        s.p1_values.assign(spec->p1_values, spec->p1_values + spec->n_p1);
        s.p2_values.assign(spec->p2_values, spec->p2_values + spec->n_p2);
        s.horizon = spec->horizon;
        s.seed = spec->seed;
        s.replications = spec->replications;
        auto rows = aoi::xp::run_sweep(s);
        *out_sweep = new aoi_sweep{std::move(rows), {spec->seed, spec->horizon}};
    });
}

void aoi_sweep_free(aoi_sweep* sweep) { delete sweep; }

size_t aoi_sweep_size(const aoi_sweep* sweep) { return sweep ? sweep->rows.size() : 0; }

aoi_status aoi_sweep_row(const aoi_sweep* sweep, size_t index, aoi_row* out_row) {
    if (!sweep || !out_row) return invalid("sweep and out_row must be non-null");
    if (index >= sweep->rows.size()) return invalid("row index out of range");
    *out_row = to_c_row(sweep->rows[index]);
    return AOI_OK;
}

aoi_status aoi_sweep_write_csv(const aoi_sweep* sweep, const char* path) {
    if (!sweep || !path) return invalid("sweep and path must be non-null");
    return guarded([&] { aoi::xp::emit_csv(sweep->rows, std::filesystem::path(path)); });
}

aoi_status aoi_sweep_write_svg(const aoi_sweep* sweep, aoi_axis axis, const char* path) {
    if (!sweep || !path) return invalid("sweep and path must be non-null");
    if (axis < AOI_AXIS_VARY_P1 || axis > AOI_AXIS_DIAGONAL) {
        return invalid("unknown axis value");
    }
    return guarded([&] {
        aoi::xp::emit_plot(sweep->rows, static_cast<aoi::xp::Axis>(axis),
                           std::filesystem::path(path), &sweep->meta);
    });
}

}  // extern "C"
