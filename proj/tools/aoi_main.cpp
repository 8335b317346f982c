// Command-line front end over the aoi C API.
#include <aoi/aoi.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

int exit_code_for(aoi_status status) {
    if (status == AOI_OK) return 0;
    if (status == AOI_ERR_IO) return 3;
    return 1;
}

int fail(aoi_status status, const std::string& context) {
    std::fprintf(stderr, "error: %s: %s\n", context.c_str(),
                 *aoi_last_error() ? aoi_last_error() : aoi_status_message(status));
    return exit_code_for(status);
}

// "0.2,0.5" and "0.2:1.0:0.1" (inclusive range), mixed freely.
std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (token.empty()) throw CLI::ValidationError("empty value in list '" + text + "'");
        const std::size_t c1 = token.find(':');
        if (c1 == std::string::npos) {
            values.push_back(std::stod(token));
        } else {
            const std::size_t c2 = token.find(':', c1 + 1);
            if (c2 == std::string::npos) {
                throw CLI::ValidationError("range needs first:last:step, got '" + token + "'");
            }
            const double first = std::stod(token.substr(0, c1));
            const double last = std::stod(token.substr(c1 + 1, c2 - c1 - 1));
            const double step = std::stod(token.substr(c2 + 1));
            if (step <= 0.0 || last < first) {
                throw CLI::ValidationError("bad range '" + token + "'");
            }
            for (int k = 0;; ++k) {
                const double v = first + k * step;
                if (v > last + 1e-12) break;
                values.push_back(std::min(v, last));
            }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

std::vector<aoi_scheme> parse_scheme_list(const std::string& text) {
    std::vector<aoi_scheme> schemes;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        aoi_scheme scheme;
        if (aoi_scheme_parse(token.c_str(), &scheme) != AOI_OK) {
            throw CLI::ValidationError("unknown scheme '" + token + "'");
        }
        schemes.push_back(scheme);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return schemes;
}

void print_provenance(std::uint64_t seed, std::uint64_t horizon) {
    std::printf("aoi %s rng=%s seed=%llu horizon=%llu\n", aoi_version(), aoi_rng_name(),
                static_cast<unsigned long long>(seed), static_cast<unsigned long long>(horizon));
}

struct SchemeArgs {
    std::string scheme_token = "two-arq";
    double p1 = -1.0;
    double p2 = -1.0;
    double q = -1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scheme", scheme_token,
                        "single-noarq, single-arq, two-noarq or two-arq")
            ->required();
        cmd->add_option("--p1", p1, "first-hop decode success probability");
        cmd->add_option("--p2", p2, "second-hop decode success probability");
        cmd->add_option("--q", q, "single-hop decode success probability (alias for --p1)");
    }

    // Resolves --q against --p1/--p2 and fills defaults; throws a CLI error
    // on contradictions.
    aoi_scheme resolve() {
        aoi_scheme scheme;
        if (aoi_scheme_parse(scheme_token.c_str(), &scheme) != AOI_OK) {
            throw CLI::ValidationError("unknown scheme '" + scheme_token + "'");
        }
        const bool single = scheme == AOI_SINGLE_NOARQ || scheme == AOI_SINGLE_ARQ;
        if (q >= 0.0) {
            if (!single) throw CLI::ValidationError("--q applies to single-hop schemes only");
            if (p1 >= 0.0) throw CLI::ValidationError("give either --q or --p1, not both");
            p1 = q;
        }
        if (p1 < 0.0) throw CLI::ValidationError("missing --p1 (or --q)");
        if (single) {
            p2 = 1.0;  // unused by single-hop schemes
        } else if (p2 < 0.0) {
            throw CLI::ValidationError("missing --p2");
        }
        return scheme;
    }
};

int run_analytic(SchemeArgs& args) {
    const aoi_scheme scheme = args.resolve();
    double average = 0.0;
    aoi_moments moments{};
    const aoi_status status = aoi_analytic(scheme, args.p1, args.p2, &average, &moments);
    if (status != AOI_OK) return fail(status, "analytic");
    std::printf("aoi %s rng=%s\n", aoi_version(), aoi_rng_name());
    std::printf("scheme=%s p1=%.10g p2=%.10g\n", aoi_scheme_token(scheme), args.p1, args.p2);
    std::printf("average_aoi=%.10g e_z=%.10g e_z2=%.10g e_tau_z=%.10g\n", average, moments.e_z,
                moments.e_z2, moments.e_tau_z);
    return 0;
}

int run_simulate(SchemeArgs& args, std::uint64_t horizon, std::uint64_t seed,
                 std::uint64_t warmup) {
    const aoi_scheme scheme = args.resolve();
    const aoi_sim_config config{scheme, args.p1, args.p2, horizon, seed, warmup};
    aoi_sim_run* run = nullptr;
    aoi_status status = aoi_sim_run_new(&config, &run);
    if (status != AOI_OK) return fail(status, "simulate");
    aoi_sim_stats stats{};
    status = aoi_sim_run_stats(run, &stats);
    aoi_sim_run_free(run);
    if (status != AOI_OK) return fail(status, "simulate");
    print_provenance(seed, horizon);
    std::printf("scheme=%s p1=%.10g p2=%.10g warmup=%llu\n", aoi_scheme_token(scheme), args.p1,
                args.p2, static_cast<unsigned long long>(warmup));
    std::printf("cycles=%llu average_aoi=%.10g std_error=%.6g e_z=%.10g e_z2=%.10g e_tau_z=%.10g\n",
                static_cast<unsigned long long>(stats.cycle_count), stats.average_aoi,
                stats.std_error, stats.e_z, stats.e_z2, stats.e_tau_z);
    return 0;
}

int run_verify(SchemeArgs& args, std::uint64_t horizon, std::uint64_t seed) {
    const aoi_scheme scheme = args.resolve();
    aoi_row row{};
    const aoi_status status = aoi_verify(scheme, args.p1, args.p2, horizon, seed, &row);
    if (status != AOI_OK) return fail(status, "verify");
    print_provenance(seed, horizon);
    std::printf("scheme=%s p1=%.10g p2=%.10g\n", aoi_scheme_token(scheme), args.p1, args.p2);
    std::printf("analytic=%.10g solver=%.10g sim=%.10g std_error=%.6g cycles=%llu\n",
                row.analytic_aoi, row.solver_aoi, row.sim_aoi, row.sim_std_error,
                static_cast<unsigned long long>(row.cycles));
    if (row.disagree) {
        std::printf("agreement: DISAGREE (|sim-analytic| = %.6g > 3*std_error = %.6g)\n",
                    std::fabs(row.sim_aoi - row.analytic_aoi), 3.0 * row.sim_std_error);
        return 2;
    }
    std::printf("agreement: OK (|sim-analytic| = %.6g <= 3*std_error = %.6g)\n",
                std::fabs(row.sim_aoi - row.analytic_aoi), 3.0 * row.sim_std_error);
    return 0;
}

struct SweepArgs {
    std::string config_path;
    std::string schemes_text;
    std::string p1_text;
    std::string p2_text;
    std::uint64_t horizon = 1'000'000;
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
    std::string csv_path;
    std::string svg_path;
    std::string axis_token;
};

// Resolved sweep inputs: defaults, then the config file, then CLI overrides.
struct SweepInputs {
    std::vector<aoi_scheme> schemes{AOI_TWO_NOARQ, AOI_TWO_ARQ};
    std::vector<double> p1_values;
    std::vector<double> p2_values;
    std::uint64_t horizon = 1'000'000;
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
};

SweepInputs resolve_sweep(const CLI::App* cmd, const SweepArgs& args) {
    SweepInputs in;
    in.p1_values = parse_value_list("0.2:1.0:0.1");
    in.p2_values = in.p1_values;
    if (!args.config_path.empty()) {
        std::ifstream file(args.config_path);
        if (!file) throw CLI::ValidationError("cannot read config '" + args.config_path + "'");
        json doc;
        try {
            file >> doc;
        } catch (const json::exception& e) {
            throw CLI::ValidationError("config parse error: " + std::string(e.what()));
        }
        if (doc.contains("schemes")) {
            in.schemes.clear();
            for (const auto& token : doc["schemes"]) {
                aoi_scheme scheme;
                if (aoi_scheme_parse(token.get<std::string>().c_str(), &scheme) != AOI_OK) {
                    throw CLI::ValidationError("config: unknown scheme '" +
                                               token.get<std::string>() + "'");
                }
                in.schemes.push_back(scheme);
            }
        }
        if (doc.contains("p1_values")) in.p1_values = doc["p1_values"].get<std::vector<double>>();
        if (doc.contains("p2_values")) in.p2_values = doc["p2_values"].get<std::vector<double>>();
        if (doc.contains("horizon")) in.horizon = doc["horizon"].get<std::uint64_t>();
        if (doc.contains("seed")) in.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("replications")) {
            in.replications = doc["replications"].get<std::uint32_t>();
        }
    }
    if (!args.schemes_text.empty()) in.schemes = parse_scheme_list(args.schemes_text);
    if (!args.p1_text.empty()) in.p1_values = parse_value_list(args.p1_text);
    if (!args.p2_text.empty()) in.p2_values = parse_value_list(args.p2_text);
    if (cmd->count("--horizon")) in.horizon = args.horizon;
    if (cmd->count("--seed")) in.seed = args.seed;
    if (cmd->count("--replications")) in.replications = args.replications;
    return in;
}

aoi_axis resolve_axis(const SweepArgs& args, const SweepInputs& in) {
    if (!args.axis_token.empty()) {
        if (args.axis_token == "vary_p1") return AOI_AXIS_VARY_P1;
        if (args.axis_token == "vary_p2") return AOI_AXIS_VARY_P2;
        if (args.axis_token == "diagonal") return AOI_AXIS_DIAGONAL;
        throw CLI::ValidationError("unknown axis '" + args.axis_token +
                                   "' (vary_p1, vary_p2 or diagonal)");
    }
    if (in.p1_values.size() == 1) return AOI_AXIS_VARY_P2;
    if (in.p2_values.size() == 1) return AOI_AXIS_VARY_P1;
    if (in.p1_values == in.p2_values) return AOI_AXIS_DIAGONAL;
    throw CLI::ValidationError("cannot infer the plot axis; pass --axis");
}

int run_sweep_cmd(const CLI::App* cmd, const SweepArgs& args) {
    const SweepInputs in = resolve_sweep(cmd, args);
    const aoi_sweep_spec spec{in.schemes.data(),   in.schemes.size(),  in.p1_values.data(),
                              in.p1_values.size(), in.p2_values.data(), in.p2_values.size(),
                              in.horizon,          in.seed,            in.replications};
    aoi_sweep* sweep = nullptr;
    aoi_status status = aoi_sweep_run(&spec, &sweep);
    if (status != AOI_OK) return fail(status, "sweep");

    print_provenance(in.seed, in.horizon);
    std::printf("replications=%u points=%zu\n", in.replications, aoi_sweep_size(sweep));
    std::printf("%-13s %-8s %-8s %-12s %-12s %-12s %-12s %-10s\n", "scheme", "p1", "p2",
                "analytic", "solver", "sim", "std_error", "cycles");
    // Isolated 3-sigma flags are expected noise on large grids; they stay
    // in-row (and in the CSV) rather than turning into an exit code the way
    // a single-point verify does.
    bool any_error = false;
    for (std::size_t i = 0; i < aoi_sweep_size(sweep); ++i) {
        aoi_row row{};
        aoi_sweep_row(sweep, i, &row);
        std::printf("%-13s %-8.4g %-8.4g %-12.6g %-12.6g %-12.6g %-12.6g %-10llu%s%s\n",
                    aoi_scheme_token(row.scheme), row.p1, row.p2, row.analytic_aoi, row.solver_aoi,
                    row.sim_aoi, row.sim_std_error, static_cast<unsigned long long>(row.cycles),
                    row.disagree ? "  DISAGREE" : "",
                    row.error ? aoi_status_message(static_cast<aoi_status>(row.error)) : "");
        any_error |= row.error != 0;
    }

    int code = any_error ? 1 : 0;
    if (!args.csv_path.empty()) {
        status = aoi_sweep_write_csv(sweep, args.csv_path.c_str());
        if (status != AOI_OK) {
            aoi_sweep_free(sweep);
            return fail(status, "writing csv");
        }
        std::printf("csv: %s\n", args.csv_path.c_str());
    }
    if (!args.svg_path.empty()) {
        aoi_axis axis;
        try {
            axis = resolve_axis(args, in);
        } catch (const CLI::ValidationError&) {
            aoi_sweep_free(sweep);
            throw;
        }
        status = aoi_sweep_write_svg(sweep, axis, args.svg_path.c_str());
        if (status != AOI_OK) {
            aoi_sweep_free(sweep);
            return fail(status, "writing svg");
        }
        std::printf("svg: %s\n", args.svg_path.c_str());
    }
    aoi_sweep_free(sweep);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"average Age of Information for one- and two-hop status-update links"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("aoi ") + aoi_version());

    SchemeArgs analytic_args;
    CLI::App* analytic_cmd =
        app.add_subcommand("analytic", "closed-form average AoI and cycle moments");
    analytic_args.attach(analytic_cmd);

    SchemeArgs sim_args;
    std::uint64_t horizon = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t warmup = 100;
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "seeded slot-level protocol simulation");
    sim_args.attach(simulate_cmd);
    simulate_cmd->add_option("--horizon", horizon, "slots to simulate")->required();
    simulate_cmd->add_option("--seed", seed, "RNG seed")->required();
    simulate_cmd->add_option("--warmup", warmup, "cycles dropped beyond the seed cycle");

    SchemeArgs verify_args;
    std::uint64_t verify_horizon = 1'000'000;
    std::uint64_t verify_seed = 1;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "cross-check closed form, chain solver and simulation at one point");
    verify_args.attach(verify_cmd);
    verify_cmd->add_option("--horizon", verify_horizon, "slots to simulate")->required();
    verify_cmd->add_option("--seed", verify_seed, "RNG seed")->required();

    SweepArgs sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid sweep with CSV and SVG emission");
    sweep_cmd->add_option("--config", sweep_args.config_path,
                          "JSON file mirroring the sweep spec (CLI flags override)");
    sweep_cmd->add_option("--schemes", sweep_args.schemes_text, "comma-separated scheme tokens");
    sweep_cmd->add_option("--p1", sweep_args.p1_text, "values and first:last:step ranges");
    sweep_cmd->add_option("--p2", sweep_args.p2_text, "values and first:last:step ranges");
    sweep_cmd->add_option("--horizon", sweep_args.horizon, "slots per simulation");
    sweep_cmd->add_option("--seed", sweep_args.seed, "base seed");
    sweep_cmd->add_option("--replications", sweep_args.replications, "simulations per point");
    sweep_cmd->add_option("--csv", sweep_args.csv_path, "write rows to this CSV file");
    sweep_cmd->add_option("--svg", sweep_args.svg_path, "write a chart to this SVG file");
    sweep_cmd->add_option("--axis", sweep_args.axis_token, "vary_p1, vary_p2 or diagonal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // parse/validation problems are exit 1
    }

    try {
        if (analytic_cmd->parsed()) return run_analytic(analytic_args);
        if (simulate_cmd->parsed()) return run_simulate(sim_args, horizon, seed, warmup);
        if (verify_cmd->parsed()) return run_verify(verify_args, verify_horizon, verify_seed);
        if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_cmd, sweep_args);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
