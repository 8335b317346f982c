// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 9 drives the CLI binary end to end; pass its path as
// argv[1] (ctest does).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "chain.hpp"
#include "oracles.hpp"
#include "sim.hpp"
#include "xp.hpp"

using namespace aoi;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int number, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number, what.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

// 1. closed forms vs chain-solver moments, 99x99 grid, 1e-10, under 1 s
void criterion_closed_form_vs_solver() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int i = 1; i <= 99; ++i) {
        for (int j = 1; j <= 99; ++j) {
            const LinkParams params{i / 100.0, j / 100.0};
            const double noarq = analytic::two_noarq(params).average_aoi;
            const double arq = analytic::two_arq(params).average_aoi;
            worst = std::max(worst, std::abs(noarq - xp::solver_average(Scheme::TwoNoArq, params)) /
                                        std::max(1.0, noarq));
            worst = std::max(worst, std::abs(arq - xp::solver_average(Scheme::TwoArq, params)) /
                                        std::max(1.0, arq));
        }
    }
    const double elapsed = now_seconds(t0);
    report(1, worst < 1e-10 && elapsed < 1.0,
           "closed forms match chain-solver moments on the 99x99 grid",
           fmt("max relative deviation %.2e, %.2f s", worst, elapsed));
}

// 2. the four ARQ endpoint values and the reductions they imply
void criterion_point_values() {
    const double v1 = analytic::two_arq({0.5, 0.2}).average_aoi;
    const double v2 = analytic::two_arq({0.5, 1.0}).average_aoi;
    const double v3 = analytic::two_arq({0.2, 0.5}).average_aoi;
    const double v4 = analytic::two_arq({1.0, 0.5}).average_aoi;
    const double drop_p2 = 100.0 * (1.0 - v2 / v1);
    const double drop_p1 = 100.0 * (1.0 - v4 / v3);
    const bool ok = std::abs(v1 - 11.07) <= 0.005 && std::abs(v2 - 3.83) <= 0.005 &&
                    std::abs(v3 - 8.07) <= 0.005 && std::abs(v4 - 4.83) <= 0.005 &&
                    std::abs(drop_p2 - 65.4) <= 0.5 && std::abs(drop_p1 - 40.1) <= 0.5;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "11.07->%.4f 3.83->%.4f 8.07->%.4f 4.83->%.4f drops %.1f%%/%.1f%%", v1, v2, v3,
                  v4, drop_p2, drop_p1);
    report(2, ok, "ARQ endpoint values and 65.4%/40.1% reductions", detail);
}

// 3. ARQ-vs-noARQ reductions at p1 = p2 = 0.2 and 0.7
void criterion_reduction_claims() {
    const double red02 =
        100.0 * (1.0 - analytic::two_arq({0.2, 0.2}).average_aoi /
                           analytic::two_noarq({0.2, 0.2}).average_aoi);
    const double red07 =
        100.0 * (1.0 - analytic::two_arq({0.7, 0.7}).average_aoi /
                           analytic::two_noarq({0.7, 0.7}).average_aoi);
    report(3, std::abs(red02 - 57.0) <= 1.0 && std::abs(red07 - 7.0) <= 1.0,
           "AoI reductions of about 57% and 7%", fmt("%.1f%% and %.1f%%", red02, red07));
}

// 4. simulation within 3 sigma and 1% of analytic for all schemes on the
//    {0.2, 0.5, 0.8}^2 grid, horizon 1e6, under 10 s
void criterion_simulation_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    const double grid[] = {0.2, 0.5, 0.8};
    const std::uint64_t base_seed = 13;
    double worst_rel = 0.0, worst_sigma = 0.0;
    bool ok = true;
    for (Scheme scheme : kAllSchemes) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                sim::SimConfig config;
                config.scheme = scheme;
                config.params = {grid[i], grid[j]};
                config.horizon = 1'000'000;
                config.seed =
                    sim::derive_seed(base_seed, static_cast<std::uint64_t>(scheme), i, j, 0);
                const sim::SimStats stats = sim::run(config);
                const double expected = analytic::evaluate(scheme, config.params).average_aoi;
                const double rel = std::abs(stats.average_aoi - expected) / expected;
                const double sigma = stats.std_error > 0.0
                                         ? std::abs(stats.average_aoi - expected) / stats.std_error
                                         : 0.0;
                worst_rel = std::max(worst_rel, rel);
                worst_sigma = std::max(worst_sigma, sigma);
                if (rel >= 0.01 || sigma > 3.0) ok = false;
            }
        }
    }
    const double elapsed = now_seconds(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "worst %.3f%% and %.2f sigma over 36 runs, %.2f s",
                  100.0 * worst_rel, worst_sigma, elapsed);
    report(4, ok && elapsed < 10.0, "simulation within 3 sigma and 1% of analytic", detail);
}

// 5. gap nonpositive on the grid, exactly zero at p2 = 1
void criterion_gap_sign() {
    double worst = -std::numeric_limits<double>::infinity();
    bool zero_at_one = true;
    for (int i = 1; i <= 99; ++i) {
        for (int j = 1; j <= 99; ++j) {
            worst = std::max(worst, analytic::gap({i / 100.0, j / 100.0}));
        }
        if (analytic::gap({i / 100.0, 1.0}) != 0.0) zero_at_one = false;
    }
    report(5, worst <= 1e-12 && zero_at_one, "ARQ never increases the two-hop average AoI",
           fmt("max gap %.2e, gap(p1, 1) == 0 everywhere", worst));
}

// 6. single-hop ARQ penalty identity at double precision
void criterion_single_hop_identity() {
    double worst_ulps = 0.0;
    for (int i = 1; i <= 99; ++i) {
        const double q = i / 100.0;
        const double arq = analytic::single_arq(q).average_aoi;
        const double diff = arq - analytic::single_noarq(q).average_aoi;
        const double ulp =
            std::nextafter(arq, std::numeric_limits<double>::infinity()) - arq;
        worst_ulps = std::max(worst_ulps, std::abs(diff - (1.0 / q - 1.0)) / ulp);
    }
    report(6, worst_ulps <= 1.0, "single-hop ARQ penalty equals 1/q - 1",
           fmt("max deviation %.2f ulp", worst_ulps));
}

// 7. swapping the hop probabilities: better second hop always wins by 1/b - 1/a
void criterion_swap_dominance() {
    double worst = 0.0;
    bool ordered = true;
    for (int i = 1; i <= 99; ++i) {
        for (int j = i + 1; j <= 99; ++j) {
            const double a = i / 100.0;
            const double b = j / 100.0;
            const double low = analytic::two_arq({a, b}).average_aoi;
            const double high = analytic::two_arq({b, a}).average_aoi;
            if (low >= high) ordered = false;
            worst = std::max(worst, std::abs((low - high) - (1.0 / b - 1.0 / a)));
        }
    }
    report(7, ordered && worst < 1e-12, "ARQ swap dominance with difference 1/b - 1/a",
           fmt("max deviation %.2e", worst));
}

// 8. path enumeration brackets the solver moments
void criterion_brute_force_oracle() {
    bool ok = true;
    double slack_mean = 0.0;
    for (double p1 : {0.25, 0.5, 0.75}) {
        for (double p2 : {0.25, 0.5, 0.75}) {
            for (Scheme scheme : {Scheme::TwoNoArq, Scheme::TwoArq}) {
                const auto chain_spec = chain::build_chain(scheme, {p1, p2});
                const auto oracle = aoi::testing::enumerate_first_passage(chain_spec, 0, 60);
                const auto solved = chain::hitting_moments(chain_spec);
                const bool mean_ok = solved.mean[0] >= oracle.mean - 1e-9 &&
                                     solved.mean[0] <= oracle.mean + oracle.mean_bound + 1e-9;
                const bool second_ok =
                    solved.second_moment[0] >= oracle.second - 1e-9 &&
                    solved.second_moment[0] <= oracle.second + oracle.second_bound + 1e-9;
                if (!mean_ok || !second_ok) ok = false;
                slack_mean = std::max(slack_mean, oracle.mean_bound);
            }
        }
    }
    report(8, ok, "length-60 path enumeration brackets the solver moments",
           fmt("largest mean tail bound %.2f slots", slack_mean));
}

// 9. two identical CLI sweeps produce byte-identical CSV and SVG files
void criterion_determinism(const char* cli_path) {
    const fs::path dir = fs::temp_directory_path() / "aoi_acceptance";
    fs::create_directories(dir);
    auto bytes = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };

    bool ok = true;
    std::string how;
    if (cli_path && *cli_path) {
        const std::string args =
            " sweep --schemes two-noarq,two-arq --p1 0.2:1.0:0.2 --p2 0.2:1.0:0.2"
            " --horizon 100000 --seed 17 --axis diagonal";
        const std::string run1 = std::string(cli_path) + args + " --csv " +
                                 (dir / "a.csv").string() + " --svg " + (dir / "a.svg").string() +
                                 " > /dev/null";
        const std::string run2 = std::string(cli_path) + args + " --csv " +
                                 (dir / "b.csv").string() + " --svg " + (dir / "b.svg").string() +
                                 " > /dev/null";
        ok = std::system(run1.c_str()) == 0 && std::system(run2.c_str()) == 0;
        ok = ok && !bytes(dir / "a.csv").empty() && bytes(dir / "a.csv") == bytes(dir / "b.csv");
        ok = ok && !bytes(dir / "a.svg").empty() && bytes(dir / "a.svg") == bytes(dir / "b.svg");
        how = "via the CLI";
    } else {
        xp::SweepSpec spec;
        spec.schemes = {Scheme::TwoNoArq, Scheme::TwoArq};
        spec.p1_values = spec.p2_values = {0.2, 0.4, 0.6, 0.8, 1.0};
        spec.horizon = 100000;
        spec.seed = 17;
        xp::emit_csv(xp::run_sweep(spec), dir / "a.csv");
        xp::emit_csv(xp::run_sweep(spec), dir / "b.csv");
        xp::emit_plot(xp::run_sweep(spec), xp::Axis::Diagonal, dir / "a.svg");
        xp::emit_plot(xp::run_sweep(spec), xp::Axis::Diagonal, dir / "b.svg");
        ok = !bytes(dir / "a.csv").empty() && bytes(dir / "a.csv") == bytes(dir / "b.csv") &&
             !bytes(dir / "a.svg").empty() && bytes(dir / "a.svg") == bytes(dir / "b.svg");
        how = "via the library (no CLI path given)";
    }
    fs::remove_all(dir);
    report(9, ok, "repeated sweeps emit byte-identical CSV and SVG", how);
}

}  // namespace

int main(int argc, char** argv) {
    criterion_closed_form_vs_solver();
    criterion_point_values();
    criterion_reduction_claims();
    criterion_simulation_fidelity();
    criterion_gap_sign();
    criterion_single_hop_identity();
    criterion_swap_dominance();
    criterion_brute_force_oracle();
    criterion_determinism(argc > 1 ? argv[1] : nullptr);
    if (failures != 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
