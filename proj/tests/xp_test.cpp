#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "analytic.hpp"
#include "sim.hpp"
#include "xp.hpp"

using namespace aoi;
using xp::SweepRow;
using xp::SweepSpec;

namespace {

SweepSpec small_spec() {
    SweepSpec spec;
    spec.schemes = {Scheme::TwoArq, Scheme::TwoNoArq};
    spec.p1_values = {0.4, 0.8};
    spec.p2_values = {0.3, 0.6};
    spec.horizon = 20000;
    spec.seed = 5;
    return spec;
}

std::string csv_of(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    xp::emit_csv(rows, out);
    return out.str();
}

std::string svg_of(const std::vector<SweepRow>& rows, xp::Axis axis) {
    std::ostringstream out;
    xp::emit_plot(rows, axis, out);
    return out.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("solver route covers the single-hop schemes too") {
    for (int i = 1; i <= 99; i += 7) {
        const double q = i / 100.0;
        CHECK(std::abs(xp::solver_average(Scheme::SingleNoArq, {q, 0.0}) -
                       analytic::single_noarq(q).average_aoi) < 1e-10);
        CHECK(std::abs(xp::solver_average(Scheme::SingleArq, {q, 0.0}) -
                       analytic::single_arq(q).average_aoi) < 1e-10);
    }
}

TEST_CASE("verify on the deterministic link is exact") {
    const SweepRow row = xp::verify(Scheme::TwoNoArq, {1.0, 1.0}, 1000, 1);
    CHECK(row.analytic_aoi == 3.0);
    CHECK(row.solver_aoi == 3.0);
    CHECK(row.sim_aoi == 3.0);
    CHECK(row.sim_std_error == 0.0);
    CHECK_FALSE(row.disagree);
}

TEST_CASE("verify cross-validates the three routes") {
    const SweepRow arq = xp::verify(Scheme::TwoArq, {0.5, 0.5}, 1000000, 42);
    CHECK(arq.analytic_aoi == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(arq.solver_aoi == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(std::abs(arq.sim_aoi - 5.5) <= 3.0 * arq.sim_std_error);
    CHECK_FALSE(arq.disagree);

    const SweepRow endpoint = xp::verify(Scheme::TwoArq, {0.5, 0.2}, 1000000, 42);
    CHECK(endpoint.analytic_aoi == doctest::Approx(11.0714).epsilon(1e-5));
    CHECK(endpoint.solver_aoi == doctest::Approx(11.0714).epsilon(1e-5));
    CHECK(std::abs(endpoint.sim_aoi - 11.0714) <= 3.0 * endpoint.sim_std_error);
    CHECK(endpoint.cycles > 50000);
}

TEST_CASE("sweep rows come out ordered and deterministic") {
    const auto rows = xp::run_sweep(small_spec());
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1];
        const auto& b = rows[i];
        const bool ordered =
            a.scheme < b.scheme ||
            (a.scheme == b.scheme && (a.p1 < b.p1 || (a.p1 == b.p1 && a.p2 < b.p2)));
        CHECK(ordered);
    }
    for (const auto& row : rows) {
        CHECK(row.error == Status::Ok);
        CHECK(std::abs(row.analytic_aoi - row.solver_aoi) < 1e-8);
        CHECK(row.cycles > 0);
    }

    const auto again = xp::run_sweep(small_spec());
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(again[i].sim_aoi == rows[i].sim_aoi);
        CHECK(again[i].sim_std_error == rows[i].sim_std_error);
        CHECK(again[i].cycles == rows[i].cycles);
    }
}

TEST_CASE("any sweep point reruns in isolation from its derived seed") {
    const SweepSpec spec = small_spec();
    const auto rows = xp::run_sweep(spec);
    // row for (TwoArq, p1s[1]=0.8, p2s[0]=0.3)
    const auto it = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) {
        return r.scheme == Scheme::TwoArq && r.p1 == 0.8 && r.p2 == 0.3;
    });
    REQUIRE(it != rows.end());
    sim::SimConfig config;
    config.scheme = Scheme::TwoArq;
    config.params = {0.8, 0.3};
    config.horizon = spec.horizon;
    config.seed = sim::derive_seed(spec.seed, static_cast<std::uint64_t>(Scheme::TwoArq), 1, 0, 0);
    const sim::SimStats stats = sim::run(config);
    CHECK(stats.average_aoi == it->sim_aoi);
    CHECK(stats.cycle_count == it->cycles);
}

TEST_CASE("replications pool the estimate") {
    SweepSpec spec = small_spec();
    spec.schemes = {Scheme::TwoArq};
    spec.p1_values = {0.5};
    spec.p2_values = {0.5};
    spec.replications = 4;
    const auto rows = xp::run_sweep(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].cycles > 15000);  // roughly 4 * horizon / E[Z]
    CHECK(std::abs(rows[0].sim_aoi - 5.5) < 0.2);
    CHECK(rows[0].sim_std_error > 0.0);
    CHECK(rows[0].sim_std_error < 0.1);
}

TEST_CASE("a failing grid point is recorded in-row and the sweep continues") {
    SweepSpec spec = small_spec();
    spec.horizon = 1;  // no delivery fits in one slot on a two-hop link
    const auto rows = xp::run_sweep(spec);
    REQUIRE(rows.size() == 8);
    for (const auto& row : rows) {
        CHECK(row.error == Status::NoCycles);
        CHECK(std::isnan(row.sim_aoi));
        CHECK(row.analytic_aoi > 0.0);  // analytic columns still filled
    }
}

TEST_CASE("sweep spec validation") {
    SweepSpec spec = small_spec();
    spec.schemes.clear();
    CHECK_THROWS_AS(xp::run_sweep(spec), Error);
    spec = small_spec();
    spec.p1_values = {0.0};
    CHECK_THROWS_AS(xp::run_sweep(spec), Error);
    spec = small_spec();
    spec.replications = 0;
    CHECK_THROWS_AS(xp::run_sweep(spec), Error);
}

TEST_CASE("one row emits a two-line file that parses back") {
    SweepRow row;
    row.scheme = Scheme::TwoArq;
    row.p1 = 0.5;
    row.p2 = 0.2;
    row.analytic_aoi = 11.071428571428571;
    row.solver_aoi = 11.071428571428571;
    row.sim_aoi = 11.0702;
    row.sim_std_error = 0.012345678;
    row.cycles = 83000;
    const std::string text = csv_of({row});
    CHECK(count_occurrences(text, "\n") == 2);
    CHECK(text.find("scheme,p1,p2,analytic_aoi,solver_aoi,sim_aoi,sim_std_error,cycles\n") == 0);
    CHECK(text.find("two-arq,0.5,0.2,11.0714,11.0714,11.0702,0.0123457,83000\n") !=
          std::string::npos);

    std::istringstream in(text);
    const auto parsed = xp::read_csv(in);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].scheme == Scheme::TwoArq);
    CHECK(parsed[0].cycles == 83000);
    // Round-trip is exact at 6-significant-digit precision.
    CHECK(csv_of(parsed) == text);
}

TEST_CASE("csv rows are sorted and re-emission is byte-identical") {
    std::vector<SweepRow> rows;
    for (double p : {1.0, 0.6, 0.2, 0.8, 0.4}) {
        for (Scheme scheme : {Scheme::TwoArq, Scheme::TwoNoArq}) {
            SweepRow row;
            row.scheme = scheme;
            row.p1 = row.p2 = p;
            row.analytic_aoi = analytic::evaluate(scheme, {p, p}).average_aoi;
            row.solver_aoi = row.analytic_aoi;
            row.sim_aoi = row.analytic_aoi;
            row.sim_std_error = 0.01;
            row.cycles = 1000;
            rows.push_back(row);
        }
    }
    const std::string text = csv_of(rows);
    CHECK(count_occurrences(text, "\n") == 11);  // header + 2 schemes x 5 points
    // two-noarq block comes first, each block ascending in p1
    const auto noarq_pos = text.find("two-noarq,0.2");
    const auto arq_pos = text.find("two-arq,0.2");
    CHECK(noarq_pos != std::string::npos);
    CHECK(arq_pos != std::string::npos);
    CHECK(noarq_pos < arq_pos);
    CHECK(text.find("two-noarq,0.2") < text.find("two-noarq,0.4"));
    CHECK(text.find("two-noarq,1,") > text.find("two-noarq,0.8"));
    CHECK(csv_of(rows) == text);

    std::istringstream in(text);
    CHECK(csv_of(xp::read_csv(in)) == text);
}

TEST_CASE("csv rejects rows it cannot parse") {
    std::istringstream missing("p1,p2\n");
    CHECK_THROWS_AS(xp::read_csv(missing), Error);
    std::istringstream short_row(
        "scheme,p1,p2,analytic_aoi,solver_aoi,sim_aoi,sim_std_error,cycles\ntwo-arq,0.5\n");
    CHECK_THROWS_AS(xp::read_csv(short_row), Error);
    CHECK_THROWS_AS(xp::emit_csv({}, std::cout), Error);
}

TEST_CASE("diagonal plot carries one analytic and one sim series per scheme") {
    SweepSpec spec;
    spec.schemes = {Scheme::TwoNoArq, Scheme::TwoArq};
    spec.p1_values = {0.2, 0.4, 0.6, 0.8, 1.0};
    spec.p2_values = {0.2, 0.4, 0.6, 0.8, 1.0};
    spec.horizon = 30000;
    spec.seed = 3;
    const auto rows = xp::run_sweep(spec);
    const std::string svg = svg_of(rows, xp::Axis::Diagonal);
    CHECK(count_occurrences(svg, "<g id=\"series-") == 4);
    CHECK(svg.find("series-two-noarq-analytic") != std::string::npos);
    CHECK(svg.find("series-two-noarq-sim") != std::string::npos);
    CHECK(svg.find("series-two-arq-analytic") != std::string::npos);
    CHECK(svg.find("series-two-arq-sim") != std::string::npos);
    CHECK(svg.find("p1 = p2") != std::string::npos);
    CHECK(svg_of(rows, xp::Axis::Diagonal) == svg);  // deterministic bytes
}

TEST_CASE("fixed-p1 sweep hits the ARQ endpoint values") {
    SweepSpec spec;
    spec.schemes = {Scheme::TwoArq};
    spec.p1_values = {0.5};
    spec.p2_values = {0.2, 0.4, 0.6, 0.8, 1.0};
    spec.horizon = 50000;
    spec.seed = 11;
    const auto rows = xp::run_sweep(spec);
    REQUIRE(rows.size() == 5);
    CHECK(rows.front().analytic_aoi == doctest::Approx(11.0714).epsilon(1e-5));
    CHECK(rows.back().analytic_aoi == doctest::Approx(3.8333).epsilon(1e-4));
    const std::string svg = svg_of(rows, xp::Axis::VaryP2);
    CHECK(svg.find("(p1 = 0.5)") != std::string::npos);
    CHECK(count_occurrences(svg, "<g id=\"series-") == 2);
    CHECK(count_occurrences(svg, "<circle") > 5);  // 5 sim markers + legend
}

TEST_CASE("full figure grids at horizon 1e6 finish within the time budget") {
    const auto t0 = std::chrono::steady_clock::now();
    SweepSpec diagonal;
    diagonal.schemes = {Scheme::TwoNoArq, Scheme::TwoArq};
    diagonal.p1_values = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    diagonal.p2_values = diagonal.p1_values;
    diagonal.seed = 29;
    const auto diag_rows = xp::run_sweep(diagonal);
    CHECK(diag_rows.size() == 162);

    SweepSpec fixed_p1 = diagonal;  // the vary-p2 figure at p1 = 0.5 and 0.9
    fixed_p1.p1_values = {0.5, 0.9};
    const auto p2_rows = xp::run_sweep(fixed_p1);
    CHECK(p2_rows.size() == 36);

    SweepSpec fixed_p2 = diagonal;  // the vary-p1 figure at p2 = 0.5 and 0.9
    fixed_p2.p2_values = {0.5, 0.9};
    const auto p1_rows = xp::run_sweep(fixed_p2);
    CHECK(p1_rows.size() == 36);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(elapsed < 60.0);

    // ARQ never above no-ARQ anywhere on the figures
    for (const auto& row : diag_rows) {
        if (row.scheme != Scheme::TwoArq) continue;
        const auto partner = std::find_if(diag_rows.begin(), diag_rows.end(), [&](const SweepRow& r) {
            return r.scheme == Scheme::TwoNoArq && r.p1 == row.p1 && r.p2 == row.p2;
        });
        REQUIRE(partner != diag_rows.end());
        CHECK(row.analytic_aoi <= partner->analytic_aoi + 1e-12);
    }
}

TEST_CASE("plot rejects mixed fixed parameters and empty intersections") {
    const auto rows = xp::run_sweep(small_spec());  // two p1 values, two p2 values
    CHECK_THROWS_AS(svg_of(rows, xp::Axis::VaryP1), Error);
    CHECK_THROWS_AS(svg_of(rows, xp::Axis::VaryP2), Error);
    CHECK_THROWS_AS(svg_of(rows, xp::Axis::Diagonal), Error);  // 0.4/0.8 x 0.3/0.6
    CHECK_THROWS_AS(svg_of({}, xp::Axis::Diagonal), Error);
}
