#ifndef AOI_XP_HPP
#define AOI_XP_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "types.hpp"

namespace aoi::xp {

struct SweepSpec {
    std::vector<Scheme> schemes;
    std::vector<double> p1_values;
    std::vector<double> p2_values;
    std::uint64_t horizon = 1'000'000;
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
};

// One grid point, cross-validated three ways.
struct SweepRow {
    Scheme scheme = Scheme::TwoNoArq;
    double p1 = 0.0;
    double p2 = 0.0;
    double analytic_aoi = 0.0;
    double solver_aoi = 0.0;
    double sim_aoi = 0.0;
    double sim_std_error = 0.0;
    std::uint64_t cycles = 0;
    bool disagree = false;       // |sim - analytic| > 3 * sim_std_error
    Status error = Status::Ok;   // per-point failure, recorded in-row
};

// Average AoI through the chain solver: hitting moments of the protocol
// chain combined with the scheme's delivery-age rule. Fully independent of
// the closed forms in analytic.
double solver_average(Scheme scheme, const LinkParams& params);

// All three estimates at one point. The analytic and solver values must
// agree within 1e-8 (anything else means a broken build and throws);
// sim disagreement beyond 3 standard errors only sets the flag.
SweepRow verify(Scheme scheme, const LinkParams& params, std::uint64_t horizon,
                std::uint64_t seed);

// One row per (scheme, p1, p2), schemes and probabilities in ascending
// order. Each point's simulation seed is derive_seed(spec.seed, scheme
// value, i, j, r) with i, j indexing the sorted value lists, so any point
// can be re-run in isolation. Replications are averaged with pooled
// standard error. A failing point records its status in-row; the sweep
// continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// CSV with header scheme,p1,p2,analytic_aoi,solver_aoi,sim_aoi,
// sim_std_error,cycles; 6 significant digits, LF endings, rows sorted by
// (scheme, p1, p2). Re-emitting the same rows is byte-identical.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

// Inverse of emit_csv at 6-significant-digit precision. The disagreement
// flag is reconstructed from the parsed columns.
std::vector<SweepRow> read_csv(std::istream& in);

enum class Axis {
    VaryP1 = 0,   // x = p1; every row must share the same p2
    VaryP2 = 1,   // x = p2; every row must share the same p1
    Diagonal = 2, // rows with p1 == p2
};

// Run provenance embedded in plots.
struct PlotMeta {
    std::uint64_t seed = 0;
    std::uint64_t horizon = 0;
};

// Self-contained SVG line chart: per scheme one analytic line and one
// simulated series with error bars. Throws Error(InvalidArgument) when rows
// mix fixed parameters for the chosen axis or no row matches it.
void emit_plot(const std::vector<SweepRow>& rows, Axis axis, std::ostream& out,
               const PlotMeta* meta = nullptr);
void emit_plot(const std::vector<SweepRow>& rows, Axis axis,
               const std::filesystem::path& path, const PlotMeta* meta = nullptr);

}  // namespace aoi::xp

#endif  // AOI_XP_HPP
