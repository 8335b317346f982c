#include "xp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "analytic.hpp"
#include "chain.hpp"
#include "sim.hpp"

namespace aoi::xp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sig6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool row_order(const SweepRow& a, const SweepRow& b) {
    if (a.scheme != b.scheme) return static_cast<int>(a.scheme) < static_cast<int>(b.scheme);
    if (a.p1 != b.p1) return a.p1 < b.p1;
    return a.p2 < b.p2;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Status::IoError, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

}  // namespace

double solver_average(Scheme scheme, const LinkParams& params) {
    const chain::ChainSpec spec = chain::build_chain(scheme, params);
    const chain::HittingMoments hm = chain::hitting_moments(spec);
    analytic::SchemeMoments m;
    m.e_z = hm.mean[0];
    m.e_z2 = hm.second_moment[0];
    switch (scheme) {
        case Scheme::SingleNoArq: m.e_tau_z = m.e_z; break;
        case Scheme::SingleArq: m.e_tau_z = m.e_z * m.e_z; break;
        case Scheme::TwoNoArq: m.e_tau_z = 2.0 * m.e_z; break;
        // 1 + E[X], with E[X] read off the chain as the mean hitting time
        // from the second-hop state.
        case Scheme::TwoArq: m.e_tau_z = (1.0 + hm.mean[1]) * m.e_z; break;
    }
    return analytic::average_from_moments(m);
}

SweepRow verify(Scheme scheme, const LinkParams& params, std::uint64_t horizon,
                std::uint64_t seed) {
    SweepRow row;
    row.scheme = scheme;
    row.p1 = params.p1;
    row.p2 = params.p2;
    row.analytic_aoi = analytic::evaluate(scheme, params).average_aoi;
    row.solver_aoi = solver_average(scheme, params);
    if (std::abs(row.analytic_aoi - row.solver_aoi) >= 1e-8) {
        throw Error(Status::Internal, "closed form and chain solver disagree beyond 1e-8");
    }
    sim::SimConfig config;
    config.scheme = scheme;
    config.params = params;
    config.horizon = horizon;
    config.seed = seed;
    const sim::SimStats stats = sim::run(config);
    row.sim_aoi = stats.average_aoi;
    row.sim_std_error = stats.std_error;
    row.cycles = stats.cycle_count;
    row.disagree = std::abs(row.sim_aoi - row.analytic_aoi) > 3.0 * row.sim_std_error;
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.schemes.empty() || spec.p1_values.empty() || spec.p2_values.empty()) {
        throw Error(Status::InvalidArgument, "sweep needs at least one scheme, p1 and p2");
    }
    if (spec.replications < 1) {
        throw Error(Status::InvalidArgument, "replications must be at least 1");
    }
    if (spec.horizon < 1) {
        throw Error(Status::InvalidArgument, "horizon must be at least 1 slot");
    }
    for (double p : spec.p1_values) require_probability(p, "p1");
    for (double p : spec.p2_values) require_probability(p, "p2");

    std::vector<Scheme> schemes = spec.schemes;
    std::sort(schemes.begin(), schemes.end());
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
    std::vector<double> p1s = spec.p1_values;
    std::sort(p1s.begin(), p1s.end());
    std::vector<double> p2s = spec.p2_values;
    std::sort(p2s.begin(), p2s.end());

    std::vector<SweepRow> rows;
    rows.reserve(schemes.size() * p1s.size() * p2s.size());
    for (Scheme scheme : schemes) {
        for (std::size_t i = 0; i < p1s.size(); ++i) {
            for (std::size_t j = 0; j < p2s.size(); ++j) {
                const LinkParams params{p1s[i], p2s[j]};
                SweepRow row;
                row.scheme = scheme;
                row.p1 = params.p1;
                row.p2 = params.p2;
                try {
                    row.analytic_aoi = analytic::evaluate(scheme, params).average_aoi;
                    row.solver_aoi = solver_average(scheme, params);
                    if (std::abs(row.analytic_aoi - row.solver_aoi) >= 1e-8) {
                        throw Error(Status::Internal,
                                    "closed form and chain solver disagree beyond 1e-8");
                    }
                    double aoi_sum = 0.0;
                    double var_sum = 0.0;
                    std::uint64_t cycles = 0;
                    for (std::uint32_t r = 0; r < spec.replications; ++r) {
                        sim::SimConfig config;
                        config.scheme = scheme;
                        config.params = params;
                        config.horizon = spec.horizon;
                        config.seed = sim::derive_seed(spec.seed,
                                                       static_cast<std::uint64_t>(scheme), i, j, r);
                        const sim::SimStats stats = sim::run(config);
                        aoi_sum += stats.average_aoi;
                        var_sum += stats.std_error * stats.std_error;
                        cycles += stats.cycle_count;
                    }
                    const double reps = static_cast<double>(spec.replications);
                    row.sim_aoi = aoi_sum / reps;
                    row.sim_std_error = std::sqrt(var_sum) / reps;
                    row.cycles = cycles;
                    row.disagree =
                        std::abs(row.sim_aoi - row.analytic_aoi) > 3.0 * row.sim_std_error;
                } catch (const Error& e) {
                    row.error = e.status();
                    row.sim_aoi = kNaN;
                    row.sim_std_error = kNaN;
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    if (rows.empty()) {
        throw Error(Status::InvalidArgument, "no rows to emit");
    }
    std::vector<SweepRow> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), row_order);
    out << "scheme,p1,p2,analytic_aoi,solver_aoi,sim_aoi,sim_std_error,cycles\n";
    for (const SweepRow& row : sorted) {
        out << scheme_token(row.scheme) << ',' << sig6(row.p1) << ',' << sig6(row.p2) << ','
            << sig6(row.analytic_aoi) << ',' << sig6(row.solver_aoi) << ',' << sig6(row.sim_aoi)
            << ',' << sig6(row.sim_std_error) << ',' << row.cycles << '\n';
    }
    if (!out) throw Error(Status::IoError, "write failed while emitting CSV");
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    emit_csv(rows, out);
}

std::vector<SweepRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "scheme,p1,p2,analytic_aoi,solver_aoi,sim_aoi,sim_std_error,cycles") {
        throw Error(Status::InvalidArgument, "missing or unexpected CSV header");
    }
    std::vector<SweepRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) {
            throw Error(Status::InvalidArgument,
                        "line " + std::to_string(line_no) + ": expected 8 fields, got " +
                            std::to_string(fields.size()));
        }
        SweepRow row;
        row.scheme = parse_scheme(fields[0]);
        row.p1 = std::strtod(fields[1].c_str(), nullptr);
        row.p2 = std::strtod(fields[2].c_str(), nullptr);
        row.analytic_aoi = std::strtod(fields[3].c_str(), nullptr);
        row.solver_aoi = std::strtod(fields[4].c_str(), nullptr);
        row.sim_aoi = std::strtod(fields[5].c_str(), nullptr);
        row.sim_std_error = std::strtod(fields[6].c_str(), nullptr);
        row.cycles = std::strtoull(fields[7].c_str(), nullptr, 10);
        row.disagree = std::abs(row.sim_aoi - row.analytic_aoi) > 3.0 * row.sim_std_error;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// SVG emission
// ---------------------------------------------------------------------------

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 72.0, kRight = 700.0, kTop = 48.0, kBottom = 420.0;

const char* scheme_color(Scheme s) {
    switch (s) {
        case Scheme::SingleNoArq: return "#2ca02c";
        case Scheme::SingleArq: return "#9467bd";
        case Scheme::TwoNoArq: return "#d62728";
        case Scheme::TwoArq: return "#1f77b4";
    }
    return "#000000";
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct PlotPoint {
    double x = 0.0;
    double analytic = 0.0;
    double sim = 0.0;
    double err = 0.0;
};

}  // namespace

void emit_plot(const std::vector<SweepRow>& rows, Axis axis, std::ostream& out,
               const PlotMeta* meta) {
    if (rows.empty()) {
        throw Error(Status::InvalidArgument, "no rows to plot");
    }

    std::vector<SweepRow> selected;
    std::string x_name;
    std::string fixed_note;
    if (axis == Axis::Diagonal) {
        for (const SweepRow& r : rows) {
            if (r.p1 == r.p2) selected.push_back(r);
        }
        if (selected.empty()) {
            throw Error(Status::InvalidArgument, "no rows with p1 == p2 for the diagonal axis");
        }
        x_name = "p1 = p2";
    } else {
        const bool vary_p1 = axis == Axis::VaryP1;
        const double fixed = vary_p1 ? rows.front().p2 : rows.front().p1;
        for (const SweepRow& r : rows) {
            if ((vary_p1 ? r.p2 : r.p1) != fixed) {
                throw Error(Status::InvalidArgument,
                            std::string("rows mix values of the fixed parameter ") +
                                (vary_p1 ? "p2" : "p1"));
            }
        }
        selected = rows;
        x_name = vary_p1 ? "p1" : "p2";
        fixed_note = std::string(vary_p1 ? "p2" : "p1") + " = " + sig6(fixed);
    }
    std::stable_sort(selected.begin(), selected.end(), row_order);

    std::map<Scheme, std::vector<PlotPoint>> series;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymax = 0.0;
    for (const SweepRow& r : selected) {
        PlotPoint pt;
        pt.x = axis == Axis::VaryP2 ? r.p2 : r.p1;
        pt.analytic = r.analytic_aoi;
        pt.sim = r.sim_aoi;
        pt.err = r.sim_std_error;
        series[r.scheme].push_back(pt);
        xmin = std::min(xmin, pt.x);
        xmax = std::max(xmax, pt.x);
        ymax = std::max(ymax, pt.analytic);
        if (std::isfinite(pt.sim)) ymax = std::max(ymax, pt.sim + (std::isfinite(pt.err) ? pt.err : 0.0));
    }
    if (xmax == xmin) {
        xmin -= 0.05;
        xmax += 0.05;
    }
    ymax *= 1.05;
    if (ymax <= 0.0) ymax = 1.0;

    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
    auto sy = [&](double y) { return kBottom - y / ymax * (kBottom - kTop); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    out << "<desc>aoi " << kVersion << " rng=" << kRngName;
    if (meta) out << " seed=" << meta->seed << " horizon=" << meta->horizon;
    out << "</desc>\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    std::string title = "average AoI vs " + x_name;
    if (!fixed_note.empty()) title += "  (" + fixed_note + ")";
    out << "<text x=\"" << coord((kLeft + kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">" << title << "</text>\n";

    // axes + ticks
    out << "<g stroke=\"#333333\" fill=\"none\">\n";
    out << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kBottom) << "\" x2=\""
        << coord(kRight) << "\" y2=\"" << coord(kBottom) << "\"/>\n";
    out << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop) << "\" x2=\"" << coord(kLeft)
        << "\" y2=\"" << coord(kBottom) << "\"/>\n";
    out << "</g>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 5.0;
        const double fy = ymax * t / 5.0;
        out << "<line x1=\"" << coord(sx(fx)) << "\" y1=\"" << coord(kBottom) << "\" x2=\""
            << coord(sx(fx)) << "\" y2=\"" << coord(kBottom + 5) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << coord(sx(fx)) << "\" y=\"" << coord(kBottom + 20)
            << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
        out << "<line x1=\"" << coord(kLeft - 5) << "\" y1=\"" << coord(sy(fy)) << "\" x2=\""
            << coord(kLeft) << "\" y2=\"" << coord(sy(fy)) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << coord(kLeft - 9) << "\" y=\"" << coord(sy(fy) + 4)
            << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
    }
    out << "<text x=\"" << coord((kLeft + kRight) / 2) << "\" y=\"" << coord(kHeight - 14)
        << "\" text-anchor=\"middle\">" << x_name << "</text>\n";
    out << "<text x=\"20\" y=\"" << coord((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << coord((kTop + kBottom) / 2)
        << ")\">average AoI (slots)</text>\n";

    // series
    for (const auto& [scheme, pts] : series) {
        const char* color = scheme_color(scheme);
        const std::string token(scheme_token(scheme));
        out << "<g id=\"series-" << token << "-analytic\" stroke=\"" << color
            << "\" fill=\"none\" stroke-width=\"1.5\">\n<polyline points=\"";
        bool first = true;
        for (const PlotPoint& pt : pts) {
            if (!std::isfinite(pt.analytic)) continue;
            if (!first) out << ' ';
            out << coord(sx(pt.x)) << ',' << coord(sy(pt.analytic));
            first = false;
        }
        out << "\"/>\n</g>\n";

        out << "<g id=\"series-" << token << "-sim\" stroke=\"" << color << "\" fill=\"" << color
            << "\">\n";
        for (const PlotPoint& pt : pts) {
            if (!std::isfinite(pt.sim)) continue;
            const double cx = sx(pt.x);
            if (std::isfinite(pt.err) && pt.err > 0.0) {
                out << "<line x1=\"" << coord(cx) << "\" y1=\"" << coord(sy(pt.sim - pt.err))
                    << "\" x2=\"" << coord(cx) << "\" y2=\"" << coord(sy(pt.sim + pt.err))
                    << "\"/>\n";
                out << "<line x1=\"" << coord(cx - 4) << "\" y1=\"" << coord(sy(pt.sim - pt.err))
                    << "\" x2=\"" << coord(cx + 4) << "\" y2=\"" << coord(sy(pt.sim - pt.err))
                    << "\"/>\n";
                out << "<line x1=\"" << coord(cx - 4) << "\" y1=\"" << coord(sy(pt.sim + pt.err))
                    << "\" x2=\"" << coord(cx + 4) << "\" y2=\"" << coord(sy(pt.sim + pt.err))
                    << "\"/>\n";
            }
            out << "<circle cx=\"" << coord(cx) << "\" cy=\"" << coord(sy(pt.sim))
                << "\" r=\"3\"/>\n";
        }
        out << "</g>\n";
    }

    // legend
    double ly = kTop + 8;
    for (const auto& [scheme, pts] : series) {
        const char* color = scheme_color(scheme);
        const std::string token(scheme_token(scheme));
        out << "<line x1=\"" << coord(kRight - 170) << "\" y1=\"" << coord(ly) << "\" x2=\""
            << coord(kRight - 140) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << coord(kRight - 134) << "\" y=\"" << coord(ly + 4) << "\">" << token
            << " analytic</text>\n";
        ly += 18;
        out << "<circle cx=\"" << coord(kRight - 155) << "\" cy=\"" << coord(ly) << "\" r=\"3\" "
            << "fill=\"" << color << "\" stroke=\"" << color << "\"/>\n";
        out << "<text x=\"" << coord(kRight - 134) << "\" y=\"" << coord(ly + 4) << "\">" << token
            << " sim</text>\n";
        ly += 18;
    }

    out << "</svg>\n";
    if (!out) throw Error(Status::IoError, "write failed while emitting SVG");
}

void emit_plot(const std::vector<SweepRow>& rows, Axis axis,
               const std::filesystem::path& path, const PlotMeta* meta) {
    auto out = open_for_write(path);
    emit_plot(rows, axis, out, meta);
}

}  // namespace aoi::xp
