#include "chain.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace aoi::chain {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kResidualTol = 1e-10;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// States from which the target cannot be reached in the support graph.
// A pruned BFS from the target over reversed edges.
std::vector<std::size_t> states_not_reaching_target(const ChainSpec& chain) {
    const std::size_t n = chain.size();
    std::vector<char> reaches(n, 0);
    reaches[chain.target] = 1;
    std::vector<std::size_t> queue{chain.target};
    while (!queue.empty()) {
        const std::size_t j = queue.back();
        queue.pop_back();
        for (std::size_t i = 0; i < n; ++i) {
            if (!reaches[i] && chain.transition[i][j] > 0.0) {
                reaches[i] = 1;
                queue.push_back(i);
            }
        }
    }
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < n; ++i) {
        if (!reaches[i]) missing.push_back(i);
    }
    return missing;
}

void require_valid(const ChainSpec& chain) {
    auto violations = validate(chain);
    if (violations.empty()) return;
    std::string joined = "invalid chain: " + violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) joined += "; " + violations[i];
    throw Error(Status::InvalidArgument, joined);
}

// Gaussian elimination with partial pivoting, carried out in extended
// precision: the systems are tiny but their condition grows like 1/(p1 p2),
// and downstream cross-checks compare against closed forms at 1e-10. Throws
// Error(UnreachableTarget) on a (numerically) singular system.
std::vector<double> solve_dense(const std::vector<std::vector<double>>& a_in,
                                const std::vector<double>& b_in) {
    const std::size_t n = b_in.size();
    std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
    std::vector<long double> b(b_in.begin(), b_in.end());
    for (std::size_t i = 0; i < n; ++i) {
        a[i].assign(a_in[i].begin(), a_in[i].end());
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (std::abs(a[pivot][col]) < 1e-14L) {
            throw Error(Status::UnreachableTarget,
                        "first-passage system is singular; moments diverge");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const long double factor = a[row][col] / a[col][col];
            if (factor == 0.0L) continue;
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<long double> x(n, 0.0L);
    for (std::size_t row = n; row-- > 0;) {
        long double acc = b[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return std::vector<double>(x.begin(), x.end());
}

// Builds the (I - T) restriction over non-target states, solves against
// `rhs`, scatters the solution back to full state indexing with 0 at the
// target, and checks the residual of the original recurrence.
std::vector<double> solve_hitting_system(const ChainSpec& chain,
                                         const std::vector<double>& rhs) {
    const std::size_t n = chain.size();
    std::vector<std::size_t> rows;  // non-target states, in order
    rows.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != chain.target) rows.push_back(i);
    }

    std::vector<std::vector<double>> a(rows.size(), std::vector<double>(rows.size(), 0.0));
    std::vector<double> b(rows.size(), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        b[r] = rhs[rows[r]];
        for (std::size_t c = 0; c < rows.size(); ++c) {
            a[r][c] = (r == c ? 1.0 : 0.0) - chain.transition[rows[r]][rows[c]];
        }
    }

    const std::vector<double> reduced = solve_dense(a, b);
    std::vector<double> full(n, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) full[rows[r]] = reduced[r];

    for (std::size_t i : rows) {
        double residual = full[i] - rhs[i];
        for (std::size_t j : rows) residual -= chain.transition[i][j] * full[j];
        if (std::abs(residual) > kResidualTol * std::max(1.0, std::abs(full[i]))) {
            throw Error(Status::Internal, "hitting-moment solve residual exceeds 1e-10");
        }
    }
    return full;
}

}  // namespace

ChainSpec build_chain(Scheme scheme, const LinkParams& params) {
    require_params(scheme, params);
    if (is_single_hop(scheme)) {
        const double q = params.p1;
        return ChainSpec{{"1", "s"}, {{1.0 - q, q}, {1.0, 0.0}}, 1};
    }
    const double p1 = params.p1;
    const double p2 = params.p2;
    ChainSpec spec{{"1", "2", "s"},
                   {{1.0 - p1, p1, 0.0},
                    {1.0 - p2, 0.0, p2},
                    {1.0, 0.0, 0.0}},
                   2};
    if (scheme == Scheme::TwoArq) spec.transition[1] = {0.0, 1.0 - p2, p2};
    return spec;
}

std::vector<std::string> validate(const ChainSpec& chain) {
    std::vector<std::string> violations;
    const std::size_t n = chain.size();
    if (n == 0) {
        violations.emplace_back("chain has no states");
        return violations;
    }
    if (!chain.state_labels.empty() && chain.state_labels.size() != n) {
        violations.push_back("label count " + std::to_string(chain.state_labels.size()) +
                             " does not match " + std::to_string(n) + " states");
    }
    bool square = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (chain.transition[i].size() != n) {
            violations.push_back("row " + std::to_string(i) + " has " +
                                 std::to_string(chain.transition[i].size()) + " entries, expected " +
                                 std::to_string(n));
            square = false;
        }
    }
    if (!square) return violations;  // entry/reachability checks need a square matrix

    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = chain.transition[i][j];
            if (!(p >= 0.0 && p <= 1.0)) {
                violations.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") = " + fmt(p) + " outside [0,1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTol) {
            violations.push_back("row " + std::to_string(i) + " sums to " + fmt(sum));
        }
    }
    if (chain.target >= n) {
        violations.push_back("target index " + std::to_string(chain.target) +
                             " out of range for " + std::to_string(n) + " states");
        return violations;
    }
    for (std::size_t i : states_not_reaching_target(chain)) {
        violations.push_back("target unreachable from state " + std::to_string(i));
    }
    return violations;
}

std::vector<double> mean_hitting(const ChainSpec& chain) {
    require_valid(chain);
    return solve_hitting_system(chain, std::vector<double>(chain.size(), 1.0));
}

std::vector<double> second_moment_hitting(const ChainSpec& chain,
                                          const std::vector<double>& mean) {
    require_valid(chain);
    const std::size_t n = chain.size();
    if (mean.size() != n) {
        throw Error(Status::InvalidArgument, "mean vector size does not match chain");
    }
    std::vector<double> rhs(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == chain.target) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == chain.target) continue;
            rhs[i] += 2.0 * chain.transition[i][j] * mean[j];
        }
    }
    return solve_hitting_system(chain, rhs);
}

HittingMoments hitting_moments(const ChainSpec& chain) {
    HittingMoments moments;
    moments.mean = mean_hitting(chain);
    moments.second_moment = second_moment_hitting(chain, moments.mean);
    return moments;
}

}  // namespace aoi::chain
