#include "analytic.hpp"

#include <cmath>
#include <string>

namespace aoi::analytic {

double average_from_moments(const SchemeMoments& m) {
    if (!(m.e_z >= 1.0)) {
        throw Error(Status::InvalidArgument,
                    "e_z must be at least 1 slot, got " + std::to_string(m.e_z));
    }
    const double slack = 1e-9 * std::max(1.0, m.e_z * m.e_z);
    if (m.e_z2 < m.e_z * m.e_z - slack || m.e_tau_z < m.e_z - slack) {
        throw Error(Status::InvalidArgument, "moment invariants violated");
    }
    return m.e_tau_z / m.e_z + m.e_z2 / (2.0 * m.e_z);
}

AoIResult single_noarq(double q) {
    require_probability(q, "q");
    AoIResult r;
    r.moments.e_z = 1.0 / q;
    r.moments.e_z2 = (2.0 - q) / (q * q);
    r.moments.e_tau_z = r.moments.e_z;
    r.average_aoi = 0.5 + 1.0 / q;
    return r;
}

AoIResult single_arq(double q) {
    require_probability(q, "q");
    AoIResult r;
    r.moments.e_z = 1.0 / q;
    r.moments.e_z2 = (2.0 - q) / (q * q);
    r.moments.e_tau_z = r.moments.e_z * r.moments.e_z;
    r.average_aoi = (0.5 + 1.0 / q) + (1.0 / q - 1.0);
    return r;
}

AoIResult two_noarq(const LinkParams& params) {
    require_params(Scheme::TwoNoArq, params);
    const double p1 = params.p1;
    const double p2 = params.p2;
    AoIResult r;
    r.moments.e_z = (1.0 + p1) / (p1 * p2);
    r.moments.e_z2 =
        2.0 * (1.0 + p1) * (1.0 + p1) / ((p1 * p2) * (p1 * p2)) - 1.0 / p2 - 3.0 / (p1 * p2);
    r.moments.e_tau_z = 2.0 * r.moments.e_z;
    r.average_aoi = 1.5 + (1.0 + p1) / (p1 * p2) - 1.0 / (1.0 + p1);
    return r;
}

AoIResult two_arq(const LinkParams& params) {
    require_params(Scheme::TwoArq, params);
    const double p1 = params.p1;
    const double p2 = params.p2;
    AoIResult r;
    r.moments.e_z = 1.0 / p1 + 1.0 / p2;
    r.moments.e_z2 = 2.0 / (p1 * p1) + 2.0 / (p2 * p2) + 2.0 / (p1 * p2) - (1.0 / p1 + 1.0 / p2);
    r.moments.e_tau_z = (1.0 + 1.0 / p2) * r.moments.e_z;
    r.average_aoi = 0.5 + 1.0 / p1 + 2.0 / p2 - 1.0 / (p1 + p2);
    return r;
}

AoIResult evaluate(Scheme scheme, const LinkParams& params) {
    switch (scheme) {
        case Scheme::SingleNoArq: return single_noarq(params.p1);
        case Scheme::SingleArq: return single_arq(params.p1);
        case Scheme::TwoNoArq: return two_noarq(params);
        case Scheme::TwoArq: return two_arq(params);
    }
    throw Error(Status::Internal, "unknown scheme value");
}

double gap(const LinkParams& params) {
    require_params(Scheme::TwoArq, params);
    const double p1 = params.p1;
    const double p2 = params.p2;
    // Factored form: the (1 - p2) factor makes the zero at p2 = 1 exact, and
    // the braced numerator is a difference of non-positives, so the sign is
    // exact as well.
    const double numerator = (1.0 - p2) * ((p1 * p1 - 1.0) * (p1 + p2) - p1 * p2);
    const double factored = numerator / ((p1 + p2) * (p1 * p2) * (1.0 + p1));
    const double subtracted = two_arq(params).average_aoi - two_noarq(params).average_aoi;
    const double scale = std::max({1.0, std::abs(factored), std::abs(subtracted)});
    if (std::abs(factored - subtracted) > 1e-12 * scale) {
        throw Error(Status::Internal, "gap cross-check failed: factored and subtracted "
                                      "forms disagree beyond 1e-12");
    }
    return factored;
}

}  // namespace aoi::analytic
