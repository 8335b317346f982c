#include "types.hpp"

#include <cmath>

namespace aoi {

std::string_view scheme_token(Scheme s) {
    switch (s) {
        case Scheme::SingleNoArq: return "single-noarq";
        case Scheme::SingleArq: return "single-arq";
        case Scheme::TwoNoArq: return "two-noarq";
        case Scheme::TwoArq: return "two-arq";
    }
    throw Error(Status::Internal, "unknown scheme value");
}

Scheme parse_scheme(std::string_view token) {
    for (Scheme s : kAllSchemes) {
        if (token == scheme_token(s)) return s;
    }
    throw Error(Status::InvalidArgument,
                "unknown scheme '" + std::string(token) +
                    "' (expected single-noarq, single-arq, two-noarq or two-arq)");
}

void require_probability(double p, std::string_view name) {
    if (!std::isfinite(p) || p <= 0.0 || p > 1.0) {
        throw Error(Status::InvalidArgument,
                    std::string(name) + " must lie in (0, 1], got " + std::to_string(p));
    }
}

void require_params(Scheme scheme, const LinkParams& params) {
    if (is_single_hop(scheme)) {
        require_probability(params.p1, "q");
        return;
    }
    require_probability(params.p1, "p1");
    require_probability(params.p2, "p2");
}

}  // namespace aoi
