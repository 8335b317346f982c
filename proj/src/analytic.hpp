#ifndef AOI_ANALYTIC_HPP
#define AOI_ANALYTIC_HPP

#include "types.hpp"

namespace aoi::analytic {

// Moments of one renewal cycle: the inter-update time Z and the product of
// the post-update age tau with Z. All times in slots.
struct SchemeMoments {
    double e_z = 0.0;      // E[Z]
    double e_z2 = 0.0;     // E[Z^2]
    double e_tau_z = 0.0;  // E[tau * Z]
};

struct AoIResult {
    double average_aoi = 0.0;  // slots
    SchemeMoments moments;
};

// Renewal-reward combination: E[tau Z]/E[Z] + E[Z^2]/(2 E[Z]).
double average_from_moments(const SchemeMoments& m);

// One hop, fresh packet every slot: 1/2 + 1/q.
// Moments: E[Z] = 1/q, E[Z^2] = (2-q)/q^2, E[tau Z] = E[Z] (tau is always 1).
AoIResult single_noarq(double q);

// One hop with retransmission: (1/2 + 1/q) + (1/q - 1). The delivered packet
// is as old as the whole cycle, so E[tau Z] = E[Z]^2; the second term is the
// retransmission penalty on top of the no-ARQ baseline.
AoIResult single_arq(double q);

// Two hops, any decode failure discards the packet:
// 3/2 + (1+p1)/(p1 p2) - 1/(1+p1). Delivery age is always 2 slots.
AoIResult two_noarq(const LinkParams& params);

// Two hops, relay retransmits on second-hop failure:
// 1/2 + 1/p1 + 2/p2 - 1/(p1+p2). Delivery age is 1 + X with X the geometric
// second-hop duration, so E[tau Z] = (1 + 1/p2) E[Z].
AoIResult two_arq(const LinkParams& params);

// Dispatch to the scheme's closed form. Single-hop schemes use params.p1 as q.
AoIResult evaluate(Scheme scheme, const LinkParams& params);

// two_arq minus two_noarq, always <= 0: retransmitting at the relay never
// hurts the average age in a two-hop link. Returns the factored form (whose
// sign is exact, and which vanishes identically at p2 = 1) after checking it
// against the plain difference of the two closed forms at 1e-12 relative.
double gap(const LinkParams& params);

}  // namespace aoi::analytic

#endif  // AOI_ANALYTIC_HPP
