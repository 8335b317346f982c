#ifndef AOI_TYPES_HPP
#define AOI_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aoi {

inline constexpr const char* kVersion = "0.1.0";

// The only RNG used anywhere in this project. Recorded in all experiment
// outputs so a run can be reproduced from its provenance line alone.
inline constexpr const char* kRngName = "mt19937_64";

enum class Scheme {
    SingleNoArq = 0,  // one hop, fresh packet every slot
    SingleArq = 1,    // one hop, retransmit until delivered
    TwoNoArq = 2,     // two hops, any failure restarts with a fresh packet
    TwoArq = 3,       // two hops, relay retransmits on second-hop failure
};

inline constexpr Scheme kAllSchemes[] = {Scheme::SingleNoArq, Scheme::SingleArq,
                                         Scheme::TwoNoArq, Scheme::TwoArq};

inline bool is_single_hop(Scheme s) {
    return s == Scheme::SingleNoArq || s == Scheme::SingleArq;
}

// Canonical CLI/CSV token for a scheme.
std::string_view scheme_token(Scheme s);
// Inverse of scheme_token; throws Error(InvalidArgument) on unknown tokens.
Scheme parse_scheme(std::string_view token);

enum class Status {
    Ok = 0,
    InvalidArgument = 1,
    UnreachableTarget = 2,  // absorbing state cannot be reached; moments diverge
    NoCycles = 3,           // simulation completed no renewal cycle
    IoError = 4,
    Internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}
    Status status() const noexcept { return status_; }

private:
    Status status_;
};

// Per-hop decode success probabilities. For single-hop schemes p1 plays the
// role of q and p2 is ignored.
struct LinkParams {
    double p1 = 0.0;
    double p2 = 0.0;
};

// Throws Error(InvalidArgument) unless 0 < p <= 1. A zero probability is
// rejected outright: the success state becomes unreachable and every
// first-passage moment diverges.
void require_probability(double p, std::string_view name);

// Validates p1 (and p2 for two-hop schemes).
void require_params(Scheme scheme, const LinkParams& params);

}  // namespace aoi

#endif  // AOI_TYPES_HPP
