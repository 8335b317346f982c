#ifndef AOI_SIM_HPP
#define AOI_SIM_HPP

#include <cstdint>
#include <vector>

#include "types.hpp"

namespace aoi::sim {

// Slot-level simulation of one status-update link.
//
// Accounting conventions, fixed across the whole project:
//  * A packet is generated at the start of its first transmission slot and
//    delivered at the end of its final second-hop (or only-hop) slot. The
//    delivery age tau is measured at that instant, which gives tau = 2 for
//    two-hop no-ARQ, tau = 1 + X for two-hop ARQ (X = second-hop slots of
//    the delivering packet), tau = 1 for single-hop no-ARQ and tau = z for
//    single-hop ARQ.
//  * Every delivery closes a cycle. The first cycle spans simulation start
//    to the first delivery; it has no predecessor, so it only seeds tau_prev
//    and never enters an average. The slots after the last delivery are the
//    discarded incomplete tail.
//  * The average AoI is the continuous sawtooth average (sum of per-cycle
//    areas over total cycle time), not a per-slot sample mean; end-of-slot
//    sampling would understate the sawtooth average by exactly 1/2.

struct SimConfig {
    Scheme scheme = Scheme::TwoNoArq;
    LinkParams params;                    // p1 acts as q for single-hop schemes
    std::uint64_t horizon = 1'000'000;    // total slots simulated
    std::uint64_t seed = 1;
    std::uint64_t warmup_cycles = 100;    // extra cycles dropped beyond the seed cycle
};

// One inter-update interval.
struct RenewalCycle {
    std::uint64_t z = 0;                 // cycle length (slots)
    std::uint64_t tau = 0;               // AoI at the delivery closing this cycle
    std::uint64_t first_hop_slots = 0;   // slots spent in state 1 (the whole cycle for single-hop)
    std::uint64_t second_hop_slots = 0;  // slots spent in state 2
    double area = 0.0;                   // tau_prev * z + z^2 / 2; 0 for the seed cycle
};

struct SimResult {
    std::vector<RenewalCycle> cycles;  // one per delivery, in order
    std::uint64_t tail_slots = 0;      // slots after the last delivery
    SimConfig config;
};

// Runs the protocol for config.horizon slots. Deterministic: the cycle list
// is a pure function of the config. Throws Error(NoCycles) if the horizon
// ends before the first delivery.
SimResult simulate(const SimConfig& config);

struct SimStats {
    double average_aoi = 0.0;       // sum of areas / sum of z over retained cycles
    std::uint64_t cycle_count = 0;  // retained cycles
    double e_z = 0.0;               // empirical moments over retained cycles
    double e_z2 = 0.0;
    double e_tau_z = 0.0;           // mean of tau_prev * z, the E[tau Z] estimator
    double std_error = 0.0;         // batch-means standard error of average_aoi
};

// Renewal-reward estimate over cycles[1 + warmup_cycles ..]. Cycle 0 seeds
// tau_prev; `warmup_cycles` more are discarded after it. The standard error
// comes from 32 equal batches of consecutive cycles (count/2 batches when
// fewer than 64 cycles remain; 0 when fewer than two batches are possible).
// Throws Error(NoCycles) when nothing is left after the warmup.
SimStats stats(const std::vector<RenewalCycle>& cycles, std::uint64_t warmup_cycles);

// Convenience: simulate + stats with the config's warmup.
SimStats run(const SimConfig& config);

// Instantaneous AoI sampled at the end of each of the first max_slots slots,
// driven by the same RNG stream as simulate (identical seeds see identical
// deliveries). The age before the first delivery counts up from 0 at the
// start of the run.
std::vector<std::uint64_t> instantaneous_trace(const SimConfig& config,
                                               std::uint64_t max_slots);

// Per-point seed for sweep grids: mixes the base seed with indices so any
// grid point can be re-run in isolation. splitmix64 over the sequence.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t scheme_index,
                          std::uint64_t i, std::uint64_t j, std::uint64_t replication);

}  // namespace aoi::sim

#endif  // AOI_SIM_HPP
