#include "sim.hpp"

#include <cmath>
#include <random>

namespace aoi::sim {

namespace {

void require_config(const SimConfig& config) {
    require_params(config.scheme, config.params);
    if (config.horizon < 1) {
        throw Error(Status::InvalidArgument, "horizon must be at least 1 slot");
    }
}

// Uniform double in [0, 1) from the raw 64-bit stream. std::bernoulli_distribution
// is implementation-defined; this mapping keeps runs bit-identical across
// platforms since the mt19937_64 sequence itself is pinned by the standard.
class SlotRng {
public:
    explicit SlotRng(std::uint64_t seed) : engine_(seed) {}
    bool bernoulli(double p) { return uniform() < p; }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 engine_;
};

// The per-slot protocol state machine shared by simulate and
// instantaneous_trace. on_slot_end(slot, delivered, tau, first_hop_slots,
// second_hop_slots) fires at the end of every slot; on a delivery slot the
// hop counters describe the cycle that just closed and tau its delivery age.
template <typename OnSlotEnd>
void drive(const SimConfig& config, OnSlotEnd&& on_slot_end) {
    SlotRng rng(config.seed);
    const Scheme scheme = config.scheme;
    const bool single = is_single_hop(scheme);
    const double p1 = config.params.p1;
    const double p2 = config.params.p2;

    bool in_second_hop = false;
    std::uint64_t first_hop_slots = 0;
    std::uint64_t second_hop_slots = 0;

    for (std::uint64_t slot = 1; slot <= config.horizon; ++slot) {
        bool delivered = false;
        std::uint64_t tau = 0;
        if (single) {
            ++first_hop_slots;
            if (rng.bernoulli(p1)) {
                delivered = true;
                tau = scheme == Scheme::SingleArq ? first_hop_slots : 1;
            }
        } else if (!in_second_hop) {
            ++first_hop_slots;
            if (rng.bernoulli(p1)) in_second_hop = true;
        } else {
            ++second_hop_slots;
            if (rng.bernoulli(p2)) {
                delivered = true;
                // All second-hop slots of an ARQ cycle belong to the delivering
                // packet; without ARQ the delivering packet held exactly one.
                tau = scheme == Scheme::TwoArq ? 1 + second_hop_slots : 2;
                in_second_hop = false;
            } else if (scheme == Scheme::TwoNoArq) {
                in_second_hop = false;  // drop the packet, restart at hop 1
            }
        }
        on_slot_end(slot, delivered, tau, first_hop_slots, second_hop_slots);
        if (delivered) first_hop_slots = second_hop_slots = 0;
    }
}

}  // namespace

SimResult simulate(const SimConfig& config) {
    require_config(config);
    SimResult result;
    result.config = config;
    std::uint64_t last_delivery_slot = 0;
    drive(config, [&](std::uint64_t slot, bool delivered, std::uint64_t tau,
                      std::uint64_t first_hop, std::uint64_t second_hop) {
        if (!delivered) return;
        RenewalCycle cycle;
        cycle.z = slot - last_delivery_slot;
        cycle.tau = tau;
        cycle.first_hop_slots = first_hop;
        cycle.second_hop_slots = second_hop;
        if (!result.cycles.empty()) {
            const double z = static_cast<double>(cycle.z);
            cycle.area = static_cast<double>(result.cycles.back().tau) * z + 0.5 * z * z;
        }
        result.cycles.push_back(cycle);
        last_delivery_slot = slot;
    });
    if (result.cycles.empty()) {
        throw Error(Status::NoCycles, "no completed cycles within the horizon");
    }
    result.tail_slots = config.horizon - last_delivery_slot;
    return result;
}

SimStats stats(const std::vector<RenewalCycle>& cycles, std::uint64_t warmup_cycles) {
    // Cycle 0 has no predecessor and only seeds tau_prev.
    const std::uint64_t first = 1 + warmup_cycles;
    if (cycles.size() <= first) {
        throw Error(Status::NoCycles, "no cycles left after warmup");
    }
    const std::uint64_t count = cycles.size() - first;

    SimStats out;
    out.cycle_count = count;
    double sum_z = 0.0, sum_z2 = 0.0, sum_tau_z = 0.0, sum_area = 0.0;
    for (std::uint64_t i = first; i < cycles.size(); ++i) {
        const double z = static_cast<double>(cycles[i].z);
        const double tau_prev = static_cast<double>(cycles[i - 1].tau);
        sum_z += z;
        sum_z2 += z * z;
        sum_tau_z += tau_prev * z;
        sum_area += tau_prev * z + 0.5 * z * z;
    }
    out.average_aoi = sum_area / sum_z;
    out.e_z = sum_z / static_cast<double>(count);
    out.e_z2 = sum_z2 / static_cast<double>(count);
    out.e_tau_z = sum_tau_z / static_cast<double>(count);

    const std::uint64_t b = count >= 64 ? 32 : count / 2;
    if (b >= 2) {
        const std::uint64_t base = count / b;
        const std::uint64_t extra = count % b;
        std::vector<double> ratios;
        ratios.reserve(b);
        std::uint64_t index = first;
        for (std::uint64_t batch = 0; batch < b; ++batch) {
            const std::uint64_t len = base + (batch < extra ? 1 : 0);
            double bz = 0.0, barea = 0.0;
            for (std::uint64_t k = 0; k < len; ++k, ++index) {
                const double z = static_cast<double>(cycles[index].z);
                bz += z;
                barea += static_cast<double>(cycles[index - 1].tau) * z + 0.5 * z * z;
            }
            ratios.push_back(barea / bz);
        }
        double mean = 0.0;
        for (double r : ratios) mean += r;
        mean /= static_cast<double>(b);
        double var = 0.0;
        for (double r : ratios) var += (r - mean) * (r - mean);
        var /= static_cast<double>(b - 1);
        out.std_error = std::sqrt(var / static_cast<double>(b));
    }
    return out;
}

SimStats run(const SimConfig& config) {
    return stats(simulate(config).cycles, config.warmup_cycles);
}

std::vector<std::uint64_t> instantaneous_trace(const SimConfig& config,
                                               std::uint64_t max_slots) {
    require_config(config);
    if (max_slots < 1) {
        throw Error(Status::InvalidArgument, "max_slots must be at least 1");
    }
    SimConfig bounded = config;
    bounded.horizon = max_slots;
    std::vector<std::uint64_t> trace;
    trace.reserve(max_slots);
    std::uint64_t age = 0;
    drive(bounded, [&](std::uint64_t, bool delivered, std::uint64_t tau,
                       std::uint64_t, std::uint64_t) {
        age = delivered ? tau : age + 1;
        trace.push_back(age);
    });
    return trace;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t scheme_index,
                          std::uint64_t i, std::uint64_t j, std::uint64_t replication) {
    // splitmix64 steps, folding one term per value mixed in.
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    std::uint64_t s = mix(base);
    s = mix(s ^ (scheme_index + 1));
    s = mix(s ^ (i + 1));
    s = mix(s ^ (j + 1));
    s = mix(s ^ (replication + 1));
    return s;
}

}  // namespace aoi::sim
