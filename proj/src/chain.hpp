#ifndef AOI_CHAIN_HPP
#define AOI_CHAIN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "types.hpp"

namespace aoi::chain {

// A finite Markov chain with a designated success state. The protocol chains
// built here are 3-state (two-hop) or 2-state (single-hop), but every solver
// below accepts an arbitrary finite chain so the module doubles as a generic
// first-passage toolkit.
struct ChainSpec {
    std::vector<std::string> state_labels;
    std::vector<std::vector<double>> transition;  // row-stochastic, square
    std::size_t target = 0;                       // success / renewal state

    std::size_t size() const { return transition.size(); }
};

// Protocol chain for the given scheme. Two-hop schemes yield the 3-state
// chain over {1, 2, s}; they differ only in the second row: without ARQ a
// second-hop failure returns to state 1 (fresh packet), with ARQ the system
// remains in state 2 (relay retransmission). Single-hop schemes share the
// 2-state chain over {1, s} (ARQ changes the delivery age, not the chain).
// Rejects probabilities outside (0, 1].
ChainSpec build_chain(Scheme scheme, const LinkParams& params);

// Diagnostic check of the ChainSpec invariants: square matrix, entries in
// [0, 1], rows summing to 1 within 1e-12, valid target index, and the target
// reachable from every state. Returns one message per violation; empty means
// the chain is valid. Never throws.
std::vector<std::string> validate(const ChainSpec& chain);

// Expected first-passage time to the target from every state, in slots.
// Solves m_i = 1 + sum_{j != target} t_ij * m_j by dense Gaussian
// elimination with partial pivoting; m[target] = 0. The residual of the
// solved system is checked to be below 1e-10.
// Throws Error(InvalidArgument) on an invalid chain and
// Error(UnreachableTarget) when the system is singular.
std::vector<double> mean_hitting(const ChainSpec& chain);

// Second moment of the first-passage time, in slots^2. `mean` must be the
// output of mean_hitting on the same chain. Solves
// n_i = 1 + sum_{j != target} t_ij * (n_j + 2 m_j); n[target] = 0.
std::vector<double> second_moment_hitting(const ChainSpec& chain,
                                          const std::vector<double>& mean);

struct HittingMoments {
    std::vector<double> mean;           // slots
    std::vector<double> second_moment;  // slots^2
};

// mean_hitting and second_moment_hitting in one call.
HittingMoments hitting_moments(const ChainSpec& chain);

}  // namespace aoi::chain

#endif  // AOI_CHAIN_HPP
