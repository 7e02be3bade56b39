#ifndef COUPLING_COALESCENCE_HPP
#define COUPLING_COALESCENCE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "coupling/matrix.hpp"
#include "coupling/measure.hpp"
#include "coupling/partition.hpp"

namespace coupling {

struct CoalescenceReport {
  int k = 0;
  std::vector<Partition> limit_partitions;  // sorted, each with exactly k blocks
  bool deterministic = false;               // exactly one limit partition
  std::size_t reachable_census = 0;         // multichain states explored
};

// Exact coalescence analysis by BFS over the multichain on S^n started at
// the identity vector, applying every support function coordinatewise.
//
// Correctness rests on three facts: the distinct-entry count of the
// multichain state never increases; the coalescence number k(mu) is a.s.
// constant; and at any reachable state realizing the minimum count, every
// support function must act injectively on the realized values (otherwise a
// state with a smaller count would be reachable), so the equality pattern is
// frozen there.  Hence k equals the reachable minimum, and the achievable
// limit partitions are exactly the equality patterns of the reachable states
// attaining it: each such state is reached with positive probability and
// keeps its pattern forever, while a.s.-constancy of k rules out absorption
// at any larger count.
CoalescenceReport exact_coalescence(const FunctionMeasure& mu,
                                    std::size_t state_budget = 10000000);

// Whether the diagonal is reachable from (i,j) in the pair chain on S x S.
bool pairwise_coalescence_possible(const FunctionMeasure& mu, int i, int j);

struct ForwardSimResult {
  Partition partition;
  // Absent when the run hit the horizon before the distinct count reached
  // the known minimum (DidNotStabilize).
  std::optional<long> steps_to_stability;
};

// Composes iid draws forward and reports the equality partition at the
// first time the distinct count reaches k(mu); `known_k` skips the internal
// exact_coalescence call when the caller already has it.
ForwardSimResult simulate_forward(const FunctionMeasure& mu,
                                  std::uint64_t seed, long horizon,
                                  std::optional<int> known_k = std::nullopt);

struct CftpResult {
  std::optional<int> sample;  // absent when the run DidNotCoalesce
  long steps = 0;
};

// Coupling from the past: composes F_1 o F_2 o ... o F_t (new draws
// innermost) until the composition is constant.
CftpResult simulate_cftp(const FunctionMeasure& mu, std::uint64_t seed,
                         long horizon);

struct KmaxBounds {
  int lower = 1;  // the period d; d <= k for every achievable k
  int upper = 1;
};

// Upper bound on max K(P) from the invariant distribution (pi_s > 1/m
// forces k < m) combined with the off-diagonal column-minimum refinement,
// clamped below at the period.  A bound only, never a claim of attainment.
KmaxBounds kmax_upper_bounds(const TransitionMatrix& P);

// 50 * n / (min atom weight); the default simulation budget.
long default_horizon(const FunctionMeasure& mu);

}  // namespace coupling

#endif
