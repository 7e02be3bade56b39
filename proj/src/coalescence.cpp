#include "coupling/coalescence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_set>

#include "coupling/errors.hpp"
#include "coupling/rng.hpp"

namespace coupling {

namespace {

using State = std::vector<int>;

int distinct_count(const State& z, std::vector<char>& scratch) {
  std::fill(scratch.begin(), scratch.end(), 0);
  int count = 0;
  for (int v : z)
    if (!scratch[v]) {
      scratch[v] = 1;
      ++count;
    }
  return count;
}

// Relabels by first occurrence, e.g. (3,4,3,4) -> (0,1,0,1); two states have
// the same equality pattern iff their relabelings match.
State equality_pattern(const State& z) {
  State pattern(z.size());
  std::vector<int> label(z.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (label[z[i]] < 0) label[z[i]] = next++;
    pattern[i] = label[z[i]];
  }
  return pattern;
}

// Packs a state into 4-bit lanes; valid for n <= 16.
std::uint64_t pack_state(const State& z) {
  std::uint64_t key = 0;
  for (int v : z) key = (key << 4) | static_cast<std::uint64_t>(v);
  return key;
}

std::string state_bytes(const State& z) {
  std::string key(z.size(), '\0');
  for (std::size_t i = 0; i < z.size(); ++i) key[i] = static_cast<char>(z[i]);
  return key;
}

struct ReachResult {
  int min_count = 0;
  std::set<State> min_patterns;
  std::size_t census = 0;
};

template <class KeySet, class Encode>
ReachResult explore_multichain(const std::vector<StateFunction>& support,
                               const State& start, std::size_t state_budget,
                               Encode encode) {
  const int n = static_cast<int>(start.size());
  KeySet visited;
  std::deque<State> queue;
  std::vector<char> scratch(n, 0);

  ReachResult result;
  result.min_count = distinct_count(start, scratch);
  result.min_patterns.insert(equality_pattern(start));

  visited.insert(encode(start));
  queue.push_back(start);
  result.census = 1;

  State next(n);
  while (!queue.empty()) {
    State z = std::move(queue.front());
    queue.pop_front();
    for (const StateFunction& f : support) {
      for (int i = 0; i < n; ++i) next[i] = f(z[i]);
      if (!visited.insert(encode(next)).second) continue;
      if (++result.census > state_budget)
        raise(errc::state_budget_exceeded,
              "multichain exploration exceeded budget of " +
                  std::to_string(state_budget));
      int count = distinct_count(next, scratch);
      if (count < result.min_count) {
        result.min_count = count;
        result.min_patterns.clear();
      }
      if (count == result.min_count)
        result.min_patterns.insert(equality_pattern(next));
      queue.push_back(next);
    }
  }
  return result;
}

ReachResult explore(const std::vector<StateFunction>& support,
                    const State& start, std::size_t state_budget) {
  if (start.size() <= 16)
    return explore_multichain<std::unordered_set<std::uint64_t>>(
        support, start, state_budget, pack_state);
  return explore_multichain<std::unordered_set<std::string>>(
      support, start, state_budget, state_bytes);
}

}  // namespace

CoalescenceReport exact_coalescence(const FunctionMeasure& mu,
                                    std::size_t state_budget) {
  if (!is_irreducible(push_forward(mu)))
    raise(errc::not_irreducible, "push-forward of the measure is not irreducible");
  const int n = mu.n();
  State start(n);
  for (int i = 0; i < n; ++i) start[i] = i;

  ReachResult reach = explore(mu.support(), start, state_budget);

  CoalescenceReport report;
  report.k = reach.min_count;
  for (const State& pattern : reach.min_patterns)
    report.limit_partitions.push_back(Partition::from_equality_pattern(pattern));
  std::sort(report.limit_partitions.begin(), report.limit_partitions.end());
  report.deterministic = report.limit_partitions.size() == 1;
  report.reachable_census = reach.census;
  return report;
}

bool pairwise_coalescence_possible(const FunctionMeasure& mu, int i, int j) {
  const int n = mu.n();
  if (i < 0 || i >= n || j < 0 || j >= n)
    raise(errc::out_of_range_symbol, "pair states outside 1.." + std::to_string(n));
  if (i == j) return true;

  auto support = mu.support();
  std::unordered_set<int> visited;
  std::deque<std::pair<int, int>> queue;
  visited.insert(i * n + j);
  queue.emplace_back(i, j);
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    for (const StateFunction& f : support) {
      int fa = f(a), fb = f(b);
      if (fa == fb) return true;
      if (visited.insert(fa * n + fb).second) queue.emplace_back(fa, fb);
    }
  }
  return false;
}

ForwardSimResult simulate_forward(const FunctionMeasure& mu,
                                  std::uint64_t seed, long horizon,
                                  std::optional<int> known_k) {
  if (horizon < 1)
    raise(errc::precondition_failed, "horizon must be >= 1");
  const int n = mu.n();
  const int k = known_k ? *known_k : exact_coalescence(mu).k;

  std::vector<Rat> weights;
  weights.reserve(mu.size());
  for (const auto& [f, w] : mu.atoms()) weights.push_back(w);

  Rng rng(seed);
  State z(n);
  for (int i = 0; i < n; ++i) z[i] = i;
  std::vector<char> scratch(n, 0);

  if (distinct_count(z, scratch) == k)
    return {Partition::from_equality_pattern(z), 0};

  State next(n);
  for (long t = 1; t <= horizon; ++t) {
    const StateFunction& f = mu.function(rng.pick_index(weights));
    for (int i = 0; i < n; ++i) next[i] = f(z[i]);
    z.swap(next);
    if (distinct_count(z, scratch) == k)
      return {Partition::from_equality_pattern(z), t};
  }
  return {Partition::from_equality_pattern(z), std::nullopt};
}

CftpResult simulate_cftp(const FunctionMeasure& mu, std::uint64_t seed,
                         long horizon) {
  if (horizon < 1)
    raise(errc::precondition_failed, "horizon must be >= 1");
  const int n = mu.n();

  std::vector<Rat> weights;
  weights.reserve(mu.size());
  for (const auto& [f, w] : mu.atoms()) weights.push_back(w);

  Rng rng(seed);
  State composed(n);  // F_1 o F_2 o ... o F_t
  for (int i = 0; i < n; ++i) composed[i] = i;

  State next(n);
  for (long t = 1; t <= horizon; ++t) {
    const StateFunction& f = mu.function(rng.pick_index(weights));
    for (int i = 0; i < n; ++i) next[i] = composed[f(i)];
    composed.swap(next);
    bool constant = true;
    for (int i = 1; i < n && constant; ++i)
      constant = composed[i] == composed[0];
    if (constant) return {composed[0], t};
  }
  return {std::nullopt, horizon};
}

KmaxBounds kmax_upper_bounds(const TransitionMatrix& P) {
  const int n = P.n();
  Distribution pi = invariant_distribution(P);

  auto pi_rat = [&](int s) {
    return P.mode() == Mode::rational ? pi.rat[s]
                                      : rational_from_double(pi.flt[s]);
  };
  auto entry = [&](int i, int j) {
    return P.mode() == Mode::rational ? P.rat(i, j)
                                      : rational_from_double(P.flt(i, j));
  };

  Int upper = n;  // k_max <= n always
  for (int s = 0; s < n; ++s) {
    Rat p = pi_rat(s);
    if (p > 0) upper = std::min(upper, rat_floor(1 / p));

    if (n >= 2) {
      Rat column_min = 1;
      for (int i = 0; i < n; ++i)
        if (i != s) column_min = std::min(column_min, entry(i, s));
      if (column_min > 0)
        upper = std::min(upper, rat_floor(1 / column_min) + 1);
    }
  }

  KmaxBounds bounds;
  bounds.lower = period_and_cyclic_classes(P).period;
  bounds.upper = std::max(static_cast<int>(upper), bounds.lower);
  return bounds;
}

long default_horizon(const FunctionMeasure& mu) {
  double inv_min = 1.0 / to_double(mu.min_weight());
  double h = 50.0 * mu.n() * inv_min;
  if (h > 1e9) return 1000000000L;
  return std::max(1L, static_cast<long>(std::ceil(h)));
}

}  // namespace coupling
