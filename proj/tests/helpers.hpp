#ifndef COUPLING_TESTS_HELPERS_HPP
#define COUPLING_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "coupling/coalescence.hpp"
#include "coupling/matrix.hpp"
#include "coupling/measure.hpp"
#include "coupling/partition.hpp"

namespace coupling::testutil {

inline TransitionMatrix rat_matrix(
    const std::vector<std::vector<std::string>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<Rat> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows)
    for (const auto& cell : row) entries.push_back(parse_rational(cell));
  return TransitionMatrix::rational(n, std::move(entries));
}

inline FunctionMeasure uniform_measure(int n,
                                       const std::vector<std::string>& maps) {
  std::vector<StateFunction> support;
  support.reserve(maps.size());
  for (const auto& m : maps) support.push_back(parse_function(m, n));
  return FunctionMeasure::uniform(n, std::move(support));
}

inline Partition blocks(int n, std::vector<std::vector<int>> one_based) {
  for (auto& blk : one_based)
    for (auto& s : blk) --s;
  return Partition(n, std::move(one_based));
}

// The 4x4 chain whose two-atom couplings mu_f and mu_g separate block
// measures from non-block measures.
inline TransitionMatrix chain_4x4() {
  return rat_matrix({{"1/2", "0", "1/2", "0"},
                     {"0", "1/2", "0", "1/2"},
                     {"0", "1/2", "1/2", "0"},
                     {"1/2", "0", "0", "1/2"}});
}

inline FunctionMeasure mu_f_4x4() {
  return uniform_measure(4, {"(1234)", "(3421)"});
}

inline FunctionMeasure mu_g_4x4() {
  return uniform_measure(4, {"(3434)", "(1221)"});
}

// Four-function coupling whose coalescence classes are random: either
// {1,3}{2,4} or {1,4}{2,3}.
inline FunctionMeasure random_classes_measure() {
  return uniform_measure(4, {"(1212)", "(1221)", "(3434)", "(3443)"});
}

inline TransitionMatrix uniform_chain(int n) {
  std::vector<Rat> entries(static_cast<std::size_t>(n) * n,
                           Rat(1, static_cast<unsigned>(n)));
  return TransitionMatrix::rational(n, std::move(entries));
}

// Power-iteration oracle for the invariant distribution of an aperiodic
// chain; shares no code with the library's linear solver.
inline std::vector<double> power_iteration_pi(const TransitionMatrix& P,
                                              int steps = 2000) {
  const int n = P.n();
  std::vector<double> pi(n, 1.0 / n), next(n);
  for (int step = 0; step < steps; ++step) {
    for (int j = 0; j < n; ++j) {
      double acc = 0;
      for (int i = 0; i < n; ++i) acc += pi[i] * P.value(i, j);
      next[j] = acc;
    }
    pi.swap(next);
  }
  return pi;
}

}  // namespace coupling::testutil

#endif
