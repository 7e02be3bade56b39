#ifndef COUPLING_MEASURE_HPP
#define COUPLING_MEASURE_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coupling/matrix.hpp"
#include "coupling/numeric.hpp"

namespace coupling {

// Total map S -> S, stored 0-based; displayed 1-based as "(1212)" or the
// comma form "(1,2,1,2)".
class StateFunction {
 public:
  StateFunction(int n, std::vector<int> image);

  int n() const { return n_; }
  int operator()(int i) const { return image_[i]; }
  const std::vector<int>& image() const { return image_; }
  bool is_permutation() const;

  auto operator<=>(const StateFunction& other) const {
    return image_ <=> other.image_;
  }
  bool operator==(const StateFunction& other) const = default;

 private:
  int n_;
  std::vector<int> image_;
};

StateFunction parse_function(std::string_view text, int n);
std::string format_function(const StateFunction& f);

// Finitely supported probability measure on F_S.  Weights are exact
// rationals, strictly positive, and sum to 1; the atom list is the support,
// kept sorted lexicographically by image vector.
class FunctionMeasure {
 public:
  FunctionMeasure(int n, std::vector<std::pair<StateFunction, Rat>> atoms);

  static FunctionMeasure point_mass(StateFunction f);
  static FunctionMeasure uniform(int n, std::vector<StateFunction> support);

  int n() const { return n_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::pair<StateFunction, Rat>>& atoms() const {
    return atoms_;
  }
  const StateFunction& function(std::size_t a) const { return atoms_[a].first; }
  const Rat& weight(std::size_t a) const { return atoms_[a].second; }
  Rat min_weight() const;
  std::vector<StateFunction> support() const;

  bool operator==(const FunctionMeasure& other) const = default;

 private:
  int n_;
  std::vector<std::pair<StateFunction, Rat>> atoms_;
};

struct ConsistencyReport {
  bool consistent = false;
  // First (i,j) in row-major order where the coupled mass differs from
  // p_{i,j}, with both values as doubles for display.
  std::optional<std::tuple<int, int, double, double>> first_violation;
  double max_residual = 0.0;
};

ConsistencyReport is_consistent(const FunctionMeasure& mu,
                                const TransitionMatrix& P);

// Product-form grand coupling; throws SupportTooLarge beyond the cap.
FunctionMeasure independence_coupling(const TransitionMatrix& P,
                                      std::size_t support_cap = 1000000);

struct UniquenessResult {
  bool unique = false;
  std::optional<FunctionMeasure> witness;  // set iff multiple couplings exist
};

UniquenessResult uniqueness_of_coupling(const TransitionMatrix& P,
                                        std::size_t support_cap = 1000000);

// p_{i,j} = total weight of atoms mapping i to j; always rational mode.
TransitionMatrix push_forward(const FunctionMeasure& mu);

}  // namespace coupling

#endif
