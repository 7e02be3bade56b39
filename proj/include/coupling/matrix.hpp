#ifndef COUPLING_MATRIX_HPP
#define COUPLING_MATRIX_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "coupling/numeric.hpp"

namespace coupling {

// Scalar representation is a matrix-level tag: a matrix is either all exact
// rationals or all binary doubles, never mixed.
enum class Mode { rational, floating };

// Row-stochastic n x n matrix.  Validation happens at construction; an
// instance always satisfies the row-sum and non-negativity invariants.
class TransitionMatrix {
 public:
  static TransitionMatrix rational(int n, std::vector<Rat> entries);
  static TransitionMatrix floating(int n, std::vector<double> entries);

  int n() const { return n_; }
  Mode mode() const { return mode_; }

  const Rat& rat(int i, int j) const { return rat_[idx(i, j)]; }
  double flt(int i, int j) const { return flt_[idx(i, j)]; }

  // Double view of an entry in either mode (lossy in rational mode).
  double value(int i, int j) const;
  bool positive(int i, int j) const;

  // Exact dyadic conversion of a float matrix followed by exact row
  // renormalization, so the result is rational mode with rows summing to 1.
  // Rational matrices are returned unchanged.
  TransitionMatrix rationalized() const;

  bool operator==(const TransitionMatrix& other) const = default;

 private:
  TransitionMatrix(int n, Mode mode, std::vector<Rat> rat,
                   std::vector<double> flt)
      : n_(n), mode_(mode), rat_(std::move(rat)), flt_(std::move(flt)) {}

  int idx(int i, int j) const { return i * n_ + j; }

  int n_ = 0;
  Mode mode_ = Mode::rational;
  std::vector<Rat> rat_;
  std::vector<double> flt_;
};

// Probability vector on S, same mode convention as TransitionMatrix.
struct Distribution {
  int n = 0;
  Mode mode = Mode::rational;
  std::vector<Rat> rat;
  std::vector<double> flt;

  double value(int i) const {
    return mode == Mode::rational ? to_double(rat[i]) : flt[i];
  }
};

// Period d and the cyclic classes in cyclic order, anchored at the class
// containing state 0.  States are 0-based internally.
struct CyclicStructure {
  int period = 1;
  std::vector<std::vector<int>> classes;
};

// Convex combination of permutation matrices; perm[i] is the image of row i.
struct BvnDecomposition {
  Mode mode = Mode::rational;
  std::vector<std::pair<Rat, std::vector<int>>> terms;
};

bool is_irreducible(const TransitionMatrix& P);

CyclicStructure period_and_cyclic_classes(const TransitionMatrix& P);

Distribution invariant_distribution(const TransitionMatrix& P);

// Remark-style random matrix: iid uniforms on (0,1), rows normalized by
// their sums.  Float mode, bit-reproducible for a fixed seed.
TransitionMatrix sample_random_matrix(int n, std::uint64_t seed);

// Same draw interpreted exactly: the uniforms are dyadic rationals m/2^53
// and the normalization is exact, so the result is rational mode and the
// float sampler above is its double rounding.
TransitionMatrix sample_random_rational_matrix(int n, std::uint64_t seed);

// Greedy Birkhoff-von Neumann extraction with deterministic lowest-index
// matching; at most (n-1)^2 + 1 terms.
BvnDecomposition bvn_decompose(const TransitionMatrix& D);

}  // namespace coupling

#endif
