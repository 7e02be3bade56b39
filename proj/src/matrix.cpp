#include "coupling/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "coupling/errors.hpp"
#include "coupling/rng.hpp"

namespace coupling {

namespace {

// Error positions are reported 1-based, matching all external I/O.
std::string at(int i) { return std::to_string(i + 1); }

std::vector<std::vector<int>> positive_adjacency(const TransitionMatrix& P) {
  std::vector<std::vector<int>> adj(P.n());
  for (int i = 0; i < P.n(); ++i)
    for (int j = 0; j < P.n(); ++j)
      if (P.positive(i, j)) adj[i].push_back(j);
  return adj;
}

bool reaches_all(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  std::size_t found = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++found;
        stack.push_back(v);
      }
  }
  return found == adj.size();
}

void require_irreducible(const TransitionMatrix& P) {
  if (!is_irreducible(P))
    raise(errc::not_irreducible, "matrix is not irreducible");
}

}  // namespace

TransitionMatrix TransitionMatrix::rational(int n, std::vector<Rat> entries) {
  if (n < 1) raise(errc::precondition_failed, "state count must be >= 1");
  if (static_cast<int>(entries.size()) != n * n)
    raise(errc::dimension_mismatch, "expected a square n x n array");
  for (int i = 0; i < n; ++i) {
    Rat sum = 0;
    for (int j = 0; j < n; ++j) {
      const Rat& e = entries[i * n + j];
      if (e < 0)
        raise(errc::negative_entry,
              "negative entry at (" + at(i) + "," + at(j) + ")");
      sum += e;
    }
    if (sum != 1)
      raise(errc::row_sum_not_one,
            "row " + at(i) + " sums to " + format_rational(sum));
  }
  return TransitionMatrix(n, Mode::rational, std::move(entries), {});
}

TransitionMatrix TransitionMatrix::floating(int n, std::vector<double> entries) {
  if (n < 1) raise(errc::precondition_failed, "state count must be >= 1");
  if (static_cast<int>(entries.size()) != n * n)
    raise(errc::dimension_mismatch, "expected a square n x n array");
  const double tol = numeric_policy().stochastic_tol;
  for (int i = 0; i < n; ++i) {
    double sum = 0;
    for (int j = 0; j < n; ++j) {
      double e = entries[i * n + j];
      if (!(e >= 0))
        raise(errc::negative_entry,
              "negative entry at (" + at(i) + "," + at(j) + ")");
      sum += e;
    }
    if (std::abs(sum - 1.0) > tol)
      raise(errc::row_sum_not_one,
            "row " + at(i) + " sums to " + std::to_string(sum));
  }
  return TransitionMatrix(n, Mode::floating, {}, std::move(entries));
}

double TransitionMatrix::value(int i, int j) const {
  return mode_ == Mode::rational ? to_double(rat_[idx(i, j)]) : flt_[idx(i, j)];
}

bool TransitionMatrix::positive(int i, int j) const {
  return mode_ == Mode::rational ? rat_[idx(i, j)] > 0 : flt_[idx(i, j)] > 0;
}

TransitionMatrix TransitionMatrix::rationalized() const {
  if (mode_ == Mode::rational) return *this;
  std::vector<Rat> entries(n_ * n_);
  for (int i = 0; i < n_; ++i) {
    Rat sum = 0;
    for (int j = 0; j < n_; ++j) {
      entries[idx(i, j)] = rational_from_double(flt_[idx(i, j)]);
      sum += entries[idx(i, j)];
    }
    for (int j = 0; j < n_; ++j) entries[idx(i, j)] /= sum;
  }
  return rational(n_, std::move(entries));
}

bool is_irreducible(const TransitionMatrix& P) {
  auto adj = positive_adjacency(P);
  if (!reaches_all(adj, 0)) return false;
  std::vector<std::vector<int>> rev(P.n());
  for (int i = 0; i < P.n(); ++i)
    for (int j : adj[i]) rev[j].push_back(i);
  return reaches_all(rev, 0);
}

CyclicStructure period_and_cyclic_classes(const TransitionMatrix& P) {
  require_irreducible(P);
  const int n = P.n();
  auto adj = positive_adjacency(P);

  // BFS levels from state 0; the period is the gcd of level[u]+1-level[v]
  // over all edges (u,v).
  std::vector<int> level(n, -1);
  std::vector<int> queue{0};
  level[0] = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int u = queue[q];
    for (int v : adj[u])
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
  }
  long long g = 0;
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) g = std::gcd(g, static_cast<long long>(level[u]) + 1 - level[v]);
  int d = static_cast<int>(g == 0 ? 1 : g);

  CyclicStructure out;
  out.period = d;
  out.classes.assign(d, {});
  for (int i = 0; i < n; ++i) out.classes[level[i] % d].push_back(i);
  for (auto& cls : out.classes) std::sort(cls.begin(), cls.end());
  return out;
}

namespace {

Distribution invariant_rational(const TransitionMatrix& P) {
  const int n = P.n();
  // Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1, Rat(0)));
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = P.rat(j, i);
    a[i][i] -= 1;
  }
  for (int j = 0; j < n; ++j) a[n - 1][j] = 1;
  a[n - 1][n] = 1;

  for (int col = 0, row = 0; col < n && row < n; ++col) {
    int pivot = -1;
    for (int r = row; r < n; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[row], a[pivot]);
    Rat lead = a[row][col];
    for (int c = col; c <= n; ++c) a[row][c] /= lead;
    for (int r = 0; r < n; ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rat factor = a[r][col];
      for (int c = col; c <= n; ++c) a[r][c] -= factor * a[row][c];
    }
    ++row;
  }

  Distribution pi;
  pi.n = n;
  pi.mode = Mode::rational;
  pi.rat.resize(n);
  for (int i = 0; i < n; ++i) pi.rat[i] = a[i][n];

  Rat total = 0;
  for (int j = 0; j < n; ++j) {
    Rat balance = 0;
    for (int i = 0; i < n; ++i) balance += pi.rat[i] * P.rat(i, j);
    if (balance != pi.rat[j])
      raise(errc::not_irreducible, "invariant solve failed; matrix not irreducible?");
    total += pi.rat[j];
  }
  if (total != 1)
    raise(errc::not_irreducible, "invariant solve failed; matrix not irreducible?");
  return pi;
}

Distribution invariant_floating(const TransitionMatrix& P) {
  const int n = P.n();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = P.flt(j, i);
    a[i][i] -= 1.0;
  }
  for (int j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    if (a[col][col] == 0) continue;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double factor = a[r][col] / a[col][col];
      if (factor == 0) continue;
      for (int c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
    }
  }

  Distribution pi;
  pi.n = n;
  pi.mode = Mode::floating;
  pi.flt.resize(n);
  for (int i = 0; i < n; ++i) pi.flt[i] = a[i][n] / a[i][i];

  const double tol = numeric_policy().residual_tol;
  for (int j = 0; j < n; ++j) {
    double balance = 0;
    for (int i = 0; i < n; ++i) balance += pi.flt[i] * P.flt(i, j);
    if (std::abs(balance - pi.flt[j]) > tol)
      raise(errc::not_irreducible,
            "invariant solve residual above tolerance");
  }
  return pi;
}

}  // namespace

Distribution invariant_distribution(const TransitionMatrix& P) {
  require_irreducible(P);
  return P.mode() == Mode::rational ? invariant_rational(P)
                                    : invariant_floating(P);
}

namespace {

std::vector<std::uint64_t> q_matrix_bits(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(n) * n);
  for (auto& b : bits) b = rng.next_unit_bits();
  return bits;
}

}  // namespace

TransitionMatrix sample_random_matrix(int n, std::uint64_t seed) {
  if (n < 1) raise(errc::precondition_failed, "state count must be >= 1");
  auto bits = q_matrix_bits(n, seed);
  std::vector<double> entries(bits.size());
  for (int i = 0; i < n; ++i) {
    double row_sum = 0;
    for (int j = 0; j < n; ++j) row_sum += Rng::unit_from_bits(bits[i * n + j]);
    for (int j = 0; j < n; ++j)
      entries[i * n + j] = Rng::unit_from_bits(bits[i * n + j]) / row_sum;
  }
  return TransitionMatrix::floating(n, std::move(entries));
}

TransitionMatrix sample_random_rational_matrix(int n, std::uint64_t seed) {
  if (n < 1) raise(errc::precondition_failed, "state count must be >= 1");
  auto bits = q_matrix_bits(n, seed);
  std::vector<Rat> entries(bits.size());
  for (int i = 0; i < n; ++i) {
    Rat row_sum = 0;
    for (int j = 0; j < n; ++j) row_sum += Rng::exact_unit_from_bits(bits[i * n + j]);
    for (int j = 0; j < n; ++j)
      entries[i * n + j] = Rng::exact_unit_from_bits(bits[i * n + j]) / row_sum;
  }
  return TransitionMatrix::rational(n, std::move(entries));
}

namespace {

// Kuhn augmenting search over columns in ascending order; rows are seeded in
// ascending order, so the matching is deterministic.
bool try_augment(const std::vector<std::vector<char>>& allowed, int row,
                 std::vector<char>& visited, std::vector<int>& col_match) {
  const int n = static_cast<int>(allowed.size());
  for (int col = 0; col < n; ++col) {
    if (!allowed[row][col] || visited[col]) continue;
    visited[col] = 1;
    if (col_match[col] < 0 ||
        try_augment(allowed, col_match[col], visited, col_match)) {
      col_match[col] = row;
      return true;
    }
  }
  return false;
}

std::vector<int> perfect_matching(const std::vector<std::vector<char>>& allowed) {
  const int n = static_cast<int>(allowed.size());
  std::vector<int> col_match(n, -1);
  for (int row = 0; row < n; ++row) {
    std::vector<char> visited(n, 0);
    if (!try_augment(allowed, row, visited, col_match)) return {};
  }
  std::vector<int> perm(n, -1);
  for (int col = 0; col < n; ++col) perm[col_match[col]] = col;
  return perm;
}

}  // namespace

BvnDecomposition bvn_decompose(const TransitionMatrix& D) {
  const int n = D.n();
  const double tol = numeric_policy().stochastic_tol;

  // Column sums must match the row-sum invariant already guaranteed.
  for (int j = 0; j < n; ++j) {
    if (D.mode() == Mode::rational) {
      Rat sum = 0;
      for (int i = 0; i < n; ++i) sum += D.rat(i, j);
      if (sum != 1)
        raise(errc::not_doubly_stochastic,
              "column " + at(j) + " sums to " + format_rational(sum));
    } else {
      double sum = 0;
      for (int i = 0; i < n; ++i) sum += D.flt(i, j);
      if (std::abs(sum - 1.0) > tol)
        raise(errc::not_doubly_stochastic,
              "column " + at(j) + " sums to " + std::to_string(sum));
    }
  }

  // Work on an exact copy; float inputs are truncated at the tolerance.
  std::vector<Rat> rem(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rem[i * n + j] = D.mode() == Mode::rational
                           ? D.rat(i, j)
                           : rational_from_double(D.flt(i, j));
  const Rat cutoff =
      D.mode() == Mode::rational ? Rat(0) : rational_from_double(tol);

  BvnDecomposition out;
  out.mode = D.mode();
  for (;;) {
    std::vector<std::vector<char>> allowed(n, std::vector<char>(n, 0));
    bool any = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rem[i * n + j] > cutoff) {
          allowed[i][j] = 1;
          any = true;
        }
    if (!any) break;
    std::vector<int> perm = perfect_matching(allowed);
    if (perm.empty())
      raise(errc::not_doubly_stochastic,
            "no perfect matching on the positive support");
    Rat weight = rem[0 * n + perm[0]];
    for (int i = 1; i < n; ++i) weight = std::min(weight, rem[i * n + perm[i]]);
    for (int i = 0; i < n; ++i) rem[i * n + perm[i]] -= weight;
    out.terms.emplace_back(weight, std::move(perm));
  }

  if (out.mode == Mode::floating) {
    // Tiny residue below the cutoff was discarded; rescale so the weights
    // sum to exactly 1.
    Rat total = 0;
    for (auto& [w, perm] : out.terms) total += w;
    for (auto& [w, perm] : out.terms) w /= total;
  }
  return out;
}

}  // namespace coupling
