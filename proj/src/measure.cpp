#include "coupling/measure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "coupling/errors.hpp"

namespace coupling {

StateFunction::StateFunction(int n, std::vector<int> image)
    : n_(n), image_(std::move(image)) {
  if (static_cast<int>(image_.size()) != n_)
    raise(errc::bad_length, "expected " + std::to_string(n_) + " images, got " +
                                std::to_string(image_.size()));
  for (int v : image_)
    if (v < 0 || v >= n_)
      raise(errc::out_of_range_symbol,
            "image " + std::to_string(v + 1) + " outside 1.." + std::to_string(n_));
}

bool StateFunction::is_permutation() const {
  std::vector<char> seen(n_, 0);
  for (int v : image_) {
    if (seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

StateFunction parse_function(std::string_view text, int n) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '(') body.remove_prefix(1);
  if (!body.empty() && body.back() == ')') body.remove_suffix(1);

  std::vector<int> image;
  if (body.find(',') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t stop = body.find(',', pos);
      if (stop == std::string_view::npos) stop = body.size();
      std::string token(body.substr(pos, stop - pos));
      if (token.empty())
        raise(errc::bad_length, "empty entry in function literal");
      for (char c : token)
        if (!std::isdigit(static_cast<unsigned char>(c)))
          raise(errc::out_of_range_symbol,
                "bad symbol '" + token + "' in function literal");
      image.push_back(std::stoi(token) - 1);
      pos = stop + 1;
    }
  } else {
    if (n > 9)
      raise(errc::bad_length,
            "compact function form requires n <= 9; use the comma form");
    for (char c : body) {
      if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0')
        raise(errc::out_of_range_symbol,
              std::string("bad symbol '") + c + "' in function literal");
      image.push_back(c - '1');
    }
  }
  return StateFunction(n, std::move(image));
}

std::string format_function(const StateFunction& f) {
  std::string out = "(";
  for (int i = 0; i < f.n(); ++i) {
    if (f.n() > 9 && i > 0) out += ',';
    out += std::to_string(f(i) + 1);
  }
  out += ')';
  return out;
}

FunctionMeasure::FunctionMeasure(
    int n, std::vector<std::pair<StateFunction, Rat>> atoms)
    : n_(n), atoms_(std::move(atoms)) {
  Rat total = 0;
  for (const auto& [f, w] : atoms_) {
    if (f.n() != n_)
      raise(errc::dimension_mismatch, "atom dimension differs from measure");
    if (w <= 0)
      raise(errc::precondition_failed,
            "atom weights must be strictly positive");
    total += w;
  }
  if (total != 1)
    raise(errc::precondition_failed,
          "atom weights sum to " + format_rational(total) + ", expected 1");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < atoms_.size(); ++i)
    if (atoms_[i].first == atoms_[i + 1].first)
      raise(errc::precondition_failed,
            "duplicate atom " + format_function(atoms_[i].first));
}

FunctionMeasure FunctionMeasure::point_mass(StateFunction f) {
  int n = f.n();
  std::vector<std::pair<StateFunction, Rat>> atoms;
  atoms.emplace_back(std::move(f), Rat(1));
  return FunctionMeasure(n, std::move(atoms));
}

FunctionMeasure FunctionMeasure::uniform(int n,
                                         std::vector<StateFunction> support) {
  if (support.empty())
    raise(errc::precondition_failed, "uniform measure needs a non-empty support");
  Rat w(1, static_cast<unsigned>(support.size()));
  std::vector<std::pair<StateFunction, Rat>> atoms;
  atoms.reserve(support.size());
  for (auto& f : support) atoms.emplace_back(std::move(f), w);
  return FunctionMeasure(n, std::move(atoms));
}

Rat FunctionMeasure::min_weight() const {
  Rat m = atoms_.front().second;
  for (const auto& [f, w] : atoms_) m = std::min(m, w);
  return m;
}

std::vector<StateFunction> FunctionMeasure::support() const {
  std::vector<StateFunction> out;
  out.reserve(atoms_.size());
  for (const auto& [f, w] : atoms_) out.push_back(f);
  return out;
}

ConsistencyReport is_consistent(const FunctionMeasure& mu,
                                const TransitionMatrix& P) {
  if (mu.n() != P.n())
    raise(errc::dimension_mismatch, "measure and matrix dimensions differ");
  const int n = P.n();

  std::vector<Rat> mass(static_cast<std::size_t>(n) * n, Rat(0));
  for (const auto& [f, w] : mu.atoms())
    for (int i = 0; i < n; ++i) mass[i * n + f(i)] += w;

  ConsistencyReport report;
  report.consistent = true;
  const double tol = numeric_policy().stochastic_tol;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool ok;
      double residual;
      if (P.mode() == Mode::rational) {
        ok = mass[i * n + j] == P.rat(i, j);
        residual = ok ? 0.0 : std::abs(to_double(mass[i * n + j] - P.rat(i, j)));
      } else {
        residual = std::abs(to_double(mass[i * n + j]) - P.flt(i, j));
        ok = residual <= tol;
      }
      report.max_residual = std::max(report.max_residual, residual);
      if (!ok && report.consistent) {
        report.consistent = false;
        report.first_violation = {i, j, P.value(i, j),
                                  to_double(mass[i * n + j])};
      } else if (!ok) {
        report.consistent = false;
      }
    }
  return report;
}

namespace {

// Candidate images per state restricted to positive transitions, with the
// exact entry values used as conditional weights.
struct RowSupport {
  std::vector<int> images;
  std::vector<Rat> probs;
};

std::vector<RowSupport> positive_rows(const TransitionMatrix& P) {
  TransitionMatrix Q = P.rationalized();
  std::vector<RowSupport> rows(Q.n());
  for (int i = 0; i < Q.n(); ++i)
    for (int j = 0; j < Q.n(); ++j)
      if (Q.rat(i, j) > 0) {
        rows[i].images.push_back(j);
        rows[i].probs.push_back(Q.rat(i, j));
      }
  return rows;
}

void check_support_cap(const std::vector<RowSupport>& rows,
                       std::size_t support_cap) {
  Int count = 1;
  for (const auto& row : rows) {
    count *= static_cast<unsigned>(row.images.size());
    if (count > support_cap)
      raise(errc::support_too_large,
            "positive-product support exceeds cap of " +
                std::to_string(support_cap));
  }
}

}  // namespace

FunctionMeasure independence_coupling(const TransitionMatrix& P,
                                      std::size_t support_cap) {
  const int n = P.n();
  auto rows = positive_rows(P);
  check_support_cap(rows, support_cap);

  std::vector<std::pair<StateFunction, Rat>> atoms;
  std::vector<int> image(n, 0);
  std::vector<std::size_t> choice(n, 0);
  for (;;) {
    Rat w = 1;
    for (int i = 0; i < n; ++i) {
      image[i] = rows[i].images[choice[i]];
      w *= rows[i].probs[choice[i]];
    }
    atoms.emplace_back(StateFunction(n, image), w);
    int i = n - 1;
    while (i >= 0 && ++choice[i] == rows[i].images.size()) choice[i--] = 0;
    if (i < 0) break;
  }
  return FunctionMeasure(n, std::move(atoms));
}

namespace {

void require_irreducible(const TransitionMatrix& P) {
  if (!is_irreducible(P))
    raise(errc::not_irreducible, "matrix is not irreducible");
}

// Enumerates the free coordinates (all states except `first` and `second`)
// over their positive transitions, appending each completed atom.
void expand_free_coordinates(
    const std::vector<RowSupport>& rows, int first, int second, int r, int t,
    const Rat& branch_weight,
    std::vector<std::pair<StateFunction, Rat>>& atoms) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> free_states;
  for (int i = 0; i < n; ++i)
    if (i != first && i != second) free_states.push_back(i);

  std::vector<int> image(n, 0);
  image[first] = r;
  image[second] = t;
  std::vector<std::size_t> choice(free_states.size(), 0);
  for (;;) {
    Rat w = branch_weight;
    for (std::size_t k = 0; k < free_states.size(); ++k) {
      int i = free_states[k];
      image[i] = rows[i].images[choice[k]];
      w *= rows[i].probs[choice[k]];
    }
    if (w > 0) atoms.emplace_back(StateFunction(n, image), w);
    if (free_states.empty()) break;
    int k = static_cast<int>(free_states.size()) - 1;
    while (k >= 0 && ++choice[k] == rows[free_states[k]].images.size())
      choice[k--] = 0;
    if (k < 0) break;
  }
}

}  // namespace

UniquenessResult uniqueness_of_coupling(const TransitionMatrix& P,
                                        std::size_t support_cap) {
  require_irreducible(P);
  TransitionMatrix Q = P.rationalized();
  const int n = Q.n();

  std::vector<int> fractional_rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (Q.rat(i, j) > 0 && Q.rat(i, j) < 1) {
        fractional_rows.push_back(i);
        break;
      }
  if (fractional_rows.size() <= 1) return {true, std::nullopt};

  // Canonical (r,s): smallest lexicographically over both orderings of the
  // two lowest fractional rows, subject to 0 < p_{second,s} <= p_{first,r} < 1.
  const int a = fractional_rows[0], b = fractional_rows[1];
  int first = -1, second = -1, r = -1, s = -1;
  for (int rr = 0; rr < n && first < 0; ++rr)
    for (int ss = 0; ss < n && first < 0; ++ss)
      for (auto [fa, se] : {std::pair{a, b}, std::pair{b, a}}) {
        const Rat& pr = Q.rat(fa, rr);
        const Rat& ps = Q.rat(se, ss);
        if (pr > 0 && pr < 1 && ps > 0 && ps < 1 && ps <= pr) {
          first = fa;
          second = se;
          r = rr;
          s = ss;
          break;
        }
      }
  if (first < 0)
    throw std::logic_error("no (r,s) pair for the multiplicity witness");

  auto rows = positive_rows(Q);
  check_support_cap(rows, support_cap);

  const Rat p1r = Q.rat(first, r);
  const Rat p2s = Q.rat(second, s);
  std::vector<std::pair<StateFunction, Rat>> atoms;

  // f(first)=r, f(second)=s.
  expand_free_coordinates(rows, first, second, r, s, p2s, atoms);
  // f(first)=r, f(second)!=s.
  Rat stalled = (p1r - p2s) / (1 - p2s);
  if (stalled > 0)
    for (std::size_t k = 0; k < rows[second].images.size(); ++k) {
      int t = rows[second].images[k];
      if (t == s) continue;
      expand_free_coordinates(rows, first, second, r, t,
                              stalled * rows[second].probs[k], atoms);
    }
  // f(first)!=r, f(second)!=s.
  for (std::size_t m = 0; m < rows[first].images.size(); ++m) {
    int u = rows[first].images[m];
    if (u == r) continue;
    for (std::size_t k = 0; k < rows[second].images.size(); ++k) {
      int t = rows[second].images[k];
      if (t == s) continue;
      expand_free_coordinates(
          rows, first, second, u, t,
          rows[first].probs[m] * rows[second].probs[k] / (1 - p2s), atoms);
    }
  }

  FunctionMeasure witness(n, std::move(atoms));
  if (!is_consistent(witness, P).consistent)
    throw std::logic_error("multiplicity witness is not consistent with P");
  if (witness == independence_coupling(P, support_cap))
    throw std::logic_error("multiplicity witness equals the independence coupling");
  return {false, std::move(witness)};
}

TransitionMatrix push_forward(const FunctionMeasure& mu) {
  const int n = mu.n();
  std::vector<Rat> entries(static_cast<std::size_t>(n) * n, Rat(0));
  for (const auto& [f, w] : mu.atoms())
    for (int i = 0; i < n; ++i) entries[i * n + f(i)] += w;
  return TransitionMatrix::rational(n, std::move(entries));
}

}  // namespace coupling
