#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "coupling/errors.hpp"
#include "coupling/matrix.hpp"
#include "coupling/rng.hpp"
#include "helpers.hpp"

using namespace coupling;
using namespace coupling::testutil;

TEST_CASE("validation accepts stochastic matrices") {
  auto half = rat_matrix({{"1/2", "1/2"}, {"1/2", "1/2"}});
  CHECK(half.n() == 2);
  CHECK(half.rat(0, 1) == Rat(1, 2));
  CHECK(chain_4x4().n() == 4);
}

TEST_CASE("validation reports the offending row") {
  std::vector<double> bad{0.6, 0.3, 0.5, 0.5};
  try {
    TransitionMatrix::floating(2, bad);
    FAIL("expected RowSumNotOne");
  } catch (const domain_error& e) {
    CHECK(e.code() == errc::row_sum_not_one);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }

  CHECK_THROWS_AS(rat_matrix({{"1/2", "1/3"}, {"1/2", "1/2"}}), domain_error);
  CHECK_THROWS_AS(rat_matrix({{"3/2", "-1/2"}, {"1/2", "1/2"}}), domain_error);
}

TEST_CASE("irreducibility is strong connectivity") {
  CHECK(is_irreducible(rat_matrix({{"0", "1"}, {"1", "0"}})));
  CHECK_FALSE(is_irreducible(rat_matrix({{"1", "0"}, {"0", "1"}})));
  CHECK(is_irreducible(chain_4x4()));
  // 1 -> 2 only, 2 -> 2: reducible.
  CHECK_FALSE(is_irreducible(rat_matrix({{"0", "1"}, {"0", "1"}})));
}

TEST_CASE("period and cyclic classes") {
  auto two_cycle = period_and_cyclic_classes(rat_matrix({{"0", "1"}, {"1", "0"}}));
  CHECK(two_cycle.period == 2);
  CHECK(two_cycle.classes == std::vector<std::vector<int>>{{0}, {1}});

  CHECK(period_and_cyclic_classes(chain_4x4()).period == 1);

  auto four_cycle = period_and_cyclic_classes(rat_matrix({{"0", "1", "0", "0"},
                                                          {"0", "0", "1", "0"},
                                                          {"0", "0", "0", "1"},
                                                          {"1", "0", "0", "0"}}));
  CHECK(four_cycle.period == 4);
  CHECK(four_cycle.classes ==
        std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});

  CHECK_THROWS_AS(period_and_cyclic_classes(rat_matrix({{"1", "0"}, {"0", "1"}})),
                  domain_error);
}

TEST_CASE("cyclic classes advance by one step") {
  auto P = rat_matrix({{"0", "1/2", "0", "1/2"},
                       {"1/2", "0", "1/2", "0"},
                       {"0", "1/2", "0", "1/2"},
                       {"1/2", "0", "1/2", "0"}});
  auto cyc = period_and_cyclic_classes(P);
  REQUIRE(cyc.period == 2);
  for (int r = 0; r < cyc.period; ++r)
    for (int i : cyc.classes[r])
      for (int j = 0; j < P.n(); ++j)
        if (P.positive(i, j)) {
          int next = cyc.classes[(r + 1) % cyc.period == 0 ? 0 : r + 1][0];
          (void)next;
          bool in_next = false;
          for (int v : cyc.classes[(r + 1) % cyc.period])
            if (v == j) in_next = true;
          CHECK(in_next);
        }
}

TEST_CASE("invariant distribution, exact and oracle-checked") {
  auto uniform = invariant_distribution(rat_matrix({{"1/2", "1/2"}, {"1/2", "1/2"}}));
  CHECK(uniform.rat == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

  for (int n : {2, 3, 5}) {
    auto pi = invariant_distribution(uniform_chain(n));
    for (const auto& w : pi.rat) CHECK(w == Rat(1, static_cast<unsigned>(n)));
  }

  // Balance equations by hand: pi_1 = pi_2/3, pi_1 + pi_2 = 1.
  auto P = rat_matrix({{"0", "1"}, {"1/3", "2/3"}});
  auto pi = invariant_distribution(P);
  CHECK(pi.rat == std::vector<Rat>{Rat(1, 4), Rat(3, 4)});

  auto oracle = power_iteration_pi(P);
  CHECK(std::abs(to_double(pi.rat[0]) - oracle[0]) < 1e-12);
  CHECK(std::abs(to_double(pi.rat[1]) - oracle[1]) < 1e-12);

  CHECK_THROWS_AS(invariant_distribution(rat_matrix({{"1", "0"}, {"0", "1"}})),
                  domain_error);
}

TEST_CASE("invariant distribution satisfies pi P = pi on random input") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto P = sample_random_rational_matrix(4, seed);
    auto pi = invariant_distribution(P);
    for (int j = 0; j < 4; ++j) {
      Rat balance = 0;
      for (int i = 0; i < 4; ++i) balance += pi.rat[i] * P.rat(i, j);
      CHECK(balance == pi.rat[j]);
    }
  }
}

TEST_CASE("random matrix sampling is reproducible and lands in (0,1)") {
  auto A = sample_random_matrix(3, 7);
  auto B = sample_random_matrix(3, 7);
  CHECK(A == B);
  CHECK(A != sample_random_matrix(3, 8));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto M = sample_random_matrix(2, seed);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(M.flt(i, j) > 0.0);
        CHECK(M.flt(i, j) < 1.0);
      }
  }

  for (std::uint64_t seed = 0; seed < 200; ++seed)
    CHECK(is_irreducible(sample_random_matrix(5, seed)));
}

TEST_CASE("rational sampler is the exact twin of the float sampler") {
  auto F = sample_random_matrix(3, 11);
  auto R = sample_random_rational_matrix(3, 11);
  for (int i = 0; i < 3; ++i) {
    Rat row = 0;
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(to_double(R.rat(i, j)) - F.flt(i, j)) < 1e-15);
      row += R.rat(i, j);
    }
    CHECK(row == 1);
  }
}

TEST_CASE("bvn decomposition of the symmetric 2x2 chain") {
  auto dec = bvn_decompose(rat_matrix({{"1/2", "1/2"}, {"1/2", "1/2"}}));
  REQUIRE(dec.terms.size() == 2);
  std::set<std::vector<int>> perms{dec.terms[0].second, dec.terms[1].second};
  CHECK(perms == std::set<std::vector<int>>{{0, 1}, {1, 0}});
  CHECK(dec.terms[0].first == Rat(1, 2));
  CHECK(dec.terms[1].first == Rat(1, 2));
}

TEST_CASE("bvn splits the alpha mixture into identity and interchange") {
  Rat alpha(2, 7);
  auto L = rat_matrix({{"2/7", "5/7"}, {"5/7", "2/7"}});
  auto dec = bvn_decompose(L);
  REQUIRE(dec.terms.size() == 2);
  for (const auto& [w, perm] : dec.terms) {
    if (perm == std::vector<int>{0, 1})
      CHECK(w == alpha);
    else
      CHECK(w == 1 - alpha);
  }
}

namespace {

void check_reconstruction(const TransitionMatrix& D,
                          const BvnDecomposition& dec) {
  const int n = D.n();
  std::vector<Rat> sum(static_cast<std::size_t>(n) * n, Rat(0));
  for (const auto& [w, perm] : dec.terms) {
    CHECK(w > 0);
    for (int i = 0; i < n; ++i) sum[i * n + perm[i]] += w;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) CHECK(sum[i * n + j] == D.rat(i, j));
}

}  // namespace

TEST_CASE("bvn reconstructs the 3x3 uniform matrix") {
  auto D = uniform_chain(3);
  auto dec = bvn_decompose(D);
  CHECK(dec.terms.size() == 3);
  for (const auto& [w, perm] : dec.terms) CHECK(w == Rat(1, 3));
  check_reconstruction(D, dec);
}

TEST_CASE("bvn rejects non-doubly-stochastic input") {
  CHECK_THROWS_AS(bvn_decompose(rat_matrix({{"1", "0"}, {"1", "0"}})),
                  domain_error);
}

TEST_CASE("bvn reconstructs random permutation mixtures within the term bound") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5
    // Random convex mixture of <= n permutations with rational weights.
    std::vector<Rat> entries(static_cast<std::size_t>(n) * n, Rat(0));
    int terms = 1 + static_cast<int>(rng.next_u64() % n);
    std::vector<Rat> weights;
    Rat total = 0;
    for (int t = 0; t < terms; ++t) {
      Rat w(1 + static_cast<unsigned>(rng.next_u64() % 10), 1);
      weights.push_back(w);
      total += w;
    }
    for (int t = 0; t < terms; ++t) {
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
      for (int i = 0; i < n; ++i)
        entries[i * n + perm[i]] += weights[t] / total;
    }
    auto D = TransitionMatrix::rational(n, entries);
    auto dec = bvn_decompose(D);
    CHECK(static_cast<int>(dec.terms.size()) <= (n - 1) * (n - 1) + 1);
    check_reconstruction(D, dec);
  }
}
