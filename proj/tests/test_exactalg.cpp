/*
 * test_exactalg.cpp
 *
 * Unit and property tests for the exact linear-algebra kernel.
 */
#include <random>

#include "doctest.h"
#include "exactalg.hpp"

using namespace diocal;

namespace {

SignedMatrix from_rows(const std::vector<Vec>& rows) {
  SignedMatrix m(static_cast<int>(rows.size()),
                 rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (rows[r][c] != 0) m.set(r, c, rows[r][c]);
  return m;
}

std::vector<int> random_perm(int n, std::mt19937& rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i + 1;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("rational parsing round-trips") {
  CHECK(rat_str(rat_parse("3/6")) == "1/2");
  CHECK(rat_str(rat_parse("-4/2")) == "-2");
  CHECK(rat_str(rat_parse("7")) == "7");
  CHECK(rat_parse("0/5") == 0);
  CHECK_THROWS_AS(rat_parse("1/0"), invalid_input);
  CHECK_THROWS_AS(rat_parse("x"), invalid_input);
}

TEST_CASE("graded space shift subtracts the shift amount") {
  GradedSpace v({{"e1", 0}, {"e2", 3}});
  CHECK(v.dim() == 2);
  CHECK(v.index_of("e2") == 1);
  CHECK(v.shifted(2).degree(0) == -2);
  CHECK(v.shifted(2).degree(1) == 1);
  CHECK_THROWS_AS(GradedSpace({{"a", 0}, {"a", 1}}), invalid_input);
}

TEST_CASE("koszul_sign basic values") {
  CHECK(koszul_sign({1, 2, 3}, {5, -1, 2}) == 1);
  CHECK(koszul_sign({2, 1}, {1, 1}) == -1);
  CHECK(koszul_sign({2, 1}, {1, 2}) == 1);
  // cycle (1 2 3) in one-line notation, two odd factors crossing once
  CHECK(koszul_sign({2, 3, 1}, {1, 1, 0}) == -1);
  CHECK_THROWS_AS(koszul_sign({1, 2}, {0}), invalid_input);
  CHECK_THROWS_AS(koszul_sign({1, 1}, {0, 0}), invalid_input);
}

TEST_CASE("koszul_sign is multiplicative under composition") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    auto p = random_perm(n, rng);
    auto q = random_perm(n, rng);
    std::vector<int> degs(n);
    for (auto& d : degs) d = static_cast<int>(rng() % 4) - 2;
    // (p then q) as reorderings: (x . p . q)_k = x_{p[q[k]-1]}
    std::vector<int> pq(n);
    for (int k = 0; k < n; ++k) pq[k] = p[q[k] - 1];
    std::vector<int> degs_after_p(n);
    for (int k = 0; k < n; ++k) degs_after_p[k] = degs[p[k] - 1];
    CHECK(koszul_sign(pq, degs) ==
          koszul_sign(p, degs) * koszul_sign(q, degs_after_p));
  }
}

TEST_CASE("rank_kernel on pinned matrices") {
  SUBCASE("zero 2x2") {
    auto rk = rank_kernel(SignedMatrix(2, 2));
    CHECK(rk.rank == 0);
    CHECK(rk.kernel.size() == 2);
  }
  SUBCASE("identity 3x3") {
    auto rk = rank_kernel(SignedMatrix::identity(3));
    CHECK(rk.rank == 3);
    CHECK(rk.kernel.empty());
  }
  SUBCASE("rank-1 2x2") {
    auto rk = rank_kernel(from_rows({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}));
    CHECK(rk.rank == 1);
    REQUIRE(rk.kernel.size() == 1);
    // kernel spanned by (-2, 1)
    CHECK(rk.kernel[0][0] * Rat(1) == rk.kernel[0][1] * Rat(-2));
    CHECK(rk.kernel[0][1] != 0);
  }
}

TEST_CASE("rank_kernel properties on random matrices") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 60; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 6);
    const int c = 1 + static_cast<int>(rng() % 6);
    SignedMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (rng() % 3 == 0)
          m.set(i, j, Rat(static_cast<int>(rng() % 7) - 3));
    auto rk = rank_kernel(m);
    CHECK(rk.rank + static_cast<int>(rk.kernel.size()) == c);
    CHECK(rank_kernel(m.transpose()).rank == rk.rank);
    for (const auto& k : rk.kernel) {
      Vec image = m.apply(k);
      for (const auto& x : image) CHECK(x == 0);
    }
  }
}

TEST_CASE("annihilator on pinned subspaces") {
  auto pairing = SignedMatrix::identity(2);
  SUBCASE("whole space annihilates to zero") {
    auto ann = annihilator({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}, 2, pairing);
    CHECK(ann.empty());
  }
  SUBCASE("zero subspace annihilates to whole dual") {
    auto ann = annihilator({}, 2, pairing);
    CHECK(ann.size() == 2);
  }
  SUBCASE("diagonal line") {
    auto ann = annihilator({{Rat(1), Rat(1)}}, 2, pairing);
    REQUIRE(ann.size() == 1);
    CHECK(ann[0][0] == -ann[0][1]);
    CHECK(ann[0][0] != 0);
  }
  SUBCASE("degenerate pairing rejected") {
    SignedMatrix degenerate(2, 2);
    degenerate.set(0, 0, Rat(1));
    CHECK_THROWS_AS(annihilator({{Rat(1), Rat(0)}}, 2, degenerate),
                    invalid_input);
  }
}

TEST_CASE("double annihilator returns the original span") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    // random nondegenerate pairing: start from identity, add noise, verify
    SignedMatrix g = SignedMatrix::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng() % 4 == 0) g.add(i, j, Rat(static_cast<int>(rng() % 3) - 1));
    if (rank_kernel(g).rank != n) continue;
    std::vector<Vec> sub;
    const int k = static_cast<int>(rng() % (n + 1));
    for (int v = 0; v < k; ++v) {
      Vec x(n, Rat(0));
      for (int i = 0; i < n; ++i) x[i] = Rat(static_cast<int>(rng() % 5) - 2);
      sub.push_back(std::move(x));
    }
    auto ann = annihilator(sub, n, g);
    EchelonSpan span(n);
    for (const auto& v : sub) span.insert(v);
    CHECK(static_cast<int>(ann.size()) + span.rank() == n);
    // <f, v> pairs f against the SECOND argument, so the double annihilator
    // is computed with the transposed pairing.
    auto back = annihilator(ann, n, g.transpose());
    std::vector<Vec> original(span.rows());
    CHECK(same_span(back, original, n));
  }
}

TEST_CASE("echelon span reduce is canonical and membership is exact") {
  EchelonSpan span(3);
  CHECK(span.insert({Rat(1), Rat(2), Rat(0)}));
  CHECK(span.insert({Rat(0), Rat(1), Rat(1)}));
  CHECK_FALSE(span.insert({Rat(1), Rat(3), Rat(1)}));
  CHECK(span.rank() == 2);
  CHECK(span.contains({Rat(2), Rat(5), Rat(1)}));
  CHECK_FALSE(span.contains({Rat(0), Rat(0), Rat(1)}));
  CHECK(span.free_columns() == std::vector<int>{2});
  Vec r = span.reduce({Rat(5), Rat(11), Rat(1)});
  CHECK(r[0] == 0);
  CHECK(r[1] == 0);
}
