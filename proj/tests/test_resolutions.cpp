#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "doctest.h"
#include "presets.hpp"
#include "resolutions.hpp"

using namespace diocal;

namespace {

std::vector<int> idperm(int k) {
  std::vector<int> v(k);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

std::vector<int> swapped(int k, int a) {
  std::vector<int> v = idperm(k);
  std::swap(v[a - 1], v[a]);
  return v;
}

int total_degree(const BimoduleCollection& E, const DecTree& t) {
  int d = 0;
  for (int v = 0; v < static_cast<int>(t.shape.verts.size()); ++v)
    d += E.degree(t.shape.arity_out(v), t.shape.arity_in(v), t.dec[v]);
  return d;
}

bool same_element(const Element& a, const Element& b) {
  Element diff = a;
  for (const auto& [t, c] : b) accumulate(diff, t, -c);
  return diff.empty();
}

}  // namespace

TEST_CASE("make_resolution: slot layout and degrees") {
  Resolution L = make_resolution("lie1bi", 6);
  CHECK(L.E.has(1, 2));
  CHECK(L.E.has(5, 1));
  CHECK(L.E.has(3, 3));
  CHECK_FALSE(L.E.has(1, 1));
  CHECK_FALSE(L.E.has(3, 4));
  for (auto [m, n] : L.E.support()) {
    CHECK(L.E.slot(m, n).dim() == 1);
    CHECK(L.E.degree(m, n, 0) == 2 - m);
  }

  Resolution T = make_resolution("tf", 6);
  CHECK(T.E.slot(2, 1).dim() == 2);
  CHECK(T.E.slot(2, 4).dim() == 2);
  CHECK(T.E.slot(1, 2).dim() == 1);
  CHECK_FALSE(T.E.has(1, 1));
  CHECK_FALSE(T.E.has(3, 1));
  CHECK(T.E.degree(1, 3, 0) == 1);
  CHECK(T.E.degree(2, 3, 0) == 0);
  CHECK(T.E.degree(2, 3, 1) == 0);

  Resolution B = make_resolution("liebi", 5);
  for (auto [m, n] : B.E.support()) {
    CHECK(m + n <= 5);
    CHECK(B.E.degree(m, n, 0) == 3 - 2 * m);
  }

  CHECK_THROWS_AS(make_resolution("lie1bi", 2), invalid_input);
  CHECK_THROWS_AS(make_resolution("nosuch", 5), invalid_input);
}

TEST_CASE("resolution differentials: empty sums and preconditions") {
  Resolution L = make_resolution("lie1bi", 6);
  Resolution T = make_resolution("tf", 6);
  Resolution B = make_resolution("liebi", 6);

  CHECK(d_lie1bi(L, 1, 2).empty());
  CHECK(d_lie1bi(L, 2, 1).empty());
  CHECK(d_liebi(B, 1, 2).empty());
  CHECK(d_liebi(B, 2, 1).empty());
  CHECK(d_tf(T, 1, 2, 0).empty());

  CHECK_THROWS_AS(d_lie1bi(L, 1, 1), invalid_input);
  CHECK_THROWS_AS(d_lie1bi(L, 9, 1), invalid_input);
  CHECK_THROWS_AS(d_liebi(B, 1, 1), invalid_input);
  CHECK_THROWS_AS(d_tf(T, 2, 1, 0), invalid_input);
  CHECK_THROWS_AS(d_tf(T, 3, 2, 0), invalid_input);
  CHECK_THROWS_AS(d_tf(T, 2, 2, 2), invalid_input);

  // the (2,1) output pair exists internally and is d-closed
  CHECK(T.E.has(2, 1));
  CHECK(resolution_d_gen(T, 2, 1, 0).empty());
  CHECK(resolution_d_gen(T, 2, 1, 1).empty());
}

TEST_CASE("resolution differentials: term counts, pinned") {
  Resolution L = make_resolution("lie1bi", 6);
  Resolution T = make_resolution("tf", 6);
  Resolution B = make_resolution("liebi", 6);

  CHECK(d_lie1bi(L, 2, 2).size() == 5);
  CHECK(d_lie1bi(L, 1, 3).size() == 3);
  CHECK(d_lie1bi(L, 3, 1).size() == 3);
  CHECK(d_lie1bi(L, 2, 3).size() == 16);
  CHECK(d_tf(T, 1, 3, 0).size() == 3);
  CHECK(d_tf(T, 2, 2, 0).size() == 5);
  CHECK(d_tf(T, 2, 2, 1).size() == 5);
  CHECK(d_tf(T, 2, 3, 0).size() == 16);
  CHECK(d_liebi(B, 2, 2).size() == 5);
  CHECK(d_liebi(B, 1, 3).size() == 3);
  CHECK(d_liebi(B, 3, 2).size() == 16);

  // the swap generator's differential is the output transposition of
  // the identity one
  CHECK(same_element(d_tf(T, 2, 2, 1),
                     sigma_act(T.E, d_tf(T, 2, 2, 0), {2, 1}, idperm(2))));

  // liebi drops the shuffle signs but keeps the splitting set; the
  // canonical form may still carry a sign of its own
  CHECK(d_liebi(B, 2, 2).size() == d_lie1bi(L, 2, 2).size());
  for (const auto& [t, c] : d_liebi(B, 2, 2)) CHECK((c == 1 || c == -1));
}

TEST_CASE("resolution differentials: every term has degree one higher") {
  for (const char* id : {"lie1bi", "tf", "liebi"}) {
    Resolution R = make_resolution(id, 6);
    for (auto [m, n] : R.E.support()) {
      for (int g = 0; g < R.E.slot(m, n).dim(); ++g) {
        for (const auto& [t, c] : resolution_d_gen(R, m, n, g))
          CHECK(total_degree(R.E, t) == R.E.degree(m, n, g) + 1);
      }
    }
  }
}

TEST_CASE("resolution differentials: equivariance on all generators") {
  for (const char* id : {"lie1bi", "tf", "liebi"}) {
    Resolution R = make_resolution(id, 6);
    for (auto [m, n] : R.E.support()) {
      SlotSpace cor = free_slot(R.E, m, n, 1);
      for (int g = 0; g < cor.dim(); ++g) {
        Element x{{cor.basis[g], Rat(1)}};
        Element dx = resolution_differential(R, x);
        for (int k = 1; k < m; ++k) {
          Element before = resolution_differential(
              R, sigma_act(R.E, x, swapped(m, k), idperm(n)));
          Element after = sigma_act(R.E, dx, swapped(m, k), idperm(n));
          CHECK(same_element(before, after));
        }
        for (int k = 1; k < n; ++k) {
          Element before = resolution_differential(
              R, sigma_act(R.E, x, idperm(m), swapped(n, k)));
          Element after = sigma_act(R.E, dx, idperm(m), swapped(n, k));
          CHECK(same_element(before, after));
        }
      }
    }
  }
}

TEST_CASE("resolution differentials: d squares to zero") {
  // generator corollas across the full window, via the report
  for (const char* id : {"lie1bi", "tf", "liebi"}) {
    Resolution R = make_resolution(id, 6);
    D2Report rep = resolution_d2_report(R);
    CHECK(rep.all_zero);
    for (const D2Line& l : rep.lines) CHECK(l.ok);
  }
  CHECK(resolution_d2_report(make_resolution("lie1bi", 6)).lines.size() == 14);
  CHECK(resolution_d2_report(make_resolution("tf", 6)).lines.size() == 12);
  CHECK(resolution_d2_report(make_resolution("liebi", 6)).lines.size() == 14);

  // and on every decorated tree with m+n <= 5
  int totals[3] = {0, 0, 0};
  const char* names[3] = {"lie1bi", "tf", "liebi"};
  for (int i = 0; i < 3; ++i) {
    Resolution R = make_resolution(names[i], 6);
    for (int m = 1; m < 5; ++m) {
      for (int n = std::max(1, 3 - m); m + n <= 5; ++n) {
        SlotSpace s = free_slot(R.E, m, n, m + n - 2);
        for (int u = 0; u < s.dim(); ++u) {
          Element dx = resolution_differential(R, {{s.basis[u], Rat(1)}});
          CHECK(resolution_differential(R, dx).empty());
          ++totals[i];
        }
      }
    }
  }
  CHECK(totals[0] == 168);
  CHECK(totals[1] == 445);
  CHECK(totals[2] == 168);
}

TEST_CASE("d_lie1bi: the one-output and one-input edges stay inside") {
  Resolution L = make_resolution("lie1bi", 6);
  for (int n = 2; n <= 5; ++n) {
    for (const auto& [t, c] : d_lie1bi(L, 1, n))
      for (int v = 0; v < 2; ++v) CHECK(t.shape.arity_out(v) == 1);
    for (const auto& [t, c] : d_lie1bi(L, n, 1))
      for (int v = 0; v < 2; ++v) CHECK(t.shape.arity_in(v) == 1);
  }
}

TEST_CASE("resolution_to_presentation_check: top layer matches quotients") {
  struct Pin {
    int m, n, top, coker;
  };
  auto run = [](const char* id, const std::vector<Pin>& pins) {
    CAPTURE(id);
    Resolution R = make_resolution(id, 6);
    TopLayerReport rep = resolution_to_presentation_check(R, 5);
    CHECK(rep.ok);
    REQUIRE(rep.slots.size() == pins.size());
    for (size_t i = 0; i < pins.size(); ++i) {
      const TopLayerSlot& s = rep.slots[i];
      CAPTURE(s.m);
      CAPTURE(s.n);
      CHECK(s.m == pins[i].m);
      CHECK(s.n == pins[i].n);
      CHECK(s.top_dim == pins[i].top);
      CHECK(s.coker_dim == pins[i].coker);
      CHECK(s.quotient_dim == pins[i].coker);
      CHECK(s.ok);
    }
  };
  run("lie1bi", {{1, 2, 1, 1},
                 {1, 3, 3, 2},
                 {1, 4, 15, 6},
                 {2, 1, 1, 1},
                 {2, 2, 5, 4},
                 {2, 3, 33, 18},
                 {3, 1, 3, 2},
                 {3, 2, 33, 18},
                 {4, 1, 15, 6}});
  run("liebi", {{1, 2, 1, 1},
                {1, 3, 3, 2},
                {1, 4, 15, 6},
                {2, 1, 1, 1},
                {2, 2, 5, 4},
                {2, 3, 33, 18},
                {3, 1, 3, 2},
                {3, 2, 33, 18},
                {4, 1, 15, 6}});
  run("tf", {{1, 2, 1, 1},
             {1, 3, 3, 2},
             {1, 4, 15, 6},
             {2, 1, 2, 2},
             {2, 2, 10, 8},
             {2, 3, 66, 36},
             {3, 1, 12, 12},
             {3, 2, 132, 96},
             {4, 1, 120, 120}});

  Resolution R = make_resolution("tf", 5);
  CHECK_THROWS_AS(resolution_to_presentation_check(R, 6), invalid_input);
}
