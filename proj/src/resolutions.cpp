/*
 * resolutions.cpp
 *
 * The splitting sums are emitted as raw two-vertex trees, lower vertex
 * first, and handed to normalize_raw; all stored-form signs flow from
 * there. Subsets are enumerated by bitmask with members ascending, so
 * every run emits identical elements.
 */
#include "resolutions.hpp"

#include <numeric>

#include "presets.hpp"

namespace diocal {

namespace {

std::vector<int> identity_perm(int k) {
  std::vector<int> v(k);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

/* Members of [1..len] picked by mask, ascending, and the complement. */
std::pair<std::vector<int>, std::vector<int>> mask_split(int mask, int len) {
  std::vector<int> in, out;
  for (int k = 0; k < len; ++k)
    (mask >> k & 1 ? in : out).push_back(k + 1);
  return {in, out};
}

/* Parity of the shuffle sorting the concatenation (a, b) ascending. */
int shuffle_parity(const std::vector<int>& a, const std::vector<int>& b) {
  int inv = 0;
  for (int i : a)
    for (int j : b)
      if (i > j) ++inv;
  return inv % 2;
}

/* Two-vertex tree, lower vertex stored first, edge encoded as 0 in the
 * port lists. */
Element pair_tree(const BimoduleCollection& E, int m, int n,
                  const std::vector<int>& louts, const std::vector<int>& lins,
                  const std::vector<int>& uouts, const std::vector<int>& uins,
                  int lgen, int ugen, const Rat& coeff) {
  Tree t;
  t.m = m;
  t.n = n;
  auto ports = [](const std::vector<int>& xs) {
    std::vector<Port> out;
    for (int x : xs)
      out.push_back(x == 0 ? Port{Port::Edge, 0} : Port{Port::Leg, x});
    return out;
  };
  t.verts.push_back({ports(louts), ports(lins)});
  t.verts.push_back({ports(uouts), ports(uins)});
  t.edges.emplace_back(0, 1);
  return normalize_raw(E, t, {lgen, ugen}, coeff);
}

/* The splitting tree shared by the lie1bi and liebi formulas: lower
 * vertex I1 + edge over J1, upper vertex I2 over edge + J2. */
Element split_tree(const BimoduleCollection& E, int m, int n,
                   const std::vector<int>& i1, const std::vector<int>& i2,
                   const std::vector<int>& j1, const std::vector<int>& j2,
                   const Rat& coeff) {
  std::vector<int> louts = i1, uins = {0};
  louts.push_back(0);
  uins.insert(uins.end(), j2.begin(), j2.end());
  return pair_tree(E, m, n, louts, j1, i2, uins, 0, 0, coeff);
}

Element splitting_sum(const Resolution& R, int m, int n, bool signed_sum) {
  Element out;
  for (int im = 0; im < (1 << m); ++im) {
    auto [i2, i1] = mask_split(im, m);
    if (i2.empty()) continue;
    for (int jm = 0; jm < (1 << n); ++jm) {
      auto [j1, j2] = mask_split(jm, n);
      if (j1.empty()) continue;
      int lo_m = static_cast<int>(i1.size()) + 1;
      int lo_n = static_cast<int>(j1.size());
      int up_m = static_cast<int>(i2.size());
      int up_n = static_cast<int>(j2.size()) + 1;
      if (!R.E.has(lo_m, lo_n) || !R.E.has(up_m, up_n)) continue;
      Rat c(1);
      if (signed_sum &&
          (shuffle_parity(i1, i2) + i1.size() * i2.size()) % 2 != 0)
        c = -1;
      for (const auto& [t, tc] : split_tree(R.E, m, n, i1, i2, j1, j2, c))
        accumulate(out, t, tc);
    }
  }
  return out;
}

Element d_tf_internal(const Resolution& R, int m, int n, int gen) {
  if (m == 2 && n == 1) return {};
  if (m == 2 && gen == 1)
    return sigma_act(R.E, d_tf_internal(R, m, n, 0), {2, 1},
                     identity_perm(n));
  Element out;
  for (int jm = 0; jm < (1 << n); ++jm) {
    auto [j1, j2] = mask_split(jm, n);
    int n1 = static_cast<int>(j1.size());
    int n2 = static_cast<int>(j2.size());
    std::vector<int> uins = {0};
    uins.insert(uins.end(), j2.begin(), j2.end());
    if (m == 1) {
      if (n1 < 2 || n2 < 1) continue;
      if (!R.E.has(1, n1) || !R.E.has(1, n2 + 1)) continue;
      for (const auto& [t, tc] :
           pair_tree(R.E, 1, n, {0}, j1, {1}, uins, 0, 0, Rat(1)))
        accumulate(out, t, tc);
      continue;
    }
    // output pair riding the upper vertex
    if (n1 >= 2 && R.E.has(1, n1) && R.E.has(2, n2 + 1)) {
      for (const auto& [t, tc] :
           pair_tree(R.E, 2, n, {0}, j1, {1, 2}, uins, 0, 0, Rat(1)))
        accumulate(out, t, tc);
    }
    // one output leg left on the lower vertex, in both planar positions
    if (n1 >= 1 && n2 >= 1 && R.E.has(2, n1) && R.E.has(1, n2 + 1)) {
      for (const auto& [t, tc] :
           pair_tree(R.E, 2, n, {1, 0}, j1, {2}, uins, 0, 0, Rat(-1)))
        accumulate(out, t, tc);
      std::vector<int> uins_last = j2;
      uins_last.push_back(0);
      for (const auto& [t, tc] :
           pair_tree(R.E, 2, n, {0, 2}, j1, {1}, uins_last, 0, 0, Rat(-1)))
        accumulate(out, t, tc);
    }
  }
  return out;
}

const Presentation& resolved_presentation(const std::string& id) {
  static const Presentation lie1bi = preset_by_name("lie1bi");
  static const Presentation tf = preset_by_name("tf");
  static const Presentation liebi = preset_by_name("liebi");
  if (id == "lie1bi") return lie1bi;
  if (id == "tf") return tf;
  return liebi;
}

}  // namespace

Resolution make_resolution(const std::string& id, int window) {
  if (window < 3)
    throw invalid_input("make_resolution: window must cover m+n = 3");
  Resolution R;
  R.id = id;
  R.window = window;
  if (id == "lie1bi") {
    for (int m = 1; m < window; ++m)
      for (int n = std::max(1, 3 - m); m + n <= window; ++n)
        add_gen_slot(R.E, m, n, "g", 2 - m, Sym::sign, Sym::trivial);
  } else if (id == "tf") {
    for (int n = 2; 1 + n <= window; ++n)
      add_gen_slot(R.E, 1, n, "f", 1, Sym::trivial, Sym::trivial);
    for (int n = 1; 2 + n <= window; ++n)
      add_gen_slot(R.E, 2, n, "e", 0, Sym::regular, Sym::trivial);
  } else if (id == "liebi") {
    for (int m = 1; m < window; ++m)
      for (int n = std::max(1, 3 - m); m + n <= window; ++n)
        add_gen_slot(R.E, m, n, "g", 3 - 2 * m, Sym::trivial, Sym::trivial);
  } else {
    throw invalid_input("make_resolution: unknown resolution '" + id + "'");
  }
  validate_collection(R.E);
  return R;
}

Element d_lie1bi(const Resolution& R, int m, int n) {
  if (m + n < 3) throw invalid_input("d_lie1bi: need m + n >= 3");
  if (!R.E.has(m, n)) throw invalid_input("d_lie1bi: slot outside the window");
  return splitting_sum(R, m, n, true);
}

Element d_liebi(const Resolution& R, int m, int n) {
  if (m + n < 3) throw invalid_input("d_liebi: need m + n >= 3");
  if (!R.E.has(m, n)) throw invalid_input("d_liebi: slot outside the window");
  return splitting_sum(R, m, n, false);
}

Element d_tf(const Resolution& R, int m, int n, int gen) {
  if (n < 2) throw invalid_input("d_tf: need n >= 2");
  if (m != 1 && m != 2) throw invalid_input("d_tf: generators have m in {1,2}");
  if (gen < 0 || gen >= (m == 2 ? 2 : 1))
    throw invalid_input("d_tf: no such generator");
  if (!R.E.has(m, n)) throw invalid_input("d_tf: slot outside the window");
  return d_tf_internal(R, m, n, gen);
}

Element resolution_d_gen(const Resolution& R, int m, int n, int gen) {
  if (R.id == "tf") return d_tf_internal(R, m, n, gen);
  if (R.id == "lie1bi") return d_lie1bi(R, m, n);
  return d_liebi(R, m, n);
}

Element resolution_differential(const Resolution& R, const Element& x) {
  Element out;
  for (const auto& [t, c] : x) {
    const int V = static_cast<int>(t.shape.verts.size());
    int prefix = 0;
    for (int v = 0; v < V; ++v) {
      int a = t.shape.arity_out(v), b = t.shape.arity_in(v);
      Element dg = resolution_d_gen(R, a, b, t.dec[v]);
      if (!dg.empty()) {
        Rat cc = prefix % 2 != 0 ? -c : c;
        Element scaled;
        for (const auto& [rt, rc] : dg) scaled[rt] = rc * cc;
        for (const auto& [nt, nc] : subst_vertex(R.E, t, v, scaled))
          accumulate(out, nt, nc);
      }
      prefix += R.E.degree(a, b, t.dec[v]);
    }
  }
  return out;
}

D2Report resolution_d2_report(const Resolution& R) {
  D2Report rep;
  rep.id = R.id;
  rep.window = R.window;
  rep.all_zero = true;
  for (auto [m, n] : R.E.support()) {
    SlotSpace corollas = free_slot(R.E, m, n, 1);
    for (int g = 0; g < corollas.dim(); ++g) {
      Element d1 = resolution_d_gen(R, m, n, g);
      Element d2 = resolution_differential(R, d1);
      D2Line line;
      line.m = m;
      line.n = n;
      line.gen = g;
      line.terms = d1.size();
      line.ok = d2.empty();
      rep.all_zero = rep.all_zero && line.ok;
      rep.lines.push_back(line);
    }
  }
  return rep;
}

TopLayerReport resolution_to_presentation_check(const Resolution& R,
                                                int window) {
  if (window > R.window)
    throw invalid_input(
        "resolution_to_presentation_check: window exceeds the resolution's");
  const Presentation& p = resolved_presentation(R.id);
  TopLayerReport rep;
  rep.id = R.id;
  rep.window = window;
  rep.ok = true;
  for (int m = 1; m < window; ++m) {
    for (int n = std::max(1, 3 - m); m + n <= window; ++n) {
      const int vmax = m + n - 2;
      SlotSpace space = free_slot(R.E, m, n, vmax);
      std::vector<int> top, sub;
      for (int u = 0; u < space.dim(); ++u) {
        int verts = static_cast<int>(space.basis[u].shape.verts.size());
        if (verts == vmax) top.push_back(u);
        if (verts == vmax - 1) sub.push_back(u);
      }
      SignedMatrix M(static_cast<int>(top.size()),
                     static_cast<int>(sub.size()));
      for (int c = 0; c < static_cast<int>(sub.size()); ++c) {
        Element dx = resolution_differential(
            R, Element{{space.basis[sub[c]], Rat(1)}});
        Vec v = to_vec(space, dx);
        for (int r = 0; r < static_cast<int>(top.size()); ++r)
          if (v[top[r]] != 0) M.set(r, c, v[top[r]]);
      }
      TopLayerSlot s;
      s.m = m;
      s.n = n;
      s.top_dim = static_cast<int>(top.size());
      s.coker_dim = s.top_dim - rank_kernel(M).rank;
      s.quotient_dim = quotient_slot(p, m, n, m + n - 2).dim();
      s.ok = s.coker_dim == s.quotient_dim;
      rep.ok = rep.ok && s.ok;
      rep.slots.push_back(s);
    }
  }
  return rep;
}

}  // namespace diocal
