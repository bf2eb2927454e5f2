/*
 * presets.cpp
 *
 * Relation vectors are written down as explicit two-vertex planar trees
 * (upper vertex, lower vertex, one edge) and normalized; the quadratic
 * slot data below is the single source of truth for the stock algebras.
 */
#include "presets.hpp"

#include <numeric>

namespace diocal {

namespace {

/*
 * Two-vertex raw tree: the lower vertex's output feeds the edge (port
 * entry 0), every other entry k > 0 is leg k. Vertex 0 is the upper one.
 */
Element two_vertex(const BimoduleCollection& E, int m, int n,
                   const std::vector<int>& uouts, const std::vector<int>& uins,
                   const std::vector<int>& louts, const std::vector<int>& lins,
                   int ugen, int lgen, const Rat& coeff) {
  Tree t;
  t.m = m;
  t.n = n;
  auto ports = [](const std::vector<int>& xs) {
    std::vector<Port> out;
    for (int x : xs)
      out.push_back(x == 0 ? Port{Port::Edge, 0} : Port{Port::Leg, x});
    return out;
  };
  t.verts.push_back({ports(uouts), ports(uins)});
  t.verts.push_back({ports(louts), ports(lins)});
  t.edges.emplace_back(1, 0);
  return normalize_raw(E, t, {ugen, lgen}, coeff);
}

/* Jacobi sum for the (1,2) generator: all three cyclic patterns with +. */
Element jacobi(const BimoduleCollection& E, int br) {
  Element t1 = two_vertex(E, 1, 3, {1}, {0, 3}, {0}, {1, 2}, br, br, Rat(1));
  Element r = t1;
  r = add(r, sigma_act(E, t1, {1}, {3, 1, 2}));
  r = add(r, sigma_act(E, t1, {1}, {2, 3, 1}));
  return r;
}

/* Mirror Jacobi sum for the (2,1) generator. */
Element cojacobi(const BimoduleCollection& E, int co) {
  Element u1 = two_vertex(E, 3, 1, {1, 2}, {0}, {0, 3}, {1}, co, co, Rat(1));
  Element r = u1;
  r = add(r, sigma_act(E, u1, {3, 1, 2}, {1}));
  r = add(r, sigma_act(E, u1, {2, 3, 1}, {1}));
  return r;
}

}  // namespace

std::vector<Element> orbit_close(const BimoduleCollection& E, int m, int n,
                                 const std::vector<Element>& rels) {
  SlotSpace amb = free_slot(E, m, n, 2);
  EchelonSpan span(amb.dim());
  std::vector<Element> work = rels;
  while (!work.empty()) {
    Element x = std::move(work.back());
    work.pop_back();
    if (x.empty() || !span.insert(to_vec(amb, x))) continue;
    auto transpose_at = [&](int k, bool out_side) {
      std::vector<int> so(m), si(n);
      std::iota(so.begin(), so.end(), 1);
      std::iota(si.begin(), si.end(), 1);
      std::swap((out_side ? so : si)[k - 1], (out_side ? so : si)[k]);
      work.push_back(sigma_act(E, x, so, si));
    };
    for (int k = 1; k < m; ++k) transpose_at(k, true);
    for (int k = 1; k < n; ++k) transpose_at(k, false);
  }
  std::vector<Element> out;
  for (const Vec& row : span.rows()) out.push_back(from_vec(amb, row));
  return out;
}

Presentation preset_lie() {
  Presentation p;
  p.name = "lie";
  add_gen_slot(p.E, 1, 2, "br", 0, Sym::trivial, Sym::sign);
  p.relations[{1, 3}] = orbit_close(p.E, 1, 3, {jacobi(p.E, 0)});
  return p;
}

Presentation preset_lie1bi() {
  Presentation p;
  p.name = "lie1bi";
  add_gen_slot(p.E, 1, 2, "br", 1, Sym::trivial, Sym::trivial);
  add_gen_slot(p.E, 2, 1, "co", 0, Sym::sign, Sym::trivial);
  p.relations[{1, 3}] = orbit_close(p.E, 1, 3, {jacobi(p.E, 0)});
  p.relations[{3, 1}] = orbit_close(p.E, 3, 1, {cojacobi(p.E, 0)});
  // co(br(x,y)) minus its derivation expansion, odd-bracket form
  Element r = two_vertex(p.E, 2, 2, {1, 2}, {0}, {0}, {1, 2}, 0, 0, Rat(1));
  r = add(r, two_vertex(p.E, 2, 2, {2}, {0, 2}, {1, 0}, {1}, 0, 0, Rat(-1)));
  r = add(r, two_vertex(p.E, 2, 2, {1}, {0, 2}, {2, 0}, {1}, 0, 0, Rat(1)));
  r = add(r, two_vertex(p.E, 2, 2, {2}, {0, 1}, {1, 0}, {2}, 0, 0, Rat(-1)));
  r = add(r, two_vertex(p.E, 2, 2, {1}, {0, 1}, {2, 0}, {2}, 0, 0, Rat(1)));
  p.relations[{2, 2}] = orbit_close(p.E, 2, 2, {r});
  return p;
}

Presentation preset_liebi() {
  Presentation p;
  p.name = "liebi";
  add_gen_slot(p.E, 1, 2, "br", 0, Sym::trivial, Sym::sign);
  add_gen_slot(p.E, 2, 1, "co", 0, Sym::sign, Sym::trivial);
  p.relations[{1, 3}] = orbit_close(p.E, 1, 3, {jacobi(p.E, 0)});
  p.relations[{3, 1}] = orbit_close(p.E, 3, 1, {cojacobi(p.E, 0)});
  // co(br(x,y)) minus the even-bracket adjoint-action expansion
  Element r = two_vertex(p.E, 2, 2, {1, 2}, {0}, {0}, {1, 2}, 0, 0, Rat(1));
  r = add(r, two_vertex(p.E, 2, 2, {1}, {1, 0}, {0, 2}, {2}, 0, 0, Rat(-1)));
  r = add(r, two_vertex(p.E, 2, 2, {2}, {1, 0}, {1, 0}, {2}, 0, 0, Rat(-1)));
  r = add(r, two_vertex(p.E, 2, 2, {1}, {2, 0}, {0, 2}, {1}, 0, 0, Rat(1)));
  r = add(r, two_vertex(p.E, 2, 2, {2}, {2, 0}, {1, 0}, {1}, 0, 0, Rat(1)));
  p.relations[{2, 2}] = orbit_close(p.E, 2, 2, {r});
  return p;
}

namespace {

Presentation tf_like(const std::string& name, Sym out_sym) {
  Presentation p;
  p.name = name;
  add_gen_slot(p.E, 1, 2, "br", 1, Sym::trivial, Sym::trivial);
  add_gen_slot(p.E, 2, 1, "e", 0, out_sym, Sym::trivial);
  p.relations[{1, 3}] = orbit_close(p.E, 1, 3, {jacobi(p.E, 0)});
  Element r = two_vertex(p.E, 2, 2, {1, 2}, {0}, {0}, {1, 2}, 0, 0, Rat(1));
  r = add(r, two_vertex(p.E, 2, 2, {2}, {0, 1}, {1, 0}, {2}, 0, 0, Rat(-1)));
  r = add(r, two_vertex(p.E, 2, 2, {2}, {0, 2}, {1, 0}, {1}, 0, 0, Rat(-1)));
  r = add(r, two_vertex(p.E, 2, 2, {1}, {1, 0}, {0, 2}, {2}, 0, 0, Rat(-1)));
  r = add(r, two_vertex(p.E, 2, 2, {1}, {2, 0}, {0, 2}, {1}, 0, 0, Rat(-1)));
  p.relations[{2, 2}] = orbit_close(p.E, 2, 2, {r});
  return p;
}

}  // namespace

Presentation preset_tf() { return tf_like("tf", Sym::regular); }
Presentation preset_tf_skew() { return tf_like("tf_skew", Sym::sign); }
Presentation preset_tf_sym() { return tf_like("tf_sym", Sym::trivial); }

Presentation preset_by_name(const std::string& name) {
  if (name == "lie") return preset_lie();
  if (name == "lie1bi") return preset_lie1bi();
  if (name == "liebi") return preset_liebi();
  if (name == "tf") return preset_tf();
  if (name == "tf_skew") return preset_tf_skew();
  if (name == "tf_sym") return preset_tf_sym();
  throw invalid_input("unknown presentation name: " + name);
}

}  // namespace diocal
