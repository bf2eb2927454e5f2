/*
 * dioperad.cpp
 *
 * Implementation notes. Normalization fixes the one sign convention used
 * everywhere: a raw decorated tree equals (koszul sign of the vertex
 * reordering) x (port-permutation actions per vertex) x canonical tree.
 * Composition grafts raw trees with decorations (upper factor's vertices
 * first) and normalizes; Sigma-actions relabel legs and normalize.
 */
#include "dioperad.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace diocal {

const GenSlot& BimoduleCollection::slot(int m, int n) const {
  auto it = slots.find({m, n});
  if (it == slots.end())
    throw invalid_input("collection: no generators in slot (" +
                        std::to_string(m) + "," + std::to_string(n) + ")");
  return it->second;
}

std::vector<std::pair<int, int>> BimoduleCollection::support() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [mn, s] : slots)
    if (s.dim() > 0) out.push_back(mn);
  return out;
}

int BimoduleCollection::degree(int m, int n, int gen) const {
  return slot(m, n).gens.at(gen).second;
}

namespace {

SignedMatrix sym_block(Sym s, int count) {
  SignedMatrix m(count, count);
  switch (s) {
    case Sym::trivial:
      for (int i = 0; i < count; ++i) m.set(i, i, Rat(1));
      break;
    case Sym::sign:
      for (int i = 0; i < count; ++i) m.set(i, i, Rat(-1));
      break;
    case Sym::regular:
      if (count != 2)
        throw invalid_input("regular symmetry needs exactly two generators");
      m.set(0, 1, Rat(1));
      m.set(1, 0, Rat(1));
      break;
  }
  return m;
}

SignedMatrix extend_block_diag(const SignedMatrix& a, const SignedMatrix& b) {
  SignedMatrix out(a.rows + b.rows, a.cols + b.cols);
  for (const auto& [rc, v] : a.entries) out.set(rc.first, rc.second, v);
  for (const auto& [rc, v] : b.entries)
    out.set(a.rows + rc.first, a.cols + rc.second, v);
  return out;
}

}  // namespace

void add_gen_slot(BimoduleCollection& E, int m, int n, const std::string& name,
                  int degree, Sym out_sym, Sym in_sym) {
  if (m < 1 || n < 1) throw invalid_input("add_gen_slot: need m, n >= 1");
  if (out_sym == Sym::regular && in_sym == Sym::regular)
    throw invalid_input("add_gen_slot: regular (x) regular unsupported");
  if (out_sym == Sym::regular && m != 2)
    throw invalid_input("add_gen_slot: regular output symmetry needs m = 2");
  if (in_sym == Sym::regular && n != 2)
    throw invalid_input("add_gen_slot: regular input symmetry needs n = 2");
  const int count =
      (out_sym == Sym::regular || in_sym == Sym::regular) ? 2 : 1;

  GenSlot& s = E.slots[{m, n}];
  const bool fresh = s.gens.empty();
  s.gens.emplace_back(name, degree);
  if (count == 2) s.gens.emplace_back(name + "'", degree);

  for (int k = 0; k < m - 1; ++k) {
    SignedMatrix block = out_sym == Sym::regular
                             ? sym_block(Sym::regular, 2)
                             : sym_block(out_sym, count);
    if (fresh)
      s.left.push_back(block);
    else
      s.left[k] = extend_block_diag(s.left[k], block);
  }
  for (int k = 0; k < n - 1; ++k) {
    SignedMatrix block = in_sym == Sym::regular ? sym_block(Sym::regular, 2)
                                                : sym_block(in_sym, count);
    if (fresh)
      s.right.push_back(block);
    else
      s.right[k] = extend_block_diag(s.right[k], block);
  }
}

void validate_collection(const BimoduleCollection& E) {
  for (const auto& [mn, s] : E.slots) {
    const auto [m, n] = mn;
    const int d = s.dim();
    if (static_cast<int>(s.left.size()) != m - 1 ||
        static_cast<int>(s.right.size()) != n - 1)
      throw invalid_input("collection: transposition list length mismatch");
    auto check_square = [&](const SignedMatrix& M) {
      if (M.rows != d || M.cols != d)
        throw invalid_input("collection: action matrix shape mismatch");
      for (const auto& [rc, v] : M.entries) {
        (void)v;
        if (s.gens[rc.first].second != s.gens[rc.second].second)
          throw invalid_input("collection: action mixes degrees");
      }
    };
    const SignedMatrix id = SignedMatrix::identity(d);
    auto all = s.left;
    all.insert(all.end(), s.right.begin(), s.right.end());
    for (const auto& M : all) {
      check_square(M);
      if (!(M.mul(M) == id))
        throw invalid_input("collection: transposition not an involution");
    }
    auto braid = [&](const std::vector<SignedMatrix>& v) {
      for (size_t k = 0; k + 1 < v.size(); ++k) {
        if (!(v[k].mul(v[k + 1]).mul(v[k]) ==
              v[k + 1].mul(v[k]).mul(v[k + 1])))
          throw invalid_input("collection: braid relation fails");
      }
      for (size_t k = 0; k < v.size(); ++k)
        for (size_t l = k + 2; l < v.size(); ++l)
          if (!(v[k].mul(v[l]) == v[l].mul(v[k])))
            throw invalid_input("collection: distant transpositions");
    };
    braid(s.left);
    braid(s.right);
    for (const auto& L : s.left)
      for (const auto& R : s.right)
        if (!(L.mul(R) == R.mul(L)))
          throw invalid_input("collection: left/right actions do not commute");
  }
}

Vec act_side(const GenSlot& s, bool out_side, const std::vector<int>& sigma,
             int gen) {
  const auto& mats = out_side ? s.left : s.right;
  if (sigma.size() != mats.size() + 1)
    throw invalid_input("act_side: permutation length mismatch");
  Vec v(s.dim(), Rat(0));
  v.at(gen) = 1;
  std::vector<int> w = sigma;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t k = 0; k + 1 < w.size(); ++k) {
      if (w[k] > w[k + 1]) {
        std::swap(w[k], w[k + 1]);
        v = mats[k].apply(v);
        moved = true;
      }
    }
  }
  return v;
}

DecTree::DecTree(Tree s, std::vector<int> d)
    : shape(std::move(s)), dec(std::move(d)), key(tree_key(shape)) {
  if (shape.verts.size() != dec.size())
    throw invalid_input("DecTree: decoration length mismatch");
}

Element& accumulate(Element& x, const DecTree& t, const Rat& c) {
  auto it = x.find(t);
  if (it == x.end()) {
    if (c != 0) x.emplace(t, c);
  } else {
    it->second += c;
    if (it->second == 0) x.erase(it);
  }
  return x;
}

Element add(const Element& x, const Element& y) {
  Element out = x;
  for (const auto& [t, c] : y) accumulate(out, t, c);
  return out;
}

Element scale(const Element& x, const Rat& c) {
  Element out;
  if (c == 0) return out;
  for (const auto& [t, v] : x) out.emplace(t, v * c);
  return out;
}

bool is_zero(const Element& x) { return x.empty(); }

std::string element_str(const BimoduleCollection& E, const Element& x) {
  if (x.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [t, c] : x) {
    out << (first ? "" : " + ") << "(" << rat_str(c) << ")*[";
    for (size_t v = 0; v < t.shape.verts.size(); ++v) {
      if (v) out << ";";
      const auto& gs = E.slot(t.shape.arity_out(static_cast<int>(v)),
                              t.shape.arity_in(static_cast<int>(v)));
      out << gs.gens[t.dec[v]].first << "@v" << v + 1;
    }
    out << "|" << t.key << "]";
    first = false;
  }
  return out.str();
}

Element normalize_raw(const BimoduleCollection& E, const Tree& raw_shape,
                      const std::vector<int>& dec, const Rat& coeff) {
  Element out;
  if (coeff == 0) return out;
  const int V = static_cast<int>(raw_shape.verts.size());
  if (static_cast<int>(dec.size()) != V)
    throw invalid_input("normalize_raw: decoration length mismatch");
  CanonicalForm cf = canonical_form(raw_shape);

  std::vector<int> degs(V);
  for (int v = 0; v < V; ++v)
    degs[v] =
        E.degree(raw_shape.arity_out(v), raw_shape.arity_in(v), dec[v]);

  // Koszul sign of reordering the decoration tensor into canonical order.
  std::vector<int> orig_at(V);
  for (int v = 0; v < V; ++v) orig_at[cf.pos_of[v]] = v;
  std::vector<int> perm(V);
  for (int k = 0; k < V; ++k) perm[k] = orig_at[k] + 1;
  Rat c = coeff * koszul_sign(perm, degs);

  // Expand port-permutation actions vertex by vertex.
  std::vector<std::pair<std::vector<int>, Rat>> terms;
  {
    std::vector<int> dc(V);
    for (int v = 0; v < V; ++v) dc[cf.pos_of[v]] = dec[v];
    terms.emplace_back(std::move(dc), c);
  }
  for (int v = 0; v < V; ++v) {
    const GenSlot& gs =
        E.slot(raw_shape.arity_out(v), raw_shape.arity_in(v));
    auto apply_side = [&](const std::vector<int>& src, bool out_side) {
      const int k = static_cast<int>(src.size());
      bool ident = true;
      for (int p = 0; p < k; ++p) ident = ident && src[p] == p;
      if (ident) return;
      // canonical slot p holds original port src[p]; the decoration
      // re-expressed in canonical order is act(tau^{-1}) of it
      std::vector<int> tau_inv(k);
      for (int p = 0; p < k; ++p) tau_inv[src[p]] = p + 1;
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (const auto& [dc, cc] : terms) {
        Vec img = act_side(gs, out_side, tau_inv, dc[cf.pos_of[v]]);
        for (int g = 0; g < static_cast<int>(img.size()); ++g) {
          if (img[g] == 0) continue;
          auto nd = dc;
          nd[cf.pos_of[v]] = g;
          next.emplace_back(std::move(nd), cc * img[g]);
        }
      }
      terms.swap(next);
    };
    apply_side(cf.out_src[v], true);
    apply_side(cf.in_src[v], false);
  }

  for (auto& [dc, cc] : terms)
    accumulate(out, DecTree(cf.tree, std::move(dc)), cc);
  return out;
}

Element make_corolla(const BimoduleCollection& E, int m, int n, int gen) {
  if (gen < 0 || gen >= E.slot(m, n).dim())
    throw invalid_input("make_corolla: generator index out of range");
  return normalize_raw(E, Tree::corolla(m, n), {gen}, Rat(1));
}

Element sigma_act(const BimoduleCollection& E, const Element& x,
                  const std::vector<int>& sigma_out,
                  const std::vector<int>& sigma_in) {
  Element out;
  for (const auto& [t, c] : x) {
    Tree relabeled = relabel_legs(t.shape, sigma_out, sigma_in);
    for (const auto& [nt, nc] : normalize_raw(E, relabeled, t.dec, c))
      accumulate(out, nt, nc);
  }
  return out;
}

namespace {

std::pair<int, int> element_slot(const Element& x) {
  const Tree& s = x.begin()->first.shape;
  for (const auto& [t, c] : x) {
    (void)c;
    if (t.shape.m != s.m || t.shape.n != s.n)
      throw invalid_input("element mixes slots");
  }
  return {s.m, s.n};
}

}  // namespace

Element compose(const BimoduleCollection& E, const Element& a, int i,
                const Element& b, int j) {
  Element out;
  if (a.empty() || b.empty()) return out;
  auto [m1, n1] = element_slot(a);
  auto [m2, n2] = element_slot(b);
  (void)m1;
  (void)n2;
  if (i < 1 || i > m2 || j < 1 || j > n1)
    throw invalid_input("compose: index out of range");
  for (const auto& [ta, ca] : a)
    for (const auto& [tb, cb] : b) {
      Tree raw = graft_raw(ta.shape, i, tb.shape, j);
      std::vector<int> dec = ta.dec;
      dec.insert(dec.end(), tb.dec.begin(), tb.dec.end());
      for (const auto& [nt, nc] : normalize_raw(E, raw, dec, ca * cb))
        accumulate(out, nt, nc);
    }
  return out;
}

SlotSpace free_slot(const BimoduleCollection& E, int m, int n,
                    int max_vertices) {
  SlotSpace s;
  s.m = m;
  s.n = n;
  for (const Tree& t : enumerate_trees(m, n, E.support(), max_vertices)) {
    const int V = static_cast<int>(t.verts.size());
    std::vector<int> dims(V), dec(V, 0);
    for (int v = 0; v < V; ++v)
      dims[v] = E.slot(t.arity_out(v), t.arity_in(v)).dim();
    // odometer over decorations, last vertex fastest
    while (true) {
      DecTree dt(t, dec);
      int deg = 0;
      for (int v = 0; v < V; ++v)
        deg += E.degree(t.arity_out(v), t.arity_in(v), dec[v]);
      s.index.emplace(dt, s.dim());
      s.degrees.push_back(deg);
      s.basis.push_back(std::move(dt));
      int v = V - 1;
      while (v >= 0 && dec[v] + 1 == dims[v]) dec[v--] = 0;
      if (v < 0) break;
      ++dec[v];
    }
  }
  return s;
}

Vec to_vec(const SlotSpace& s, const Element& x) {
  Vec v(s.dim(), Rat(0));
  for (const auto& [t, c] : x) {
    auto it = s.index.find(t);
    if (it == s.index.end())
      throw invalid_input("to_vec: element outside the slot window");
    v[it->second] = c;
  }
  return v;
}

Element from_vec(const SlotSpace& s, const Vec& v) {
  if (static_cast<int>(v.size()) != s.dim())
    throw invalid_input("from_vec: length mismatch");
  Element out;
  for (int k = 0; k < s.dim(); ++k)
    if (v[k] != 0) out.emplace(s.basis[k], v[k]);
  return out;
}

namespace {

/* Shared splice core: the raw tree and decoration list for substituting
 * one replacement term into vertex v. Guest edges append after t's, so
 * the guest's edge e sits at raw index |t.edges| + e. */
std::pair<Tree, std::vector<int>> splice_vertex(const DecTree& t, int v,
                                                const DecTree& rt) {
  const Tree& sh = t.shape;
  const Tree& rs = rt.shape;
  const int V = static_cast<int>(sh.verts.size());
  const int K = static_cast<int>(rs.verts.size());
  const int a = sh.arity_out(v), b = sh.arity_in(v);
  const int ebase = static_cast<int>(sh.edges.size());
  // composite index of an original vertex, and of a replacement vertex
  auto host = [&](int w) { return w < v ? w : w + K - 1; };
  auto guest = [&](int u) { return v + u; };

  Tree raw;
  raw.m = sh.m;
  raw.n = sh.n;
  raw.verts.resize(V + K - 1);
  for (int w = 0; w < V; ++w)
    if (w != v) raw.verts[host(w)] = sh.verts[w];
  // replacement ports: leg k becomes v's k-th stored port, edges shift
  std::vector<int> out_landing(a + 1, -1), in_landing(b + 1, -1);
  for (int u = 0; u < K; ++u) {
    TreeVertex& nv = raw.verts[guest(u)];
    for (const Port& p : rs.verts[u].outs)
      if (p.kind == Port::Leg) {
        nv.outs.push_back(sh.verts[v].outs[p.id - 1]);
        out_landing[p.id] = guest(u);
      } else {
        nv.outs.push_back({Port::Edge, ebase + p.id});
      }
    for (const Port& p : rs.verts[u].ins)
      if (p.kind == Port::Leg) {
        nv.ins.push_back(sh.verts[v].ins[p.id - 1]);
        in_landing[p.id] = guest(u);
      } else {
        nv.ins.push_back({Port::Edge, ebase + p.id});
      }
  }
  for (int ei = 0; ei < ebase; ++ei) {
    auto [s, g] = sh.edges[ei];
    if (s == v) {
      int pos = 0;
      while (sh.verts[v].outs[pos] != Port{Port::Edge, ei}) ++pos;
      s = out_landing[pos + 1];
    } else {
      s = host(s);
    }
    if (g == v) {
      int pos = 0;
      while (sh.verts[v].ins[pos] != Port{Port::Edge, ei}) ++pos;
      g = in_landing[pos + 1];
    } else {
      g = host(g);
    }
    raw.edges.emplace_back(s, g);
  }
  for (const auto& [src, tgt] : rs.edges)
    raw.edges.emplace_back(guest(src), guest(tgt));

  std::vector<int> dec(t.dec.begin(), t.dec.begin() + v);
  dec.insert(dec.end(), rt.dec.begin(), rt.dec.end());
  dec.insert(dec.end(), t.dec.begin() + v + 1, t.dec.end());
  return {std::move(raw), std::move(dec)};
}

void check_subst_args(const DecTree& t, int v, int a, int b) {
  const Tree& sh = t.shape;
  if (v < 0 || v >= static_cast<int>(sh.verts.size()))
    throw invalid_input("subst_vertex: no such vertex");
  if (a != sh.arity_out(v) || b != sh.arity_in(v))
    throw invalid_input("subst_vertex: arity mismatch");
}

}  // namespace

Element subst_vertex(const BimoduleCollection& E, const DecTree& t, int v,
                     const Element& repl) {
  Element out;
  if (repl.empty()) return out;
  auto [a, b] = element_slot(repl);
  check_subst_args(t, v, a, b);
  for (const auto& [rt, rc] : repl) {
    auto [raw, dec] = splice_vertex(t, v, rt);
    for (const auto& [nt, nc] : normalize_raw(E, raw, dec, rc))
      accumulate(out, nt, nc);
  }
  return out;
}

Element subst_vertex_suspended(const BimoduleCollection& E, const DecTree& t,
                               int v, const DecTree& rt, const Rat& rc) {
  check_subst_args(t, v, rt.shape.m, rt.shape.n);
  int passed = 0;
  for (int w = 0; w < v; ++w)
    passed +=
        E.degree(t.shape.arity_out(w), t.shape.arity_in(w), t.dec[w]) + 1;
  auto [raw, dec] = splice_vertex(t, v, rt);
  const int V = static_cast<int>(raw.verts.size());
  CanonicalForm cf = canonical_form(raw);
  std::vector<int> orig_at(V), perm(V), degs(V), sdegs(V);
  for (int w = 0; w < V; ++w) orig_at[cf.pos_of[w]] = w;
  for (int k = 0; k < V; ++k) perm[k] = orig_at[k] + 1;
  for (int w = 0; w < V; ++w) {
    degs[w] = E.degree(raw.arity_out(w), raw.arity_in(w), dec[w]);
    sdegs[w] = degs[w] + 1;
  }
  // normalize_raw pays the reorder Koszul at plain degrees; the product
  // below corrects it to the suspended ones.
  int line = koszul_sign(perm, degs) * koszul_sign(perm, sdegs);
  if (passed % 2 != 0) line = -line;
  Element out;
  for (const auto& [nt, nc] : normalize_raw(E, raw, dec, line < 0 ? -rc : rc))
    accumulate(out, nt, nc);
  return out;
}

Peel peel_leaf(const BimoduleCollection& E, const DecTree& t, int w) {
  const Tree& sh = t.shape;
  const int V = static_cast<int>(sh.verts.size());
  if (V < 2) throw invalid_input("peel_leaf: need at least two vertices");
  if (w < 0 || w >= V) throw invalid_input("peel_leaf: vertex out of range");
  int e = -1;
  for (int k = 0; k < static_cast<int>(sh.edges.size()); ++k)
    if (sh.edges[k].first == w || sh.edges[k].second == w) {
      if (e >= 0) throw invalid_input("peel_leaf: vertex is not a leaf");
      e = k;
    }
  Peel p;
  p.lower = sh.edges[e].first == w;  // w's output points up into the rest
  p.a = sh.arity_out(w);
  p.b = sh.arity_in(w);
  p.gen = t.dec[w];

  // Koszul sign for moving w's tensor factor to the end (lower case,
  // rest (x) corolla) or the front (upper case, corolla (x) rest).
  std::vector<int> degs(V);
  for (int v = 0; v < V; ++v)
    degs[v] = E.degree(sh.arity_out(v), sh.arity_in(v), t.dec[v]);
  int cross = 0;
  for (int v = p.lower ? w + 1 : 0; v < (p.lower ? V : w); ++v)
    cross += degs[v];
  p.koszul = (degs[w] % 2 != 0 && cross % 2 != 0) ? Rat(-1) : Rat(1);

  // Remainder tree: drop w and edge e, renumber edge ids, turn the other
  // endpoint's port into a leg.
  const int u = p.lower ? sh.edges[e].second : sh.edges[e].first;
  Tree rest;
  std::vector<int> rest_dec;
  std::vector<int> vmap(V, -1);
  for (int v = 0, k = 0; v < V; ++v)
    if (v != w) {
      vmap[v] = k++;
      rest_dec.push_back(t.dec[v]);
    }
  for (int k = 0; k < static_cast<int>(sh.edges.size()); ++k)
    if (k != e)
      rest.edges.emplace_back(vmap[sh.edges[k].first],
                              vmap[sh.edges[k].second]);
  auto fix_edge_id = [&](int id) { return id > e ? id - 1 : id; };

  // Collect leg labels kept by the rest; relabel them contiguously.
  std::vector<int> kept_out, kept_in, peeled_out, peeled_in;
  for (int v = 0; v < V; ++v) {
    for (const Port& q : sh.verts[v].outs)
      if (q.kind == Port::Leg)
        (v == w ? peeled_out : kept_out).push_back(q.id);
    for (const Port& q : sh.verts[v].ins)
      if (q.kind == Port::Leg) (v == w ? peeled_in : kept_in).push_back(q.id);
  }
  std::sort(kept_out.begin(), kept_out.end());
  std::sort(kept_in.begin(), kept_in.end());
  std::sort(peeled_out.begin(), peeled_out.end());
  std::sort(peeled_in.begin(), peeled_in.end());
  auto rank_of = [](const std::vector<int>& v, int x) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), x) -
                            v.begin());
  };

  // Leg numbering in the rest: order-preserving ranks, with the new leg
  // placed last on inputs (lower case) or first on outputs (upper case).
  const int m_rest =
      static_cast<int>(kept_out.size()) + (p.lower ? 0 : 1);
  const int n_rest = static_cast<int>(kept_in.size()) + (p.lower ? 1 : 0);
  rest.m = m_rest;
  rest.n = n_rest;
  for (int v = 0; v < V; ++v) {
    if (v == w) continue;
    TreeVertex nv;
    for (const Port& q : sh.verts[v].outs) {
      if (q.kind == Port::Leg)
        nv.outs.push_back(
            {Port::Leg, rank_of(kept_out, q.id) + (p.lower ? 1 : 2)});
      else if (q.id == e)
        nv.outs.push_back({Port::Leg, 1});  // upper case: u's port, first out
      else
        nv.outs.push_back({Port::Edge, fix_edge_id(q.id)});
    }
    for (const Port& q : sh.verts[v].ins) {
      if (q.kind == Port::Leg)
        nv.ins.push_back({Port::Leg, rank_of(kept_in, q.id) + 1});
      else if (q.id == e)
        nv.ins.push_back({Port::Leg, n_rest});  // lower case: new last input
      else
        nv.ins.push_back({Port::Edge, fix_edge_id(q.id)});
    }
    rest.verts.push_back(std::move(nv));
  }
  (void)u;
  p.rest = normalize_raw(E, rest, rest_dec, Rat(1));

  // Reconstruction indices and the final relabeling back to t's legs.
  if (p.lower) {
    p.i = p.a;      // corolla's edge port is last among its outputs
    p.j = n_rest;   // the new leg of the rest
    // composite outputs: corolla legs 1..a-1 | rest outputs
    for (int k = 0; k < p.a - 1; ++k) p.sigma_out.push_back(peeled_out[k]);
    for (int x : kept_out) p.sigma_out.push_back(x);
    // composite inputs: rest inputs 1..n_rest-1 | corolla inputs
    for (int x : kept_in) p.sigma_in.push_back(x);
    for (int x : peeled_in) p.sigma_in.push_back(x);
  } else {
    p.i = 1;       // rest's new output leg
    p.j = p.b;     // corolla's edge port is last among its inputs
    // composite outputs: corolla legs 1..a | rest outputs 2..
    for (int x : peeled_out) p.sigma_out.push_back(x);
    for (int x : kept_out) p.sigma_out.push_back(x);
    // composite inputs: corolla legs 1..b-1 | rest inputs
    for (int k = 0; k < p.b - 1; ++k) p.sigma_in.push_back(peeled_in[k]);
    for (int x : kept_in) p.sigma_in.push_back(x);
  }
  return p;
}

Element peel_reassemble(const BimoduleCollection& E, const Peel& p) {
  Element cor = make_corolla(E, p.a, p.b, p.gen);
  Element inner = p.lower ? compose(E, p.rest, p.i, cor, p.j)
                          : compose(E, cor, p.i, p.rest, p.j);
  return scale(sigma_act(E, inner, p.sigma_out, p.sigma_in), p.koszul);
}

void validate_presentation(const Presentation& p) {
  validate_collection(p.E);
  for (const auto& [mn, s] : p.E.slots) {
    (void)s;
    if (mn != std::pair(1, 2) && mn != std::pair(2, 1))
      throw invalid_input("presentation: generators outside (1,2),(2,1)");
  }
  for (const auto& [mn, rels] : p.relations) {
    const auto [m, n] = mn;
    if (!(mn == std::pair(1, 3) || mn == std::pair(2, 2) ||
          mn == std::pair(3, 1)))
      throw invalid_input("presentation: relations outside quadratic slots");
    SlotSpace amb = free_slot(p.E, m, n, 2);
    EchelonSpan span(amb.dim());
    for (const Element& r : rels) span.insert(to_vec(amb, r));
    auto check = [&](const Element& img) {
      if (!span.contains(to_vec(amb, img)))
        throw invalid_input("presentation: relation span not Sigma-closed");
    };
    for (const Element& r : rels) {
      for (int k = 1; k < m; ++k) {
        std::vector<int> so(m), si(n);
        std::iota(so.begin(), so.end(), 1);
        std::iota(si.begin(), si.end(), 1);
        std::swap(so[k - 1], so[k]);
        check(sigma_act(p.E, r, so, si));
      }
      for (int k = 1; k < n; ++k) {
        std::vector<int> so(m), si(n);
        std::iota(so.begin(), so.end(), 1);
        std::iota(si.begin(), si.end(), 1);
        std::swap(si[k - 1], si[k]);
        check(sigma_act(p.E, r, so, si));
      }
    }
  }
}

QuotientSlot quotient_slot(const Presentation& p, int m, int n,
                           int max_vertices) {
  if (max_vertices < m + n - 2)
    throw window_insufficient(
        "quotient_slot: window below " + std::to_string(m + n - 2) +
        " vertices cannot hold the (" + std::to_string(m) + "," +
        std::to_string(n) + ") slot");

  std::map<std::pair<int, int>, SlotSpace> spaces;
  auto space_of = [&](int a, int b) -> SlotSpace& {
    auto it = spaces.find({a, b});
    if (it == spaces.end())
      it = spaces.emplace(std::pair(a, b), free_slot(p.E, a, b, max_vertices))
               .first;
    return it->second;
  };
  std::map<std::pair<int, int>, EchelonSpan> spans;
  auto span_of = [&](int a, int b) -> EchelonSpan& {
    auto it = spans.find({a, b});
    if (it == spans.end())
      it = spans.emplace(std::pair(a, b), EchelonSpan(space_of(a, b).dim()))
               .first;
    return it->second;
  };

  std::deque<Element> work;
  for (const auto& [mn, rels] : p.relations) {
    if (mn.first > m || mn.second > n) continue;
    for (const Element& r : rels)
      if (!r.empty()) work.push_back(r);
  }

  while (!work.empty()) {
    Element x = std::move(work.front());
    work.pop_front();
    if (x.empty()) continue;
    auto [a, b] = element_slot(x);
    if (a > m || b > n) continue;
    if (!span_of(a, b).insert(to_vec(space_of(a, b), x))) continue;

    // Sigma closure via adjacent transpositions.
    for (int k = 1; k < a; ++k) {
      std::vector<int> so(a), si(b);
      std::iota(so.begin(), so.end(), 1);
      std::iota(si.begin(), si.end(), 1);
      std::swap(so[k - 1], so[k]);
      work.push_back(sigma_act(p.E, x, so, si));
    }
    for (int k = 1; k < b; ++k) {
      std::vector<int> so(a), si(b);
      std::iota(so.begin(), so.end(), 1);
      std::iota(si.begin(), si.end(), 1);
      std::swap(si[k - 1], si[k]);
      work.push_back(sigma_act(p.E, x, so, si));
    }
    // Grow by one corolla in every position, both above and below.
    for (const auto& [ga, gb] : p.E.support()) {
      if (a + ga - 1 > m || b + gb - 1 > n) continue;
      for (int g = 0; g < p.E.slot(ga, gb).dim(); ++g) {
        Element cor = make_corolla(p.E, ga, gb, g);
        for (int i = 1; i <= ga; ++i)
          for (int j = 1; j <= b; ++j)
            work.push_back(compose(p.E, x, i, cor, j));
        for (int i = 1; i <= a; ++i)
          for (int j = 1; j <= gb; ++j)
            work.push_back(compose(p.E, cor, i, x, j));
      }
    }
  }

  QuotientSlot out{space_of(m, n), span_of(m, n), {}};
  out.basis_ids = out.ideal.free_columns();
  return out;
}

Vec quotient_reduce(const QuotientSlot& q, const Element& x) {
  return q.ideal.reduce(to_vec(q.ambient, x));
}

BimoduleCollection dual_collection(const BimoduleCollection& E,
                                   bool sign_twist) {
  BimoduleCollection d;
  auto dualize = [sign_twist](const SignedMatrix& M) {
    SignedMatrix t = M.transpose();
    if (!sign_twist) return t;
    SignedMatrix neg(t.rows, t.cols);
    for (const auto& [rc, v] : t.entries) neg.set(rc.first, rc.second, -v);
    return neg;
  };
  for (const auto& [mn, s] : E.slots) {
    GenSlot ds;
    for (const auto& [name, deg] : s.gens)
      ds.gens.emplace_back(name + "'", -deg);
    for (const SignedMatrix& M : s.left) ds.left.push_back(dualize(M));
    for (const SignedMatrix& M : s.right) ds.right.push_back(dualize(M));
    d.slots[mn] = std::move(ds);
  }
  return d;
}

Vec free_pairing_signs(const BimoduleCollection& E, int m, int n) {
  SlotSpace sp = free_slot(E, m, n, 2);
  const int N = sp.dim();
  Vec d(N, Rat(1));
  for (int u = 0; u < N; ++u) {
    const DecTree& t = sp.basis[u];
    // Vertices in flow order, downstream first: every edge's target
    // precedes its source. Ties break by canonical index.
    const int k = static_cast<int>(t.shape.verts.size());
    std::vector<int> blocked(k, 0);
    for (const auto& [src, tgt] : t.shape.edges) ++blocked[src];
    std::vector<int> order;
    while (static_cast<int>(order.size()) < k)
      for (int v = 0; v < k; ++v)
        if (blocked[v] == 0) {
          blocked[v] = -1;
          order.push_back(v);
          for (const auto& [src, tgt] : t.shape.edges)
            if (tgt == v) --blocked[src];
          break;
        }
    // Parity of the concatenated per-vertex port word against the global
    // order on one side. Edges sort after legs; their relative order
    // cancels between the two sides, so any fixed one works.
    auto side_parity = [&](bool out_side) {
      std::vector<int> word;
      int legs = out_side ? t.shape.m : t.shape.n;
      for (int v : order)
        for (const Port& p : (out_side ? t.shape.verts[v].outs
                                       : t.shape.verts[v].ins))
          word.push_back(p.kind == Port::Leg ? p.id : legs + 1 + p.id);
      std::vector<int> target = word;
      std::sort(target.begin(), target.end());
      return orientation_parity(word, target);
    };
    int sign = side_parity(true) * side_parity(false);
    // Each edge contributes the parity of its target's input arity, the
    // cost of threading the contracted edge through that vertex's input
    // determinant line.
    for (const auto& [src, tgt] : t.shape.edges)
      if (t.shape.arity_in(tgt) % 2 != 0) sign = -sign;
    for (size_t a = 0; a < t.dec.size(); ++a) {
      int da = E.degree(t.shape.arity_out(static_cast<int>(a)),
                        t.shape.arity_in(static_cast<int>(a)),
                        t.dec[a]);
      if (da % 2 == 0) continue;
      for (size_t b = a + 1; b < t.dec.size(); ++b) {
        int db = E.degree(t.shape.arity_out(static_cast<int>(b)),
                          t.shape.arity_in(static_cast<int>(b)),
                          t.dec[b]);
        if (db % 2 != 0) sign = -sign;
      }
    }
    d[u] = Rat(sign);
  }
  return d;
}

Presentation quadratic_dual(const Presentation& p) {
  validate_presentation(p);
  Presentation d;
  d.name = p.name + "!";
  d.E = dual_collection(p.E);
  for (auto mn : {std::pair(1, 3), std::pair(2, 2), std::pair(3, 1)}) {
    SlotSpace primal = free_slot(p.E, mn.first, mn.second, 2);
    SlotSpace dual = free_slot(d.E, mn.first, mn.second, 2);
    if (primal.dim() != dual.dim())
      throw invalid_input("quadratic_dual: free slots misaligned");
    if (primal.dim() == 0) continue;
    std::vector<Vec> rel_vecs;
    auto it = p.relations.find(mn);
    if (it != p.relations.end())
      for (const Element& r : it->second) rel_vecs.push_back(to_vec(primal, r));
    Vec signs = free_pairing_signs(p.E, mn.first, mn.second);
    SignedMatrix pairing(primal.dim(), primal.dim());
    for (int k = 0; k < primal.dim(); ++k) pairing.set(k, k, signs[k]);
    std::vector<Vec> perp = annihilator(rel_vecs, primal.dim(), pairing);
    std::vector<Element> rels;
    for (const Vec& v : perp) rels.push_back(from_vec(dual, v));
    if (!rels.empty()) d.relations[mn] = std::move(rels);
  }
  return d;
}

BimoduleCollection twist(const BimoduleCollection& c, Twist kind, int p) {
  BimoduleCollection out;
  auto flip_all = [](GenSlot s, bool flip) {
    if (!flip) return s;
    for (auto& M : s.left) {
      SignedMatrix neg(M.rows, M.cols);
      for (const auto& [rc, v] : M.entries) neg.set(rc.first, rc.second, -v);
      M = std::move(neg);
    }
    for (auto& M : s.right) {
      SignedMatrix neg(M.rows, M.cols);
      for (const auto& [rc, v] : M.entries) neg.set(rc.first, rc.second, -v);
      M = std::move(neg);
    }
    return s;
  };
  switch (kind) {
    case Twist::op:
      for (const auto& [mn, s] : c.slots) {
        GenSlot t = s;
        std::swap(t.left, t.right);
        out.slots[{mn.second, mn.first}] = std::move(t);
      }
      break;
    case Twist::shift:
      for (const auto& [mn, s] : c.slots) {
        GenSlot t = s;
        for (auto& [name, deg] : t.gens) {
          (void)name;
          deg -= p;
        }
        out.slots[mn] = std::move(t);
      }
      break;
    case Twist::lambda:
    case Twist::lambda_inverse:
      for (const auto& [mn, s] : c.slots) {
        const int shift = mn.first + mn.second - 2;
        GenSlot t = flip_all(s, true);
        for (auto& [name, deg] : t.gens) {
          (void)name;
          deg += kind == Twist::lambda ? shift : -shift;
        }
        out.slots[mn] = std::move(t);
      }
      break;
    case Twist::angle:
      for (const auto& [mn, s] : c.slots) {
        GenSlot t = flip_all(s, p % 2 != 0);
        for (auto& [name, deg] : t.gens) {
          (void)name;
          deg += p * (mn.second - mn.first);
        }
        out.slots[mn] = std::move(t);
      }
      break;
  }
  return out;
}

int underline_free_dim(const std::map<std::pair<int, int>, int>& pL,
                       const std::map<std::pair<int, int>, int>& pR, int m,
                       int n) {
  if (m + n < 3)
    throw invalid_input("underline_free_dim: slot below the quadratic range");
  std::map<std::pair<int, int>, int> dims;
  std::vector<std::pair<int, int>> arities;
  for (const auto& [mn, d] : pL)
    if (d > 0 && mn.first == 1 && mn.second >= 2) {
      arities.push_back(mn);
      dims[mn] = d;
    }
  for (const auto& [mn, d] : pR)
    if (d > 0 && mn.second == 1 && mn.first >= 2) {
      arities.push_back(mn);
      dims[mn] = d;
    }
  int total = 0;
  for (const Tree& t : enumerate_trees(m, n, arities, m + n - 2)) {
    if (!is_reduced(t)) continue;
    int prod = 1;
    for (int v = 0; v < static_cast<int>(t.verts.size()); ++v)
      prod *= dims.at({t.arity_out(v), t.arity_in(v)});
    total += prod;
  }
  return total;
}

}  // namespace diocal
