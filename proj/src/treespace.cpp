/*
 * treespace.cpp
 *
 * Canonicalization works by recursive subtree signatures rooted at the
 * vertex carrying output leg 1. Leg labels are globally unique, so sibling
 * signatures never tie and the refinement needs no backtracking.
 */
#include "treespace.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace diocal {

Tree Tree::corolla(int m, int n) {
  Tree t;
  t.m = m;
  t.n = n;
  TreeVertex v;
  for (int l = 1; l <= m; ++l) v.outs.push_back({Port::Leg, l});
  for (int l = 1; l <= n; ++l) v.ins.push_back({Port::Leg, l});
  t.verts.push_back(std::move(v));
  return t;
}

void validate(const Tree& t) {
  const int V = static_cast<int>(t.verts.size());
  const int E = static_cast<int>(t.edges.size());
  if (t.m < 1 || t.n < 1) throw invalid_input("tree: need m, n >= 1");
  if (V == 0) throw invalid_input("tree: no vertices");
  if (E != V - 1) throw invalid_input("tree: edge count must be V - 1");

  std::vector<int> out_seen(E, 0), in_seen(E, 0);
  std::set<int> out_labels, in_labels;
  for (int v = 0; v < V; ++v) {
    const TreeVertex& vx = t.verts[v];
    if (vx.outs.empty() || vx.ins.empty())
      throw invalid_input("tree: vertex with empty side");
    for (const Port& p : vx.outs) {
      if (p.kind == Port::Leg) {
        if (!out_labels.insert(p.id).second)
          throw invalid_input("tree: duplicate output leg label");
      } else {
        if (p.id < 0 || p.id >= E || t.edges[p.id].first != v)
          throw invalid_input("tree: out-port edge mismatch");
        ++out_seen[p.id];
      }
    }
    for (const Port& p : vx.ins) {
      if (p.kind == Port::Leg) {
        if (!in_labels.insert(p.id).second)
          throw invalid_input("tree: duplicate input leg label");
      } else {
        if (p.id < 0 || p.id >= E || t.edges[p.id].second != v)
          throw invalid_input("tree: in-port edge mismatch");
        ++in_seen[p.id];
      }
    }
  }
  for (int e = 0; e < E; ++e) {
    if (out_seen[e] != 1 || in_seen[e] != 1)
      throw invalid_input("tree: edge not attached exactly once per side");
    if (t.edges[e].first == t.edges[e].second)
      throw invalid_input("tree: self-loop");
  }
  for (int l = 1; l <= t.m; ++l)
    if (!out_labels.count(l))
      throw invalid_input("tree: output labels not a bijection with {1..m}");
  if (static_cast<int>(out_labels.size()) != t.m)
    throw invalid_input("tree: output labels out of range");
  for (int l = 1; l <= t.n; ++l)
    if (!in_labels.count(l))
      throw invalid_input("tree: input labels not a bijection with {1..n}");
  if (static_cast<int>(in_labels.size()) != t.n)
    throw invalid_input("tree: input labels out of range");

  std::vector<int> comp(V, -1);
  std::vector<int> stack = {0};
  comp[0] = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e = 0; e < E; ++e) {
      int other = -1;
      if (t.edges[e].first == v) other = t.edges[e].second;
      if (t.edges[e].second == v) other = t.edges[e].first;
      if (other >= 0 && comp[other] < 0) {
        comp[other] = 0;
        stack.push_back(other);
      }
    }
  }
  for (int v = 0; v < V; ++v)
    if (comp[v] < 0) throw invalid_input("tree: not connected");
}

namespace {

struct Adj {
  int nb;
  int edge;
  bool outgoing;  // edge leaves this vertex
};

std::vector<std::vector<Adj>> adjacency(const Tree& t) {
  std::vector<std::vector<Adj>> adj(t.verts.size());
  for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
    adj[t.edges[e].first].push_back({t.edges[e].second, e, true});
    adj[t.edges[e].second].push_back({t.edges[e].first, e, false});
  }
  return adj;
}

std::string vertex_signature(const Tree& t,
                             const std::vector<std::vector<Adj>>& adj, int v,
                             int parent_edge) {
  std::vector<int> out_legs, in_legs;
  for (const Port& p : t.verts[v].outs)
    if (p.kind == Port::Leg) out_legs.push_back(p.id);
  for (const Port& p : t.verts[v].ins)
    if (p.kind == Port::Leg) in_legs.push_back(p.id);
  std::sort(out_legs.begin(), out_legs.end());
  std::sort(in_legs.begin(), in_legs.end());
  std::ostringstream s;
  s << "(" << t.verts[v].outs.size() << "," << t.verts[v].ins.size() << "|";
  for (int l : out_legs) s << l << ",";
  s << "|";
  for (int l : in_legs) s << l << ",";
  s << "|";
  std::vector<std::string> kids;
  for (const Adj& a : adj[v])
    if (a.edge != parent_edge)
      kids.push_back((a.outgoing ? "o" : "i") +
                     vertex_signature(t, adj, a.nb, a.edge));
  std::sort(kids.begin(), kids.end());
  for (const auto& k : kids) s << k;
  s << ")";
  return s.str();
}

}  // namespace

CanonicalForm canonical_form(const Tree& t) {
  validate(t);
  const int V = static_cast<int>(t.verts.size());
  const int E = static_cast<int>(t.edges.size());
  auto adj = adjacency(t);

  int root = -1;
  for (int v = 0; v < V && root < 0; ++v)
    for (const Port& p : t.verts[v].outs)
      if (p.kind == Port::Leg && p.id == 1) root = v;

  CanonicalForm cf;
  cf.pos_of.assign(V, -1);
  int next = 0;
  std::function<void(int, int)> visit = [&](int v, int parent_edge) {
    cf.pos_of[v] = next++;
    std::vector<std::pair<std::string, const Adj*>> kids;
    for (const Adj& a : adj[v])
      if (a.edge != parent_edge)
        kids.emplace_back((a.outgoing ? "o" : "i") +
                              vertex_signature(t, adj, a.nb, a.edge),
                          &a);
    std::sort(kids.begin(), kids.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [sig, a] : kids) visit(a->nb, a->edge);
  };
  visit(root, -1);

  std::vector<int> edge_order(E);
  std::iota(edge_order.begin(), edge_order.end(), 0);
  std::sort(edge_order.begin(), edge_order.end(), [&](int a, int b) {
    auto ka = std::pair(cf.pos_of[t.edges[a].first], cf.pos_of[t.edges[a].second]);
    auto kb = std::pair(cf.pos_of[t.edges[b].first], cf.pos_of[t.edges[b].second]);
    return ka < kb;
  });
  cf.edge_of.assign(E, -1);
  for (int k = 0; k < E; ++k) cf.edge_of[edge_order[k]] = k;

  cf.tree.m = t.m;
  cf.tree.n = t.n;
  cf.tree.verts.resize(V);
  cf.tree.edges.resize(E);
  for (int e = 0; e < E; ++e)
    cf.tree.edges[cf.edge_of[e]] = {cf.pos_of[t.edges[e].first],
                                    cf.pos_of[t.edges[e].second]};
  cf.out_src.resize(V);
  cf.in_src.resize(V);
  for (int v = 0; v < V; ++v) {
    auto arrange = [&](const std::vector<Port>& ports,
                       std::vector<int>& src) {
      std::vector<std::pair<std::pair<int, int>, int>> keyed;
      for (int k = 0; k < static_cast<int>(ports.size()); ++k) {
        const Port& p = ports[k];
        std::pair<int, int> key = p.kind == Port::Leg
                                      ? std::pair(0, p.id)
                                      : std::pair(1, cf.edge_of[p.id]);
        keyed.emplace_back(key, k);
      }
      std::sort(keyed.begin(), keyed.end());
      std::vector<Port> out;
      for (const auto& [key, k] : keyed) {
        src.push_back(k);
        Port p = ports[k];
        if (p.kind == Port::Edge) p.id = cf.edge_of[p.id];
        out.push_back(p);
      }
      return out;
    };
    cf.tree.verts[cf.pos_of[v]].outs = arrange(t.verts[v].outs, cf.out_src[v]);
    cf.tree.verts[cf.pos_of[v]].ins = arrange(t.verts[v].ins, cf.in_src[v]);
  }
  return cf;
}

std::string tree_key(const Tree& canonical) {
  std::ostringstream s;
  for (int v = 0; v < static_cast<int>(canonical.verts.size()); ++v) {
    if (v) s << ";";
    s << "v" << v + 1 << "(out:[";
    const TreeVertex& vx = canonical.verts[v];
    for (size_t k = 0; k < vx.outs.size(); ++k) {
      if (k) s << ",";
      if (vx.outs[k].kind == Port::Leg)
        s << vx.outs[k].id;
      else
        s << "v" << canonical.edges[vx.outs[k].id].second + 1;
    }
    s << "],in:[";
    for (size_t k = 0; k < vx.ins.size(); ++k) {
      if (k) s << ",";
      if (vx.ins[k].kind == Port::Leg)
        s << "leaf(" << vx.ins[k].id << ")";
      else
        s << "v" << canonical.edges[vx.ins[k].id].first + 1;
    }
    s << "])";
  }
  return s.str();
}

bool is_reduced(const Tree& t) {
  for (const TreeVertex& vx : t.verts) {
    int out_legs = 0, out_edges = 0, in_legs = 0, in_edges = 0;
    for (const Port& p : vx.outs)
      (p.kind == Port::Leg ? out_legs : out_edges)++;
    for (const Port& p : vx.ins)
      (p.kind == Port::Leg ? in_legs : in_edges)++;
    if (out_legs == 0 && out_edges < 2) return false;
    if (in_legs == 0 && in_edges < 2) return false;
  }
  return true;
}

Tree graft_raw(const Tree& upper, int i, const Tree& lower, int j) {
  validate(upper);
  validate(lower);
  if (i < 1 || i > lower.m)
    throw invalid_input("graft: output index out of range");
  if (j < 1 || j > upper.n)
    throw invalid_input("graft: input index out of range");

  const int UV = static_cast<int>(upper.verts.size());
  const int UE = static_cast<int>(upper.edges.size());
  const int LE = static_cast<int>(lower.edges.size());
  const int m1 = upper.m, n1 = upper.n, m2 = lower.m, n2 = lower.n;

  Tree raw;
  raw.m = m1 + m2 - 1;
  raw.n = n1 + n2 - 1;
  raw.verts = upper.verts;
  for (const TreeVertex& vx : lower.verts) raw.verts.push_back(vx);
  raw.edges = upper.edges;
  for (const auto& [s, d] : lower.edges) raw.edges.emplace_back(s + UV, d + UV);
  const int new_edge = UE + LE;

  // Offset lower's edge ids and relabel both trees' legs.
  auto relabel_ports = [&](std::vector<Port>& ports, bool is_lower,
                           bool out_side) {
    for (Port& p : ports) {
      if (p.kind == Port::Edge) {
        if (is_lower) p.id += UE;
        continue;
      }
      if (out_side) {
        if (is_lower) {
          if (p.id == i) continue;  // becomes the new edge below
          p.id = p.id < i ? p.id : m1 + p.id - 1;
        } else {
          p.id = i - 1 + p.id;
        }
      } else {
        if (is_lower)
          p.id = j - 1 + p.id;
        else if (p.id != j)
          p.id = p.id < j ? p.id : p.id + n2 - 1;
      }
    }
  };
  for (int v = 0; v < UV; ++v) {
    relabel_ports(raw.verts[v].outs, false, true);
    relabel_ports(raw.verts[v].ins, false, false);
  }
  for (int v = UV; v < static_cast<int>(raw.verts.size()); ++v) {
    relabel_ports(raw.verts[v].outs, true, true);
    relabel_ports(raw.verts[v].ins, true, false);
  }
  int src = -1, dst = -1;
  for (int v = 0; v < static_cast<int>(lower.verts.size()); ++v)
    for (const Port& p : lower.verts[v].outs)
      if (p.kind == Port::Leg && p.id == i) src = v + UV;
  for (int v = 0; v < UV; ++v)
    for (const Port& p : upper.verts[v].ins)
      if (p.kind == Port::Leg && p.id == j) dst = v;
  for (Port& p : raw.verts[src].outs)
    if (p.kind == Port::Leg && p.id == i) p = {Port::Edge, new_edge};
  for (Port& p : raw.verts[dst].ins)
    if (p.kind == Port::Leg && p.id == j) p = {Port::Edge, new_edge};
  raw.edges.emplace_back(src, dst);
  return raw;
}

GraftResult graft(const Tree& upper, int i, const Tree& lower, int j) {
  Tree raw = graft_raw(upper, i, lower, j);
  CanonicalForm cf = canonical_form(raw);
  std::vector<int> word(raw.edges.size()), sorted(raw.edges.size());
  for (size_t e = 0; e < raw.edges.size(); ++e) word[e] = cf.edge_of[e];
  std::iota(sorted.begin(), sorted.end(), 0);
  GraftResult out;
  out.tree = std::move(cf.tree);
  out.edge_sign = orientation_parity(word, sorted);
  return out;
}

Tree relabel_legs(const Tree& t, const std::vector<int>& sigma_out,
                  const std::vector<int>& sigma_in) {
  if (static_cast<int>(sigma_out.size()) != t.m ||
      static_cast<int>(sigma_in.size()) != t.n)
    throw invalid_input("relabel_legs: permutation length mismatch");
  Tree out = t;
  for (TreeVertex& vx : out.verts) {
    for (Port& p : vx.outs)
      if (p.kind == Port::Leg) p.id = sigma_out.at(p.id - 1);
    for (Port& p : vx.ins)
      if (p.kind == Port::Leg) p.id = sigma_in.at(p.id - 1);
  }
  return out;
}

namespace {

void all_perms(int n, std::vector<std::vector<int>>& out) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace

std::vector<Tree> enumerate_trees(
    int m, int n, const std::vector<std::pair<int, int>>& arities,
    int max_vertices) {
  if (arities.empty()) throw invalid_input("enumerate_trees: empty arity set");
  if (m < 1 || n < 1) throw invalid_input("enumerate_trees: need m, n >= 1");
  std::vector<std::pair<int, int>> ars = arities;
  std::sort(ars.begin(), ars.end());
  ars.erase(std::unique(ars.begin(), ars.end()), ars.end());
  for (const auto& [a, b] : ars)
    if (a < 1 || b < 1) throw invalid_input("enumerate_trees: bad arity");

  // seen[(mm,nn)]: canonical key -> tree, grown level by level.
  std::map<std::pair<int, int>, std::map<std::string, Tree>> seen;
  std::vector<Tree> frontier;
  auto admit = [&](const Tree& canonical) {
    auto& slot = seen[{canonical.m, canonical.n}];
    std::string key = tree_key(canonical);
    if (slot.emplace(std::move(key), canonical).second)
      frontier.push_back(canonical);
  };
  for (const auto& [a, b] : ars)
    if (a <= m && b <= n) admit(Tree::corolla(a, b));

  // Cache of leg-permutation tables.
  std::map<int, std::vector<std::vector<int>>> perms;
  auto perms_of = [&](int k) -> const std::vector<std::vector<int>>& {
    auto it = perms.find(k);
    if (it == perms.end()) {
      std::vector<std::vector<int>> p;
      all_perms(k, p);
      it = perms.emplace(k, std::move(p)).first;
    }
    return it->second;
  };

  for (int level = 1; level < max_vertices; ++level) {
    std::vector<Tree> current;
    current.swap(frontier);
    for (const Tree& t : current) {
      for (const auto& [a, b] : ars) {
        const int mm = t.m + a - 1, nn = t.n + b - 1;
        if (mm > m || nn > n) continue;
        std::vector<Tree> grown;
        // corolla below: its output i replaces input leg j of t
        for (int i = 1; i <= a; ++i)
          for (int j = 1; j <= t.n; ++j)
            grown.push_back(graft(t, i, Tree::corolla(a, b), j).tree);
        // corolla above: t's output i replaces input leg j of the corolla
        for (int i = 1; i <= t.m; ++i)
          for (int j = 1; j <= b; ++j)
            grown.push_back(graft(Tree::corolla(a, b), i, t, j).tree);
        for (const Tree& g : grown)
          for (const auto& so : perms_of(g.m))
            for (const auto& si : perms_of(g.n))
              admit(canonical_form(relabel_legs(g, so, si)).tree);
      }
    }
  }

  std::vector<Tree> out;
  auto it = seen.find({m, n});
  if (it != seen.end())
    for (const auto& [key, t] : it->second)
      if (static_cast<int>(t.verts.size()) <= max_vertices) out.push_back(t);
  std::stable_sort(out.begin(), out.end(),
                   [](const Tree& a, const Tree& b) {
                     return a.verts.size() < b.verts.size();
                   });
  return out;
}

int orientation_parity(const std::vector<int>& from,
                       const std::vector<int>& to) {
  if (from.size() != to.size())
    throw invalid_input("orientation_parity: length mismatch");
  std::map<int, int> pos;
  for (int k = 0; k < static_cast<int>(to.size()); ++k) {
    if (!pos.emplace(to[k], k).second)
      throw invalid_input("orientation_parity: repeated entry");
  }
  std::vector<int> image;
  for (int x : from) {
    auto it = pos.find(x);
    if (it == pos.end())
      throw invalid_input("orientation_parity: words differ as multisets");
    image.push_back(it->second);
  }
  int sign = 1;
  for (size_t k = 0; k < image.size(); ++k)
    for (size_t l = k + 1; l < image.size(); ++l)
      if (image[k] > image[l]) sign = -sign;
  return sign;
}

}  // namespace diocal
