/*
 * treespace.hpp
 *
 * Directed genus-0 (m,n)-trees with labeled legs: validation, canonical
 * forms (with relabeling sign data), the reduced-tree predicate, grafting,
 * exhaustive enumeration in an arity window, and orientation-line parity.
 *
 * Flow runs from inputs (bottom) to outputs (top). A tree with m output
 * legs and n input legs has leg labels in exact bijection with {1..m} and
 * {1..n}. Internal edges are directed source -> target.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "exactalg.hpp"

namespace diocal {

/* One attachment point of a vertex: either a labeled leg or an edge id. */
struct Port {
  enum Kind { Leg, Edge } kind;
  int id;  // leg label (1-based) or index into Tree::edges

  bool operator==(const Port&) const = default;
};

struct TreeVertex {
  std::vector<Port> outs;
  std::vector<Port> ins;

  bool operator==(const TreeVertex&) const = default;
};

struct Tree {
  int m = 0;  // number of output legs
  int n = 0;  // number of input legs
  std::vector<TreeVertex> verts;
  std::vector<std::pair<int, int>> edges;  // (source vertex, target vertex)

  bool operator==(const Tree&) const = default;

  static Tree corolla(int m, int n);
  int arity_out(int v) const {
    return static_cast<int>(verts[v].outs.size());
  }
  int arity_in(int v) const { return static_cast<int>(verts[v].ins.size()); }
};

/* Throws invalid_input when the tree violates a structural invariant. */
void validate(const Tree& t);

/*
 * Result of canonicalization. `tree` is the canonical representative;
 * the mapping data lets callers transport signs:
 *   pos_of[v]      canonical index of original vertex v
 *   edge_of[e]     canonical index of original edge e
 *   out_src[v][k]  original out-port position landing in canonical slot k
 *   in_src[v][k]   same for in-ports
 */
struct CanonicalForm {
  Tree tree;
  std::vector<int> pos_of;
  std::vector<int> edge_of;
  std::vector<std::vector<int>> out_src;
  std::vector<std::vector<int>> in_src;
};

CanonicalForm canonical_form(const Tree& t);

/* Stable text encoding of a canonical tree; used for dedup and goldens. */
std::string tree_key(const Tree& canonical);

/*
 * True iff every vertex carries an output leg or >= 2 outgoing internal
 * edges, AND carries an input leg or >= 2 incoming internal edges.
 */
bool is_reduced(const Tree& t);

/*
 * Graft output leg i of `lower` into input leg j of `upper`. Legs relabel
 * by the five-interval convention: outputs (lower 1..i-1, all of upper,
 * lower i+1..) and inputs (upper 1..j-1, all of lower, upper j+1..), each
 * block kept in order and renumbered contiguously. Returns the canonical
 * composed tree and the parity of sorting the concatenated internal-edge
 * word (upper edges, lower edges, new edge) into canonical edge order.
 */
struct GraftResult {
  Tree tree;
  int edge_sign = 1;
};
GraftResult graft(const Tree& upper, int i, const Tree& lower, int j);

/*
 * The grafted tree before canonicalization: vertices listed as (upper's,
 * then lower's), edges as (upper's, lower's, new edge last). Decorated
 * callers canonicalize themselves to collect signs.
 */
Tree graft_raw(const Tree& upper, int i, const Tree& lower, int j);

/* Relabel legs: out label l -> sigma_out[l-1], in label l -> sigma_in[l-1]. */
Tree relabel_legs(const Tree& t, const std::vector<int>& sigma_out,
                  const std::vector<int>& sigma_in);

/*
 * All canonical labeled (m,n)-trees whose vertex arities lie in `arities`,
 * with at most max_vertices vertices, in deterministic order.
 */
std::vector<Tree> enumerate_trees(
    int m, int n, const std::vector<std::pair<int, int>>& arities,
    int max_vertices);

/*
 * Parity of the permutation taking edge word `from` to edge word `to`
 * (equal multisets of distinct entries required).
 */
int orientation_parity(const std::vector<int>& from,
                       const std::vector<int>& to);

}  // namespace diocal
