/*
 * dioperad.hpp
 *
 * Sigma-bimodule collections, decorated-tree elements of free dioperads,
 * their normalization (one canonical vertex order, one sign), composition,
 * quadratic presentations with ideal quotients, quadratic duals, twists,
 * and the reduced-tree dimension count.
 *
 * An element is a rational combination of canonical decorated trees. All
 * sign bookkeeping flows through normalize_raw: vertex reordering pays the
 * Koszul sign of the decoration degrees, port reordering acts through the
 * collection's transposition matrices.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exactalg.hpp"
#include "treespace.hpp"

namespace diocal {

enum class Sym { trivial, sign, regular };

/* Generators of one (m,n) arity slot with adjacent-transposition actions. */
struct GenSlot {
  std::vector<std::pair<std::string, int>> gens;  // (name, degree)
  std::vector<SignedMatrix> left;   // s_1..s_{m-1} acting on output labels
  std::vector<SignedMatrix> right;  // s_1..s_{n-1} acting on input labels

  int dim() const { return static_cast<int>(gens.size()); }
};

struct BimoduleCollection {
  std::map<std::pair<int, int>, GenSlot> slots;

  bool has(int m, int n) const { return slots.count({m, n}) > 0; }
  const GenSlot& slot(int m, int n) const;
  std::vector<std::pair<int, int>> support() const;
  int degree(int m, int n, int gen) const;
};

/*
 * Append one generator (or a regular pair `name`, `name'` when a side is
 * Sym::regular, allowed only on 2-leg sides) to slot (m,n).
 */
void add_gen_slot(BimoduleCollection& E, int m, int n, const std::string& name,
                  int degree, Sym out_sym, Sym in_sym);

/* Check the action matrices: involutions, braid, distant and left/right
 * commutation, degree preservation. Throws invalid_input on failure. */
void validate_collection(const BimoduleCollection& E);

/* Action of an arbitrary permutation (one-line) on one generator. */
Vec act_side(const GenSlot& s, bool out_side, const std::vector<int>& sigma,
             int gen);

/* Canonical decorated tree: canonical shape + generator index per vertex. */
struct DecTree {
  Tree shape;
  std::vector<int> dec;
  std::string key;  // tree_key(shape); cached for ordering

  DecTree() = default;
  DecTree(Tree s, std::vector<int> d);
  bool operator<(const DecTree& o) const {
    if (key != o.key) return key < o.key;
    return dec < o.dec;
  }
  bool operator==(const DecTree& o) const {
    return key == o.key && dec == o.dec;
  }
};

using Element = std::map<DecTree, Rat>;

Element& accumulate(Element& x, const DecTree& t, const Rat& c);
Element add(const Element& x, const Element& y);
Element scale(const Element& x, const Rat& c);
bool is_zero(const Element& x);
std::string element_str(const BimoduleCollection& E, const Element& x);

/*
 * Normalize a raw decorated tree (arbitrary vertex order, arbitrary port
 * order) to canonical form. dec[v] indexes the generator at raw vertex v.
 */
Element normalize_raw(const BimoduleCollection& E, const Tree& raw_shape,
                      const std::vector<int>& dec, const Rat& coeff);

Element make_corolla(const BimoduleCollection& E, int m, int n, int gen);

/* Leg relabeling action: out leg l -> sigma_out[l-1], in leg l -> ... */
Element sigma_act(const BimoduleCollection& E, const Element& x,
                  const std::vector<int>& sigma_out,
                  const std::vector<int>& sigma_in);

/*
 * Dioperadic composition: output i of b wires into input j of a, with the
 * five-interval leg relabeling (outputs: b's 1..i-1 | a's | b's i+1..;
 * inputs: a's 1..j-1 | b's | a's j+1..).
 */
Element compose(const BimoduleCollection& E, const Element& a, int i,
                const Element& b, int j);

/* Basis of Free(E)(m,n) restricted to trees with at most max_vertices. */
struct SlotSpace {
  int m = 0, n = 0;
  std::vector<DecTree> basis;
  std::vector<int> degrees;  // total decoration degree per basis element
  std::map<DecTree, int> index;

  int dim() const { return static_cast<int>(basis.size()); }
};

SlotSpace free_slot(const BimoduleCollection& E, int m, int n,
                    int max_vertices);

Vec to_vec(const SlotSpace& s, const Element& x);
Element from_vec(const SlotSpace& s, const Vec& v);

/*
 * Substitute an element of matching arity into vertex v of a canonical
 * decorated tree: replacement leg k attaches to the k-th stored port of
 * v, replacement edges append after t's. Pure substitution; derivation
 * signs are the caller's business.
 */
Element subst_vertex(const BimoduleCollection& E, const DecTree& t, int v,
                     const Element& repl);

/*
 * Single-term substitution for complexes whose basis trees carry one odd
 * suspension per vertex, wedged in stored vertex order. On top of the
 * plain substitution this pays two signs: carrying the replacement past
 * the suspended factors of the vertices stored before v, and reordering
 * the spliced tree into canonical order at suspended degrees (each
 * vertex degree raised by one) instead of the plain ones.
 */
Element subst_vertex_suspended(const BimoduleCollection& E, const DecTree& t,
                               int v, const DecTree& rt, const Rat& rc);

/*
 * Leaf-vertex decomposition: express a canonical decorated tree as a
 * single composition of a corolla with the (relabeled) remainder:
 *
 *  x == koszul * sigma_act( sum_t compose-with-corolla(rest term t), sigma )
 *
 * where the corolla is the peeled vertex w. `lower` records whether the
 * corolla is the lower compose factor (its lone internal edge points up).
 */
struct Peel {
  bool lower = false;
  int a = 0, b = 0, gen = 0;  // peeled corolla arity and decoration
  int i = 0, j = 0;           // compose indices in the reconstruction
  Element rest;               // remainder with contiguous leg labels
  Rat koszul;                 // factor-move sign
  std::vector<int> sigma_out, sigma_in;
};

Peel peel_leaf(const BimoduleCollection& E, const DecTree& t, int w);

/* Reassemble the composition encoded by a Peel (test/eval helper). */
Element peel_reassemble(const BimoduleCollection& E, const Peel& p);

/* Quadratic presentation: generators on (1,2),(2,1); relations in the
 * three-slot window (1,3),(2,2),(3,1). */
struct Presentation {
  std::string name;
  BimoduleCollection E;
  std::map<std::pair<int, int>, std::vector<Element>> relations;
};

void validate_presentation(const Presentation& p);

/* Quotient P(m,n) = Free(E)(m,n) / Ideal<R>(m,n) inside the window. */
struct QuotientSlot {
  SlotSpace ambient;
  EchelonSpan ideal;           // span of the ideal slice
  std::vector<int> basis_ids;  // ambient basis indices lifting a basis
  int dim() const { return static_cast<int>(basis_ids.size()); }
};

QuotientSlot quotient_slot(const Presentation& p, int m, int n,
                           int max_vertices);

/* Reduce an element's coordinate vector modulo the ideal slice. */
Vec quotient_reduce(const QuotientSlot& q, const Element& x);

/* Slotwise dual generators: negated degrees and transposed action
 * matrices. With sign_twist (the default) each side is further twisted
 * by sgn, i.e. sgn (x) dual (x) sgn; without it the actions are the
 * plain transposes. */
BimoduleCollection dual_collection(const BimoduleCollection& E,
                                   bool sign_twist = true);

/*
 * Diagonal of the canonical pairing between the two-vertex slots
 * Free(dual_collection(E))(m,n) and Free(E)(m,n), in the parallel bases.
 * The entry at a basis tree is the product of two combinatorial signs:
 * on each side (outputs, inputs), the parity of sorting the concatenated
 * per-vertex port words into the global order (legs ascending, then
 * internal edges), and the Koszul interleave (-1)^{d_u d_v} from pairing
 * the vertex factors in canonical vertex order. Under a leg transposition
 * both sides transform by an overall -1, so annihilators of symmetric
 * subspaces stay symmetric.
 */
Vec free_pairing_signs(const BimoduleCollection& E, int m, int n);

/* Generators sgn (x) dual (x) sgn; relations = annihilators of R under the
 * free_pairing_signs pairing of the three-slot free spaces. */
Presentation quadratic_dual(const Presentation& p);

enum class Twist { op, shift, lambda, lambda_inverse, angle };

/*
 * op: swap (m,n) slots and both action sides. shift p: degree -= p.
 * lambda: sgn (x) P[2-m-n] (x) sgn. angle p: sgn^p twists, degree += p(n-m).
 */
BimoduleCollection twist(const BimoduleCollection& c, Twist kind, int p = 0);

/*
 * Dimension of the reduced-tree sum at (m,n), vertices decorated by the
 * diamond collection: (1,k) slots from pL dims, (k,1) slots from pR dims.
 */
int underline_free_dim(const std::map<std::pair<int, int>, int>& pL,
                       const std::map<std::pair<int, int>, int>& pR, int m,
                       int n);

}  // namespace diocal
