/*
 * cobar.hpp
 *
 * The cobar-dual complex of a quadratic presentation: reduced trees
 * decorated by duals of the quotient bases, the vertex-expansion
 * differential, slot cohomology by tree grading, and the window
 * Koszulness verdict.
 */
#pragma once

#include "dioperad.hpp"

namespace diocal {

/*
 * Dualized composition data of a presentation up to an arity cap.
 *
 * Slot (a,b) of `gens` holds the duals of the chosen quotient basis at
 * (a,b), placed in degree 3-a-b-d with sign-flipped transposed action
 * matrices; these are the generator degrees of the complex. The (1,1)
 * slot is zero, so every reduced decorated tree is a basis vector.
 *
 * A cochain is a decorated tree with one odd desuspension per vertex,
 * wedged in stored vertex order. The decorations live in `work`, the
 * untwisted dual collection (degree -d, plain transposed actions),
 * where the dualized cocomposition has degree zero; the arity shifts
 * and sgn twists of `gens` are the suspension line's own weight and
 * equivariance, and surface only as the explicit suspended-order signs
 * inside the differential.
 *
 * `prim` is the quotient collection itself (plain degrees, quotient
 * action), the domain of the structure constants. `d_gen` holds the
 * decoration part of each dual generator's differential: its
 * coefficient on a two-vertex tree S is the coordinate of the
 * generator's primal mate in the quotient evaluation of S, times the
 * sign of desuspending the two factors in stored order.
 */
struct CobarDual {
  Presentation p;
  int arity_cap = 3;
  BimoduleCollection gens;
  BimoduleCollection work;
  BimoduleCollection prim;
  std::map<std::pair<int, int>, QuotientSlot> quotients;
  std::map<std::pair<int, int>, std::vector<Element>> d_gen;
};

/* Dualize every quotient slot with a+b <= arity_cap. */
CobarDual build_cobar_dual(const Presentation& p, int arity_cap);

/* Expand each vertex by its generator differential. Each expansion
 * substitutes the two-vertex terms through subst_vertex_suspended,
 * which pays the signs of the per-vertex suspension line; the
 * cocomposition itself is sign-free since it has degree zero in
 * `work`. */
Element cobar_differential(const CobarDual& D, const Element& x);

/*
 * One (m,n) slot of the complex, graded by vertex count: a k-vertex tree
 * sits in tree grading k+2-m-n, so the corolla opens the complex at
 * 3-m-n and trivalent trees close it at 0.
 */
struct CobarSlot {
  int m = 0, n = 0;
  SlotSpace space;
  std::map<int, std::vector<int>> layers;  // tree grading -> basis ids
  std::map<int, SignedMatrix> d;           // matrix from grading g to g+1
};

CobarSlot build_cobar(const CobarDual& D, int m, int n);

/* dim H^g for each tree grading g of the slot. */
std::map<int, int> cobar_cohomology(const CobarSlot& s);

struct KoszulSlot {
  int m = 0, n = 0;
  std::map<int, int> h;  // tree grading -> cohomology dimension
  int dual_dim = 0;      // quadratic-dual quotient dimension at (m,n)
  bool ok = false;       // negative gradings vanish and H^0 matches
};

struct KoszulReport {
  std::string name;
  int window = 0;
  std::vector<KoszulSlot> slots;
  bool koszul_in_window = false;
};

/* Run the complex on every slot with 3 <= m+n <= window. */
KoszulReport koszulness_report(const Presentation& p, int window);

}  // namespace diocal
