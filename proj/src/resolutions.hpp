/*
 * resolutions.hpp
 *
 * The three explicit free resolutions with closed-form differentials on
 * generator corollas: the odd-bracket tower (one generator per slot,
 * skew outputs, degree 2-m), the field tower (a regular output pair on
 * (2,n) and an odd (1,n) line), and the even tower (both sides
 * symmetric, degree 3-2m). The differential extends to decorated trees
 * as a graded derivation and squares to zero; reports run that check
 * exhaustively and compare the top tree layer against the quadratic
 * quotients the towers resolve.
 */
#pragma once

#include "dioperad.hpp"

namespace diocal {

/*
 * Generator collection of one resolution tower. `id` is the name of
 * the quadratic presentation the tower resolves (lie1bi, tf or liebi);
 * slots exist for every generator arity (m,n) with m+n <= window.
 */
struct Resolution {
  std::string id;
  int window = 0;
  BimoduleCollection E;
};

/* Build the generator collection for lie1bi, tf or liebi. The window
 * must cover at least the trivalent generators (m+n = 3). */
Resolution make_resolution(const std::string& id, int window);

/*
 * Differential of the (m,n) generator corolla of the lie1bi tower: the
 * sum over output splittings I1|I2 and input splittings J1|J2 (I2 and
 * J1 nonempty) of the two-vertex tree whose lower vertex carries I1
 * and the edge above J1, and whose upper vertex carries I2 above the
 * edge and J2, signed by the parity of the output shuffle plus
 * |I1||I2|. Splittings whose factor arities fall outside the
 * collection drop out.
 */
Element d_lie1bi(const Resolution& R, int m, int n);

/*
 * Differential of a tf tower generator. For m = 1 the sum runs over
 * input splittings with |J1| >= 2, |J2| >= 1, all coefficients +1. For
 * m = 2 and the identity generator (gen 0) it is the |J1| >= 2,
 * |J2| >= 0 family carrying the output pair on the upper vertex, minus
 * the two families (|J1|, |J2| >= 1) that leave one output leg on the
 * lower vertex; the swap generator (gen 1) is the output transposition
 * of the identity one. The public entry requires n >= 2; the (2,1)
 * generators exist internally with differential zero.
 */
Element d_tf(const Resolution& R, int m, int n, int gen);

/* Differential of the (m,n) generator corolla of the liebi tower: the
 * same splitting sum as d_lie1bi with every coefficient +1. */
Element d_liebi(const Resolution& R, int m, int n);

/* Differential of any generator of R; zero where the closed form has
 * no admissible splitting (including the internal tf (2,1) pair). */
Element resolution_d_gen(const Resolution& R, int m, int n, int gen);

/* Extend the generator differential to a decorated-tree element as a
 * graded derivation: vertex v is expanded with the sign of carrying d
 * past the decorations stored before v. */
Element resolution_differential(const Resolution& R, const Element& x);

/* One generator's d^2 check: the arity, the generator index, the term
 * count of d(gen), and whether d(d(gen)) vanished. */
struct D2Line {
  int m = 0, n = 0, gen = 0;
  size_t terms = 0;
  bool ok = false;
};

struct D2Report {
  std::string id;
  int window = 0;
  std::vector<D2Line> lines;
  bool all_zero = false;
};

/* Run d^2 on every generator corolla with m+n <= window. */
D2Report resolution_d2_report(const Resolution& R);

/* One slot of the top-layer comparison: trees of maximal vertex count
 * modulo the image of d against the quadratic quotient. */
struct TopLayerSlot {
  int m = 0, n = 0;
  int top_dim = 0;
  int coker_dim = 0;
  int quotient_dim = 0;
  bool ok = false;
};

struct TopLayerReport {
  std::string id;
  int window = 0;
  std::vector<TopLayerSlot> slots;
  bool ok = false;
};

/*
 * Check that the tower resolves its presentation at the tree level: at
 * every slot with 3 <= m+n <= window, the trees of maximal vertex
 * count modulo the differential's image have the dimension of the
 * quadratic quotient. (For liebi the tower resolves the once-twisted
 * presentation, whose quotients have the same dimensions.)
 */
TopLayerReport resolution_to_presentation_check(const Resolution& R,
                                                int window);

}  // namespace diocal
