/*
 * presets.hpp
 *
 * The stock quadratic presentations: lie, lie1bi, liebi, tf and the two
 * one-generator tf variants. Relation lists are emitted Sigma-closed
 * (echelon basis of the orbit span) so every preset passes
 * validate_presentation as is.
 */
#pragma once

#include "dioperad.hpp"

namespace diocal {

/* Echelon basis of the span of `rels` together with all leg relabelings. */
std::vector<Element> orbit_close(const BimoduleCollection& E, int m, int n,
                                 const std::vector<Element>& rels);

Presentation preset_lie();     // even bracket, inputs sign-symmetric
Presentation preset_lie1bi();  // odd bracket + even cobracket
Presentation preset_liebi();   // even bracket + even cobracket (both sign)
Presentation preset_tf();      // odd bracket + regular (2,1) pair
Presentation preset_tf_skew(); // odd bracket + skew (2,1) generator
Presentation preset_tf_sym();  // odd bracket + symmetric (2,1) generator

Presentation preset_by_name(const std::string& name);

}  // namespace diocal
