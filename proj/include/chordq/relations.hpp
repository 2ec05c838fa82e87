#pragma once

#include <cstddef>

#include "chordq/diagram.hpp"

namespace chordq {

// Four-term relations anchored in d. One anchor is an ordered pair of chord
// endpoints sitting next to each other on a component with nothing between
// them. Sliding the first endpoint across the second and, alternatively,
// re-attaching it on either side of the second chord's other endpoint gives
// the four terms; the holonomy functional kills every such combination for
// any GL(n)/SL(n) context (exercised in the tests), which pins the signs.
std::vector<DiagramSum> four_t_relations(const ChordDiagram& d);

struct FourTOptions {
    std::size_t max_diagrams = 50000;  // cap on the explored diagram set
    int extra_letters = 2;             // slack over the support's letter count
};

// Exact congruence certificate: reduces a - b against the row space of the
// four-term relations reachable from the supports. Sliding an endpoint can
// lengthen arc words in canonical form, so the search only expands diagrams
// whose letter count stays within `extra_letters` of the largest support
// term; relation rows may still mention longer diagrams as unexpanded
// columns. Returns true as soon as a - b reduces to zero (a proof of
// congruence); false means no certificate was found in the explored
// subspace. Throws ResourceError when the diagram cap is hit first.
bool equal_mod_4T_exact(const DiagramSum& a, const DiagramSum& b, FourTOptions options = {});

// Numeric congruence test on a fixed battery of seeded contexts
// (gl1, gl2, gl3, sl2; two seeds each).
bool equal_mod_4T_numeric(const DiagramSum& a, const DiagramSum& b, double tolerance = 1e-9);
bool equal_mod_4T_numeric(const GradedSeries& a, const GradedSeries& b, double tolerance = 1e-9);

// Largest absolute evaluation difference of a - b over the same battery.
double mod_4T_numeric_defect(const DiagramSum& a, const DiagramSum& b);

}  // namespace chordq
