#pragma once

#include <vector>

#include "chordq/diagram.hpp"

namespace chordq {

// One transversal crossing between taut representatives of two chord
// diagrams drawn jointly on the fat-graph surface. Positions are token
// insertion indices on the canonical component: a crossing on the corner
// between two consecutive letters is recorded as the index of the following
// letter token, so inserting a marker there puts a chord endpoint at the
// crossing (after any markers already sitting on that corner).
struct IntersectionPoint {
    int comp_a;  // component index in the first diagram
    int pos_a;   // token insertion index on that component
    int comp_b;  // component index in the second diagram
    int pos_b;   // token insertion index on that component
    int sign;    // +1 iff (tangent of first, tangent of second) is a
                 // positively oriented frame at the crossing
};

// Crossings between the two diagrams (never within one diagram), with all
// components of both realized together so shared classes stay parallel.
// Signs flip and roles swap under exchanging the arguments.
std::vector<IntersectionPoint> intersections(const ChordDiagram& a,
                                             const ChordDiagram& b);

// Goldman-type Poisson bracket on chord diagrams: the signed sum, over
// crossings p of taut representatives, of the diagram made of all components
// of both inputs with one new chord joining the two strands at p. Every term
// has degree deg a + deg b + 1; the bracket is antisymmetric and satisfies
// the Jacobi and Leibniz identities modulo the four-term relations.
DiagramSum bracket(const ChordDiagram& a, const ChordDiagram& b);

// Bilinear extension.
DiagramSum bracket(const DiagramSum& a, const DiagramSum& b);

}  // namespace chordq
