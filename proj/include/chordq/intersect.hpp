#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "chordq/rational.hpp"
#include "chordq/surface.hpp"

namespace chordq {

// Taut realization of a family of loops on the fat-graph surface.
//
// The vertex disk is drawn as the upper half-plane; gate g occupies a short
// interval of the x-axis around x = slot(g), so vertex_order reads left to
// right (counterclockwise around the disk). A loop with cyclic letters
// l_0 .. l_{k-1} leaves the disk through gate l_j, runs through ribbon |l_j|,
// and returns through gate -l_j; the corner between letters l_j and l_{j+1}
// crosses the disk as a geodesic semicircle. Strands inside one ribbon run
// parallel (ribbon transport mirrors offsets: x = slot(+i) + t matches
// x = slot(-i) - t), so every crossing lies in the disk, and two corners
// cross exactly when their endpoint pairs interleave on the axis. For two
// interleaved directed semicircles the frame (tangent of A, tangent of B) at
// the crossing is positively oriented iff
//     dir(A) * dir(B) * sign(mid(A) - mid(B)) = +1,
// where dir = +1 for left-to-right travel and mid is the endpoint midpoint.

struct Passage {
    Rat from;  // x where the strand re-enters the disk (gate -l_j)
    Rat to;    // x where it leaves again (gate l_{j+1})
};

struct Realization {
    SurfacePtr surface;
    std::vector<Word> loops;                    // cyclic words, as given
    std::vector<std::vector<Passage>> corners;  // one passage per letter
};

// Strands through one ribbon, keyed by edge index, as (loop, position) pairs.
using EdgeStrands = std::map<int, std::vector<std::pair<int, int>>>;

// Traversals of each ribbon in structural (loop, position) order.
EdgeStrands edge_strands(const std::vector<Word>& loops);

// Realize with the divergence comparator: strands whose itineraries agree
// stay parallel and split without crossing where they first diverge, so
// parallel copies of a loop never cross and the realization is taut on the
// configurations exercised by the tests. Corners re-entering their own gate
// (unreducible return words pinned by chords) fall back to a deterministic
// structural order.
Realization realize(SurfacePtr surface, std::vector<Word> loops);

// Realize with explicit per-ribbon strand orders (left-to-right at gate +i);
// ribbons missing from `orders` use structural order. Lets tests compare the
// comparator's crossing count against the minimum over all orders.
Realization realize_with_orders(SurfacePtr surface, std::vector<Word> loops,
                                const EdgeStrands& orders);

struct CrossingPoint {
    int corner_a;  // corner index on the first loop
    int corner_b;  // corner index on the second loop
    int sign;      // +1 iff (tangent of first, tangent of second) is positive
};

// Transversal crossings between two realized loops; for loop_a == loop_b,
// unordered pairs of distinct corners reported once with corner_a < corner_b.
std::vector<CrossingPoint> crossings(const Realization& r, int loop_a, int loop_b);

// Crossing count over all unordered loop pairs, self-crossings included.
std::size_t total_crossings(const Realization& r);

}  // namespace chordq
