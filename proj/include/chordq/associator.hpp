#pragma once

#include <map>
#include <string>
#include <vector>

#include "chordq/diagram.hpp"
#include "chordq/tangle.hpp"

namespace chordq {

// A matching of an even number of linearly ordered points along a folded
// strand (up one side of a local extremum and down the other).  Pairs are
// stored (a, b) with a < b, sorted by first entry, and must cover
// 0..2m-1 exactly.  The degree of a matching is its pair count.
using FoldMatching = std::vector<std::pair<int, int>>;

FoldMatching normalize_fold_matching(FoldMatching m);
std::vector<FoldMatching> fold_matchings(int degree);

// Formal rational series of fold matchings, truncated by degree; the value
// attached to a local maximum or minimum of a strand.
struct FoldSeries {
    int truncation = 0;
    std::map<FoldMatching, Rat> terms;

    void add(FoldMatching m, const Rat& c);
    Rat coefficient(const FoldMatching& m) const;
    bool operator==(const FoldSeries& o) const = default;
};

// The data driving the universal invariant: a re-bracketing series Phi on
// three strands constrained by the pentagon and both hexagon path
// equalities, the crossing series R = exp(c/2) on two strands, and the
// cap/cup corrections making the straightening composites trivial.  Solved
// degree by degree over the rationals; immutable once produced.
struct AssociatorData {
    ChordTangle phi;     // 3 strands, even, unit leading term
    ChordTangle r;       // 2 strands, exp(c/2)
    FoldSeries cap_e;    // correction at each local maximum
    FoldSeries cup_i;    // correction at each local minimum
    int truncation = 0;
    bool rotation_symmetric = true;
    std::vector<std::string> equations;  // one line per identity solved/verified
};

struct AssociatorOptions {
    bool rotation_symmetry = true;  // require phi invariant under the half turn
    int max_truncation = 4;         // guard against accidental huge solves
    std::string cache_dir;          // empty: never touch the disk
};

// Degree-by-degree solution of the defining identities: (pentagon) the two
// re-bracketing paths ((ab)c)d -> a(b(cd)) compose to equal series;
// (hexagons) crossing a bracketed pair over a third strand equals the
// composite of elementary crossings and re-bracketings, for both crossing
// signs; (zig-zag) the cap/cup straightening composites equal the bare
// strand modulo four-term relations.  Throws InternalError naming the
// failing equation if some degree admits no solution under the constraints.
AssociatorData solve_associator(int truncation, const AssociatorOptions& options = {});

// Exact residual diagnostics; all must vanish for a valid solution.
ChordTangle pentagon_defect(const AssociatorData& a);
ChordTangle hexagon_defect(const AssociatorData& a, int sign);

// The straightening composite of a bent strand (three monotone pieces),
// rendered as chord diagrams on a based loop: the loop carries the
// generator of a once-punctured disk as a basepoint mark, so rotations
// cannot shuffle the linear order.  `fold_on_left` selects which side holds
// the cap.  The result minus the bare loop must vanish modulo four-term
// relations.
DiagramSum zigzag_composite(const AssociatorData& a, bool fold_on_left);
DiagramSum zigzag_target(const AssociatorData& a);
bool zigzag_identity_holds(const AssociatorData& a);

}  // namespace chordq
