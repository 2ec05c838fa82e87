#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chordq/diagram.hpp"
#include "chordq/rational.hpp"
#include "chordq/surface.hpp"

namespace chordq {

// Links in (surface) x [0,1] as composable words of elementary
// non-associative tangles. The surface is cut into cells: one designated
// disk cell holding every crossing, cap, cup, and bracketing move; hexagon
// cells that only split bracketed bunches of strands; and one square
// corridor cell per ribbon through which strands run in parallel. A link
// word stores the tangle word of the disk cell (slices read bottom to top,
// starting and ending with no free endpoints except at the very top) plus
// the gate assignment of the top endpoints; the corridor cells close the
// top endpoints in mirrored pairs, which is where the free-homotopy letters
// of the closed components are read off.

// Bracketing of an ordered set of tangle endpoints: full binary tree.
struct Tree {
    std::vector<Tree> kids;  // empty = leaf, otherwise exactly two

    bool leaf() const { return kids.empty(); }
    int leaves() const;

    bool operator==(const Tree&) const = default;
};

Tree leaf_tree();
Tree pair_tree(Tree left, Tree right);
Tree left_comb(int n);
// left comb of left combs, one inner comb per block
Tree comb_of_combs(const std::vector<int>& block_sizes);

// leaves print as '*': "((**)*)"
std::string tree_str(const Tree& t);
Tree tree_parse(const std::string& text);

// whether the two bracketings differ by exactly one association move
// (A(BC)) <-> ((AB)C) applied at a single node
bool one_association_apart(const Tree& a, const Tree& b);

// bracketing path from `from` to `to` through the left-comb normal form;
// excludes `from`, includes `to`, every consecutive pair one move apart
std::vector<Tree> association_path(const Tree& from, const Tree& to);

enum class TangleKind { Identity, Assoc, Cross, Cup, Cap, TrivialSquare, Hexagon };

// One elementary tangle filling the disk cell at one level of the word.
struct Slice {
    TangleKind kind = TangleKind::Identity;
    Tree to;        // Assoc: bracketing after the move
    int pos = 0;    // Cross/Cap: left strand index; Cup: insertion index
    int braid = 1;  // Cross: +1 when the left strand passes over
    int site = 0;   // Cross: chord-site label, 0 for a plain crossing
    int updown = 0; // Cup: orientation of the left new strand (+1 up)

    bool operator==(const Slice&) const = default;
};

// Endpoint data at one interface between slices.
struct LevelState {
    Tree tree;                // bracketing (meaningful when count() > 0)
    std::vector<int> orient;  // +1 strand runs upward here, -1 downward
    std::vector<int> thread;  // strand identity, assigned at the cup

    int count() const { return static_cast<int>(orient.size()); }
};

struct CrossingRef {
    int index;          // position in the word's crossing order
    std::size_t slice;  // slice holding the crossing
    int pos;            // left strand position
    int eps;            // oriented crossing sign: braid * orient_l * orient_r
    int site;           // chord-site label, 0 for routing crossings
};

// A closed component read off the ribbon closure: thread runs separated by
// the ribbon letters they traverse.
struct ClosureEvent {
    int letter = 0;        // nonzero: ribbon traversal contributing a letter
    int thread = -1;       // otherwise: a run along this thread
    bool ascending = true; // run direction: increasing height
};

struct ClosedLink {
    std::vector<std::vector<ClosureEvent>> components;
};

// (cell id, elementary tangle) row of the full cell decomposition listing.
struct CellSlice {
    std::string cell;
    TangleKind kind = TangleKind::Identity;
    Tree bottom;  // bracketing entering the cell
    Tree top;     // bracketing leaving it
    std::string detail;
};

class LinkWord {
public:
    LinkWord() = default;  // empty link, the unit of stacking
    LinkWord(SurfacePtr surface, std::vector<Slice> slices,
             std::vector<int> top_gates);

    const SurfacePtr& surface() const { return surface_; }
    const std::vector<Slice>& slices() const { return slices_; }
    const std::vector<int>& top_gates() const { return top_gates_; }
    bool empty() const { return slices_.empty() && top_gates_.empty(); }

    // interfaces between slices: levels()[k] precedes slice k; the final
    // entry is the top; throws InvalidArgument on any malformed slice
    std::vector<LevelState> levels() const;

    // full validity: every slice interface plus the ribbon closure
    // conditions (gates grouped in vertex order, balanced and mirrored
    // blocks, canonical top bracketing)
    void validate() const;

    std::vector<CrossingRef> crossings() const;

    // copy with the braid of selected crossings replaced; keys are crossing
    // indices, values the new braid sign
    LinkWord with_braids(const std::map<int, int>& overrides) const;

    // mirrored partner of a top endpoint under the ribbon pairing
    int ribbon_partner(int top_position) const;

    // closed components of the ribbon closure, letters in traversal order
    ClosedLink close() const;

    // disk word plus the derived hexagon/corridor rows
    std::vector<CellSlice> cell_slices() const;

    std::string serialize() const;
    static LinkWord parse(const std::string& text);

    bool operator==(const LinkWord& o) const;
    bool operator<(const LinkWord& o) const { return serialize() < o.serialize(); }

private:
    SurfacePtr surface_;
    std::vector<Slice> slices_;
    std::vector<int> top_gates_;
};

// stacking product: a in the lower half, b in the upper half; the merge
// routes b's strands next to a's per gate with every merge crossing b over a
LinkWord stack(const LinkWord& a, const LinkWord& b);

// Rational combination of link words with a certified filtration bound:
// every generator is a crossing-switch alternation of that depth.
class FormalLinkSum {
public:
    FormalLinkSum() = default;
    explicit FormalLinkSum(const LinkWord& w, const Rat& c = 1) { add(w, c); }

    void add(const LinkWord& w, const Rat& c);
    FormalLinkSum& operator+=(const FormalLinkSum& o);
    FormalLinkSum& scale(const Rat& c);

    int filtration_bound() const { return filtration_bound_; }
    void set_filtration_bound(int n) { filtration_bound_ = n; }

    const std::map<std::string, std::pair<LinkWord, Rat>>& terms() const {
        return terms_;
    }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    bool operator==(const FormalLinkSum& o) const;

private:
    int filtration_bound_ = 0;
    std::map<std::string, std::pair<LinkWord, Rat>> terms_;
};

// bilinear stacking; filtration bounds add
FormalLinkSum stack(const FormalLinkSum& a, const FormalLinkSum& b);

// crossing-switch alternation over the chosen crossings: the signed sum
// over all sign assignments, each term weighted by the product of its
// assigned crossing signs; filtration bound = number of crossings chosen
FormalLinkSum nabla(const LinkWord& w, const std::vector<int>& crossing_ids);

struct CompiledDiagram {
    LinkWord word;
    std::vector<int> site_ids;  // crossing indices of the chord sites,
                                // ordered by chord label
};

// a link word in standard position projecting to the diagram: components
// routed through the ribbon corridors of their arc words, every chord
// realized as a marked site crossing in the disk cell
CompiledDiagram compile_standard_position(const ChordDiagram& d);

// alternate the site crossings of the standard-position word: 2^deg terms
// with filtration bound deg
FormalLinkSum lambda_compile(const ChordDiagram& d);

// reconstruct the chord diagram whose chords sit at the word's site
// crossings (inverse of compile_standard_position up to canonical form)
ChordDiagram diagram_of_sites(const LinkWord& w);

}  // namespace chordq
