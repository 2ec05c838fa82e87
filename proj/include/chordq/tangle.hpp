#pragma once

#include <map>
#include <utility>
#include <vector>

#include "chordq/linkword.hpp"
#include "chordq/rational.hpp"

namespace chordq {

// Horizontal chord tangles on k vertical strands: the graded algebra
// generated by single chords t_ab between distinct strands, modulo the
// infinitesimal braid relations
//
//     t_ab t_cd = t_cd t_ab              ({a,b} and {c,d} disjoint),
//     [t_ab, t_ac + t_bc] = 0            (a, b, c distinct),
//
// truncated by chord count.  Elements are stored in a Poincare-Birkhoff-
// Witt normal form built on the splitting of the algebra by highest strand:
// a product of generators is normal when the maximal strand of each factor
// is non-increasing left to right, and factors sharing the same maximal
// strand form a free (unordered by no relation) block.  Rewriting a
// neighboring pair t_ab t_aw (b < w) to t_aw t_ab + [t_aw, t_bw] moves
// every word into that basis; the normal words are linearly independent,
// so the result does not depend on the rewriting order.  Graded dimensions
// count words with non-increasing block structure: for k strands the
// generating series is 1 / ((1-q)(1-2q)...(1-(k-1)q)).
//
// Words read bottom to top: in a product a * b, the factor a sits below b.

// A single chord between two strands, stored with first < second (1-based).
using ChordGen = std::pair<int, int>;
// A product of chords, leftmost factor lowest.
using ChordWord = std::vector<ChordGen>;

class ChordTangle {
public:
    // The zero element on `strands` upward strands, left-comb bracketed.
    ChordTangle() = default;
    ChordTangle(int strands, int truncation);
    static ChordTangle unit(int strands, int truncation);

    int strands() const { return strands_; }
    int truncation() const { return truncation_; }
    const std::vector<int>& orientations() const { return orientations_; }
    const Tree& bottom() const { return bottom_; }
    const Tree& top() const { return top_; }
    void set_boundaries(Tree bottom, Tree top);
    void set_orientations(std::vector<int> orientations);

    // Terms of the normal form, keyed by normal words.
    const std::map<ChordWord, Rat>& terms() const { return terms_; }
    Rat coefficient(const ChordWord& word) const;

    // Adds c times the (arbitrary) word, normalizing it; degrees above the
    // truncation are dropped.
    void add_term(const ChordWord& word, const Rat& c);

    ChordTangle& operator+=(const ChordTangle& o);
    ChordTangle& operator-=(const ChordTangle& o);
    ChordTangle& scale(const Rat& c);

    // Composition: this tangle below, `above` on top of it.  Requires equal
    // strand data and this->top() == above.bottom().
    ChordTangle then(const ChordTangle& above) const;

    // Series inverse; the unit coefficient must be nonzero.
    ChordTangle inverse() const;

    ChordTangle truncated(int truncation) const;
    ChordTangle graded_part(int degree) const;
    int min_degree() const;  // smallest degree with a term; -1 if zero
    bool is_zero() const { return terms_.empty(); }
    bool is_even() const;

    // Doubles the given strand (1-based): the copies take positions
    // strand, strand+1; every chord endpoint on it is replaced by the sum
    // of endpoints on the two copies; both boundary trees replace the
    // corresponding leaf by a cherry.
    ChordTangle cable(int strand) const;

    // Maps strand s of this tangle to image[s-1] (1-based values) among
    // `strands` strands of the result.  Unhit strands carry no chords and
    // point upward; boundaries reset to the left comb.
    ChordTangle relabel(const std::vector<int>& image, int strands) const;

    // Half-turn of the picture: reverses the vertical order of the chords
    // and reverses the strand order; boundaries mirror and swap.  Chord
    // data only — orientations are kept upward.
    ChordTangle rotate180() const;

    bool operator==(const ChordTangle& o) const;
    bool operator!=(const ChordTangle& o) const { return !(*this == o); }

private:
    int strands_ = 0;
    int truncation_ = 0;
    std::vector<int> orientations_;
    Tree bottom_;
    Tree top_;
    std::map<ChordWord, Rat> terms_;
};

ChordTangle operator+(ChordTangle a, const ChordTangle& b);
ChordTangle operator-(ChordTangle a, const ChordTangle& b);
ChordTangle operator*(const Rat& c, ChordTangle a);

// exp of a tangle with no constant term, truncated.
ChordTangle exp_series(const ChordTangle& x);

// All normal words of the given degree on k strands, in a fixed order.
std::vector<ChordWord> normal_chord_words(int strands, int degree);

}  // namespace chordq
