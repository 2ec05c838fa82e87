#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "chordq/rational.hpp"
#include "chordq/surface.hpp"

namespace chordq {

// One position on a diagram component: either a free-group letter or a chord
// endpoint marker. Marker value is the chord label; each label appears at
// exactly two markers across the whole diagram.
struct Token {
    bool marker = false;
    int value = 0;

    friend auto operator<=>(const Token&, const Token&) = default;
};

inline Token letter_token(Letter l) { return Token{false, l}; }
inline Token marker_token(int chord) { return Token{true, chord}; }

// Cyclic list of tokens describing one loop component.
using TokenList = std::vector<Token>;

// "x1 #1 x2"; the empty component prints as "()".
std::string component_str(const TokenList& comp);
TokenList component_parse(const std::string& text, int rank = 0);

// Chord diagram on a surface: loops labelled by free homotopy data (arc words
// between chord endpoints), up to rotation of each loop, reordering of loops,
// relabelling of chords, and gauge moves. A gauge move at chord k by group
// element g multiplies the arc entering each endpoint of k by g on the right
// and the arc leaving it by g^-1 on the left. Construction canonicalizes, so
// equal diagrams compare equal bytewise.
class ChordDiagram {
public:
    ChordDiagram(SurfacePtr surface, std::vector<TokenList> components);

    static ChordDiagram parse(SurfacePtr surface, const std::vector<std::string>& components);
    static ChordDiagram empty(SurfacePtr surface);

    const SurfacePtr& surface() const { return surface_; }
    const std::vector<TokenList>& components() const { return components_; }
    int degree() const { return degree_; }  // number of chords
    const std::string& serial() const { return serial_; }
    std::vector<std::string> component_strings() const;

    // Components grouped by chord-connectivity; chordless loops are singletons.
    std::vector<std::vector<int>> pieces() const;

    bool operator==(const ChordDiagram& o) const {
        return serial_ == o.serial_ && surface_->same_as(*o.surface_);
    }
    bool operator!=(const ChordDiagram& o) const { return !(*this == o); }
    bool operator<(const ChordDiagram& o) const;

private:
    ChordDiagram() = default;

    SurfacePtr surface_;
    std::vector<TokenList> components_;
    int degree_ = 0;
    std::string serial_;
};

// Disjoint union followed by canonicalization; degrees add.
ChordDiagram multiply(const ChordDiagram& a, const ChordDiagram& b);

// Finite rational linear combination of diagrams on one surface.
class DiagramSum {
public:
    DiagramSum() = default;
    explicit DiagramSum(const ChordDiagram& d, const Rat& c = 1) { add(d, c); }

    void add(const ChordDiagram& d, const Rat& c);
    DiagramSum& operator+=(const DiagramSum& o);
    DiagramSum& operator-=(const DiagramSum& o);
    DiagramSum& scale(const Rat& c);

    const std::map<ChordDiagram, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool operator==(const DiagramSum& o) const { return terms_ == o.terms_; }

private:
    std::map<ChordDiagram, Rat> terms_;
};

DiagramSum operator+(DiagramSum a, const DiagramSum& b);
DiagramSum operator-(DiagramSum a, const DiagramSum& b);
DiagramSum operator*(const Rat& c, DiagramSum a);

// Bilinear extension of diagram multiplication.
DiagramSum multiply(const DiagramSum& a, const DiagramSum& b);

// Sum of diagrams graded by chord count and truncated above `truncation`.
// part(d) may contain only degree-d diagrams.
class GradedSeries {
public:
    explicit GradedSeries(int truncation);

    int truncation() const { return truncation_; }
    const DiagramSum& part(int d) const;
    void add(int d, const ChordDiagram& diagram, const Rat& c);
    void add_sum(int d, const DiagramSum& sum);

    GradedSeries& operator+=(const GradedSeries& o);
    GradedSeries& operator-=(const GradedSeries& o);
    GradedSeries& scale(const Rat& c);
    bool is_zero() const;
    int lowest_nonzero() const;  // -1 when zero

    bool operator==(const GradedSeries& o) const;

    // 1 * empty diagram in degree 0.
    static GradedSeries unit(const SurfacePtr& surface, int truncation);

private:
    int truncation_;
    std::vector<DiagramSum> parts_;
};

GradedSeries multiply(const GradedSeries& a, const GradedSeries& b);

}  // namespace chordq
