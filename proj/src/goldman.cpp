#include "chordq/goldman.hpp"

#include <cstddef>
#include <map>
#include <utility>

#include "chordq/errors.hpp"
#include "chordq/intersect.hpp"

namespace chordq {

namespace {

// A chord of a diagram maps both of its endpoints to a single surface point,
// so a generic position pinches the two marked strands together. On top of
// the taut realization this is modelled by a "finger": the marked point of
// one endpoint is dragged across the disk to the anchor of the other along a
// geodesic arc. The finger's two antiparallel strands cross other curves in
// pairs with opposite signs; those pairs are exactly what the four-term
// relations need in order to cancel, so they must be enumerated along with
// the taut crossings. Marker anchors cluster at the entry end of their
// corner arc, ordered like the tokens, at infinitesimal offsets; coordinates
// are rationals extended by a formal epsilon, compared lexicographically.

struct EC {
    Rat x;
    long e = 0;  // coefficient of epsilon
};

bool ec_less(const EC& a, const EC& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.e < b.e;
}

// directed geodesic arc across the disk, identified by its endpoints
struct Span {
    EC from, to;
};

int span_dir(const Span& s) { return ec_less(s.from, s.to) ? 1 : -1; }

bool strictly_inside(const EC& p, const Span& s) {
    const EC& lo = ec_less(s.from, s.to) ? s.from : s.to;
    const EC& hi = ec_less(s.from, s.to) ? s.to : s.from;
    return ec_less(lo, p) && ec_less(p, hi);
}

bool spans_cross(const Span& a, const Span& b) {
    return strictly_inside(b.from, a) != strictly_inside(b.to, a);
}

// +1 iff (tangent of a, tangent of b) at the crossing is positively
// oriented; crossing arcs never have equal endpoint sums
int frame_sign(const Span& a, const Span& b) {
    EC ma{Rat(a.from.x + a.to.x), a.from.e + a.to.e};
    EC mb{Rat(b.from.x + b.to.x), b.from.e + b.to.e};
    return span_dir(a) * span_dir(b) * (ec_less(mb, ma) ? 1 : -1);
}

struct CompGeometry {
    Word letters;
    std::vector<int> letter_tokens;  // token index of each letter
    std::vector<int> corner_insert;  // insertion index for a taut crossing
    std::map<int, EC> anchors;       // marker token -> geometric anchor
};

CompGeometry scan_component(const TokenList& comp) {
    CompGeometry g;
    for (std::size_t t = 0; t < comp.size(); ++t) {
        if (!comp[t].marker) {
            g.letters.push_back(comp[t].value);
            g.letter_tokens.push_back(static_cast<int>(t));
        }
    }
    const std::size_t k = g.letter_tokens.size();
    g.corner_insert.resize(k);
    for (std::size_t j = 0; j < k; ++j)
        g.corner_insert[j] = g.letter_tokens[(j + 1) % k];
    return g;
}

// anchor markers at the entry end of their corner arc, in traversal order
void place_anchors(CompGeometry& g, const TokenList& comp,
                   const std::vector<Passage>& corners, const Rat& private_spot) {
    const std::size_t n = comp.size();
    if (g.letters.empty()) {
        // a trivial loop sits in its own spot away from every arc; its
        // markers line up there in token order
        long k = 0;
        for (std::size_t t = 0; t < n; ++t)
            if (comp[t].marker) g.anchors[static_cast<int>(t)] = EC{private_spot, ++k};
        return;
    }
    for (std::size_t j = 0; j < g.letters.size(); ++j) {
        const int dir = corners[j].from < corners[j].to ? 1 : -1;
        long k = 0;
        for (std::size_t step = 1; step <= n; ++step) {
            const std::size_t t = (g.letter_tokens[j] + step) % n;
            if (!comp[t].marker) break;
            g.anchors[static_cast<int>(t)] = EC{corners[j].from, dir * ++k};
        }
    }
}

struct Arc {
    int comp;       // component index within its diagram
    int insert_at;  // token insertion index for a crossing on this arc
    Span span;
};

struct Finger {
    int comp;  // component carrying the dragged endpoint
    int tok;   // dragged marker's token index: crossings on the way out
               // insert at tok, crossings on the way back at tok + 1
    Span rho;
};

struct Side {
    std::vector<CompGeometry> comps;
    std::vector<Arc> arcs;
    std::vector<Finger> fingers;
};

void build_side(Side& side, const std::vector<TokenList>& components,
                const Realization& r, std::size_t loop_base, int& private_slot) {
    for (std::size_t c = 0; c < components.size(); ++c) {
        CompGeometry& g = side.comps[c];
        place_anchors(g, components[c], r.corners[loop_base + c],
                      Rat(-2 - private_slot++));
        for (std::size_t j = 0; j < g.letters.size(); ++j) {
            const Passage& p = r.corners[loop_base + c][j];
            side.arcs.push_back(Arc{static_cast<int>(c), g.corner_insert[j],
                                    Span{EC{p.from, 0}, EC{p.to, 0}}});
        }
    }
    // one finger per chord, dragging the endpoint with the smaller
    // (component, token) to the anchor of the other
    std::map<int, std::vector<std::pair<int, int>>> chords;
    for (std::size_t c = 0; c < components.size(); ++c)
        for (std::size_t t = 0; t < components[c].size(); ++t)
            if (components[c][t].marker)
                chords[components[c][t].value].push_back(
                    {static_cast<int>(c), static_cast<int>(t)});
    for (const auto& [label, ends] : chords) {
        const auto& [c1, t1] = ends.front();
        const auto& [c2, t2] = ends.back();
        side.fingers.push_back(Finger{
            c1, t1, Span{side.comps[c1].anchors.at(t1), side.comps[c2].anchors.at(t2)}});
    }
}

}  // namespace

std::vector<IntersectionPoint> intersections(const ChordDiagram& a,
                                             const ChordDiagram& b) {
    if (!a.surface()->same_as(*b.surface()))
        throw InvalidArgument("cannot intersect diagrams on different surfaces");

    Side sa, sb;
    std::vector<Word> loops;
    for (const TokenList& c : a.components()) {
        sa.comps.push_back(scan_component(c));
        loops.push_back(sa.comps.back().letters);
    }
    for (const TokenList& c : b.components()) {
        sb.comps.push_back(scan_component(c));
        loops.push_back(sb.comps.back().letters);
    }

    Realization r = realize(a.surface(), std::move(loops));

    int private_slot = 0;
    build_side(sa, a.components(), r, 0, private_slot);
    build_side(sb, b.components(), r, sa.comps.size(), private_slot);

    std::vector<IntersectionPoint> out;

    // taut crossings between the two diagrams' curves
    const int na = static_cast<int>(sa.comps.size());
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < static_cast<int>(sb.comps.size()); ++j) {
            for (const CrossingPoint& p : crossings(r, i, na + j)) {
                out.push_back(IntersectionPoint{i, sa.comps[i].corner_insert[p.corner_a],
                                                j, sb.comps[j].corner_insert[p.corner_b],
                                                p.sign});
            }
        }
    }

    // fingers of one diagram against the other diagram's arcs: each
    // geometric crossing is a pair of strand crossings with opposite signs,
    // inserted just before and just after the dragged marker
    for (const Finger& f : sa.fingers) {
        for (const Arc& arc : sb.arcs) {
            if (!spans_cross(f.rho, arc.span)) continue;
            const int s = frame_sign(f.rho, arc.span);
            out.push_back(IntersectionPoint{f.comp, f.tok, arc.comp, arc.insert_at, s});
            out.push_back(
                IntersectionPoint{f.comp, f.tok + 1, arc.comp, arc.insert_at, -s});
        }
    }
    for (const Arc& arc : sa.arcs) {
        for (const Finger& f : sb.fingers) {
            if (!spans_cross(arc.span, f.rho)) continue;
            const int s = frame_sign(arc.span, f.rho);
            out.push_back(IntersectionPoint{arc.comp, arc.insert_at, f.comp, f.tok, s});
            out.push_back(
                IntersectionPoint{arc.comp, arc.insert_at, f.comp, f.tok + 1, -s});
        }
    }

    // finger against finger: two antiparallel strands on each side give four
    // crossings
    for (const Finger& fa : sa.fingers) {
        for (const Finger& fb : sb.fingers) {
            if (!spans_cross(fa.rho, fb.rho)) continue;
            const int s = frame_sign(fa.rho, fb.rho);
            for (int da = 0; da < 2; ++da)
                for (int db = 0; db < 2; ++db)
                    out.push_back(IntersectionPoint{fa.comp, fa.tok + da, fb.comp,
                                                    fb.tok + db,
                                                    (da == db ? s : -s)});
        }
    }
    return out;
}

DiagramSum bracket(const ChordDiagram& a, const ChordDiagram& b) {
    const std::vector<IntersectionPoint> points = intersections(a, b);

    // relabel the second diagram's chords above the first's, then one more
    // fresh label for the joining chord
    const int offset = a.degree();
    const int fresh = a.degree() + b.degree() + 1;

    DiagramSum out;
    for (const IntersectionPoint& p : points) {
        std::vector<TokenList> comps;
        comps.reserve(a.components().size() + b.components().size());
        for (const TokenList& c : a.components()) comps.push_back(c);
        for (const TokenList& c : b.components()) {
            TokenList t = c;
            for (Token& tok : t)
                if (tok.marker) tok.value += offset;
            comps.push_back(std::move(t));
        }
        TokenList& first = comps[p.comp_a];
        first.insert(first.begin() + p.pos_a, marker_token(fresh));
        TokenList& second = comps[a.components().size() + p.comp_b];
        second.insert(second.begin() + p.pos_b, marker_token(fresh));
        out.add(ChordDiagram(a.surface(), std::move(comps)), Rat(p.sign));
    }
    return out;
}

DiagramSum bracket(const DiagramSum& a, const DiagramSum& b) {
    DiagramSum out;
    for (const auto& [da, ca] : a.terms()) {
        for (const auto& [db, cb] : b.terms()) {
            DiagramSum term = bracket(da, db);
            term.scale(ca * cb);
            out += term;
        }
    }
    return out;
}

}  // namespace chordq
