#include "chordq/relations.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

#include "chordq/errors.hpp"
#include "chordq/linalg.hpp"
#include "chordq/moduli.hpp"

namespace chordq {

namespace {

struct Endpoint {
    int comp;
    int idx;
};

// Rebuild the diagram with the slider endpoint removed and re-inserted next
// to the target endpoint. `after` selects the side in component orientation.
ChordDiagram reattach(const SurfacePtr& surface, const std::vector<TokenList>& comps,
                      Endpoint slider, Endpoint target, bool after) {
    std::vector<TokenList> out = comps;
    Token moved = out[slider.comp][slider.idx];
    out[slider.comp].erase(out[slider.comp].begin() + slider.idx);
    int t_idx = target.idx;
    if (target.comp == slider.comp && slider.idx < target.idx) --t_idx;
    out[target.comp].insert(out[target.comp].begin() + t_idx + (after ? 1 : 0), moved);
    return ChordDiagram(surface, out);
}

}  // namespace

std::vector<DiagramSum> four_t_relations(const ChordDiagram& d) {
    const auto& comps = d.components();

    // endpoint lookup per chord label
    std::map<int, std::vector<Endpoint>> ends;
    for (int c = 0; c < static_cast<int>(comps.size()); ++c)
        for (int i = 0; i < static_cast<int>(comps[c].size()); ++i)
            if (comps[c][i].marker) ends[comps[c][i].value].push_back({c, i});

    std::vector<DiagramSum> out;
    std::set<std::string> seen;
    for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
        const TokenList& comp = comps[c];
        const int sz = static_cast<int>(comp.size());
        for (int i = 0; i < sz; ++i) {
            int j = (i + 1) % sz;
            if (i == j) continue;
            if (!comp[i].marker || !comp[j].marker) continue;
            // ordered adjacency: endpoint X immediately before endpoint Y;
            // both act as the slider in turn
            for (bool x_slides : {true, false}) {
                Endpoint slider = x_slides ? Endpoint{c, i} : Endpoint{c, j};
                Endpoint b1 = x_slides ? Endpoint{c, j} : Endpoint{c, i};
                int slider_chord = comps[slider.comp][slider.idx].value;
                int pivot_chord = comps[b1.comp][b1.idx].value;
                if (slider_chord == pivot_chord) continue;
                const auto& pe = ends.at(pivot_chord);
                Endpoint b2 = (pe[0].comp == b1.comp && pe[0].idx == b1.idx) ? pe[1] : pe[0];

                DiagramSum rel;
                rel.add(reattach(d.surface(), comps, slider, b1, false), 1);
                rel.add(reattach(d.surface(), comps, slider, b1, true), -1);
                rel.add(reattach(d.surface(), comps, slider, b2, false), 1);
                rel.add(reattach(d.surface(), comps, slider, b2, true), -1);
                if (rel.is_zero()) continue;

                std::string key;
                for (const auto& [term, coeff] : rel.terms())
                    key += rat_str(coeff) + "*" + term.serial() + " + ";
                if (seen.insert(key).second) out.push_back(std::move(rel));
            }
        }
    }
    return out;
}

namespace {

int total_letters(const ChordDiagram& d) {
    int n = 0;
    for (const TokenList& comp : d.components())
        for (const Token& t : comp)
            if (!t.marker) ++n;
    return n;
}

}  // namespace

bool equal_mod_4T_exact(const DiagramSum& a, const DiagramSum& b, FourTOptions options) {
    DiagramSum x = a - b;
    if (x.is_zero()) return true;

    int letter_bound = 0;
    for (const auto& [term, coeff] : x.terms())
        letter_bound = std::max(letter_bound, total_letters(term));
    letter_bound += options.extra_letters;

    std::map<ChordDiagram, int> column;
    std::deque<ChordDiagram> queue;
    auto col_of = [&](const ChordDiagram& d) {
        auto [it, fresh] = column.emplace(d, static_cast<int>(column.size()));
        if (fresh) {
            if (column.size() > options.max_diagrams)
                throw ResourceError("four-term search exceeded " +
                                    std::to_string(options.max_diagrams) + " diagrams");
            if (total_letters(d) <= letter_bound) queue.push_back(d);
        }
        return it->second;
    };

    SparseRow target;
    for (const auto& [term, coeff] : x.terms()) target[col_of(term)] = coeff;

    RowSpace space;
    while (!queue.empty()) {
        ChordDiagram d = std::move(queue.front());
        queue.pop_front();
        for (const DiagramSum& rel : four_t_relations(d)) {
            SparseRow row;
            for (const auto& [term, coeff] : rel.terms()) row[col_of(term)] = coeff;
            if (space.add(std::move(row)) && space.contains(target)) return true;
        }
    }
    return space.contains(std::move(target));
}

double mod_4T_numeric_defect(const DiagramSum& a, const DiagramSum& b) {
    DiagramSum x = a - b;
    if (x.is_zero()) return 0.0;
    SurfacePtr surface = x.terms().begin()->first.surface();
    double worst = 0.0;
    for (const char* name : {"gl1", "gl2", "gl3", "sl2"}) {
        for (std::uint64_t seed : {7001ULL, 7002ULL}) {
            ModuliContext ctx(GroupSpec::parse(name), surface, seed);
            worst = std::max(worst, std::abs(eval_sum(ctx, x)));
        }
    }
    return worst;
}

bool equal_mod_4T_numeric(const DiagramSum& a, const DiagramSum& b, double tolerance) {
    return mod_4T_numeric_defect(a, b) <= tolerance;
}

bool equal_mod_4T_numeric(const GradedSeries& a, const GradedSeries& b, double tolerance) {
    if (a.truncation() != b.truncation()) throw InvalidArgument("truncation mismatch");
    for (int d = 0; d <= a.truncation(); ++d)
        if (!equal_mod_4T_numeric(a.part(d), b.part(d), tolerance)) return false;
    return true;
}

}  // namespace chordq
