#include "chordq/intersect.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>

#include "chordq/errors.hpp"

namespace chordq {

namespace {

// Gate-visit indexing along a loop of k letters: visit 2j is where the
// strand leaves the disk (gate w[j]), visit 2j+1 where it returns
// (gate -w[j]). Stepping +1 from an odd visit or -1 from an even visit
// crosses the disk; the complementary step runs through a ribbon.

int visit_gate(const Word& w, int idx) {
    return (idx % 2 == 0) ? w[idx / 2] : -w[idx / 2];
}

struct Walk {
    const Word* w;
    int idx;
    int dir;

    // One disk move then one ribbon move; returns the disk move's exit gate.
    int advance() {
        int n = 2 * static_cast<int>(w->size());
        idx = ((idx + dir) % n + n) % n;
        int exit_gate = visit_gate(*w, idx);
        idx = ((idx + dir) % n + n) % n;
        return exit_gate;
    }
};

// The gate-visit of traversal (loop, j) lying on `gate` (which must be one of
// the two ends of ribbon |w[j]|), with the walking direction that leads away
// from the ribbon, into the disk.
Walk walk_from(const Word& w, int j, int gate) {
    if (w[j] == gate) return Walk{&w, 2 * j, -1};
    return Walk{&w, 2 * j + 1, +1};
}

// Sequence of disk-exit gates seen walking away from `gate`.
std::vector<int> itinerary(const Word& w, int j, int gate, int length) {
    Walk walk = walk_from(w, j, gate);
    std::vector<int> out;
    out.reserve(length);
    for (int m = 0; m < length; ++m) out.push_back(walk.advance());
    return out;
}

// Compare two itineraries leaving a common gate. Returns -1 if the first
// strand lies left of the second at that gate, +1 for right, 0 if the
// itineraries never diverge. At the first divergence the exits are ranked so
// the pair splits without crossing: seen from the shared entry gate, strands
// exiting further left sit further right (nested return chords), strands
// exiting further right sit further left, and every left exit precedes every
// right exit; an exit back into the entry gate itself sits between the two
// groups. Order transported back to the measuring gate is unchanged: each
// intermediate shared ribbon or nested disk chord mirrors it, and there are
// equally many of each.
int compare_itineraries(const Surface& surf, int start_gate, const std::vector<int>& a,
                        const std::vector<int>& b) {
    int entry = start_gate;
    for (std::size_t m = 0; m < a.size() && m < b.size(); ++m) {
        if (a[m] == b[m]) {
            entry = -a[m];
            continue;
        }
        auto key = [&](int exit_gate) {
            if (exit_gate == entry) return std::pair<int, int>(1, 0);
            int s = surf.gate_slot(exit_gate);
            int sg = surf.gate_slot(entry);
            return s > sg ? std::pair<int, int>(2, -s) : std::pair<int, int>(0, -s);
        };
        auto ka = key(a[m]), kb = key(b[m]);
        if (ka == kb) return 0;  // unreachable: distinct gates, distinct slots
        return ka < kb ? -1 : 1;
    }
    return 0;
}

struct Strand {
    int loop;
    int pos;
    std::vector<int> plus;   // itinerary away from gate +edge
    std::vector<int> minus;  // itinerary away from gate -edge
};

// Offset rank of every traversal, keyed by (loop, pos): the strand's
// left-to-right position at gate +edge among the m strands of its ribbon,
// encoded as the rational offset (rank+1)/(m+1) - 1/2.
std::map<std::pair<int, int>, Rat> strand_offsets(const Surface& surf,
                                                  const std::vector<Word>& loops,
                                                  const EdgeStrands* forced) {
    EdgeStrands structural = edge_strands(loops);
    std::map<std::pair<int, int>, Rat> offsets;
    for (auto& [edge, list] : structural) {
        std::vector<std::pair<int, int>> order;
        if (forced != nullptr && forced->count(edge)) {
            order = forced->at(edge);
            auto sorted = order;
            std::sort(sorted.begin(), sorted.end());
            if (sorted != list)
                throw InvalidArgument("ribbon order override does not list the strands of edge " +
                                      std::to_string(edge));
        } else if (forced != nullptr) {
            order = list;
        } else {
            int max_len = 1;
            for (const Word& w : loops) max_len = std::max(max_len, static_cast<int>(w.size()));
            int horizon = 4 * max_len * max_len + 2;
            std::vector<Strand> strands;
            strands.reserve(list.size());
            for (auto [loop, pos] : list)
                strands.push_back(Strand{loop, pos, itinerary(loops[loop], pos, edge, horizon),
                                         itinerary(loops[loop], pos, -edge, horizon)});
            std::sort(strands.begin(), strands.end(), [&](const Strand& u, const Strand& v) {
                if (int c = compare_itineraries(surf, edge, u.plus, v.plus)) return c < 0;
                // parallel on the +edge side: order at -edge, mirrored back
                if (int c = compare_itineraries(surf, -edge, u.minus, v.minus)) return c > 0;
                return std::tie(u.loop, u.pos) < std::tie(v.loop, v.pos);
            });
            order.reserve(strands.size());
            for (const Strand& s : strands) order.emplace_back(s.loop, s.pos);
        }
        const int m = static_cast<int>(order.size());
        for (int r = 0; r < m; ++r)
            offsets[order[r]] = Rat(r + 1, m + 1) - Rat(1, 2);
    }
    return offsets;
}

Realization realize_impl(SurfacePtr surface, std::vector<Word> loops, const EdgeStrands* forced) {
    for (const Word& w : loops)
        for (Letter l : w)
            if (l == 0 || std::abs(l) > surface->rank())
                throw InvalidArgument("letter outside surface rank");

    auto offsets = strand_offsets(*surface, loops, forced);
    // x coordinate of traversal (loop, j) on gate g: slot(g) +- offset/2,
    // mirrored between the ribbon's two gates.
    Realization r;
    r.surface = std::move(surface);
    r.loops = std::move(loops);

    auto coord = [&](int loop, int j, int gate) -> Rat {
        Rat t = offsets.at({loop, j});
        Rat base(r.surface->gate_slot(gate));
        if (gate > 0) return Rat(base + t / 2);
        return Rat(base - t / 2);
    };
    r.corners.resize(r.loops.size());
    for (std::size_t i = 0; i < r.loops.size(); ++i) {
        const Word& w = r.loops[i];
        const int k = static_cast<int>(w.size());
        r.corners[i].reserve(k);
        for (int j = 0; j < k; ++j) {
            int jn = (j + 1) % k;
            r.corners[i].push_back(Passage{coord(static_cast<int>(i), j, -w[j]),
                                           coord(static_cast<int>(i), jn, w[jn])});
        }
    }
    return r;
}

bool interleaved(const Passage& p, const Passage& q) {
    Rat plo = std::min(p.from, p.to), phi = std::max(p.from, p.to);
    bool in1 = plo < q.from && q.from < phi;
    bool in2 = plo < q.to && q.to < phi;
    return in1 != in2;
}

int crossing_sign(const Passage& p, const Passage& q) {
    int dir_p = p.from < p.to ? 1 : -1;
    int dir_q = q.from < q.to ? 1 : -1;
    Rat mid_p = p.from + p.to, mid_q = q.from + q.to;
    return dir_p * dir_q * (mid_p > mid_q ? 1 : -1);
}

}  // namespace

EdgeStrands edge_strands(const std::vector<Word>& loops) {
    EdgeStrands out;
    for (std::size_t i = 0; i < loops.size(); ++i)
        for (std::size_t j = 0; j < loops[i].size(); ++j)
            out[std::abs(loops[i][j])].emplace_back(static_cast<int>(i), static_cast<int>(j));
    return out;
}

Realization realize(SurfacePtr surface, std::vector<Word> loops) {
    return realize_impl(std::move(surface), std::move(loops), nullptr);
}

Realization realize_with_orders(SurfacePtr surface, std::vector<Word> loops,
                                const EdgeStrands& orders) {
    return realize_impl(std::move(surface), std::move(loops), &orders);
}

std::vector<CrossingPoint> crossings(const Realization& r, int loop_a, int loop_b) {
    const auto& ca = r.corners.at(loop_a);
    const auto& cb = r.corners.at(loop_b);
    std::vector<CrossingPoint> out;
    for (std::size_t p = 0; p < ca.size(); ++p) {
        std::size_t q0 = (loop_a == loop_b) ? p + 1 : 0;
        for (std::size_t q = q0; q < cb.size(); ++q) {
            if (!interleaved(ca[p], cb[q])) continue;
            out.push_back(CrossingPoint{static_cast<int>(p), static_cast<int>(q),
                                        crossing_sign(ca[p], cb[q])});
        }
    }
    return out;
}

std::size_t total_crossings(const Realization& r) {
    std::size_t n = 0;
    for (std::size_t a = 0; a < r.loops.size(); ++a)
        for (std::size_t b = a; b < r.loops.size(); ++b)
            n += crossings(r, static_cast<int>(a), static_cast<int>(b)).size();
    return n;
}

}  // namespace chordq
