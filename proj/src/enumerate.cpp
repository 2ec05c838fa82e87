#include "chordq/enumerate.hpp"

#include <algorithm>
#include <set>

#include "chordq/errors.hpp"

namespace chordq {

std::vector<Word> short_words(int rank, int max_letters) {
    std::vector<Word> out = {{}};
    std::size_t level_begin = 0;
    for (int len = 1; len <= max_letters; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (int l = -rank; l <= rank; ++l) {
                if (l == 0) continue;
                if (!out[i].empty() && out[i].back() == -l) continue;
                Word w = out[i];
                w.push_back(l);
                out.push_back(std::move(w));
            }
        }
        level_begin = level_end;
    }
    return out;
}

namespace {

bool arcs_within(const ChordDiagram& d, int max_arc_letters) {
    for (const TokenList& comp : d.components()) {
        bool marked = false;
        for (const Token& t : comp) marked = marked || t.marker;
        int run = 0, wrap = 0;
        bool past_marker = false;
        for (const Token& t : comp) {
            if (t.marker) {
                if (!past_marker) wrap = run;  // letters before the first marker
                past_marker = true;
                run = 0;
            } else {
                ++run;
            }
        }
        if (!marked) {
            if (static_cast<int>(comp.size()) > max_arc_letters) return false;
        } else {
            if (run + wrap > max_arc_letters) return false;  // final arc wraps around
        }
        // interior runs
        run = 0;
        past_marker = false;
        for (const Token& t : comp) {
            if (t.marker) {
                if (past_marker && run > max_arc_letters) return false;
                past_marker = true;
                run = 0;
            } else {
                ++run;
            }
        }
    }
    return true;
}

void matchings(std::vector<int>& pair_of, int next_label, std::vector<std::vector<int>>& out) {
    std::size_t first = 0;
    while (first < pair_of.size() && pair_of[first] != 0) ++first;
    if (first == pair_of.size()) {
        out.push_back(pair_of);
        return;
    }
    for (std::size_t j = first + 1; j < pair_of.size(); ++j) {
        if (pair_of[j] != 0) continue;
        pair_of[first] = pair_of[j] = next_label;
        matchings(pair_of, next_label + 1, out);
        pair_of[first] = pair_of[j] = 0;
    }
}

void partitions(int total, int max_part, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
    if (total == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(total, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(total - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<ChordDiagram> enumerate_diagrams(const SurfacePtr& surface, int degree,
                                             int max_arc_letters, EnumerateOptions options) {
    if (degree < 0) throw InvalidArgument("degree must be >= 0");
    if (max_arc_letters < 0) throw InvalidArgument("arc length bound must be >= 0");
    const int rank = surface->rank();
    std::set<ChordDiagram> found;

    if (degree == 0) {
        found.insert(ChordDiagram::empty(surface));
        for (const Word& w : short_words(rank, max_arc_letters)) {
            TokenList comp;
            for (Letter l : w) comp.push_back(letter_token(l));
            ChordDiagram d(surface, {comp});
            if (arcs_within(d, max_arc_letters)) found.insert(std::move(d));
        }
        return std::vector<ChordDiagram>(found.begin(), found.end());
    }

    const int slots = 2 * degree;
    std::vector<Word> words = short_words(rank, max_arc_letters);
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions(slots, slots, cur, parts);

    std::vector<std::vector<int>> pairings;
    std::vector<int> pair_of(slots, 0);
    matchings(pair_of, 1, pairings);

    std::size_t raw = 0;
    for (const auto& sizes : parts) {
        for (const auto& pairing : pairings) {
            std::vector<std::size_t> widx(slots, 0);
            while (true) {
                if (++raw > options.max_raw)
                    throw ResourceError("enumeration budget exceeded after " +
                                        std::to_string(options.max_raw) + " presentations");
                std::vector<TokenList> comps;
                int slot = 0;
                for (int sz : sizes) {
                    TokenList comp;
                    for (int k = 0; k < sz; ++k, ++slot) {
                        comp.push_back(marker_token(pairing[slot]));
                        for (Letter l : words[widx[slot]]) comp.push_back(letter_token(l));
                    }
                    comps.push_back(std::move(comp));
                }
                ChordDiagram d(surface, comps);
                if (arcs_within(d, max_arc_letters)) found.insert(std::move(d));

                std::size_t k = 0;
                while (k < widx.size()) {
                    if (++widx[k] < words.size()) break;
                    widx[k] = 0;
                    ++k;
                }
                if (k == widx.size()) break;
            }
        }
    }
    return std::vector<ChordDiagram>(found.begin(), found.end());
}

}  // namespace chordq
