#include "chordq/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "chordq/errors.hpp"

namespace chordq {

std::string component_str(const TokenList& comp) {
    if (comp.empty()) return "()";
    std::string out;
    for (std::size_t i = 0; i < comp.size(); ++i) {
        if (i) out += ' ';
        out += comp[i].marker ? "#" + std::to_string(comp[i].value) : letter_str(comp[i].value);
    }
    return out;
}

TokenList component_parse(const std::string& text, int rank) {
    TokenList out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        if (token == "()") continue;
        if (token[0] == '#') {
            int id = 0;
            if (token.size() < 2) throw InvalidArgument("bad chord marker: '" + token + "'");
            for (std::size_t i = 1; i < token.size(); ++i) {
                char c = token[i];
                if (c < '0' || c > '9') throw InvalidArgument("bad chord marker: '" + token + "'");
                id = id * 10 + (c - '0');
                if (id > 1'000'000) throw InvalidArgument("chord label too large: '" + token + "'");
            }
            out.push_back(marker_token(id));
        } else {
            out.push_back(letter_token(letter_parse(token, rank)));
        }
    }
    return out;
}

namespace {

// Component with at least one marker, rotated so a marker sits first.
// arcs[i] is the (reduced) word after marker i, ending at marker i+1 (cyclic).
struct MarkedComp {
    std::vector<int> chords;
    std::vector<Word> arcs;
};

MarkedComp to_marked(const TokenList& comp) {
    std::size_t first = 0;
    while (!comp[first].marker) ++first;
    MarkedComp m;
    Word arc;
    for (std::size_t k = 0; k <= comp.size(); ++k) {
        const Token& t = comp[(first + k) % comp.size()];
        if (k == comp.size()) {
            m.arcs.push_back(reduce(arc));
            break;
        }
        if (t.marker) {
            if (k > 0) m.arcs.push_back(reduce(arc));
            arc.clear();
            m.chords.push_back(t.value);
        } else {
            arc.push_back(t.value);
        }
    }
    return m;
}

MarkedComp rotated(const MarkedComp& c, std::size_t r) {
    std::size_t n = c.chords.size();
    MarkedComp out;
    out.chords.reserve(n);
    out.arcs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.chords.push_back(c.chords[(r + i) % n]);
        out.arcs.push_back(c.arcs[(r + i) % n]);
    }
    return out;
}

TokenList marked_tokens(const MarkedComp& c) {
    TokenList out;
    for (std::size_t i = 0; i < c.chords.size(); ++i) {
        out.push_back(marker_token(c.chords[i]));
        for (Letter l : c.arcs[i]) out.push_back(letter_token(l));
    }
    return out;
}

std::string serialize_comps(const std::vector<MarkedComp>& comps) {
    std::string out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) out += " ; ";
        out += component_str(marked_tokens(comps[i]));
    }
    return out;
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

std::size_t total_length(const std::vector<Word>& arcs) {
    std::size_t n = 0;
    for (const Word& w : arcs) n += w.size();
    return n;
}

std::vector<Word> conjugate_all(const std::vector<Word>& arcs, Letter s) {
    std::vector<Word> out;
    out.reserve(arcs.size());
    for (const Word& w : arcs) {
        Word v;
        v.reserve(w.size() + 2);
        v.push_back(-s);
        v.insert(v.end(), w.begin(), w.end());
        v.push_back(s);
        out.push_back(reduce(std::move(v)));
    }
    return out;
}

// Canonical presentation of one chord-connected piece. Chord labels come out
// 1..m in first-occurrence order.
std::vector<MarkedComp> canonical_piece(const std::vector<MarkedComp>& comps, int rank) {
    const std::size_t c = comps.size();
    int m = 0;
    for (const auto& comp : comps) m += static_cast<int>(comp.chords.size());
    m /= 2;

    std::string best_serial;
    std::vector<MarkedComp> best;
    bool have_best = false;

    std::vector<int> perm(c);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> rot(c, 0);

    do {
        // mixed-radix loop over marker-first rotations of each component
        std::fill(rot.begin(), rot.end(), 0);
        while (true) {
            std::vector<MarkedComp> pres;
            pres.reserve(c);
            for (std::size_t i = 0; i < c; ++i) pres.push_back(rotated(comps[perm[i]], rot[i]));

            // relabel chords by first occurrence
            std::map<int, int> relabel;
            for (auto& comp : pres)
                for (int& ch : comp.chords) {
                    auto [it, fresh] = relabel.emplace(ch, static_cast<int>(relabel.size()) + 1);
                    ch = it->second;
                }

            // arcs as edges of the chord graph, in presentation order
            struct Edge {
                int a, b;
                std::size_t comp, idx;
            };
            std::vector<Edge> edges;
            for (std::size_t i = 0; i < c; ++i) {
                std::size_t sz = pres[i].chords.size();
                for (std::size_t j = 0; j < sz; ++j)
                    edges.push_back({pres[i].chords[j], pres[i].chords[(j + 1) % sz],
                                     i, j});
            }

            // spanning tree by edge order, then transport so tree arcs become
            // the empty word: for a tree arc a -> b with word w, g_b = w^-1 g_a
            Dsu dsu(m + 1);
            std::vector<std::vector<std::pair<int, Word>>> tree(m + 1);  // (to, word a->b)
            for (const Edge& e : edges) {
                if (dsu.join(e.a, e.b)) {
                    const Word& w = pres[e.comp].arcs[e.idx];
                    tree[e.a].push_back({e.b, w});
                    tree[e.b].push_back({e.a, inverse(w)});
                }
            }
            std::vector<Word> g(m + 1);
            std::vector<bool> seen(m + 1, false);
            std::vector<int> stack = {1};
            seen[1] = true;
            while (!stack.empty()) {
                int a = stack.back();
                stack.pop_back();
                for (const auto& [b, w] : tree[a]) {
                    if (seen[b]) continue;
                    seen[b] = true;
                    g[b] = mul(inverse(w), g[a]);
                    stack.push_back(b);
                }
            }

            for (std::size_t i = 0; i < c; ++i) {
                std::size_t sz = pres[i].chords.size();
                for (std::size_t j = 0; j < sz; ++j) {
                    int a = pres[i].chords[j], b = pres[i].chords[(j + 1) % sz];
                    pres[i].arcs[j] = mul(mul(inverse(g[a]), pres[i].arcs[j]), g[b]);
                }
            }

            // flatten arcs; residual gauge freedom is one global conjugation
            std::vector<Word> arcs;
            for (const auto& comp : pres)
                for (const Word& w : comp.arcs) arcs.push_back(w);

            // total conjugated length is convex along geodesics of the Cayley
            // tree, so strict single-letter descent reaches the global minimum
            bool moved = true;
            while (moved) {
                moved = false;
                for (int s = -rank; s <= rank && !moved; ++s) {
                    if (s == 0) continue;
                    auto cand = conjugate_all(arcs, s);
                    if (total_length(cand) < total_length(arcs)) {
                        arcs = std::move(cand);
                        moved = true;
                    }
                }
            }

            // the minimum set is a plateau; walk it and keep the least serial
            std::set<std::vector<Word>> visited;
            std::vector<std::vector<Word>> queue = {arcs};
            visited.insert(arcs);
            std::size_t min_total = total_length(arcs);
            while (!queue.empty()) {
                std::vector<Word> cur = std::move(queue.back());
                queue.pop_back();
                std::size_t at = 0;
                for (auto& comp : pres)
                    for (Word& w : comp.arcs) w = cur[at++];
                std::string serial = serialize_comps(pres);
                if (!have_best || serial < best_serial) {
                    best_serial = serial;
                    best = pres;
                    have_best = true;
                }
                for (int s = -rank; s <= rank; ++s) {
                    if (s == 0) continue;
                    auto next = conjugate_all(cur, s);
                    if (total_length(next) == min_total && visited.insert(next).second)
                        queue.push_back(std::move(next));
                }
            }

            // advance rotations
            std::size_t k = 0;
            while (k < c) {
                if (++rot[k] < comps[perm[k]].chords.size()) break;
                rot[k] = 0;
                ++k;
            }
            if (k == c) break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return best;
}

}  // namespace

ChordDiagram::ChordDiagram(SurfacePtr surface, std::vector<TokenList> components) {
    if (!surface) throw InvalidArgument("diagram needs a surface");
    surface_ = std::move(surface);
    int rank = surface_->rank();

    // validate letters and the two-endpoints-per-chord rule
    std::map<int, int> uses;
    for (const TokenList& comp : components) {
        for (const Token& t : comp) {
            if (t.marker) {
                ++uses[t.value];
            } else if (t.value == 0 || t.value < -rank || t.value > rank) {
                throw InvalidArgument("letter out of range for surface rank " +
                                      std::to_string(rank) + ": " + std::to_string(t.value));
            }
        }
    }
    for (const auto& [label, count] : uses)
        if (count != 2)
            throw InvalidArgument("chord #" + std::to_string(label) + " has " +
                                  std::to_string(count) + " endpoints; need exactly 2");
    degree_ = static_cast<int>(uses.size());

    // split into chordless loops and chord-connected pieces
    std::vector<Word> plain;
    std::vector<MarkedComp> marked;
    for (const TokenList& comp : components) {
        bool has_marker = false;
        for (const Token& t : comp) has_marker = has_marker || t.marker;
        if (has_marker) {
            marked.push_back(to_marked(comp));
        } else {
            Word w;
            for (const Token& t : comp) w.push_back(t.value);
            plain.push_back(min_rotation(cyclic_reduce(w)));
        }
    }

    std::map<int, int> chord_group;
    Dsu dsu(static_cast<int>(marked.size()));
    for (std::size_t i = 0; i < marked.size(); ++i)
        for (int ch : marked[i].chords) {
            auto [it, fresh] = chord_group.emplace(ch, static_cast<int>(i));
            if (!fresh) dsu.join(it->second, static_cast<int>(i));
        }

    std::map<int, std::vector<MarkedComp>> piece_comps;
    for (std::size_t i = 0; i < marked.size(); ++i)
        piece_comps[dsu.find(static_cast<int>(i))].push_back(marked[i]);

    // canonicalize pieces independently, then order pieces by serialization
    std::vector<std::pair<std::string, std::vector<TokenList>>> pieces;
    for (const Word& w : plain) {
        TokenList t;
        for (Letter l : w) t.push_back(letter_token(l));
        pieces.push_back({component_str(t), {t}});
    }
    for (auto& [root, comps] : piece_comps) {
        std::vector<MarkedComp> canon = canonical_piece(comps, rank);
        std::vector<TokenList> lists;
        for (const auto& comp : canon) lists.push_back(marked_tokens(comp));
        std::string serial;
        for (std::size_t i = 0; i < lists.size(); ++i) {
            if (i) serial += " ; ";
            serial += component_str(lists[i]);
        }
        pieces.push_back({serial, std::move(lists)});
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // relabel chords globally by first occurrence across the sorted pieces
    std::map<std::pair<std::size_t, int>, int> global;
    for (std::size_t p = 0; p < pieces.size(); ++p)
        for (TokenList& comp : pieces[p].second)
            for (Token& t : comp) {
                if (!t.marker) continue;
                auto [it, fresh] =
                    global.emplace(std::make_pair(p, t.value), static_cast<int>(global.size()) + 1);
                t.value = it->second;
            }

    for (auto& [serial, lists] : pieces)
        for (TokenList& comp : lists) components_.push_back(std::move(comp));

    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) serial_ += " ; ";
        serial_ += component_str(components_[i]);
    }
    if (components_.empty()) serial_ = "(empty)";
}

ChordDiagram ChordDiagram::parse(SurfacePtr surface, const std::vector<std::string>& components) {
    int rank = surface ? surface->rank() : 0;
    std::vector<TokenList> lists;
    for (const std::string& text : components) lists.push_back(component_parse(text, rank));
    return ChordDiagram(std::move(surface), std::move(lists));
}

ChordDiagram ChordDiagram::empty(SurfacePtr surface) {
    return ChordDiagram(std::move(surface), {});
}

std::vector<std::string> ChordDiagram::component_strings() const {
    std::vector<std::string> out;
    for (const TokenList& comp : components_) out.push_back(component_str(comp));
    return out;
}

std::vector<std::vector<int>> ChordDiagram::pieces() const {
    Dsu dsu(static_cast<int>(components_.size()));
    std::map<int, int> chord_comp;
    for (std::size_t i = 0; i < components_.size(); ++i)
        for (const Token& t : components_[i])
            if (t.marker) {
                auto [it, fresh] = chord_comp.emplace(t.value, static_cast<int>(i));
                if (!fresh) dsu.join(it->second, static_cast<int>(i));
            }
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < components_.size(); ++i)
        groups[dsu.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& [root, idx] : groups) out.push_back(std::move(idx));
    return out;
}

bool ChordDiagram::operator<(const ChordDiagram& o) const {
    if (serial_ != o.serial_) return serial_ < o.serial_;
    if (surface_->rank() != o.surface_->rank()) return surface_->rank() < o.surface_->rank();
    return surface_->vertex_order() < o.surface_->vertex_order();
}

ChordDiagram multiply(const ChordDiagram& a, const ChordDiagram& b) {
    if (!a.surface()->same_as(*b.surface()))
        throw InvalidArgument("cannot multiply diagrams on different surfaces");
    int offset = 0;
    for (const TokenList& comp : a.components())
        for (const Token& t : comp)
            if (t.marker) offset = std::max(offset, t.value);
    std::vector<TokenList> comps = a.components();
    for (TokenList comp : b.components()) {
        for (Token& t : comp)
            if (t.marker) t.value += offset;
        comps.push_back(std::move(comp));
    }
    return ChordDiagram(a.surface(), std::move(comps));
}

void DiagramSum::add(const ChordDiagram& d, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(d, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

DiagramSum& DiagramSum::operator+=(const DiagramSum& o) {
    for (const auto& [d, c] : o.terms_) add(d, c);
    return *this;
}

DiagramSum& DiagramSum::operator-=(const DiagramSum& o) {
    for (const auto& [d, c] : o.terms_) add(d, -c);
    return *this;
}

DiagramSum& DiagramSum::scale(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [d, coeff] : terms_) coeff *= c;
    return *this;
}

DiagramSum operator+(DiagramSum a, const DiagramSum& b) {
    a += b;
    return a;
}

DiagramSum operator-(DiagramSum a, const DiagramSum& b) {
    a -= b;
    return a;
}

DiagramSum operator*(const Rat& c, DiagramSum a) {
    a.scale(c);
    return a;
}

DiagramSum multiply(const DiagramSum& a, const DiagramSum& b) {
    DiagramSum out;
    for (const auto& [da, ca] : a.terms())
        for (const auto& [db, cb] : b.terms()) out.add(multiply(da, db), ca * cb);
    return out;
}

GradedSeries::GradedSeries(int truncation) : truncation_(truncation) {
    if (truncation < 0) throw InvalidArgument("truncation must be >= 0");
    parts_.resize(truncation + 1);
}

const DiagramSum& GradedSeries::part(int d) const {
    if (d < 0 || d > truncation_) throw InvalidArgument("degree out of range");
    return parts_[d];
}

void GradedSeries::add(int d, const ChordDiagram& diagram, const Rat& c) {
    if (d > truncation_) return;  // truncated away
    if (d < 0) throw InvalidArgument("degree out of range");
    if (diagram.degree() != d)
        throw InternalError("graded series: degree " + std::to_string(d) +
                            " part fed a diagram with " + std::to_string(diagram.degree()) +
                            " chords");
    parts_[d].add(diagram, c);
}

void GradedSeries::add_sum(int d, const DiagramSum& sum) {
    for (const auto& [diagram, c] : sum.terms()) add(d, diagram, c);
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& o) {
    if (o.truncation_ != truncation_) throw InvalidArgument("truncation mismatch");
    for (int d = 0; d <= truncation_; ++d) parts_[d] += o.parts_[d];
    return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& o) {
    if (o.truncation_ != truncation_) throw InvalidArgument("truncation mismatch");
    for (int d = 0; d <= truncation_; ++d) parts_[d] -= o.parts_[d];
    return *this;
}

GradedSeries& GradedSeries::scale(const Rat& c) {
    for (auto& p : parts_) p.scale(c);
    return *this;
}

bool GradedSeries::is_zero() const {
    for (const auto& p : parts_)
        if (!p.is_zero()) return false;
    return true;
}

int GradedSeries::lowest_nonzero() const {
    for (int d = 0; d <= truncation_; ++d)
        if (!parts_[d].is_zero()) return d;
    return -1;
}

bool GradedSeries::operator==(const GradedSeries& o) const {
    return truncation_ == o.truncation_ && parts_ == o.parts_;
}

GradedSeries GradedSeries::unit(const SurfacePtr& surface, int truncation) {
    GradedSeries s(truncation);
    s.add(0, ChordDiagram::empty(surface), 1);
    return s;
}

GradedSeries multiply(const GradedSeries& a, const GradedSeries& b) {
    if (a.truncation() != b.truncation()) throw InvalidArgument("truncation mismatch");
    GradedSeries out(a.truncation());
    for (int i = 0; i <= a.truncation(); ++i)
        for (int j = 0; i + j <= a.truncation(); ++j)
            out.add_sum(i + j, multiply(a.part(i), b.part(j)));
    return out;
}

}  // namespace chordq
