#include "chordq/associator.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include "chordq/errors.hpp"
#include "chordq/ratlin.hpp"
#include "chordq/relations.hpp"

namespace chordq {

namespace {

ChordTangle flat(ChordTangle t) {
    t.set_boundaries(left_comb(t.strands()), left_comb(t.strands()));
    return t;
}

ChordTangle single_chord(int strands, int a, int b, const Rat& c, int truncation) {
    ChordTangle t(strands, truncation);
    t.add_term({{a, b}}, c);
    return t;
}

// A box of horizontal chords together with the permutation its strands
// trace: bottom position i exits at top position perm[i-1].  Chord labels
// refer to bottom positions.
struct PermTangle {
    std::vector<int> perm;
    ChordTangle val;
};

PermTangle stack(const PermTangle& low, const PermTangle& high) {
    int k = static_cast<int>(low.perm.size());
    std::vector<int> inv(static_cast<std::size_t>(k));
    for (int q = 1; q <= k; ++q) inv[static_cast<std::size_t>(low.perm[static_cast<std::size_t>(q - 1)] - 1)] = q;
    ChordTangle pulled = high.val.relabel(inv, k);
    std::vector<int> total(static_cast<std::size_t>(k));
    for (int q = 1; q <= k; ++q)
        total[static_cast<std::size_t>(q - 1)] =
            high.perm[static_cast<std::size_t>(low.perm[static_cast<std::size_t>(q - 1)] - 1)];
    return {std::move(total), flat(low.val).then(flat(pulled))};
}

// Path ((ab)c)d -> (a(bc))d -> a((bc)d) -> a(b(cd)), each step one
// re-bracketing on the grouped triple.
ChordTangle pentagon_path_a(const ChordTangle& phi) {
    return flat(phi.relabel({1, 2, 3}, 4)).then(flat(phi.cable(2))).then(flat(phi.relabel({2, 3, 4}, 4)));
}

// Path ((ab)c)d -> (ab)(cd) -> a(b(cd)).
ChordTangle pentagon_path_b(const ChordTangle& phi) {
    return flat(phi.cable(1)).then(flat(phi.cable(3)));
}

// Crossing the bracketed pair (12) over strand 3 in one move: the pair is
// cabled through the two-strand crossing series.
PermTangle hexagon_grouped(int sign, int truncation) {
    ChordTangle x(3, truncation);
    x.add_term({{1, 3}}, Rat(sign, 2));
    x.add_term({{2, 3}}, Rat(sign, 2));
    return {{2, 3, 1}, exp_series(x)};
}

// The same crossing as a composite of elementary crossings and
// re-bracketings:
//   ((12)3) -> (1(23)) -> cross 2 over 3 -> re-bracket -> cross 1 over 3
//   -> re-bracket -> (3(12)).
PermTangle hexagon_composite(const ChordTangle& phi, int sign) {
    int n = phi.truncation();
    PermTangle a1{{1, 2, 3}, phi};
    PermTangle c1{{1, 3, 2}, exp_series(single_chord(3, 2, 3, Rat(sign, 2), n))};
    PermTangle a2{{1, 2, 3}, phi.inverse()};
    PermTangle c2{{2, 1, 3}, exp_series(single_chord(3, 1, 2, Rat(sign, 2), n))};
    PermTangle a3{{1, 2, 3}, phi};
    return stack(stack(stack(stack(a1, c1), a2), c2), a3);
}

ChordTangle pentagon_defect_of(const ChordTangle& phi) {
    return pentagon_path_a(phi) - pentagon_path_b(phi);
}

ChordTangle hexagon_defect_of(const ChordTangle& phi, int sign) {
    PermTangle lhs = hexagon_grouped(sign, phi.truncation());
    PermTangle rhs = hexagon_composite(phi, sign);
    if (lhs.perm != rhs.perm) throw InternalError("hexagon paths trace different permutations");
    return rhs.val - lhs.val;
}

// ---- straightening composites -------------------------------------------

// The bent strand is rendered on an annulus: the loop carries the single
// generator as a basepoint mark so that the linear order along the strand
// is preserved by canonicalization.
SurfacePtr marked_loop_surface() { return planar_surface(2); }

int pair_index(const FoldMatching& m, int point) {
    for (std::size_t p = 0; p < m.size(); ++p)
        if (m[p].first == point || m[p].second == point) return static_cast<int>(p);
    throw InternalError("fold matching does not cover its points");
}

// Endpoint order along the straightened strand.  The corridor word `w`
// places chord r at height r; the middle piece descends, so its endpoints
// read top-down.  Cap and cup corrections occupy the folds between the
// zones, their points kept in fold order.  `fold_on_left` says the cap
// joins the two left pieces; otherwise the two right pieces.
std::vector<int> zig_slots(const FoldMatching& mi, const ChordWord& w, const FoldMatching& me,
                           bool fold_on_left) {
    std::vector<int> slots;
    auto corridor_zone = [&](int strand, bool ascending) {
        int len = static_cast<int>(w.size());
        for (int idx = 0; idx < len; ++idx) {
            int r = ascending ? idx : len - 1 - idx;
            if (w[static_cast<std::size_t>(r)].first == strand ||
                w[static_cast<std::size_t>(r)].second == strand)
                slots.push_back(3 * r);
        }
    };
    auto fold_zone = [&](const FoldMatching& m, int tag) {
        for (int j = 0; j < 2 * static_cast<int>(m.size()); ++j)
            slots.push_back(3 * pair_index(m, j) + tag);
    };
    if (fold_on_left) {
        corridor_zone(1, true);
        fold_zone(me, 1);
        corridor_zone(2, false);
        fold_zone(mi, 2);
        corridor_zone(3, true);
    } else {
        corridor_zone(3, true);
        fold_zone(me, 1);
        corridor_zone(2, false);
        fold_zone(mi, 2);
        corridor_zone(1, true);
    }
    return slots;
}

ChordDiagram render_slots(const SurfacePtr& surf, const std::vector<int>& slots) {
    TokenList comp;
    comp.push_back(letter_token(1));
    std::map<int, int> chord_id;
    for (int key : slots) {
        auto [it, fresh] = chord_id.emplace(key, static_cast<int>(chord_id.size()) + 1);
        (void)fresh;
        comp.push_back(marker_token(it->second));
    }
    return ChordDiagram(surf, {comp});
}

// Sign rule: the middle piece of the bent strand runs downward, and every
// corridor chord endpoint landing on it contributes a factor -1.
int corridor_sign(const ChordWord& w) {
    int s = 1;
    for (const ChordGen& g : w)
        if (g.first == 2 || g.second == 2) s = -s;
    return s;
}

DiagramSum zig_terms(const SurfacePtr& surf, const FoldSeries& cup_i, const ChordTangle& corridor,
                     const FoldSeries& cap_e, bool fold_on_left, int exact_degree) {
    DiagramSum out;
    for (const auto& [mi, ci] : cup_i.terms)
        for (const auto& [w, cw] : corridor.terms())
            for (const auto& [me, ce] : cap_e.terms) {
                int deg = static_cast<int>(mi.size() + w.size() + me.size());
                if (deg > corridor.truncation()) continue;
                if (exact_degree >= 0 && deg != exact_degree) continue;
                Rat coef = ci * cw * ce * corridor_sign(w);
                out.add(render_slots(surf, zig_slots(mi, w, me, fold_on_left)), coef);
            }
    return out;
}

FoldMatching reversed_matching(const FoldMatching& m) {
    int n = 2 * static_cast<int>(m.size());
    FoldMatching out;
    for (const auto& [a, b] : m) out.push_back({n - 1 - b, n - 1 - a});
    return normalize_fold_matching(out);
}

int letter_count(const ChordDiagram& d) {
    int n = 0;
    for (const TokenList& comp : d.components())
        for (const Token& t : comp)
            if (!t.marker) ++n;
    return n;
}

std::string relation_key(const DiagramSum& s) {
    std::string key;
    for (const auto& [d, c] : s.terms()) {
        key += d.serial();
        key += '|';
        key += c.get_str();
        key += ';';
    }
    return key;
}

// Four-term relations reachable from `start` without growing past the
// letter budget.  Returns deduplicated relation sums.
std::vector<DiagramSum> four_t_span(const std::vector<ChordDiagram>& start, int letter_cap) {
    std::vector<DiagramSum> rels;
    std::set<std::string> rel_seen;
    std::set<std::string> expanded;
    std::vector<ChordDiagram> queue = start;
    std::size_t guard = 0;
    while (!queue.empty()) {
        ChordDiagram d = queue.back();
        queue.pop_back();
        if (letter_count(d) > letter_cap) continue;
        if (!expanded.insert(d.serial()).second) continue;
        if (++guard > 20000) throw ResourceError("four-term span exploration exceeded its budget");
        std::vector<DiagramSum> found = four_t_relations(d);
        for (DiagramSum& rel : found) {
            if (!rel_seen.insert(relation_key(rel)).second) continue;
            for (const auto& [term, coeff] : rel.terms()) {
                (void)coeff;
                if (expanded.find(term.serial()) == expanded.end()) queue.push_back(term);
            }
            rels.push_back(std::move(rel));
        }
    }
    return rels;
}

// ---- degree-by-degree solver ---------------------------------------------

ChordTangle word_tangle(int strands, int truncation, const ChordWord& w) {
    ChordTangle t(strands, truncation);
    t.add_term(w, 1);
    return t;
}

struct PhiEquations {
    std::vector<std::map<int, Rat>> lhs;
    std::vector<Rat> rhs;
};

void collect_rows(const ChordTangle& base_defect, const std::vector<ChordTangle>& column_defects,
                  int degree, PhiEquations& eqs) {
    // rows indexed by the normal words appearing in any defect at `degree`
    std::map<ChordWord, std::size_t> row_of;
    auto row = [&](const ChordWord& w) {
        auto [it, fresh] = row_of.emplace(w, eqs.lhs.size());
        if (fresh) {
            eqs.lhs.emplace_back();
            eqs.rhs.emplace_back(0);
        }
        return it->second;
    };
    for (const auto& [w, c] : base_defect.graded_part(degree).terms()) eqs.rhs[row(w)] -= c;
    for (std::size_t col = 0; col < column_defects.size(); ++col)
        for (const auto& [w, c] : column_defects[col].graded_part(degree).terms())
            eqs.lhs[row(w)][static_cast<int>(col)] += c;
}

void solve_phi_degree(ChordTangle& phi, int d, bool rotation_symmetry) {
    ChordTangle trimmed = phi.truncated(d);
    ChordTangle pent = pentagon_defect_of(trimmed);
    ChordTangle hex_plus = hexagon_defect_of(trimmed, 1);
    ChordTangle hex_minus = hexagon_defect_of(trimmed, -1);

    if (d % 2 == 1) {
        if (!pent.graded_part(d).is_zero())
            throw InternalError("pentagon obstruction at odd degree " + std::to_string(d));
        if (!hex_plus.graded_part(d).is_zero() || !hex_minus.graded_part(d).is_zero())
            throw InternalError("hexagon obstruction at odd degree " + std::to_string(d));
        return;
    }

    std::vector<ChordWord> basis = normal_chord_words(3, d);
    PhiEquations eqs;
    std::vector<ChordTangle> pent_cols, hexp_cols, hexm_cols;
    for (const ChordWord& w : basis) {
        ChordTangle perturbed = trimmed + word_tangle(3, d, w);
        pent_cols.push_back(pentagon_defect_of(perturbed) - pent);
        hexp_cols.push_back(hexagon_defect_of(perturbed, 1) - hex_plus);
        hexm_cols.push_back(hexagon_defect_of(perturbed, -1) - hex_minus);
    }
    collect_rows(pent, pent_cols, d, eqs);
    collect_rows(hex_plus, hexp_cols, d, eqs);
    collect_rows(hex_minus, hexm_cols, d, eqs);

    if (rotation_symmetry) {
        std::map<ChordWord, std::map<int, Rat>> sym_rows;
        for (std::size_t col = 0; col < basis.size(); ++col) {
            ChordTangle diff = word_tangle(3, d, basis[col]) - word_tangle(3, d, basis[col]).rotate180();
            for (const auto& [w, c] : diff.terms()) sym_rows[w][static_cast<int>(col)] += c;
        }
        for (auto& [w, lhs] : sym_rows) {
            (void)w;
            eqs.lhs.push_back(std::move(lhs));
            eqs.rhs.emplace_back(0);
        }
    }

    LinearSystem sys(static_cast<int>(basis.size()));
    for (std::size_t r = 0; r < eqs.lhs.size(); ++r) sys.add_equation(eqs.lhs[r], eqs.rhs[r]);
    auto sol = sys.solve();
    if (!sol)
        throw InternalError("pentagon/hexagon system has no solution at degree " + std::to_string(d) +
                            (rotation_symmetry ? " under the half-turn symmetry constraint" : ""));
    for (std::size_t col = 0; col < basis.size(); ++col)
        if (sol->values[col] != 0) phi.add_term(basis[col], sol->values[col]);

    ChordTangle check = phi.truncated(d);
    if (!pentagon_defect_of(check).graded_part(d).is_zero() ||
        !hexagon_defect_of(check, 1).graded_part(d).is_zero() ||
        !hexagon_defect_of(check, -1).graded_part(d).is_zero())
        throw InternalError("solved coefficients fail re-verification at degree " + std::to_string(d));
}

void solve_fold_degree(AssociatorData& a, int d) {
    SurfacePtr surf = marked_loop_surface();
    std::vector<FoldMatching> basis = fold_matchings(d);

    // Unknowns: cap coefficients, cup coefficients, then one multiplier per
    // four-term relation and side.
    int m = static_cast<int>(basis.size());
    ChordTangle corridor_left = a.phi.inverse().truncated(d);
    ChordTangle corridor_right = a.phi.truncated(d);
    DiagramSum known_left = zig_terms(surf, a.cup_i, corridor_left, a.cap_e, true, d);
    DiagramSum known_right = zig_terms(surf, a.cup_i, corridor_right, a.cap_e, false, d);

    std::vector<ChordDiagram> column_diagrams;
    for (const FoldMatching& mm : basis)
        column_diagrams.push_back(render_slots(surf, zig_slots({}, {}, mm, true)));

    std::vector<ChordDiagram> seeds = column_diagrams;
    for (const auto& [diag, c] : known_left.terms()) {
        (void)c;
        seeds.push_back(diag);
    }
    for (const auto& [diag, c] : known_right.terms()) {
        (void)c;
        seeds.push_back(diag);
    }
    std::vector<DiagramSum> rels = four_t_span(seeds, 1);

    std::map<std::pair<int, std::string>, std::size_t> row_of;
    std::vector<std::map<int, Rat>> lhs;
    std::vector<Rat> rhs;
    auto row = [&](int side, const ChordDiagram& diag) {
        auto [it, fresh] = row_of.emplace(std::make_pair(side, diag.serial()), lhs.size());
        if (fresh) {
            lhs.emplace_back();
            rhs.emplace_back(0);
        }
        return it->second;
    };

    int nrels = static_cast<int>(rels.size());
    int unknowns = 2 * m + 2 * nrels;
    for (int side = 0; side < 2; ++side) {
        const DiagramSum& known = side == 0 ? known_left : known_right;
        for (const auto& [diag, c] : known.terms()) rhs[row(side, diag)] -= c;
        for (int col = 0; col < m; ++col) {
            std::size_t r = row(side, column_diagrams[static_cast<std::size_t>(col)]);
            lhs[r][col] += 1;      // cap slot
            lhs[r][m + col] += 1;  // cup slot
        }
        for (int t = 0; t < nrels; ++t)
            for (const auto& [diag, c] : rels[static_cast<std::size_t>(t)].terms())
                lhs[row(side, diag)][2 * m + side * nrels + t] += c;
    }
    // Symmetric gauge: the cap and cup corrections agree and are invariant
    // under fold-order reversal.  Averaging any solution over these two
    // involutions yields one of this shape, so the rows cost no solvability.
    std::map<FoldMatching, int> index;
    for (int col = 0; col < m; ++col) index[basis[static_cast<std::size_t>(col)]] = col;
    for (int col = 0; col < m; ++col) {
        lhs.emplace_back();
        rhs.emplace_back(0);
        lhs.back()[col] += 1;
        lhs.back()[m + col] -= 1;
        int rev = index.at(reversed_matching(basis[static_cast<std::size_t>(col)]));
        if (rev <= col) continue;
        for (int off : {0, m}) {
            lhs.emplace_back();
            rhs.emplace_back(0);
            lhs.back()[off + col] += 1;
            lhs.back()[off + rev] -= 1;
        }
    }

    LinearSystem sys(unknowns);
    for (std::size_t r = 0; r < lhs.size(); ++r) sys.add_equation(lhs[r], rhs[r]);
    auto sol = sys.solve();
    if (!sol)
        throw InternalError("straightening system has no solution at degree " + std::to_string(d));
    for (int col = 0; col < m; ++col) {
        if (sol->values[static_cast<std::size_t>(col)] != 0)
            a.cap_e.add(basis[static_cast<std::size_t>(col)], sol->values[static_cast<std::size_t>(col)]);
        if (sol->values[static_cast<std::size_t>(m + col)] != 0)
            a.cup_i.add(basis[static_cast<std::size_t>(col)],
                        sol->values[static_cast<std::size_t>(m + col)]);
    }
}

// ---- cache ----------------------------------------------------------------

std::string cache_name(int truncation, bool symmetric) {
    return "associator_N" + std::to_string(truncation) + (symmetric ? "_sym" : "_free") + ".txt";
}

void write_series(std::ostream& out, const std::string& tag,
                  const std::map<ChordWord, Rat>& terms) {
    out << tag << ' ' << terms.size() << '\n';
    for (const auto& [w, c] : terms) {
        out << w.size();
        for (const auto& [x, y] : w) out << ' ' << x << ' ' << y;
        out << ' ' << c.get_str() << '\n';
    }
}

void write_fold(std::ostream& out, const std::string& tag, const FoldSeries& s) {
    out << tag << ' ' << s.terms.size() << '\n';
    for (const auto& [mm, c] : s.terms) {
        out << mm.size();
        for (const auto& [x, y] : mm) out << ' ' << x << ' ' << y;
        out << ' ' << c.get_str() << '\n';
    }
}

void save_cache(const AssociatorData& a, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    fs::path final_path = fs::path(dir) / cache_name(a.truncation, a.rotation_symmetric);
    fs::path tmp_path = final_path;
    tmp_path += ".tmp";
    {
        std::ofstream out(tmp_path);
        out << "chordq associator 1\n";
        out << "truncation " << a.truncation << '\n';
        out << "symmetric " << (a.rotation_symmetric ? 1 : 0) << '\n';
        write_series(out, "phi", a.phi.terms());
        write_fold(out, "cap", a.cap_e);
        write_fold(out, "cup", a.cup_i);
        out << "end\n";
    }
    fs::rename(tmp_path, final_path);
}

std::optional<AssociatorData> load_cache(int truncation, bool symmetric, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path path = fs::path(dir) / cache_name(truncation, symmetric);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != "chordq associator 1") return std::nullopt;
    int n = -1, sym = -1;
    std::string word;
    if (!(in >> word >> n) || word != "truncation" || n != truncation) return std::nullopt;
    if (!(in >> word >> sym) || word != "symmetric" || sym != (symmetric ? 1 : 0)) return std::nullopt;

    AssociatorData a;
    a.truncation = truncation;
    a.rotation_symmetric = symmetric;
    a.phi = ChordTangle::unit(3, truncation);
    a.r = exp_series(single_chord(2, 1, 2, Rat(1, 2), truncation));
    a.cap_e.truncation = truncation;
    a.cup_i.truncation = truncation;

    auto read_rat = [&](Rat& c) {
        std::string text;
        if (!(in >> text)) return false;
        try {
            c = Rat(text);
            c.canonicalize();
        } catch (const std::exception&) {
            return false;
        }
        return true;
    };
    std::size_t count = 0;
    if (!(in >> word >> count) || word != "phi") return std::nullopt;
    ChordTangle phi(3, truncation);
    for (std::size_t t = 0; t < count; ++t) {
        std::size_t len = 0;
        if (!(in >> len)) return std::nullopt;
        ChordWord w;
        for (std::size_t j = 0; j < len; ++j) {
            int x = 0, y = 0;
            if (!(in >> x >> y)) return std::nullopt;
            w.push_back({x, y});
        }
        Rat c;
        if (!read_rat(c)) return std::nullopt;
        try {
            phi.add_term(w, c);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    a.phi = phi;
    for (FoldSeries* s : {&a.cap_e, &a.cup_i}) {
        std::string tag = s == &a.cap_e ? "cap" : "cup";
        if (!(in >> word >> count) || word != tag) return std::nullopt;
        for (std::size_t t = 0; t < count; ++t) {
            std::size_t len = 0;
            if (!(in >> len)) return std::nullopt;
            FoldMatching mm;
            for (std::size_t j = 0; j < len; ++j) {
                int x = 0, y = 0;
                if (!(in >> x >> y)) return std::nullopt;
                mm.push_back({x, y});
            }
            Rat c;
            if (!read_rat(c)) return std::nullopt;
            try {
                s->add(normalize_fold_matching(mm), c);
            } catch (const std::exception&) {
                return std::nullopt;
            }
        }
    }
    if (!(in >> word) || word != "end") return std::nullopt;
    return a;
}

bool residuals_clean(const AssociatorData& a) {
    try {
        return pentagon_defect(a).is_zero() && hexagon_defect(a, 1).is_zero() &&
               hexagon_defect(a, -1).is_zero() && zigzag_identity_holds(a);
    } catch (const std::exception&) {
        return false;
    }
}

void record_provenance(AssociatorData& a) {
    a.equations.push_back("pentagon: residual zero through degree " + std::to_string(a.truncation));
    a.equations.push_back("hexagon (positive crossing): residual zero through degree " +
                          std::to_string(a.truncation));
    a.equations.push_back("hexagon (negative crossing): residual zero through degree " +
                          std::to_string(a.truncation));
    a.equations.push_back(
        "straightening (cap left, cap right): congruent to the bare strand modulo four-term "
        "relations through degree " +
        std::to_string(a.truncation));
    if (a.rotation_symmetric) a.equations.push_back("half-turn symmetry imposed on the re-bracketing series");
}

}  // namespace

FoldMatching normalize_fold_matching(FoldMatching m) {
    for (auto& [x, y] : m)
        if (x > y) std::swap(x, y);
    std::sort(m.begin(), m.end());
    std::vector<int> cover;
    for (const auto& [x, y] : m) {
        cover.push_back(x);
        cover.push_back(y);
    }
    std::sort(cover.begin(), cover.end());
    for (int j = 0; j < static_cast<int>(cover.size()); ++j)
        if (cover[static_cast<std::size_t>(j)] != j)
            throw InvalidArgument("fold matching must pair the points 0..2m-1 exactly");
    return m;
}

std::vector<FoldMatching> fold_matchings(int degree) {
    if (degree < 0) throw InvalidArgument("matching degree must be non-negative");
    std::vector<FoldMatching> out;
    FoldMatching partial;
    std::vector<int> free;
    for (int j = 2 * degree - 1; j >= 0; --j) free.push_back(j);
    // free is kept sorted descending so the smallest point is at the back
    auto rec = [&](auto&& self) -> void {
        if (free.empty()) {
            out.push_back(normalize_fold_matching(partial));
            return;
        }
        int a = free.back();
        free.pop_back();
        for (std::size_t pick = 0; pick < free.size(); ++pick) {
            int b = free[pick];
            free.erase(free.begin() + static_cast<std::ptrdiff_t>(pick));
            partial.push_back({a, b});
            self(self);
            partial.pop_back();
            free.insert(free.begin() + static_cast<std::ptrdiff_t>(pick), b);
        }
        free.push_back(a);
    };
    rec(rec);
    return out;
}

void FoldSeries::add(FoldMatching m, const Rat& c) {
    m = normalize_fold_matching(std::move(m));
    if (static_cast<int>(m.size()) > truncation) return;
    Rat& slot = terms[m];
    slot += c;
    if (slot == 0) terms.erase(m);
}

Rat FoldSeries::coefficient(const FoldMatching& m) const {
    auto it = terms.find(normalize_fold_matching(m));
    return it == terms.end() ? Rat(0) : it->second;
}

AssociatorData solve_associator(int truncation, const AssociatorOptions& options) {
    if (truncation < 0) throw InvalidArgument("truncation must be non-negative");
    if (truncation > options.max_truncation)
        throw InvalidArgument("truncation " + std::to_string(truncation) +
                              " exceeds the configured ceiling " +
                              std::to_string(options.max_truncation));

    if (!options.cache_dir.empty()) {
        auto cached = load_cache(truncation, options.rotation_symmetry, options.cache_dir);
        if (cached && residuals_clean(*cached)) {
            record_provenance(*cached);
            cached->equations.push_back("loaded from cache and re-verified");
            return *cached;
        }
    }

    AssociatorData a;
    a.truncation = truncation;
    a.rotation_symmetric = options.rotation_symmetry;
    a.phi = ChordTangle::unit(3, truncation);
    a.r = exp_series(single_chord(2, 1, 2, Rat(1, 2), truncation));
    a.cap_e.truncation = truncation;
    a.cup_i.truncation = truncation;
    a.cap_e.add({}, 1);
    a.cup_i.add({}, 1);

    for (int d = 1; d <= truncation; ++d) {
        solve_phi_degree(a.phi, d, options.rotation_symmetry);
        solve_fold_degree(a, d);
    }

    if (!residuals_clean(a)) throw InternalError("solved data fails final residual verification");
    record_provenance(a);

    if (!options.cache_dir.empty()) save_cache(a, options.cache_dir);
    return a;
}

ChordTangle pentagon_defect(const AssociatorData& a) { return pentagon_defect_of(a.phi); }

ChordTangle hexagon_defect(const AssociatorData& a, int sign) {
    if (sign != 1 && sign != -1) throw InvalidArgument("crossing sign must be +1 or -1");
    return hexagon_defect_of(a.phi, sign);
}

DiagramSum zigzag_composite(const AssociatorData& a, bool fold_on_left) {
    SurfacePtr surf = marked_loop_surface();
    ChordTangle corridor = fold_on_left ? a.phi.inverse() : a.phi;
    return zig_terms(surf, a.cup_i, corridor, a.cap_e, fold_on_left, -1);
}

DiagramSum zigzag_target(const AssociatorData& a) {
    (void)a;
    return DiagramSum(render_slots(marked_loop_surface(), {}));
}

bool zigzag_identity_holds(const AssociatorData& a) {
    DiagramSum target = zigzag_target(a);
    return equal_mod_4T_exact(zigzag_composite(a, true), target) &&
           equal_mod_4T_exact(zigzag_composite(a, false), target);
}

}  // namespace chordq
