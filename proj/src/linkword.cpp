#include "chordq/linkword.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chordq/errors.hpp"

namespace chordq {

// ---------------------------------------------------------------------------
// bracketing trees

int Tree::leaves() const {
    if (leaf()) return 1;
    return kids[0].leaves() + kids[1].leaves();
}

Tree leaf_tree() { return Tree{}; }

Tree pair_tree(Tree left, Tree right) {
    Tree t;
    t.kids.reserve(2);
    t.kids.push_back(std::move(left));
    t.kids.push_back(std::move(right));
    return t;
}

Tree left_comb(int n) {
    if (n <= 0) throw InvalidArgument("left_comb needs a positive leaf count");
    Tree t = leaf_tree();
    for (int i = 1; i < n; ++i) t = pair_tree(std::move(t), leaf_tree());
    return t;
}

Tree comb_of_combs(const std::vector<int>& block_sizes) {
    Tree t;
    bool have = false;
    for (int s : block_sizes) {
        if (s == 0) continue;
        Tree block = left_comb(s);
        t = have ? pair_tree(std::move(t), std::move(block)) : std::move(block);
        have = true;
    }
    if (!have) throw InvalidArgument("comb_of_combs needs a nonempty block");
    return t;
}

std::string tree_str(const Tree& t) {
    if (t.leaf()) return "*";
    return "(" + tree_str(t.kids[0]) + tree_str(t.kids[1]) + ")";
}

namespace {

Tree parse_tree_at(const std::string& s, std::size_t& i) {
    if (i >= s.size()) throw InvalidArgument("truncated bracketing: " + s);
    if (s[i] == '*') {
        ++i;
        return leaf_tree();
    }
    if (s[i] != '(') throw InvalidArgument("bad bracketing character in: " + s);
    ++i;
    Tree l = parse_tree_at(s, i);
    Tree r = parse_tree_at(s, i);
    if (i >= s.size() || s[i] != ')') throw InvalidArgument("unbalanced bracketing: " + s);
    ++i;
    return pair_tree(std::move(l), std::move(r));
}

// a = (A(BC)) and b = ((AB)C) with the same three parts
bool rotation_pair(const Tree& a, const Tree& b) {
    if (a.leaf() || b.leaf() || a.kids[1].leaf() || b.kids[0].leaf()) return false;
    return a.kids[0] == b.kids[0].kids[0] && a.kids[1].kids[0] == b.kids[0].kids[1] &&
           a.kids[1].kids[1] == b.kids[1];
}

// one right-rotation toward the left-comb normal form: rewrites the first
// preorder node shaped (A(BC)) into ((AB)C); false when already a left comb
bool rotate_toward_comb(Tree& t) {
    if (t.leaf()) return false;
    if (!t.kids[1].leaf()) {
        Tree a = std::move(t.kids[0]);
        Tree b = std::move(t.kids[1].kids[0]);
        Tree c = std::move(t.kids[1].kids[1]);
        t = pair_tree(pair_tree(std::move(a), std::move(b)), std::move(c));
        return true;
    }
    return rotate_toward_comb(t.kids[0]);
}

// trees after each rotation, ending at the left comb; excludes the start
std::vector<Tree> path_to_comb(Tree t) {
    std::vector<Tree> path;
    while (rotate_toward_comb(t)) path.push_back(t);
    return path;
}

}  // namespace

Tree tree_parse(const std::string& text) {
    std::size_t i = 0;
    Tree t = parse_tree_at(text, i);
    if (i != text.size()) throw InvalidArgument("trailing characters in bracketing: " + text);
    return t;
}

bool one_association_apart(const Tree& a, const Tree& b) {
    if (a == b || a.leaf() || b.leaf()) return false;
    if (rotation_pair(a, b) || rotation_pair(b, a)) return true;
    if (a.kids[0] == b.kids[0]) return one_association_apart(a.kids[1], b.kids[1]);
    if (a.kids[1] == b.kids[1]) return one_association_apart(a.kids[0], b.kids[0]);
    return false;
}

std::vector<Tree> association_path(const Tree& from, const Tree& to) {
    if (from.leaves() != to.leaves())
        throw InvalidArgument("association path between different strand counts");
    std::vector<Tree> a{from};
    for (Tree& t : path_to_comb(from)) a.push_back(std::move(t));
    std::vector<Tree> b{to};
    for (Tree& t : path_to_comb(to)) b.push_back(std::move(t));
    // both chains end at the left comb; splice them at the first shared node
    std::size_t shared = 0;
    while (shared < a.size() && shared < b.size() &&
           a[a.size() - 1 - shared] == b[b.size() - 1 - shared])
        ++shared;
    if (shared == 0) throw InternalError("rotation chains fail to meet at the comb");
    std::vector<Tree> path;
    for (std::size_t i = 1; i + shared <= a.size(); ++i) path.push_back(a[i]);
    for (std::size_t i = b.size() - shared; i-- > 0;) path.push_back(b[i]);
    return path;
}

// ---------------------------------------------------------------------------
// slice walk

namespace {

struct Walk {
    std::vector<LevelState> levels;  // size slices+1
    std::map<int, int> cup_partner;  // thread -> thread across its cup
    std::map<int, int> cap_partner;  // thread -> thread across its cap
    std::map<int, int> orient_of;    // thread -> constant direction
    int thread_count = 0;
};

// whether leaves pos and pos+1 are the two kids of a single node
bool cherry_at(const Tree& t, int pos) {
    const Tree* cur = &t;
    int base = 0;
    while (!cur->leaf()) {
        int l = cur->kids[0].leaves();
        bool in_left = pos + 1 < base + l;
        bool in_right = pos >= base + l;
        if (!in_left && !in_right) return cur->kids[0].leaf() && cur->kids[1].leaf();
        if (in_left) {
            cur = &cur->kids[0];
        } else {
            base += l;
            cur = &cur->kids[1];
        }
    }
    return false;
}

// removes the sibling pair (pos, pos+1); preconditions: cherry_at(t, pos)
// and t.leaves() > 2
Tree drop_cherry(const Tree& t, int pos) {
    int l = t.kids[0].leaves();
    if (pos + 1 < l)
        return l == 2 ? t.kids[1] : pair_tree(drop_cherry(t.kids[0], pos), t.kids[1]);
    if (pos >= l) {
        const Tree& r = t.kids[1];
        return r.leaves() == 2 ? t.kids[0] : pair_tree(t.kids[0], drop_cherry(r, pos - l));
    }
    throw InternalError("drop_cherry without a cherry");
}

Walk walk_word(const std::vector<Slice>& slices) {
    Walk w;
    LevelState cur;
    w.levels.push_back(cur);
    for (std::size_t si = 0; si < slices.size(); ++si) {
        const Slice& s = slices[si];
        const std::string at = " at slice " + std::to_string(si);
        const int n = cur.count();
        switch (s.kind) {
            case TangleKind::Identity:
                break;
            case TangleKind::Assoc: {
                if (n < 2 || s.to.leaves() != n)
                    throw InvalidArgument("bracketing move with wrong strand count" + at);
                if (!one_association_apart(cur.tree, s.to))
                    throw InvalidArgument("bracketing move is not a single association" + at);
                cur.tree = s.to;
                break;
            }
            case TangleKind::Cross: {
                if (s.pos < 0 || s.pos + 1 >= n) throw InvalidArgument("crossing out of range" + at);
                if (!cherry_at(cur.tree, s.pos))
                    throw InvalidArgument("crossing strands are not bracketed together" + at);
                if (s.braid != 1 && s.braid != -1)
                    throw InvalidArgument("crossing braid must be +1 or -1" + at);
                std::swap(cur.orient[s.pos], cur.orient[s.pos + 1]);
                std::swap(cur.thread[s.pos], cur.thread[s.pos + 1]);
                break;
            }
            case TangleKind::Cup: {
                if (s.pos != n) throw InvalidArgument("cup must enter at the right end" + at);
                if (s.updown != 1 && s.updown != -1)
                    throw InvalidArgument("cup orientation must be +1 or -1" + at);
                Tree cherry = pair_tree(leaf_tree(), leaf_tree());
                cur.tree = n ? pair_tree(std::move(cur.tree), std::move(cherry)) : std::move(cherry);
                int ta = w.thread_count++;
                int tb = w.thread_count++;
                cur.orient.push_back(s.updown);
                cur.orient.push_back(-s.updown);
                cur.thread.push_back(ta);
                cur.thread.push_back(tb);
                w.cup_partner[ta] = tb;
                w.cup_partner[tb] = ta;
                w.orient_of[ta] = s.updown;
                w.orient_of[tb] = -s.updown;
                break;
            }
            case TangleKind::Cap: {
                if (s.pos < 0 || s.pos + 1 >= n) throw InvalidArgument("cap out of range" + at);
                if (!cherry_at(cur.tree, s.pos))
                    throw InvalidArgument("cap strands are not bracketed together" + at);
                if (cur.orient[s.pos] != -cur.orient[s.pos + 1])
                    throw InvalidArgument("cap strands must run in opposite directions" + at);
                int ta = cur.thread[s.pos];
                int tb = cur.thread[s.pos + 1];
                w.cap_partner[ta] = tb;
                w.cap_partner[tb] = ta;
                cur.tree = n == 2 ? Tree{} : drop_cherry(cur.tree, s.pos);
                cur.orient.erase(cur.orient.begin() + s.pos, cur.orient.begin() + s.pos + 2);
                cur.thread.erase(cur.thread.begin() + s.pos, cur.thread.begin() + s.pos + 2);
                break;
            }
            default:
                throw InvalidArgument("hexagon and corridor moves cannot enter the disk word" + at);
        }
        w.levels.push_back(cur);
    }
    return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinkWord

LinkWord::LinkWord(SurfacePtr surface, std::vector<Slice> slices, std::vector<int> top_gates)
    : surface_(std::move(surface)),
      slices_(std::move(slices)),
      top_gates_(std::move(top_gates)) {
    if (!surface_ && !empty()) throw InvalidArgument("a nonempty link word needs a surface");
    validate();
}

std::vector<LevelState> LinkWord::levels() const { return walk_word(slices_).levels; }

void LinkWord::validate() const {
    if (!surface_) {
        if (!empty()) throw InvalidArgument("a nonempty link word needs a surface");
        return;
    }
    Walk w = walk_word(slices_);
    const LevelState& top = w.levels.back();
    if (top.count() != static_cast<int>(top_gates_.size()))
        throw InvalidArgument("top endpoint count differs from the gate assignment");
    if (top.count() == 0) return;

    // gates appear in consecutive blocks following the vertex order
    std::vector<int> block_gate;
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < top.count(); ++i) {
        int g = top_gates_[i];
        surface_->gate_slot(g);  // rejects non-gates of this surface
        if (block_gate.empty() || block_gate.back() != g) {
            for (int prev : block_gate)
                if (prev == g) throw InvalidArgument("gate block split in two at the top");
            block_gate.push_back(g);
            blocks.emplace_back();
        }
        blocks.back().push_back(i);
    }
    for (std::size_t k = 0; k + 1 < block_gate.size(); ++k)
        if (surface_->gate_slot(block_gate[k]) >= surface_->gate_slot(block_gate[k + 1]))
            throw InvalidArgument("gate blocks out of vertex order at the top");

    // ribbon balance and mirrored orientations
    std::map<int, const std::vector<int>*> block_of;
    for (std::size_t k = 0; k < block_gate.size(); ++k) block_of[block_gate[k]] = &blocks[k];
    for (std::size_t k = 0; k < block_gate.size(); ++k) {
        int g = block_gate[k];
        auto it = block_of.find(-g);
        if (it == block_of.end() || it->second->size() != blocks[k].size())
            throw InvalidArgument("unbalanced ribbon blocks at the top");
        if (g > 0) {
            const std::vector<int>& plus = blocks[k];
            const std::vector<int>& minus = *it->second;
            std::size_t m = plus.size();
            for (std::size_t t = 0; t < m; ++t)
                if (top.orient[plus[t]] != -top.orient[minus[m - 1 - t]])
                    throw InvalidArgument("ribbon pairing joins strands of equal direction");
        }
    }

    // canonical top bracketing: left comb per block, left comb of blocks
    std::vector<int> sizes;
    for (const auto& b : blocks) sizes.push_back(static_cast<int>(b.size()));
    if (!(top.tree == comb_of_combs(sizes)))
        throw InvalidArgument("top bracketing differs from the closure form");
}

std::vector<CrossingRef> LinkWord::crossings() const {
    std::vector<CrossingRef> out;
    Walk w = walk_word(slices_);
    int index = 0;
    for (std::size_t si = 0; si < slices_.size(); ++si) {
        const Slice& s = slices_[si];
        if (s.kind != TangleKind::Cross) continue;
        const LevelState& lv = w.levels[si];
        out.push_back(CrossingRef{index++, si, s.pos,
                                  s.braid * lv.orient[s.pos] * lv.orient[s.pos + 1], s.site});
    }
    return out;
}

LinkWord LinkWord::with_braids(const std::map<int, int>& overrides) const {
    for (const auto& [id, b] : overrides) {
        (void)id;
        if (b != 1 && b != -1) throw InvalidArgument("braid signs must be +1 or -1");
    }
    std::vector<Slice> out = slices_;
    int index = 0;
    std::size_t applied = 0;
    for (Slice& s : out) {
        if (s.kind != TangleKind::Cross) continue;
        auto it = overrides.find(index);
        if (it != overrides.end()) {
            s.braid = it->second;
            ++applied;
        }
        ++index;
    }
    if (applied != overrides.size())
        throw InvalidArgument("crossing index out of range in braid override");
    return LinkWord(surface_, std::move(out), top_gates_);
}

int LinkWord::ribbon_partner(int top_position) const {
    const int n = static_cast<int>(top_gates_.size());
    if (top_position < 0 || top_position >= n)
        throw InvalidArgument("top position out of range");
    int g = top_gates_[top_position];
    int lo = top_position;
    int hi = top_position;
    while (lo > 0 && top_gates_[lo - 1] == g) --lo;
    while (hi + 1 < n && top_gates_[hi + 1] == g) ++hi;
    int qlo = -1;
    int qhi = -1;
    for (int i = 0; i < n; ++i) {
        if (top_gates_[i] != -g) continue;
        if (qlo < 0) qlo = i;
        qhi = i;
    }
    if (qlo < 0 || qhi - qlo != hi - lo)
        throw InvalidArgument("ribbon block missing its mirrored partner");
    return qlo + (hi - top_position);
}

ClosedLink LinkWord::close() const {
    ClosedLink link;
    if (empty()) return link;
    validate();
    Walk w = walk_word(slices_);
    const LevelState& top = w.levels.back();
    std::map<int, int> top_pos;
    for (int i = 0; i < top.count(); ++i) top_pos[top.thread[i]] = i;
    std::set<int> visited;
    for (int start = 0; start < w.thread_count; ++start) {
        if (visited.count(start)) continue;
        std::vector<ClosureEvent> comp;
        int t = start;
        do {
            visited.insert(t);
            ClosureEvent run;
            run.letter = 0;
            run.thread = t;
            run.ascending = w.orient_of.at(t) > 0;
            comp.push_back(run);
            if (run.ascending) {
                // exits at the thread's upper end: a cap or the top boundary
                auto cap = w.cap_partner.find(t);
                if (cap != w.cap_partner.end()) {
                    t = cap->second;
                } else {
                    int p = top_pos.at(t);
                    int q = ribbon_partner(p);
                    ClosureEvent ev;
                    ev.letter = top_gates_[p];
                    ev.thread = -1;
                    comp.push_back(ev);
                    t = top.thread[q];
                }
            } else {
                // exits at the thread's lower end, through its cup
                t = w.cup_partner.at(t);
            }
        } while (t != start);
        link.components.push_back(std::move(comp));
    }
    return link;
}

std::vector<CellSlice> LinkWord::cell_slices() const {
    std::vector<CellSlice> rows;
    if (empty()) return rows;
    validate();
    Walk w = walk_word(slices_);
    for (std::size_t si = 0; si < slices_.size(); ++si) {
        const Slice& s = slices_[si];
        CellSlice row;
        row.cell = "disk";
        row.kind = s.kind;
        row.bottom = w.levels[si].tree;
        row.top = w.levels[si + 1].tree;
        std::ostringstream d;
        switch (s.kind) {
            case TangleKind::Identity:
                d << "identity";
                break;
            case TangleKind::Assoc:
                d << "assoc " << tree_str(s.to);
                break;
            case TangleKind::Cross:
                d << "cross pos=" << s.pos << " braid=" << s.braid << " site=" << s.site;
                break;
            case TangleKind::Cup:
                d << "cup pos=" << s.pos << " updown=" << s.updown;
                break;
            case TangleKind::Cap:
                d << "cap pos=" << s.pos;
                break;
            default:
                break;
        }
        row.detail = d.str();
        rows.push_back(std::move(row));
    }

    // block layout at the top
    std::vector<int> sizes;
    std::vector<int> gates;
    for (int g : top_gates_) {
        if (gates.empty() || gates.back() != g) {
            gates.push_back(g);
            sizes.push_back(0);
        }
        ++sizes.back();
    }

    // hexagon cells peel one gate block off the right of the bunch; the
    // bracketing entering each split respects the two parts
    for (std::size_t m = sizes.size(); m >= 2; --m) {
        std::vector<int> head(sizes.begin(), sizes.begin() + m);
        CellSlice row;
        row.cell = "hex:" + std::to_string(m - 1);
        row.kind = TangleKind::Hexagon;
        row.bottom = comb_of_combs(head);
        row.top = row.bottom;
        std::ostringstream d;
        d << "split off gate " << letter_str(gates[m - 1]) << " block of " << sizes[m - 1];
        row.detail = d.str();
        rows.push_back(std::move(row));
    }

    // corridor cells join the mirrored gate blocks of each ribbon; the
    // trivial square keeps one bracketing on both walls
    std::set<int> done;
    for (std::size_t k = 0; k < gates.size(); ++k) {
        int ribbon = gates[k] > 0 ? gates[k] : -gates[k];
        if (!done.insert(ribbon).second) continue;
        CellSlice row;
        row.cell = "ribbon:" + std::to_string(ribbon);
        row.kind = TangleKind::TrivialSquare;
        row.bottom = left_comb(sizes[k]);
        row.top = row.bottom;
        std::ostringstream d;
        d << "mirrored pairing of gates " << letter_str(ribbon) << " and " << letter_str(-ribbon);
        row.detail = d.str();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string LinkWord::serialize() const {
    if (!surface_) return "linkword empty\n";
    std::ostringstream out;
    out << "linkword v1\n";
    out << "surface " << surface_->name() << " order";
    for (Letter g : surface_->vertex_order()) out << ' ' << g;
    out << '\n';
    out << "slices " << slices_.size() << '\n';
    for (const Slice& s : slices_) {
        switch (s.kind) {
            case TangleKind::Identity:
                out << "id\n";
                break;
            case TangleKind::Assoc:
                out << "assoc " << tree_str(s.to) << '\n';
                break;
            case TangleKind::Cross:
                out << "cross " << s.pos << ' ' << s.braid << ' ' << s.site << '\n';
                break;
            case TangleKind::Cup:
                out << "cup " << s.pos << ' ' << s.updown << '\n';
                break;
            case TangleKind::Cap:
                out << "cap " << s.pos << '\n';
                break;
            default:
                throw InternalError("derived cell row inside a disk word");
        }
    }
    out << "gates";
    for (int g : top_gates_) out << ' ' << g;
    out << "\nend\n";
    return out.str();
}

LinkWord LinkWord::parse(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    in >> tag;
    if (tag != "linkword") throw InvalidArgument("not a link word: " + text);
    std::string version;
    in >> version;
    if (version == "empty") return LinkWord();
    if (version != "v1") throw InvalidArgument("unknown link word format: " + version);
    std::string kw;
    in >> kw;
    if (kw != "surface") throw InvalidArgument("link word missing its surface line");
    std::string name;
    in >> name >> kw;
    if (kw != "order") throw InvalidArgument("link word missing the surface gate order");
    std::vector<Letter> order;
    std::string tok;
    std::size_t nslices = 0;
    while (in >> tok) {
        if (tok == "slices") {
            in >> nslices;
            break;
        }
        order.push_back(std::stoi(tok));
    }
    SurfacePtr surf = make_surface(name, order);
    std::vector<Slice> slices;
    for (std::size_t i = 0; i < nslices; ++i) {
        if (!(in >> kw)) throw InvalidArgument("truncated link word");
        Slice s;
        if (kw == "id") {
            s.kind = TangleKind::Identity;
        } else if (kw == "assoc") {
            std::string tree;
            in >> tree;
            s.kind = TangleKind::Assoc;
            s.to = tree_parse(tree);
        } else if (kw == "cross") {
            s.kind = TangleKind::Cross;
            in >> s.pos >> s.braid >> s.site;
        } else if (kw == "cup") {
            s.kind = TangleKind::Cup;
            in >> s.pos >> s.updown;
        } else if (kw == "cap") {
            s.kind = TangleKind::Cap;
            in >> s.pos;
        } else {
            throw InvalidArgument("unknown slice keyword: " + kw);
        }
        slices.push_back(std::move(s));
    }
    if (!(in >> kw) || kw != "gates") throw InvalidArgument("link word missing its gate line");
    std::vector<int> gates;
    while (in >> tok && tok != "end") gates.push_back(std::stoi(tok));
    if (tok != "end") throw InvalidArgument("link word missing its end line");
    return LinkWord(std::move(surf), std::move(slices), std::move(gates));
}

bool LinkWord::operator==(const LinkWord& o) const {
    if (!surface_ || !o.surface_) {
        if (static_cast<bool>(surface_) != static_cast<bool>(o.surface_)) return false;
    } else if (!surface_->same_as(*o.surface_)) {
        return false;
    }
    return slices_ == o.slices_ && top_gates_ == o.top_gates_;
}

// ---------------------------------------------------------------------------
// slice emission keeping a left-comb bracketing between operations

namespace {

// left comb whose leaves pos and pos+1 are pulled into a cherry
Tree comb_with_cherry(int n, int pos) {
    Tree cherry = pair_tree(leaf_tree(), leaf_tree());
    Tree t = pos > 0 ? pair_tree(left_comb(pos), std::move(cherry)) : std::move(cherry);
    for (int i = pos + 2; i < n; ++i) t = pair_tree(std::move(t), leaf_tree());
    return t;
}

struct Builder {
    std::vector<Slice> slices;
    Tree tree;
    int count = 0;
    int crossing_count = 0;

    void reshape(const Tree& target) {
        for (Tree& t : association_path(tree, target)) {
            Slice s;
            s.kind = TangleKind::Assoc;
            s.to = t;
            slices.push_back(std::move(s));
        }
        tree = target;
    }

    int cross(int pos, int braid, int site) {
        reshape(comb_with_cherry(count, pos));
        Slice s;
        s.kind = TangleKind::Cross;
        s.pos = pos;
        s.braid = braid;
        s.site = site;
        slices.push_back(std::move(s));
        reshape(left_comb(count));
        return crossing_count++;
    }

    void cup(int updown) {
        Slice s;
        s.kind = TangleKind::Cup;
        s.pos = count;
        s.updown = updown;
        slices.push_back(std::move(s));
        Tree cherry = pair_tree(leaf_tree(), leaf_tree());
        tree = count ? pair_tree(std::move(tree), std::move(cherry)) : std::move(cherry);
        count += 2;
        reshape(left_comb(count));
    }

    void cap(int pos) {
        reshape(comb_with_cherry(count, pos));
        Slice s;
        s.kind = TangleKind::Cap;
        s.pos = pos;
        slices.push_back(std::move(s));
        count -= 2;
        tree = count ? left_comb(count) : Tree{};
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// stacking

LinkWord stack(const LinkWord& a, const LinkWord& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (!a.surface()->same_as(*b.surface()))
        throw InvalidArgument("stacking needs a common surface");

    std::vector<LevelState> alv = a.levels();
    std::vector<LevelState> blv = b.levels();
    const Tree& a_top = alv.back().tree;
    const Tree& b_top = blv.back().tree;
    const int ka = alv.back().count();
    const int kb = blv.back().count();
    const bool wrap = ka > 0;

    // the upper word keeps its own site labels out of the lower word's range
    int site_shift = 0;
    for (const Slice& s : a.slices())
        if (s.kind == TangleKind::Cross && s.site > site_shift) site_shift = s.site;

    std::vector<Slice> slices = a.slices();
    for (std::size_t si = 0; si < b.slices().size(); ++si) {
        Slice s = b.slices()[si];
        switch (s.kind) {
            case TangleKind::Assoc:
                if (wrap) s.to = pair_tree(a_top, std::move(s.to));
                slices.push_back(std::move(s));
                break;
            case TangleKind::Cross:
                s.pos += ka;
                if (s.site != 0) s.site += site_shift;
                slices.push_back(std::move(s));
                break;
            case TangleKind::Cap:
                s.pos += ka;
                slices.push_back(std::move(s));
                break;
            case TangleKind::Cup: {
                const LevelState& before = blv[si];
                const LevelState& after = blv[si + 1];
                s.pos += ka;
                slices.push_back(std::move(s));
                if (wrap && before.count() > 0) {
                    // ((A T) cherry) -> (A (T cherry)) restores the wrapping
                    Slice fix;
                    fix.kind = TangleKind::Assoc;
                    fix.to = pair_tree(a_top, after.tree);
                    slices.push_back(std::move(fix));
                }
                break;
            }
            case TangleKind::Identity:
                slices.push_back(std::move(s));
                break;
            default:
                throw InvalidArgument("hexagon and corridor moves cannot enter the disk word");
        }
    }

    Builder bld;
    bld.slices = std::move(slices);
    bld.count = ka + kb;
    if (kb == 0)
        bld.tree = a_top;
    else
        bld.tree = wrap ? pair_tree(a_top, b_top) : b_top;

    // target order: per gate in vertex order, the lower word's endpoints come
    // first at positive gates and last at negative ones, which keeps the
    // mirrored ribbon pairing intact
    struct Tag {
        int side;
        int gate;
    };
    std::vector<Tag> tags;
    for (int i = 0; i < ka; ++i) tags.push_back(Tag{0, a.top_gates()[i]});
    for (int j = 0; j < kb; ++j) tags.push_back(Tag{1, b.top_gates()[j]});
    std::vector<int> seq;
    for (Letter g : a.surface()->vertex_order()) {
        auto add_side = [&](int side) {
            for (int i = 0; i < static_cast<int>(tags.size()); ++i)
                if (tags[i].side == side && tags[i].gate == g) seq.push_back(i);
        };
        if (g > 0) {
            add_side(0);
            add_side(1);
        } else {
            add_side(1);
            add_side(0);
        }
    }
    if (static_cast<int>(seq.size()) != bld.count)
        throw InternalError("stacking lost a top endpoint");
    std::vector<int> target(bld.count);
    for (int r = 0; r < static_cast<int>(seq.size()); ++r) target[seq[r]] = r;

    if (ka > 0 && kb > 0) {
        bld.reshape(left_comb(bld.count));
        // adjacent-swap sort; every merge crossing puts the upper word's
        // strand over the lower word's
        bool moved = true;
        while (moved) {
            moved = false;
            for (int i = 0; i + 1 < bld.count; ++i) {
                if (target[i] <= target[i + 1]) continue;
                if (tags[i].side == tags[i + 1].side)
                    throw InternalError("stacking crossed strands of one factor");
                bld.cross(i, tags[i].side == 1 ? 1 : -1, 0);
                std::swap(target[i], target[i + 1]);
                std::swap(tags[i], tags[i + 1]);
                moved = true;
            }
        }
    }

    std::vector<int> gates(bld.count);
    for (int i = 0; i < bld.count; ++i) gates[i] = tags[i].gate;
    if (bld.count > 0) {
        std::vector<int> sizes;
        for (int i = 0; i < bld.count; ++i) {
            if (i == 0 || gates[i] != gates[i - 1]) sizes.push_back(0);
            ++sizes.back();
        }
        bld.reshape(comb_of_combs(sizes));
    }
    return LinkWord(a.surface(), std::move(bld.slices), std::move(gates));
}

// ---------------------------------------------------------------------------
// formal sums

void FormalLinkSum::add(const LinkWord& w, const Rat& c) {
    if (c == 0) return;
    std::string key = w.serialize();
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), std::make_pair(w, c));
        return;
    }
    it->second.second += c;
    if (it->second.second == 0) terms_.erase(it);
}

FormalLinkSum& FormalLinkSum::operator+=(const FormalLinkSum& o) {
    filtration_bound_ = std::min(filtration_bound_, o.filtration_bound_);
    for (const auto& [key, term] : o.terms_) {
        (void)key;
        add(term.first, term.second);
    }
    return *this;
}

FormalLinkSum& FormalLinkSum::scale(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, term] : terms_) {
        (void)key;
        term.second *= c;
    }
    return *this;
}

bool FormalLinkSum::operator==(const FormalLinkSum& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (const auto& [key, term] : terms_) {
        if (key != it->first || term.second != it->second.second) return false;
        ++it;
    }
    return true;
}

FormalLinkSum stack(const FormalLinkSum& a, const FormalLinkSum& b) {
    FormalLinkSum out;
    out.set_filtration_bound(a.filtration_bound() + b.filtration_bound());
    for (const auto& [ka, ta] : a.terms()) {
        (void)ka;
        for (const auto& [kb, tb] : b.terms()) {
            (void)kb;
            out.add(stack(ta.first, tb.first), ta.second * tb.second);
        }
    }
    return out;
}

FormalLinkSum nabla(const LinkWord& w, const std::vector<int>& crossing_ids) {
    std::vector<CrossingRef> refs = w.crossings();
    std::map<int, const CrossingRef*> by_index;
    for (const CrossingRef& r : refs) by_index[r.index] = &r;
    std::set<int> seen;
    for (int id : crossing_ids) {
        if (!by_index.count(id)) throw InvalidArgument("unknown crossing id " + std::to_string(id));
        if (!seen.insert(id).second)
            throw InvalidArgument("repeated crossing id " + std::to_string(id));
    }
    const std::size_t k = crossing_ids.size();
    if (k > 16) throw ResourceError("crossing-switch alternation over more than 16 crossings");
    FormalLinkSum out;
    out.set_filtration_bound(static_cast<int>(k));
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::map<int, int> overrides;
        Rat coeff = 1;
        for (std::size_t j = 0; j < k; ++j) {
            const CrossingRef& r = *by_index.at(crossing_ids[j]);
            int want = (mask >> j) & 1 ? 1 : -1;
            if (want < 0) coeff = -coeff;
            // braid realizing the requested oriented sign at this crossing
            overrides[r.index] = want * r.eps * w.slices()[r.slice].braid;
        }
        out.add(w.with_braids(overrides), coeff);
    }
    return out;
}

// ---------------------------------------------------------------------------
// standard position

namespace {

struct ArcInfo {
    int comp = 0;
    int corner = 0;       // arc index along the component
    bool pseudo = false;  // letterless component: a single cup/cap circle
    Letter gate_in = 0;   // gate feeding the descending leg
    Letter gate_out = 0;  // gate receiving the ascending leg
    std::vector<int> site_labels;  // chord labels along the arc, traversal order
};

struct ArcEndpoint {
    int arc = 0;
    int rank = 0;  // traversal position among the arc's chord endpoints
};

}  // namespace

CompiledDiagram compile_standard_position(const ChordDiagram& d) {
    const SurfacePtr& surf = d.surface();
    const auto& comps = d.components();

    // arcs between consecutive letters; a letterless component contributes
    // one pseudo arc closed off by a cap instead of ribbon gates
    std::vector<ArcInfo> arcs;
    std::vector<int> letter_count(comps.size(), 0);
    std::map<std::pair<int, int>, ArcEndpoint> endpoint_of;  // (comp, token) ->
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const TokenList& comp = comps[c];
        std::vector<int> letter_pos;
        for (std::size_t t = 0; t < comp.size(); ++t)
            if (!comp[t].marker) letter_pos.push_back(static_cast<int>(t));
        letter_count[c] = static_cast<int>(letter_pos.size());
        if (letter_pos.empty()) {
            ArcInfo a;
            a.comp = static_cast<int>(c);
            a.pseudo = true;
            int arc_id = static_cast<int>(arcs.size());
            for (std::size_t t = 0; t < comp.size(); ++t) {
                endpoint_of[{static_cast<int>(c), static_cast<int>(t)}] =
                    ArcEndpoint{arc_id, static_cast<int>(a.site_labels.size())};
                a.site_labels.push_back(comp[t].value);
            }
            arcs.push_back(std::move(a));
            continue;
        }
        const int k = static_cast<int>(letter_pos.size());
        const int len = static_cast<int>(comp.size());
        for (int j = 0; j < k; ++j) {
            ArcInfo a;
            a.comp = static_cast<int>(c);
            a.corner = j;
            a.gate_in = -comp[letter_pos[j]].value;
            a.gate_out = comp[letter_pos[(j + 1) % k]].value;
            int arc_id = static_cast<int>(arcs.size());
            for (int step = 1; step <= len; ++step) {
                int t = (letter_pos[j] + step) % len;
                if (!comp[t].marker) break;
                endpoint_of[{static_cast<int>(c), t}] =
                    ArcEndpoint{arc_id, static_cast<int>(a.site_labels.size())};
                a.site_labels.push_back(comp[t].value);
            }
            arcs.push_back(std::move(a));
        }
    }

    // chord sites with their two arc endpoints, ordered by label
    std::map<int, std::vector<ArcEndpoint>> chord_eps;
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (std::size_t t = 0; t < comps[c].size(); ++t)
            if (comps[c][t].marker)
                chord_eps[comps[c][t].value].push_back(
                    endpoint_of.at({static_cast<int>(c), static_cast<int>(t)}));
    for (const auto& [l, eps] : chord_eps) {
        (void)l;
        if (eps.size() != 2) throw InternalError("chord without exactly two endpoints");
    }

    // every arc becomes a zigzag of monotone legs, descending and ascending
    // by turns, with one leg per chord endpoint: the endpoint of traversal
    // rank r lives on leg r, so any choice of crossing heights meets the arc
    // in the right order and every chord pattern is realizable
    std::vector<int> leg_count(arcs.size());
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        int p = static_cast<int>(arcs[a].site_labels.size());
        leg_count[a] = std::max(2, 2 * ((p + 1) / 2));
    }

    // assemble the word: the zigzag cups, the marked site crossings in label
    // order, the caps joining consecutive legs, then ribbon routing
    Builder bld;
    std::vector<std::pair<int, int>> pos_tag;  // (arc, leg) per strand position
    for (std::size_t a = 0; a < arcs.size(); ++a)
        for (int i = 0; i < leg_count[a] / 2; ++i) {
            bld.cup(-1);
            pos_tag.emplace_back(static_cast<int>(a), 2 * i);
            pos_tag.emplace_back(static_cast<int>(a), 2 * i + 1);
        }
    auto find_pos = [&](int arc, int leg) {
        for (std::size_t i = 0; i < pos_tag.size(); ++i)
            if (pos_tag[i] == std::make_pair(arc, leg)) return static_cast<int>(i);
        throw InternalError("lost a strand while assembling the standard position");
    };
    auto adjacent_swap = [&](int i, int braid, int site) {
        int idx = bld.cross(i, braid, site);
        std::swap(pos_tag[i], pos_tag[i + 1]);
        return idx;
    };
    auto bring_together = [&](int& pa, int& pb) {
        // routes strand pb immediately to the right of strand pa
        while (pb > pa + 1) {
            adjacent_swap(pb - 1, 1, 0);
            --pb;
        }
        while (pb < pa) {
            adjacent_swap(pb, 1, 0);
            ++pb;
            if (pb == pa) --pa;  // the last hop stepped over the first strand
        }
    };

    std::map<int, int> site_cross_index;  // chord label -> crossing index
    for (const auto& [label, eps] : chord_eps) {
        int pa = find_pos(eps[0].arc, eps[0].rank);
        int pb = find_pos(eps[1].arc, eps[1].rank);
        bring_together(pa, pb);
        // the marked crossing, then a plain return crossing so both strands
        // keep their places
        site_cross_index[label] = adjacent_swap(pa, 1, label);
        adjacent_swap(pa, 1, 0);
    }

    // caps join each ascending leg to the next descending one; letterless
    // circles also close their last leg onto their first; the descending
    // strand approaches from its own side so the closure never kinks the arc
    auto cap_pair = [&](int arc, int leg_up, int leg_down) {
        int pu = find_pos(arc, leg_up);
        int pd = find_pos(arc, leg_down);
        while (pd > pu + 1) {
            adjacent_swap(pd - 1, 1, 0);
            --pd;
        }
        while (pd < pu - 1) {
            adjacent_swap(pd, 1, 0);
            ++pd;
        }
        int left = std::min(pu, pd);
        bld.cap(left);
        pos_tag.erase(pos_tag.begin() + left, pos_tag.begin() + left + 2);
    };
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        for (int i = 1; i + 1 < leg_count[a]; i += 2) cap_pair(static_cast<int>(a), i, i + 1);
        if (arcs[a].pseudo) cap_pair(static_cast<int>(a), leg_count[a] - 1, 0);
    }

    // ribbon targets: within gate +i the ribbon traversals appear in
    // component order, within gate -i reversed, so the mirrored pairing joins
    // the two legs of each traversal
    std::vector<std::pair<int, int>> layout;
    std::vector<int> gates;
    std::vector<int> block_sizes;
    auto occ_key = [&](int arc, int leg) {
        const ArcInfo& ai = arcs[arc];
        int li = leg > 0 ? (ai.corner + 1) % letter_count[ai.comp] : ai.corner;
        return std::pair<int, int>(ai.comp, li);
    };
    for (Letter g : surf->vertex_order()) {
        std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> entries;
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            if (arcs[a].pseudo) continue;
            if (arcs[a].gate_out == g)
                entries.push_back(
                    {occ_key(static_cast<int>(a), +1), {static_cast<int>(a), leg_count[a] - 1}});
            if (arcs[a].gate_in == g)
                entries.push_back({occ_key(static_cast<int>(a), -1), {static_cast<int>(a), 0}});
        }
        std::sort(entries.begin(), entries.end());
        if (g < 0) std::reverse(entries.begin(), entries.end());
        if (entries.empty()) continue;
        block_sizes.push_back(static_cast<int>(entries.size()));
        for (const auto& e : entries) {
            layout.push_back(e.second);
            gates.push_back(g);
        }
    }
    if (layout.size() != pos_tag.size())
        throw InternalError("standard position lost a ribbon endpoint");

    std::vector<int> target(pos_tag.size());
    for (std::size_t r = 0; r < layout.size(); ++r)
        target[find_pos(layout[r].first, layout[r].second)] = static_cast<int>(r);
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i + 1 < static_cast<int>(pos_tag.size()); ++i) {
            if (target[i] <= target[i + 1]) continue;
            adjacent_swap(i, 1, 0);
            std::swap(target[i], target[i + 1]);
            moved = true;
        }
    }
    if (!pos_tag.empty()) bld.reshape(comb_of_combs(block_sizes));

    CompiledDiagram out;
    out.word = LinkWord(surf, std::move(bld.slices), std::move(gates));
    for (const auto& [label, idx] : site_cross_index) {
        (void)label;
        out.site_ids.push_back(idx);
    }
    return out;
}

FormalLinkSum lambda_compile(const ChordDiagram& d) {
    CompiledDiagram c = compile_standard_position(d);
    return nabla(c.word, c.site_ids);
}

ChordDiagram diagram_of_sites(const LinkWord& w) {
    if (!w.surface())
        throw InvalidArgument("cannot read a diagram off the surfaceless empty word");
    std::vector<LevelState> lv = w.levels();
    std::map<int, std::vector<std::pair<int, int>>> marks;  // thread -> (height, label)
    for (std::size_t si = 0; si < w.slices().size(); ++si) {
        const Slice& s = w.slices()[si];
        if (s.kind != TangleKind::Cross || s.site == 0) continue;
        marks[lv[si].thread[s.pos]].push_back({static_cast<int>(si), s.site});
        marks[lv[si].thread[s.pos + 1]].push_back({static_cast<int>(si), s.site});
    }
    ClosedLink link = w.close();
    std::vector<TokenList> out;
    for (const auto& comp : link.components) {
        TokenList toks;
        for (const ClosureEvent& ev : comp) {
            if (ev.letter != 0) {
                toks.push_back(letter_token(ev.letter));
                continue;
            }
            auto it = marks.find(ev.thread);
            if (it == marks.end()) continue;
            std::vector<std::pair<int, int>> ms = it->second;
            std::sort(ms.begin(), ms.end());
            if (!ev.ascending) std::reverse(ms.begin(), ms.end());
            for (const auto& [h, label] : ms) {
                (void)h;
                toks.push_back(marker_token(label));
            }
        }
        out.push_back(std::move(toks));
    }
    return ChordDiagram(w.surface(), std::move(out));
}

}  // namespace chordq
