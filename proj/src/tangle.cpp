#include "chordq/tangle.hpp"

#include <algorithm>

#include "chordq/errors.hpp"

namespace chordq {

namespace {

void check_gen(const ChordGen& g, int strands) {
    if (g.first < 1 || g.second <= g.first || g.second > strands)
        throw InvalidArgument("chord endpoints must name two distinct strands");
}

// Adds c times the normal form of `word` into `out`.  Rewrites the first
// pair whose maximal strands increase left to right: with g = t_ab (a < b)
// below h = t_sw (s < w, b < w), the factors swap, and when they share the
// strand s the commutator correction lifts the pair into the higher block:
//   [t_ab, t_aw] =  t_aw t_bw - t_bw t_aw,
//   [t_ab, t_bw] =  t_bw t_aw - t_aw t_bw.
void normalize_into(ChordWord word, Rat coeff, std::map<ChordWord, Rat>& out) {
    std::vector<std::pair<ChordWord, Rat>> work;
    work.emplace_back(std::move(word), std::move(coeff));
    while (!work.empty()) {
        auto [w, c] = std::move(work.back());
        work.pop_back();
        std::size_t i = 0;
        bool normal = true;
        for (; i + 1 < w.size(); ++i)
            if (w[i].second < w[i + 1].second) {
                normal = false;
                break;
            }
        if (normal) {
            Rat& slot = out[w];
            slot += c;
            if (slot == 0) out.erase(w);
            continue;
        }
        const auto [a, b] = w[i];
        const auto [s, t] = w[i + 1];
        ChordWord swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        work.emplace_back(std::move(swapped), c);
        if (s == a || s == b) {
            ChordGen low{a, t}, high{b, t};
            ChordWord first = w, second = w;
            if (s == a) {
                first[i] = low;
                first[i + 1] = high;
                second[i] = high;
                second[i + 1] = low;
            } else {
                first[i] = high;
                first[i + 1] = low;
                second[i] = low;
                second[i + 1] = high;
            }
            work.emplace_back(std::move(first), c);
            work.emplace_back(std::move(second), -c);
        }
    }
}

Tree replace_leaf(const Tree& t, int& index, const Tree& sub) {
    if (t.leaf()) return index-- == 0 ? sub : t;
    Tree left = replace_leaf(t.kids[0], index, sub);
    return pair_tree(std::move(left), replace_leaf(t.kids[1], index, sub));
}

Tree mirror(const Tree& t) {
    if (t.leaf()) return t;
    return pair_tree(mirror(t.kids[1]), mirror(t.kids[0]));
}

}  // namespace

ChordTangle::ChordTangle(int strands, int truncation)
    : strands_(strands),
      truncation_(truncation),
      orientations_(static_cast<std::size_t>(strands), 1),
      bottom_(strands > 0 ? left_comb(strands) : Tree{}),
      top_(bottom_) {
    if (strands < 0 || truncation < 0)
        throw InvalidArgument("strand count and truncation must be non-negative");
}

ChordTangle ChordTangle::unit(int strands, int truncation) {
    ChordTangle u(strands, truncation);
    u.terms_[ChordWord{}] = 1;
    return u;
}

void ChordTangle::set_boundaries(Tree bottom, Tree top) {
    if (bottom.leaves() != strands_ || top.leaves() != strands_)
        throw InvalidArgument("boundary bracketing does not fit the strand count");
    bottom_ = std::move(bottom);
    top_ = std::move(top);
}

void ChordTangle::set_orientations(std::vector<int> orientations) {
    if (orientations.size() != static_cast<std::size_t>(strands_))
        throw InvalidArgument("orientation list does not fit the strand count");
    for (int o : orientations)
        if (o != 1 && o != -1) throw InvalidArgument("orientations must be +1 or -1");
    orientations_ = std::move(orientations);
}

Rat ChordTangle::coefficient(const ChordWord& word) const {
    std::map<ChordWord, Rat> n;
    normalize_into(word, 1, n);
    Rat total = 0;
    for (const auto& [w, c] : n) {
        auto it = terms_.find(w);
        if (it != terms_.end()) total += c * it->second;
    }
    return total;
}

void ChordTangle::add_term(const ChordWord& word, const Rat& c) {
    if (static_cast<int>(word.size()) > truncation_) return;
    for (const ChordGen& g : word) check_gen(g, strands_);
    normalize_into(word, c, terms_);
}

ChordTangle& ChordTangle::operator+=(const ChordTangle& o) {
    if (strands_ != o.strands_ || orientations_ != o.orientations_ ||
        bottom_ != o.bottom_ || top_ != o.top_ || truncation_ != o.truncation_)
        throw InvalidArgument("added tangles must share strands, boundaries, and truncation");
    for (const auto& [w, c] : o.terms_) {
        Rat& slot = terms_[w];
        slot += c;
        if (slot == 0) terms_.erase(w);
    }
    return *this;
}

ChordTangle& ChordTangle::operator-=(const ChordTangle& o) {
    ChordTangle neg = o;
    neg.scale(-1);
    return *this += neg;
}

ChordTangle& ChordTangle::scale(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, coeff] : terms_) {
        (void)w;
        coeff *= c;
    }
    return *this;
}

ChordTangle ChordTangle::then(const ChordTangle& above) const {
    if (strands_ != above.strands_ || orientations_ != above.orientations_)
        throw InvalidArgument("composed tangles must share strand data");
    if (top_ != above.bottom_)
        throw InvalidArgument("composed tangles must agree along the interface");
    ChordTangle r(strands_, std::min(truncation_, above.truncation_));
    r.orientations_ = orientations_;
    r.bottom_ = bottom_;
    r.top_ = above.top_;
    for (const auto& [wa, ca] : terms_)
        for (const auto& [wb, cb] : above.terms_) {
            if (static_cast<int>(wa.size() + wb.size()) > r.truncation_) continue;
            ChordWord w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            normalize_into(std::move(w), ca * cb, r.terms_);
        }
    return r;
}

ChordTangle ChordTangle::inverse() const {
    auto unit_it = terms_.find(ChordWord{});
    if (unit_it == terms_.end() || unit_it->second == 0)
        throw InvalidArgument("only tangles with a unit term have a series inverse");
    Rat u = unit_it->second;
    std::map<ChordWord, Rat> rest;  // this/u - 1: no constant term
    for (const auto& [w, c] : terms_)
        if (!w.empty()) rest[w] = c / u;
    // geometric series sum (-1)^m rest^m; the chord arithmetic does not
    // look at the boundary trees
    std::map<ChordWord, Rat> result{{ChordWord{}, Rat(1)}};
    std::map<ChordWord, Rat> acc{{ChordWord{}, Rat(1)}};
    Rat sign = 1;
    for (int m = 1; m <= truncation_ && !acc.empty(); ++m) {
        std::map<ChordWord, Rat> next;
        for (const auto& [wa, ca] : acc)
            for (const auto& [wb, cb] : rest) {
                if (static_cast<int>(wa.size() + wb.size()) > truncation_) continue;
                ChordWord w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                normalize_into(std::move(w), ca * cb, next);
            }
        acc = std::move(next);
        sign = -sign;
        for (const auto& [w, c] : acc) {
            Rat& slot = result[w];
            slot += sign * c;
            if (slot == 0) result.erase(w);
        }
    }
    ChordTangle r(strands_, truncation_);
    r.orientations_ = orientations_;
    r.bottom_ = top_;
    r.top_ = bottom_;
    r.terms_ = std::move(result);
    r.scale(1 / u);
    return r;
}

ChordTangle ChordTangle::truncated(int truncation) const {
    if (truncation < 0) throw InvalidArgument("truncation must be non-negative");
    ChordTangle r = *this;
    r.truncation_ = truncation;
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        if (static_cast<int>(it->first.size()) > truncation)
            it = r.terms_.erase(it);
        else
            ++it;
    return r;
}

ChordTangle ChordTangle::graded_part(int degree) const {
    ChordTangle r = *this;
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        if (static_cast<int>(it->first.size()) != degree)
            it = r.terms_.erase(it);
        else
            ++it;
    return r;
}

int ChordTangle::min_degree() const {
    int best = -1;
    for (const auto& [w, c] : terms_) {
        (void)c;
        int d = static_cast<int>(w.size());
        if (best < 0 || d < best) best = d;
    }
    return best;
}

bool ChordTangle::is_even() const {
    for (const auto& [w, c] : terms_) {
        (void)c;
        if (w.size() % 2 != 0) return false;
    }
    return true;
}

ChordTangle ChordTangle::cable(int strand) const {
    if (strand < 1 || strand > strands_) throw InvalidArgument("no such strand to double");
    ChordTangle r(strands_ + 1, truncation_);
    r.orientations_ = orientations_;
    r.orientations_.insert(r.orientations_.begin() + strand - 1,
                           orientations_[static_cast<std::size_t>(strand) - 1]);
    Tree cherry = pair_tree(leaf_tree(), leaf_tree());
    int bi = strand - 1;
    r.bottom_ = replace_leaf(bottom_, bi, cherry);
    int ti = strand - 1;
    r.top_ = replace_leaf(top_, ti, cherry);
    auto images = [&](int s) -> std::vector<int> {
        if (s == strand) return {strand, strand + 1};
        return {s < strand ? s : s + 1};
    };
    for (const auto& [word, c] : terms_) {
        std::vector<ChordWord> expansion{ChordWord{}};
        for (const ChordGen& g : word) {
            std::vector<ChordWord> next;
            for (int ia : images(g.first))
                for (int ib : images(g.second)) {
                    ChordGen ng{std::min(ia, ib), std::max(ia, ib)};
                    for (const ChordWord& w : expansion) {
                        ChordWord e = w;
                        e.push_back(ng);
                        next.push_back(std::move(e));
                    }
                }
            expansion = std::move(next);
        }
        for (ChordWord& w : expansion) normalize_into(std::move(w), c, r.terms_);
    }
    return r;
}

ChordTangle ChordTangle::relabel(const std::vector<int>& image, int strands) const {
    if (image.size() != static_cast<std::size_t>(strands_))
        throw InvalidArgument("relabel image must cover every strand");
    std::vector<int> seen(static_cast<std::size_t>(strands) + 1, 0);
    for (int v : image) {
        if (v < 1 || v > strands) throw InvalidArgument("relabel image out of range");
        if (seen[static_cast<std::size_t>(v)]++) throw InvalidArgument("relabel image must be injective");
    }
    ChordTangle r(strands, truncation_);
    for (std::size_t s = 0; s < image.size(); ++s)
        r.orientations_[static_cast<std::size_t>(image[s]) - 1] = orientations_[s];
    for (const auto& [word, c] : terms_) {
        ChordWord w;
        w.reserve(word.size());
        for (const ChordGen& g : word) {
            int ia = image[static_cast<std::size_t>(g.first) - 1];
            int ib = image[static_cast<std::size_t>(g.second) - 1];
            w.emplace_back(std::min(ia, ib), std::max(ia, ib));
        }
        normalize_into(std::move(w), c, r.terms_);
    }
    return r;
}

ChordTangle ChordTangle::rotate180() const {
    ChordTangle r(strands_, truncation_);
    r.bottom_ = mirror(top_);
    r.top_ = mirror(bottom_);
    for (const auto& [word, c] : terms_) {
        ChordWord w;
        w.reserve(word.size());
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            int ia = strands_ + 1 - it->first;
            int ib = strands_ + 1 - it->second;
            w.emplace_back(std::min(ia, ib), std::max(ia, ib));
        }
        normalize_into(std::move(w), c, r.terms_);
    }
    return r;
}

bool ChordTangle::operator==(const ChordTangle& o) const {
    return strands_ == o.strands_ && orientations_ == o.orientations_ &&
           bottom_ == o.bottom_ && top_ == o.top_ && terms_ == o.terms_;
}

ChordTangle operator+(ChordTangle a, const ChordTangle& b) { return a += b; }
ChordTangle operator-(ChordTangle a, const ChordTangle& b) { return a -= b; }
ChordTangle operator*(const Rat& c, ChordTangle a) {
    a.scale(c);
    return a;
}

ChordTangle exp_series(const ChordTangle& x) {
    if (x.min_degree() == 0)
        throw InvalidArgument("exp needs a tangle with no constant term");
    if (x.bottom() != x.top())
        throw InvalidArgument("exp needs matching boundary bracketings");
    ChordTangle result = ChordTangle::unit(x.strands(), x.truncation());
    result.set_orientations(std::vector<int>(x.orientations()));
    result.set_boundaries(x.bottom(), x.top());
    ChordTangle acc = result;
    Rat factorial = 1;
    for (int m = 1; m <= x.truncation(); ++m) {
        acc = acc.then(x);
        if (acc.is_zero()) break;
        factorial *= m;
        ChordTangle contrib = acc;
        contrib.scale(1 / factorial);
        result += contrib;
    }
    return result;
}

namespace {

void block_words(int strands, int block_max, int degree, ChordWord& prefix,
                 std::vector<ChordWord>& out) {
    if (block_max < 2) {
        if (degree == 0) out.push_back(prefix);
        return;
    }
    // choose the word of generators whose maximal strand is block_max
    std::vector<ChordGen> gens;
    for (int i = 1; i < block_max; ++i) gens.emplace_back(i, block_max);
    // all lengths 0..degree, all words over gens of that length
    std::vector<ChordWord> partial{ChordWord{}};
    for (int len = 0; len <= degree; ++len) {
        for (const ChordWord& w : partial) {
            ChordWord next_prefix = prefix;
            next_prefix.insert(next_prefix.end(), w.begin(), w.end());
            block_words(strands, block_max - 1, degree - len, next_prefix, out);
        }
        if (len == degree) break;
        std::vector<ChordWord> grown;
        for (const ChordWord& w : partial)
            for (const ChordGen& g : gens) {
                ChordWord e = w;
                e.push_back(g);
                grown.push_back(std::move(e));
            }
        partial = std::move(grown);
    }
}

}  // namespace

std::vector<ChordWord> normal_chord_words(int strands, int degree) {
    if (strands < 0 || degree < 0) throw InvalidArgument("need non-negative strands and degree");
    std::vector<ChordWord> out;
    ChordWord prefix;
    block_words(strands, strands, degree, prefix, out);
    return out;
}

}  // namespace chordq
