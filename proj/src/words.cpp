#include "chordq/words.hpp"

#include <algorithm>
#include <sstream>

#include "chordq/errors.hpp"

namespace chordq {

Word reduce(Word w) {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

Word inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
}

Word mul(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return reduce(std::move(out));
}

Word conjugate(const Word& w, const Word& g) {
    return mul(mul(inverse(g), w), g);
}

Word cyclic_reduce(const Word& w) {
    Word out = reduce(w);
    std::size_t lo = 0, hi = out.size();
    while (hi - lo >= 2 && out[lo] == -out[hi - 1]) {
        ++lo;
        --hi;
    }
    return Word(out.begin() + lo, out.begin() + hi);
}

Word min_rotation(const Word& w) {
    if (w.size() <= 1) return w;
    Word best = w;
    Word cur = w;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (std::lexicographical_compare(cur.begin(), cur.end(), best.begin(), best.end()))
            best = cur;
    }
    return best;
}

int word_cmp(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

Letter letter_parse(const std::string& token, int rank) {
    bool inv = !token.empty() && token[0] == '~';
    std::string base = inv ? token.substr(1) : token;
    if (base.size() < 2 || base[0] != 'x')
        throw InvalidArgument("bad generator token: '" + token + "'");
    int idx = 0;
    for (std::size_t i = 1; i < base.size(); ++i) {
        char c = base[i];
        if (c < '0' || c > '9') throw InvalidArgument("bad generator token: '" + token + "'");
        idx = idx * 10 + (c - '0');
        if (idx > 1'000'000) throw InvalidArgument("generator index too large: '" + token + "'");
    }
    if (idx == 0) throw InvalidArgument("generator indices start at 1: '" + token + "'");
    if (rank > 0 && idx > rank)
        throw InvalidArgument("generator '" + token + "' exceeds surface rank " + std::to_string(rank));
    return inv ? -idx : idx;
}

Word word_parse(const std::string& text, int rank) {
    Word out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) out.push_back(letter_parse(token, rank));
    return out;
}

std::string letter_str(Letter l) {
    if (l == 0) throw InvalidArgument("letter 0 is not a generator");
    return (l < 0 ? "~x" : "x") + std::to_string(l < 0 ? -l : l);
}

std::string word_str(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += letter_str(w[i]);
    }
    return out;
}

}  // namespace chordq
