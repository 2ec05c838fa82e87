#include <algorithm>
#include <set>

#include "chordq/errors.hpp"
#include "chordq/surface.hpp"
#include "chordq/words.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace chordq;
using chordq::testing::Rng;

namespace {

// Oracle: cancel one adjacent inverse pair per scan, rescan until stable.
Word naive_reduce(Word w) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (w[i] == -w[i + 1]) {
                w.erase(w.begin() + i, w.begin() + i + 2);
                changed = true;
                break;
            }
        }
    }
    return w;
}

// Oracle: explore every cancellation order; the set of terminal words must be
// a single normal form (free reduction is confluent).
void all_reductions(const Word& w, std::set<Word>& out) {
    bool any = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] == -w[i + 1]) {
            Word v = w;
            v.erase(v.begin() + i, v.begin() + i + 2);
            any = true;
            all_reductions(v, out);
        }
    }
    if (!any) out.insert(w);
}

Word random_word(Rng& rng, int rank, int len) {
    Word w;
    for (int i = 0; i < len; ++i) {
        int g = rng.uniform_int(1, rank);
        w.push_back(rng.coin() ? g : -g);
    }
    return w;
}

// Canonical form of a free homotopy class of loops (words up to rotation and
// free/cyclic reduction).
Word loop_canonical(const Word& w) { return min_rotation(cyclic_reduce(w)); }

}  // namespace

TEST_CASE("free reduction matches the rescan oracle") {
    Rng rng(20260817);
    for (int trial = 0; trial < 400; ++trial) {
        Word w = random_word(rng, 3, rng.uniform_int(0, 12));
        CHECK(reduce(w) == naive_reduce(w));
    }
}

TEST_CASE("free reduction is confluent on all cancellation orders") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Word w = random_word(rng, 2, rng.uniform_int(0, 8));
        std::set<Word> forms;
        all_reductions(w, forms);
        REQUIRE(forms.size() == 1);
        CHECK(*forms.begin() == reduce(w));
    }
}

TEST_CASE("word algebra basics") {
    Word a = word_parse("x1 x2");
    Word b = word_parse("~x2 x1");
    CHECK(mul(a, b) == word_parse("x1 x1"));
    CHECK(mul(a, inverse(a)).empty());
    CHECK(mul(inverse(a), a).empty());
    CHECK(conjugate(a, Word{}) == a);
    CHECK(reduce(word_parse("x1 ~x1")).empty());
    // g^-1 w g, letter by letter
    CHECK(conjugate(word_parse("x2"), word_parse("x1")) == word_parse("~x1 x2 x1"));
}

TEST_CASE("cyclic reduction strips conjugating collars") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        Word core = reduce(random_word(rng, 3, rng.uniform_int(0, 6)));
        Word g = random_word(rng, 3, rng.uniform_int(0, 4));
        Word w = conjugate(core, g);
        Word c = cyclic_reduce(w);
        // no cancelling pair, including around the wrap
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c.size() >= 2) CHECK(c[i] != -c[(i + 1) % c.size()]);
        CHECK(loop_canonical(w) == loop_canonical(core));
    }
}

TEST_CASE("loop canonical form is rotation invariant") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        Word w = random_word(rng, 3, rng.uniform_int(1, 9));
        Word canon = loop_canonical(w);
        Word cur = w;
        for (std::size_t r = 0; r < w.size(); ++r) {
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
            CHECK(loop_canonical(cur) == canon);
        }
    }
    CHECK(loop_canonical(word_parse("x2 x1")) == word_parse("x1 x2"));
}

TEST_CASE("word parse/print round trip") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Word w = random_word(rng, 9, rng.uniform_int(0, 10));
        CHECK(word_parse(word_str(w)) == w);
    }
    CHECK(word_str(word_parse("x1 ~x12")) == "x1 ~x12");
    CHECK_THROWS_AS(word_parse("x0"), InvalidArgument);
    CHECK_THROWS_AS(word_parse("y1"), InvalidArgument);
    CHECK_THROWS_AS(word_parse("x1 x3", 2), InvalidArgument);
    CHECK_THROWS_AS(word_parse("~"), InvalidArgument);
    CHECK_THROWS_AS(word_parse("x"), InvalidArgument);
}

TEST_CASE("planar surfaces: rank, boundary count, genus zero") {
    for (int p = 1; p <= 5; ++p) {
        auto s = planar_surface(p);
        CHECK(s->rank() == p - 1);
        CHECK(s->boundary_components() == p);
        CHECK(s->genus() == 0);
        CHECK(s->euler_characteristic() == 2 - p);
    }
    auto s = planar_surface(3);
    CHECK(s->vertex_order() == std::vector<Letter>{1, -1, 2, -2});
}

TEST_CASE("genus surfaces: one boundary circle") {
    for (int g = 1; g <= 3; ++g) {
        auto s = genus_surface(g);
        CHECK(s->rank() == 2 * g);
        CHECK(s->boundary_components() == 1);
        CHECK(s->genus() == g);
        CHECK(s->euler_characteristic() == 1 - 2 * g);
    }
    CHECK(genus_surface(1)->vertex_order() == std::vector<Letter>{1, 2, -1, -2});
}

TEST_CASE("boundary walks partition the gates") {
    Rng rng(2026);
    for (int trial = 0; trial < 200; ++trial) {
        int rank = rng.uniform_int(1, 5);
        std::vector<Letter> order;
        for (int i = 1; i <= rank; ++i) {
            order.push_back(i);
            order.push_back(-i);
        }
        for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
            std::swap(order[i], order[rng.uniform_int(0, i)]);
        auto s = make_surface("rand", order);
        auto walks = s->boundary_walks();
        std::multiset<Letter> visited;
        for (const auto& walk : walks)
            for (Letter g : walk) visited.insert(g);
        CHECK(visited.size() == order.size());
        std::multiset<Letter> expect(order.begin(), order.end());
        CHECK(visited == expect);
        // Euler characteristic forces an integer genus >= 0 for every gluing.
        CHECK(s->genus() >= 0);
        CHECK(2 - 2 * s->genus() - s->boundary_components() == s->euler_characteristic());
    }
}

TEST_CASE("surface construction rejects malformed gate lists") {
    CHECK_THROWS_AS(make_surface("bad", {1, -1, 2}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("bad", {1, 1, -1, -2}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("bad", {1, -1, 3, -3}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("bad", {0, 1, -1, 2}), InvalidArgument);
    CHECK_THROWS_AS(planar_surface(0), InvalidArgument);
    CHECK_THROWS_AS(genus_surface(0), InvalidArgument);
}

TEST_CASE("gate slots index the vertex order") {
    auto s = genus_surface(1);
    for (std::size_t i = 0; i < s->vertex_order().size(); ++i)
        CHECK(s->gate_slot(s->vertex_order()[i]) == static_cast<int>(i));
    CHECK_THROWS_AS(s->gate_slot(3), InvalidArgument);
    CHECK_THROWS_AS(s->gate_slot(0), InvalidArgument);
}
