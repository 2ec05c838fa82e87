#pragma once

#include <string>
#include <vector>

namespace chordq {

// Letter of a free group: +i is the generator x_i (i >= 1), -i its inverse.
using Letter = int;

// Free-group element as a letter string. Most routines expect or return
// freely reduced words; raw unreduced strings appear only transiently.
using Word = std::vector<Letter>;

// Free reduction: removes adjacent inverse pairs until none remain.
Word reduce(Word w);

Word inverse(const Word& w);

// Reduced concatenation a * b.
Word mul(const Word& a, const Word& b);

// Reduced conjugation g^-1 * w * g.
Word conjugate(const Word& w, const Word& g);

// Cyclic reduction: freely reduces, then strips inverse first/last pairs.
Word cyclic_reduce(const Word& w);

// Lexicographically least rotation. Input is treated as a cyclic word.
Word min_rotation(const Word& w);

// Shortlex order: by length, then lexicographically by letter value.
int word_cmp(const Word& a, const Word& b);

// "x1 ~x2 x1" style round-trip. rank <= 0 disables the range check.
Word word_parse(const std::string& text, int rank = 0);
std::string word_str(const Word& w);
std::string letter_str(Letter l);
Letter letter_parse(const std::string& token, int rank = 0);

}  // namespace chordq
