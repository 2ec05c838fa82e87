#pragma once

#include <cstddef>

#include "chordq/diagram.hpp"

namespace chordq {

struct EnumerateOptions {
    std::size_t max_raw = 8'000'000;  // presentations examined before giving up
};

// Every canonical diagram with exactly `degree` chords whose canonical arc
// words have at most `max_arc_letters` letters each. For degree 0 this is the
// empty diagram plus the single-loop diagrams with cyclic words up to that
// length (the contractible loop included); for degree >= 1 every component
// carries at least one chord endpoint. Sorted by canonical order.
std::vector<ChordDiagram> enumerate_diagrams(const SurfacePtr& surface, int degree,
                                             int max_arc_letters,
                                             EnumerateOptions options = {});

// Freely reduced words of length <= max_letters, shortlex order.
std::vector<Word> short_words(int rank, int max_letters);

}  // namespace chordq
