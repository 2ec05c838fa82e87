#pragma once

#include <map>

#include "chordq/rational.hpp"

namespace chordq {

// Sparse rational vector, column index -> nonzero coefficient.
using SparseRow = std::map<int, Rat>;

// Incremental row space over Q with exact arithmetic. Rows are stored
// forward-eliminated and normalized to leading coefficient 1.
class RowSpace {
public:
    // Returns true when the row was independent and grew the rank.
    bool add(SparseRow row);

    // Does the row lie in the span of the added rows?
    bool contains(SparseRow row) const;

    std::size_t rank() const { return rows_.size(); }

private:
    void eliminate(SparseRow& row) const;

    std::map<int, SparseRow> rows_;  // keyed by pivot column
};

}  // namespace chordq
