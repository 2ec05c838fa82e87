#pragma once

#include <map>
#include <optional>
#include <vector>

#include "chordq/rational.hpp"

namespace chordq {

// In-place reduced row echelon form over the rationals.  Returns the pivot
// column of each nonzero row, in order; zero rows sink to the bottom.
std::vector<int> rref(std::vector<std::vector<Rat>>& rows);

// Rank of the row span.
int rat_rank(std::vector<std::vector<Rat>> rows);

// A linear system over indexed unknowns, solved exactly.
class LinearSystem {
public:
    explicit LinearSystem(int unknowns);

    int unknowns() const { return unknowns_; }
    std::size_t equations() const { return rows_.size(); }

    void add_equation(const std::map<int, Rat>& lhs, const Rat& rhs);

    struct Solution {
        std::vector<Rat> values;     // free unknowns pinned to zero
        std::vector<int> free_cols;  // unknowns not determined by the system
        int rank = 0;
    };

    // Empty when the system is inconsistent.
    std::optional<Solution> solve() const;

private:
    int unknowns_;
    std::vector<std::vector<Rat>> rows_;  // width unknowns_ + 1, last entry rhs
};

}  // namespace chordq
