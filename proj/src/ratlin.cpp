#include "chordq/ratlin.hpp"

#include <algorithm>

#include "chordq/errors.hpp"

namespace chordq {

std::vector<int> rref(std::vector<std::vector<Rat>>& rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    std::size_t width = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != width) throw InvalidArgument("ragged matrix");
    std::size_t lead = 0;
    for (std::size_t col = 0; col < width && lead < rows.size(); ++col) {
        std::size_t sel = lead;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[lead], rows[sel]);
        Rat inv = 1 / rows[lead][col];
        for (std::size_t j = col; j < width; ++j) rows[lead][j] *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == lead || rows[r][col] == 0) continue;
            Rat f = rows[r][col];
            for (std::size_t j = col; j < width; ++j) rows[r][j] -= f * rows[lead][j];
        }
        pivots.push_back(static_cast<int>(col));
        ++lead;
    }
    return pivots;
}

int rat_rank(std::vector<std::vector<Rat>> rows) {
    return static_cast<int>(rref(rows).size());
}

LinearSystem::LinearSystem(int unknowns) : unknowns_(unknowns) {
    if (unknowns < 0) throw InvalidArgument("need a non-negative unknown count");
}

void LinearSystem::add_equation(const std::map<int, Rat>& lhs, const Rat& rhs) {
    std::vector<Rat> row(static_cast<std::size_t>(unknowns_) + 1, Rat(0));
    for (const auto& [col, c] : lhs) {
        if (col < 0 || col >= unknowns_) throw InvalidArgument("unknown index out of range");
        row[static_cast<std::size_t>(col)] = c;
    }
    row.back() = rhs;
    rows_.push_back(std::move(row));
}

std::optional<LinearSystem::Solution> LinearSystem::solve() const {
    std::vector<std::vector<Rat>> rows = rows_;
    std::vector<int> pivots = rref(rows);
    // a pivot in the rhs column marks an inconsistent system
    if (!pivots.empty() && pivots.back() == unknowns_) return std::nullopt;
    Solution sol;
    sol.rank = static_cast<int>(pivots.size());
    sol.values.assign(static_cast<std::size_t>(unknowns_), Rat(0));
    std::vector<char> pivotal(static_cast<std::size_t>(unknowns_), 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        int col = pivots[r];
        pivotal[static_cast<std::size_t>(col)] = 1;
        // free unknowns are zero, so the pivot value is just the rhs
        sol.values[static_cast<std::size_t>(col)] = rows[r].back();
    }
    for (int c = 0; c < unknowns_; ++c)
        if (!pivotal[static_cast<std::size_t>(c)]) sol.free_cols.push_back(c);
    return sol;
}

}  // namespace chordq
