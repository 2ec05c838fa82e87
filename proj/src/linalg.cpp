#include "chordq/linalg.hpp"

namespace chordq {

void RowSpace::eliminate(SparseRow& row) const {
    while (!row.empty()) {
        auto lead = row.begin();
        auto pivot = rows_.find(lead->first);
        if (pivot == rows_.end()) return;
        Rat f = lead->second;
        for (const auto& [col, val] : pivot->second) {
            auto it = row.find(col);
            if (it == row.end()) {
                row.emplace(col, -f * val);
            } else {
                it->second -= f * val;
                if (it->second == 0) row.erase(it);
            }
        }
    }
}

bool RowSpace::add(SparseRow row) {
    eliminate(row);
    if (row.empty()) return false;
    Rat lead = row.begin()->second;
    for (auto& [col, val] : row) val /= lead;
    int pivot = row.begin()->first;
    rows_.emplace(pivot, std::move(row));
    return true;
}

bool RowSpace::contains(SparseRow row) const {
    eliminate(row);
    return row.empty();
}

}  // namespace chordq
