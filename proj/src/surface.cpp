#include "chordq/surface.hpp"

#include <algorithm>

#include "chordq/errors.hpp"

namespace chordq {

Surface::Surface(std::string name, int rank, std::vector<Letter> vertex_order)
    : name_(std::move(name)), rank_(rank), vertex_order_(std::move(vertex_order)) {
    if (rank_ < 0) throw InvalidArgument("surface rank must be >= 0");
    if (vertex_order_.size() != static_cast<std::size_t>(2 * rank_))
        throw InvalidArgument("vertex order must list each of the 2*rank gates once");
    slot_of_.assign(2 * rank_ + 1, -1);
    for (std::size_t i = 0; i < vertex_order_.size(); ++i) {
        Letter g = vertex_order_[i];
        if (g == 0 || g < -rank_ || g > rank_)
            throw InvalidArgument("gate out of range in vertex order: " + std::to_string(g));
        int key = g + rank_;
        if (key > rank_) --key;  // letters skip 0
        if (slot_of_[key] != -1)
            throw InvalidArgument("gate repeated in vertex order: " + letter_str(g));
        slot_of_[key] = static_cast<int>(i);
    }
}

int Surface::gate_slot(Letter gate) const {
    if (gate == 0 || gate < -rank_ || gate > rank_)
        throw InvalidArgument("gate out of range: " + std::to_string(gate));
    int key = gate + rank_;
    if (key > rank_) --key;
    return slot_of_[key];
}

std::vector<std::vector<Letter>> Surface::boundary_walks() const {
    std::vector<std::vector<Letter>> walks;
    if (rank_ == 0) {
        walks.push_back({});  // disk: one boundary circle, no gates
        return walks;
    }
    std::vector<bool> seen(vertex_order_.size(), false);
    for (std::size_t start = 0; start < vertex_order_.size(); ++start) {
        if (seen[start]) continue;
        std::vector<Letter> walk;
        std::size_t cur = start;
        while (!seen[cur]) {
            seen[cur] = true;
            Letter g = vertex_order_[cur];
            walk.push_back(g);
            // Exit through gate g, come back in at gate -g, continue along the
            // disk boundary to the next gate counterclockwise.
            std::size_t back = static_cast<std::size_t>(gate_slot(-g));
            cur = (back + 1) % vertex_order_.size();
        }
        walks.push_back(std::move(walk));
    }
    return walks;
}

int Surface::boundary_components() const {
    return static_cast<int>(boundary_walks().size());
}

int Surface::genus() const {
    int b = boundary_components();
    int twice = 1 + rank_ - b;  // 2 - 2g - b == 1 - rank
    if (twice < 0 || twice % 2 != 0)
        throw InternalError("fat graph is not orientable-consistent: rank " +
                            std::to_string(rank_) + ", boundary " + std::to_string(b));
    return twice / 2;
}

SurfacePtr make_surface(std::string name, std::vector<Letter> vertex_order) {
    int rank = static_cast<int>(vertex_order.size() / 2);
    return std::make_shared<Surface>(std::move(name), rank, std::move(vertex_order));
}

SurfacePtr planar_surface(int punctures) {
    if (punctures < 1) throw InvalidArgument("planar surface needs >= 1 boundary circle");
    std::vector<Letter> order;
    for (int i = 1; i < punctures; ++i) {
        order.push_back(i);
        order.push_back(-i);
    }
    return make_surface("planar" + std::to_string(punctures), std::move(order));
}

SurfacePtr genus_surface(int genus) {
    if (genus < 1) throw InvalidArgument("genus surface needs genus >= 1");
    std::vector<Letter> order;
    for (int h = 0; h < genus; ++h) {
        int a = 2 * h + 1, b = 2 * h + 2;
        order.push_back(a);
        order.push_back(b);
        order.push_back(-a);
        order.push_back(-b);
    }
    return make_surface("genus" + std::to_string(genus), std::move(order));
}

}  // namespace chordq
