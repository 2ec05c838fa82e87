#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chordq/words.hpp"

namespace chordq {

// Oriented surface with boundary, presented as a one-vertex fat graph: a disk
// with `rank` ribbons attached. vertex_order lists the 2*rank ribbon gates
// counterclockwise around the disk boundary; gate +i is where generator x_i
// leaves the disk, gate -i where it returns.
class Surface {
public:
    Surface(std::string name, int rank, std::vector<Letter> vertex_order);

    const std::string& name() const { return name_; }
    int rank() const { return rank_; }
    const std::vector<Letter>& vertex_order() const { return vertex_order_; }

    // Index of a gate in vertex_order.
    int gate_slot(Letter gate) const;

    // Boundary circles of the thickened graph, each as the cyclic gate
    // sequence visited by the walk gate -> successor(-gate).
    std::vector<std::vector<Letter>> boundary_walks() const;

    int boundary_components() const;
    int euler_characteristic() const { return 1 - rank_; }
    int genus() const;

    bool same_as(const Surface& other) const {
        return rank_ == other.rank_ && vertex_order_ == other.vertex_order_;
    }

private:
    std::string name_;
    int rank_;
    std::vector<Letter> vertex_order_;
    std::vector<int> slot_of_;  // slot_of_[letter + rank] with letter != 0
};

using SurfacePtr = std::shared_ptr<const Surface>;

SurfacePtr make_surface(std::string name, std::vector<Letter> vertex_order);

// Sphere with p >= 1 boundary circles: rank p-1, gates x1 ~x1 x2 ~x2 ...
SurfacePtr planar_surface(int punctures);

// Genus g >= 1 with one boundary circle: rank 2g, gates x1 x2 ~x1 ~x2 x3 x4 ...
SurfacePtr genus_surface(int genus);

}  // namespace chordq
