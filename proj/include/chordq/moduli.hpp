#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "chordq/diagram.hpp"
#include "chordq/surface.hpp"

namespace chordq {

// Matrix group a representation variety is taken in: GL(n,C) or SL(n,C).
struct GroupSpec {
    enum Family { GL, SL };
    Family family = GL;
    int n = 1;

    static GroupSpec parse(const std::string& text);  // "gl2", "sl3"
    std::string str() const;
    int dim() const { return family == GL ? n * n : n * n - 1; }
};

// One point of the representation variety: a holonomy matrix per generator,
// together with an orthonormal basis of the Lie algebra for the trace form
// tr(XY). Seeded construction is deterministic across platforms.
class ModuliContext {
public:
    ModuliContext(GroupSpec group, SurfacePtr surface, std::uint64_t seed);

    const GroupSpec& group() const { return group_; }
    const SurfacePtr& surface() const { return surface_; }
    std::uint64_t seed() const { return seed_; }

    // holonomy(letter): the generator matrix, or its inverse for letter < 0
    const Eigen::MatrixXcd& holonomy(Letter l) const;
    Eigen::MatrixXcd word_holonomy(const Word& w) const;
    const std::vector<Eigen::MatrixXcd>& basis() const { return basis_; }

private:
    GroupSpec group_;
    SurfacePtr surface_;
    std::uint64_t seed_;
    std::vector<Eigen::MatrixXcd> gen_, gen_inv_;
    std::vector<Eigen::MatrixXcd> basis_;
};

// Holonomy functional: every chord becomes a sum over basis insertions at its
// two endpoints, every loop a trace of the holonomies and insertions read in
// order. A chordless loop contributes tr of its word; value is the product
// over loops, summed over all chord assignments.
std::complex<double> eval_components(const ModuliContext& ctx,
                                     const std::vector<TokenList>& components);
std::complex<double> eval_diagram(const ModuliContext& ctx, const ChordDiagram& d);
std::complex<double> eval_sum(const ModuliContext& ctx, const DiagramSum& s);

// One value per degree part.
std::vector<std::complex<double>> eval_series(const ModuliContext& ctx, const GradedSeries& s);

// Fundamental trace identity: for n x n matrices A_0..A_n,
// sum over permutations of sgn(sigma) * product over cycles of
// tr(A_{i1} ... A_{ik}) vanishes identically.
std::complex<double> trace_identity(const std::vector<Eigen::MatrixXcd>& mats);

}  // namespace chordq
