#include "chordq/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "chordq/errors.hpp"

namespace chordq {

namespace {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// uniform in [0,1) without std::uniform_real_distribution, which is
// implementation-defined; this mapping is stable across toolchains
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Mat random_matrix(int n, std::mt19937_64& gen) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double re = 2.0 * uniform01(gen) - 1.0;
            double im = 2.0 * uniform01(gen) - 1.0;
            m(i, j) = Cplx(re, im);
        }
    return m;
}

std::vector<Mat> lie_basis(const GroupSpec& g) {
    const int n = g.n;
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Mat> basis;
    if (g.family == GroupSpec::GL) {
        for (int i = 0; i < n; ++i) {
            Mat e = Mat::Zero(n, n);
            e(i, i) = 1.0;
            basis.push_back(e);
        }
    } else {
        // traceless diagonals, Gram-Schmidt for the trace form
        std::vector<Eigen::VectorXd> diag;
        for (int k = 0; k + 1 < n; ++k) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            v(k) = 1.0;
            v(k + 1) = -1.0;
            for (const auto& u : diag) v -= u.dot(v) * u;
            v /= std::sqrt(v.dot(v));
            diag.push_back(v);
        }
        for (const auto& v : diag) {
            Mat e = Mat::Zero(n, n);
            for (int i = 0; i < n; ++i) e(i, i) = v(i);
            basis.push_back(e);
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Mat sym = Mat::Zero(n, n), alt = Mat::Zero(n, n);
            sym(i, j) = sym(j, i) = s;
            alt(i, j) = Cplx(0.0, s);
            alt(j, i) = Cplx(0.0, -s);
            basis.push_back(sym);
            basis.push_back(alt);
        }
    return basis;
}

}  // namespace

GroupSpec GroupSpec::parse(const std::string& text) {
    GroupSpec g;
    std::string family = text.substr(0, 2);
    if (family == "gl")
        g.family = GL;
    else if (family == "sl")
        g.family = SL;
    else
        throw InvalidArgument("unknown group '" + text + "'; expected gl<n> or sl<n>");
    try {
        g.n = std::stoi(text.substr(2));
    } catch (const std::exception&) {
        throw InvalidArgument("unknown group '" + text + "'; expected gl<n> or sl<n>");
    }
    if (g.n < 1 || g.n > 9) throw InvalidArgument("group rank out of range in '" + text + "'");
    if (g.family == SL && g.n < 2) throw InvalidArgument("sl needs n >= 2");
    return g;
}

std::string GroupSpec::str() const {
    return (family == GL ? "gl" : "sl") + std::to_string(n);
}

ModuliContext::ModuliContext(GroupSpec group, SurfacePtr surface, std::uint64_t seed)
    : group_(group), surface_(std::move(surface)), seed_(seed) {
    if (!surface_) throw InvalidArgument("context needs a surface");
    std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
    const int n = group_.n;
    for (int g = 0; g < surface_->rank(); ++g) {
        Mat m;
        double det_abs = 0.0;
        do {
            m = random_matrix(n, gen);
            det_abs = std::abs(m.determinant());
        } while (det_abs < 1e-3);
        Eigen::JacobiSVD<Mat> svd(m);
        m *= 1.15 / svd.singularValues()(0);
        if (group_.family == GroupSpec::SL) {
            Cplx root = std::pow(m.determinant(), 1.0 / n);
            m /= root;
            if (std::abs(m.determinant() - 1.0) > 1e-12)
                throw InternalError("sl normalization failed");
        }
        gen_.push_back(m);
        gen_inv_.push_back(m.inverse());
    }
    basis_ = lie_basis(group_);
}

const Eigen::MatrixXcd& ModuliContext::holonomy(Letter l) const {
    if (l == 0 || l > surface_->rank() || l < -surface_->rank())
        throw InvalidArgument("letter out of range: " + std::to_string(l));
    return l > 0 ? gen_[l - 1] : gen_inv_[-l - 1];
}

Eigen::MatrixXcd ModuliContext::word_holonomy(const Word& w) const {
    Mat m = Mat::Identity(group_.n, group_.n);
    for (Letter l : w) m *= holonomy(l);
    return m;
}

std::complex<double> eval_components(const ModuliContext& ctx,
                                     const std::vector<TokenList>& components) {
    const int n = ctx.group().n;
    const auto& basis = ctx.basis();
    const int dim = static_cast<int>(basis.size());

    // collect chord labels in order of appearance
    std::vector<int> chords;
    for (const auto& comp : components)
        for (const Token& t : comp)
            if (t.marker && std::find(chords.begin(), chords.end(), t.value) == chords.end())
                chords.push_back(t.value);

    // per component: alternating constant segments and marker slots
    struct CompiledComp {
        std::vector<Mat> segments;   // segments[i] precedes marker slot i
        std::vector<int> chord_idx;  // index into `chords` per marker slot
    };
    std::vector<CompiledComp> compiled;
    std::vector<Cplx> loop_traces;  // chordless loops contribute constants
    for (const auto& comp : components) {
        bool marked = false;
        for (const Token& t : comp) marked = marked || t.marker;
        if (!marked) {
            Word w;
            for (const Token& t : comp) w.push_back(t.value);
            loop_traces.push_back(ctx.word_holonomy(w).trace());
            continue;
        }
        std::size_t first = 0;
        while (!comp[first].marker) ++first;
        CompiledComp cc;
        Mat seg = Mat::Identity(n, n);
        for (std::size_t k = 0; k < comp.size(); ++k) {
            const Token& t = comp[(first + k) % comp.size()];
            if (t.marker) {
                cc.segments.push_back(seg);
                seg = Mat::Identity(n, n);
                int idx = static_cast<int>(
                    std::find(chords.begin(), chords.end(), t.value) - chords.begin());
                cc.chord_idx.push_back(idx);
            } else {
                seg *= ctx.holonomy(t.value);
            }
        }
        // seg holds the letters after the last marker; cyclically they sit
        // just before the first marker, so fold them into segment 0
        cc.segments[0] = seg * cc.segments[0];
        compiled.push_back(std::move(cc));
    }

    Cplx constant = 1.0;
    for (Cplx t : loop_traces) constant *= t;
    if (compiled.empty() && chords.empty()) return constant;

    // sum over all assignments of basis elements to chords
    std::vector<int> assign(chords.size(), 0);
    Cplx total = 0.0;
    while (true) {
        Cplx term = 1.0;
        for (const auto& cc : compiled) {
            Mat m = Mat::Identity(n, n);
            for (std::size_t i = 0; i < cc.segments.size(); ++i) {
                // segments[i] is the word read before marker i (cyclically),
                // so the loop product is seg_0 e_{a_0} ... seg_k e_{a_k}
                m *= cc.segments[i];
                m *= basis[assign[cc.chord_idx[i]]];
            }
            term *= m.trace();
        }
        total += term;
        std::size_t k = 0;
        while (k < assign.size()) {
            if (++assign[k] < dim) break;
            assign[k] = 0;
            ++k;
        }
        if (k == assign.size()) break;
    }
    return constant * total;
}

std::complex<double> eval_diagram(const ModuliContext& ctx, const ChordDiagram& d) {
    if (!ctx.surface()->same_as(*d.surface()))
        throw InvalidArgument("diagram and context live on different surfaces");
    return eval_components(ctx, d.components());
}

std::complex<double> eval_sum(const ModuliContext& ctx, const DiagramSum& s) {
    Cplx total = 0.0;
    for (const auto& [d, c] : s.terms()) total += c.get_d() * eval_diagram(ctx, d);
    return total;
}

std::vector<std::complex<double>> eval_series(const ModuliContext& ctx, const GradedSeries& s) {
    std::vector<Cplx> out;
    for (int d = 0; d <= s.truncation(); ++d) out.push_back(eval_sum(ctx, s.part(d)));
    return out;
}

std::complex<double> trace_identity(const std::vector<Eigen::MatrixXcd>& mats) {
    const int k = static_cast<int>(mats.size());
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    Cplx total = 0.0;
    do {
        // cycle decomposition with sign (-1)^(k - #cycles)
        std::vector<bool> seen(k, false);
        int cycles = 0;
        Cplx prod = 1.0;
        for (int i = 0; i < k; ++i) {
            if (seen[i]) continue;
            ++cycles;
            Mat m = mats[i];
            seen[i] = true;
            for (int j = perm[i]; j != i; j = perm[j]) {
                seen[j] = true;
                m *= mats[j];
            }
            prod *= m.trace();
        }
        double sign = ((k - cycles) % 2 == 0) ? 1.0 : -1.0;
        total += sign * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace chordq
