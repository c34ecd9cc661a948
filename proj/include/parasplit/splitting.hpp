#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parasplit/discrete_operator.hpp"
#include "parasplit/grid.hpp"
#include "parasplit/mesh.hpp"

namespace parasplit {

/// Layout of the overlapping vertical-strip decomposition: terms * strips
/// strips of equal width, strip k belonging to subdomain k mod terms, with an
/// overlap interval of width `overlap` centered on every strip interface.
struct StripGeometry {
    int terms = 2;
    int strips = 2;  // q: strips per subdomain
    double overlap = 1.0 / 16;

    double strip_width() const { return 1.0 / (terms * strips); }
};

/// Weights rho_1 .. rho_M sampled on the half-lattice (nodes, faces, corners).
/// The last weight is stored as 1 - (sum of the others).
class PartitionOfUnity {
public:
    /// Cosine-ramp partition over the strip geometry. Requires terms >= 2,
    /// strips >= 1 and 0 < overlap <= 2 * strip width.
    static PartitionOfUnity vertical_strips(const Mesh2D& mesh, const StripGeometry& geometry);

    /// Partition from the leading M-1 weight functions.
    static PartitionOfUnity from_functions(const Mesh2D& mesh,
                                           const std::vector<ScalarField>& leading);

    const Mesh2D& mesh() const noexcept { return mesh_; }
    int terms() const noexcept { return static_cast<int>(weights_.size()); }
    const LatticeField& lattice(int term) const { return weights_.at(term); }
    double weight(int term, int a, int b) const { return weights_.at(term)(a, b); }
    double node_weight(int term, int i, int j) const {
        return weights_.at(term)(Mesh2D::node_lattice(i), Mesh2D::node_lattice(j));
    }
    const std::optional<StripGeometry>& geometry() const noexcept { return geometry_; }

private:
    explicit PartitionOfUnity(const Mesh2D& mesh) : mesh_(mesh) {}

    Mesh2D mesh_;
    std::vector<LatticeField> weights_;
    std::optional<StripGeometry> geometry_;
};

/// Descending cosine ramp: 1 at start, 0 at start + width.
double cosine_ramp(double x, double start, double width);

enum class SplittingKind { dimensional, domain_decomposition, custom };

const char* to_string(SplittingKind kind);
SplittingKind parse_splitting_kind(const std::string& name);

/// A = A_1 + ... + A_M together with the decoupled subsystems of each term.
struct SplitOperator {
    SplittingKind kind = SplittingKind::custom;
    std::vector<DiscreteOperator> terms;
    /// blocks[j]: disjoint index sets on which (I - tau A_j) decouples; rows in
    /// no block are identity rows of (I - tau A_j).
    std::vector<std::vector<Block>> blocks;

    std::size_t size() const noexcept { return terms.size(); }
    std::size_t dimension() const noexcept { return terms.empty() ? 0 : terms[0].dimension(); }
    DiscreteOperator sum() const;
    /// ||sum_j A_j - A||_max / ||A||_max
    double additive_defect(const DiscreteOperator& full) const;

    /// Terms given explicitly; blocks derived from their sparsity.
    static SplitOperator from_terms(std::vector<DiscreteOperator> terms,
                                    SplittingKind kind = SplittingKind::custom);
    /// Diagonal terms, e.g. the partitioned Dahlquist problem (one row per eigenvalue).
    static SplitOperator diagonal(const std::vector<std::vector<double>>& eigenvalues);
};

/// L_j u = (d_jj u_xj)_xj - c u / 2. Throws SplittingError if d12 is not identically zero.
SplitOperator build_dimensional(const DiffusionTensor& tensor, const Mesh2D& mesh);

/// L_j u = div(rho_j D grad u) - rho_j c u, assembled with rho_j sampled where
/// each stencil coefficient is evaluated, so that sum_j A_j = A by linearity.
SplitOperator build_domain_decomposition(const DiffusionTensor& tensor,
                                         const PartitionOfUnity& pou);

}  // namespace parasplit
