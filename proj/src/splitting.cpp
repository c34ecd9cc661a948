#include <algorithm>
#include <cmath>

#include "parasplit/errors.hpp"
#include "parasplit/splitting.hpp"

namespace parasplit {

const char* to_string(SplittingKind kind) {
    switch (kind) {
        case SplittingKind::dimensional: return "dimensional";
        case SplittingKind::domain_decomposition: return "domain_decomposition";
        case SplittingKind::custom: return "custom";
    }
    return "custom";
}

SplittingKind parse_splitting_kind(const std::string& name) {
    if (name == "dimensional" || name == "dim") return SplittingKind::dimensional;
    if (name == "domain_decomposition" || name == "dd") return SplittingKind::domain_decomposition;
    throw ConfigError("unknown splitting kind '" + name +
                      "' (expected dimensional or domain_decomposition)");
}

DiscreteOperator SplitOperator::sum() const {
    if (terms.empty()) return {};
    DiscreteOperator total = terms.front();
    for (std::size_t j = 1; j < terms.size(); ++j) total += terms[j];
    return total;
}

double SplitOperator::additive_defect(const DiscreteOperator& full) const {
    const DiscreteOperator diff = sum() - full;
    const double scale = full.max_abs();
    return scale > 0.0 ? diff.max_abs() / scale : diff.max_abs();
}

SplitOperator SplitOperator::from_terms(std::vector<DiscreteOperator> terms, SplittingKind kind) {
    if (terms.empty()) throw SplittingError("a split operator needs at least one term");
    SplitOperator split;
    split.kind = kind;
    for (const auto& term : terms) {
        if (term.dimension() != terms.front().dimension()) {
            throw SplittingError("split terms have different dimensions");
        }
        split.blocks.push_back(decoupling_blocks(term));
    }
    split.terms = std::move(terms);
    return split;
}

SplitOperator SplitOperator::diagonal(const std::vector<std::vector<double>>& eigenvalues) {
    std::vector<DiscreteOperator> terms;
    for (const auto& values : eigenvalues) terms.push_back(DiscreteOperator::diagonal(values));
    return from_terms(std::move(terms));
}

SplitOperator build_dimensional(const DiffusionTensor& tensor, const Mesh2D& mesh) {
    check_ellipticity(tensor, mesh);
    const int extent = mesh.lattice_extent();
    for (int b = 0; b < extent; ++b) {
        for (int a = 0; a < extent; ++a) {
            if (tensor.d12(mesh.lattice_coord(a), mesh.lattice_coord(b)) != 0.0) {
                throw SplittingError(
                    "dimensional splitting cannot represent mixed derivatives (d12 != 0)");
            }
        }
    }
    constexpr int dims = 2;
    AssemblyParts x_part{true, false, false, 1.0 / dims, nullptr};
    AssemblyParts y_part{false, true, false, 1.0 / dims, nullptr};
    std::vector<DiscreteOperator> terms;
    terms.push_back(assemble(tensor, mesh, x_part));
    terms.push_back(assemble(tensor, mesh, y_part));
    return SplitOperator::from_terms(std::move(terms), SplittingKind::dimensional);
}

SplitOperator build_domain_decomposition(const DiffusionTensor& tensor,
                                         const PartitionOfUnity& pou) {
    const Mesh2D& mesh = pou.mesh();
    check_ellipticity(tensor, mesh);
    std::vector<DiscreteOperator> terms;
    for (int j = 0; j < pou.terms(); ++j) {
        if (pou.lattice(j).extent() != mesh.lattice_extent()) {
            throw SplittingError("partition of unity was sampled on a different mesh");
        }
        AssemblyParts parts{true, true, true, 1.0, &pou.lattice(j)};
        terms.push_back(assemble(tensor, mesh, parts));
    }
    return SplitOperator::from_terms(std::move(terms), SplittingKind::domain_decomposition);
}

}  // namespace parasplit
