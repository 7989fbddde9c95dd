#pragma once

#include <linfty/multilinear.hpp>

#include <optional>

namespace linfty {

enum class Flavor { Ainfty, Linfty };

/// An A-infinity or L-infinity algebra (possibly curved) as a family of
/// multilinear maps; ops[k] has arity k and degree 1, ops[0] is the
/// curvature element. L-infinity ops are symmetric maps on shifted degrees.
/// All operations downstream are computed modulo inputs of total word
/// length > truncation.
struct HomotopyAlgebra {
    Flavor flavor = Flavor::Linfty;
    SpacePtr space;
    int truncation = 4;
    std::vector<GradedMultilinearMap> ops;  // index = arity, 0..k_max
    std::optional<Rat> norm_constant;       // C with |l_k| <= k! C^k

    int k_max() const { return (int)ops.size() - 1; }
    const GradedMultilinearMap& op(int k) const { return ops.at(k); }
    bool curved() const { return !ops.empty() && !ops[0].is_zero(); }
    Element curvature() const;

    /// Structure-relation defect at total arity n, as a map (exact).
    GradedMultilinearMap relation_defect(int n) const;
    /// Relations for all arities <= min(n_max, truncation) hold exactly.
    void validate(int n_max) const;

    /// Exact ledger check |l_k| <= k! C^k for the recorded constant.
    bool normed_flag() const;
};

/// Morphism family f_k (k >= 1), degree-0 maps on shifted spaces; the
/// boundedness ledger mirrors the algebra one with |f_k| <= k! C^k.
struct HomotopyMorphism {
    Flavor flavor = Flavor::Linfty;
    const HomotopyAlgebra* source = nullptr;
    const HomotopyAlgebra* target = nullptr;
    std::vector<GradedMultilinearMap> components;  // [k] for k = 1..k_max, [0] unused
    std::optional<Rat> norm_constant;

    int k_max() const { return (int)components.size() - 1; }
    const GradedMultilinearMap& f(int k) const { return components.at(k); }

    GradedMultilinearMap equation_defect(int n) const;
    void validate(int n_max) const;
    bool bounded_flag() const;
};

/// Degree-1 element with its cached curvature residual.
struct MCElement {
    Element value;
    Element residual;
    bool is_mc() const { return residual.is_zero(); }
};

/// Nondegenerate graded-symmetric rational pairing, with optional strict
/// unit; stores Gram data on the unshifted grading.
struct CyclicPairing {
    SpacePtr space;
    std::map<std::pair<std::size_t, std::size_t>, Rat> gram;
    std::optional<std::size_t> unit;

    Rat pair(std::size_t i, std::size_t j) const;
    Rat pair(const Element& a, const Element& b) const;
    bool graded_symmetric() const;
    /// Nondegeneracy of the block pairing degrees d and top - d.
    bool nondegenerate_between(int d1, int d2) const;
    /// The cyclic-invariance identity on all basis tuples up to arity kmax,
    /// in the classical (unshifted) convention of the pairing.
    bool cyclic_for(const HomotopyAlgebra& alg, int kmax) const;
    /// Strict unit identities for the algebra, including higher vanishing.
    bool strict_unit_for(const HomotopyAlgebra& alg) const;
};

/// Classical structure-constant from the shifted one (inverse suspension
/// sign (-1)^{sum (k-i) |a_i|} on unshifted degrees).
Rat classical_coeff(const HomotopyAlgebra& alg, int k, const std::vector<std::size_t>& in,
                    std::size_t out);

}  // namespace linfty
