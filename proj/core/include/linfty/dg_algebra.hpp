#pragma once

#include <linfty/multilinear.hpp>
#include <linfty/rational_linalg.hpp>

#include <optional>
#include <random>
#include <string>

namespace linfty {

/// A finite-dimensional dg algebra, stored on the shifted space: m1 has
/// arity 1 / degree 1, m2 has arity 2 / degree 1. The classical product is
/// recovered through the sign of from_classical below.
struct DgAlgebra {
    SpacePtr space;
    GradedMultilinearMap m1;  // differential
    GradedMultilinearMap m2;  // product, shifted convention
    std::optional<std::size_t> unit;

    DgAlgebra() = default;
    DgAlgebra(SpacePtr s, GradedMultilinearMap d, GradedMultilinearMap prod,
              std::optional<std::size_t> u = std::nullopt);

    /// m1 o m1 = 0, the Leibniz identity and associativity, all as exact
    /// identities of sparse maps (the arity 1..3 structure relations).
    void validate() const;

    bool is_unital() const;
};

/// Builds a DgAlgebra from classical structure constants: d of degree +1,
/// product of degree 0 on unshifted degrees. The shifted product acquires
/// the sign (-1)^{|a|} on the first argument.
DgAlgebra dg_algebra_from_classical(
    SpacePtr space,
    const std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>>& products,
    const std::map<std::string, std::map<std::string, Rat>>& differential,
    std::optional<std::string> unit_name = std::nullopt);

/// Conjugates by a degree-preserving invertible change of basis.
DgAlgebra conjugate(const DgAlgebra& a, const GradedMultilinearMap& phi);

/// Tensor product algebra with the usual Koszul sign on products.
DgAlgebra tensor_product(const DgAlgebra& a, const DgAlgebra& b);

// -- toy models ------------------------------------------------------------

/// Exterior algebra on n degree-1 generators, zero differential.
DgAlgebra exterior_algebra(int n);
/// Cochain algebra of the 3-dim nilpotent Lie algebra: dz = xy. The minimal
/// model with a nonvanishing triple (Massey) product.
DgAlgebra heisenberg_cochains();
/// Basis {1, x, y}, deg(x)=1, x*x = y, everything else with x,y vanishes.
DgAlgebra fat_point();
/// Two-term acyclic complex with zero products.
DgAlgebra acyclic_two_term();
/// Unital 3-dim dg algebra {1, x, dx} with all products of x vanishing.
DgAlgebra contractible_line();
/// 2x2 matrices tensored with an exterior line; splits as scalars + traceless.
DgAlgebra matrix_line();

/// Deterministic random corpus member: a random rational change of basis
/// applied to one of the toy models, plus a random SPD inner product.
DgAlgebra random_corpus_algebra(std::mt19937_64& rng, int max_dim = 8);

/// Random symmetric positive-definite Gram data for the algebra's space.
void install_random_inner_product(DgAlgebra& a, std::mt19937_64& rng);

}  // namespace linfty
