#pragma once

#include <linfty/dg_algebra.hpp>
#include <linfty/homotopy_algebra.hpp>
#include <linfty/transfer.hpp>

#include <functional>

namespace linfty {

/// Wraps a dg algebra as an A-infinity algebra (m_0 = 0, m_k = 0 for k > 2).
HomotopyAlgebra ainf_from_dg(const DgAlgebra& alg, int truncation);

/// The transferred A-infinity structure on cohomology, with norm ledger.
HomotopyAlgebra ainf_from_transfer(const Transfer& tr, int truncation);

/// Collects transfer morphism components as A-infinity morphisms.
HomotopyMorphism morphism_I(const Transfer& tr, const HomotopyAlgebra& src,
                            const HomotopyAlgebra& tgt);
HomotopyMorphism morphism_P(const Transfer& tr, const HomotopyAlgebra& src,
                            const HomotopyAlgebra& tgt);

/// Symmetrization: l_k(a_1..a_k) = sum_s eps_s m_k(a_{s(1)}..a_{s(k)}).
/// Associative input yields the commutator bracket.
HomotopyAlgebra symmetrize(const HomotopyAlgebra& a);
HomotopyMorphism symmetrize(const HomotopyMorphism& f, const HomotopyAlgebra& src,
                            const HomotopyAlgebra& tgt);

/// Restriction to a basis-aligned direct summand after verifying that the
/// complement is an abelian dg-Lie factor; any bracket fed a complement
/// argument must vanish.
HomotopyAlgebra split_abelian_summand(const HomotopyAlgebra& a,
                                      const std::vector<std::size_t>& summand_basis);

/// kappa(b) = sum_k l_k(b^k)/k! (plain sums in the associative flavor).
Element kuranishi_element(const HomotopyAlgebra& a, const Element& b);

MCElement make_mc(const HomotopyAlgebra& a, const Element& b);

/// Fiberwise structure at the point b: l^b_k = sum_j l_{k+j}(b^j, -)/j!.
/// The curvature of the result is kappa(b); the norm constant propagates
/// to 4C inside the radius 1/(4C).
HomotopyAlgebra perturb_algebra(const HomotopyAlgebra& a, const Element& b);

/// f^b_k = sum_j f_{j+k}(b^j, -)/j! between a perturbed at b and its target
/// perturbed at the pushforward of b.
HomotopyMorphism perturb_morphism(const HomotopyMorphism& f, const Element& b,
                                  const HomotopyAlgebra& src_pert, const HomotopyAlgebra& tgt_pert);

/// Composite morphism (g o f)_n = sum over block decompositions.
HomotopyMorphism compose_morphisms(const HomotopyMorphism& g, const HomotopyMorphism& f);

/// The identity morphism of an algebra.
HomotopyMorphism identity_morphism(const HomotopyAlgebra& a, int k_max);

/// f_*(b) = sum_k f_k(b^k)/k! (plain sums for the associative flavor).
Element pushforward(const HomotopyMorphism& f, const Element& b);

/// Pushforward of a Maurer-Cartan element; throws if b is not MC.
MCElement mc_pushforward(const HomotopyMorphism& f, const MCElement& b);

/// Float trajectory of dg/dt = g . C(t) in the degree-0 part of a unital
/// dg algebra, fixed-step RK4 with a step-halving error estimate.
struct GaugeFlowResult {
    std::map<std::size_t, double> g_one;
    double error_estimate = 0.0;
    int steps = 0;
};
GaugeFlowResult gauge_flow(const DgAlgebra& alg,
                           const std::function<std::map<std::size_t, double>(double)>& C,
                           int steps = 256);

/// Residual of the pushforward identity F(I_*(b)) - sum I(b^j, kappa(b), b^j)
/// on the ambient algebra; expected zero for every b.
Element regularity_identity_residual(const Transfer& tr, const Element& b);

}  // namespace linfty
