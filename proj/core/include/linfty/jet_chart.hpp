#pragma once

#include <linfty/cdga.hpp>
#include <linfty/homotopy_algebra.hpp>
#include <linfty/polynomial.hpp>

#include <cstdint>

namespace linfty {

/// Differential form with values in a truncated graded-commutative algebra;
/// the mask selects the dt factors (kept leftmost), which count toward the
/// weight cap.
struct JetForm {
    CdgaPtr ring;
    std::map<std::uint32_t, CdgaElem> parts;

    bool is_zero() const;
    JetForm& operator+=(const JetForm& o);
    JetForm& operator-=(const JetForm& o);
    bool operator==(const JetForm& o) const;
};

/// Truncated Chevalley-Eilenberg chart of an L-infinity algebra over the
/// polynomial base spanned by its degree-1 part: generators t_i (base
/// coordinates), x_i (fiber duals of degree 1) and xi_j (shifted duals of
/// the higher-degree fiber), with the square-zero derivation Q dual to the
/// perturbed brackets and the flat connection D = tau + nabla.
class JetChart {
public:
    JetChart(const HomotopyAlgebra& fiber, int N);

    const HomotopyAlgebra& fiber() const { return fiber_; }
    int N() const { return N_; }
    int coords() const { return m_; }
    const CdgaPtr& ring() const { return ring_; }

    std::size_t t_gen(int i) const { return i; }
    std::size_t x_gen(int i) const { return m_ + i; }
    std::size_t xi_gen(int j) const { return 2 * m_ + j; }
    std::size_t higher_count() const { return higher_.size(); }
    /// fiber basis index carried by the j-th higher generator
    std::size_t higher_fiber_index(int j) const { return higher_.at(j); }

    CdgaElem Q(const CdgaElem& e) const;
    JetForm Q(const JetForm& f) const;
    JetForm D(const CdgaElem& e) const;
    JetForm D(const JetForm& f) const;
    /// Q with the x-generators struck out; preserves the x-free subalgebra.
    CdgaElem Qbar(const CdgaElem& e) const;

    /// Q^2 = 0, D^2 = 0, [D,Q] = 0, Q(x) = 0, exact at the truncation; the
    /// chart constructor calls this and throws naming the first offender.
    void verify() const;

private:
    HomotopyAlgebra fiber_;
    int N_;
    int m_;
    std::vector<std::size_t> coord_basis_;
    std::vector<std::size_t> higher_;
    CdgaPtr ring_;
    std::vector<CdgaElem> q_image_;
};

JetChart build_jet_chart(const HomotopyAlgebra& g, int N);

// -- Koszul contraction of the (x, dt) variables over the base ------------

/// tau: the derivation x_i -> dt_i (the de Rham-style differential).
JetForm koszul_tau(const JetChart& c, const JetForm& f);
/// Contraction h with pi i = id, i pi = id + tau h + h tau, h h = 0.
JetForm koszul_h(const JetChart& c, const JetForm& f);
/// Projection onto the (x, dt)-free part.
JetForm koszul_eps(const JetChart& c, const JetForm& f);

// -- cohomology of the derived-locus complex -------------------------------

struct CeCohomology {
    std::map<int, std::size_t> dims;  // per cohomological degree, truncated
    std::map<int, std::vector<std::size_t>> dims_by_filtration;  // per t-degree
    std::vector<Poly> h0_relations;   // generators of the annihilator ideal
    std::size_t h0_dim = 0;
    bool stable = false;  // window dims agree between N and N+1
};

/// Exact rational cohomology of (S(W) (x) Q[t], Qbar) per degree in the
/// window; throws std::runtime_error("increase N ...") when the requested
/// window has not stabilized.
CeCohomology ce_cohomology(const HomotopyAlgebra& g, int N, int window_lo, int window_hi,
                           bool require_stable = true);

/// H^0 equals the quotient by the given ideal generators, exactly at the
/// truncation; returns the offending polynomial on failure.
struct EnhancementCheck {
    bool passed = false;
    std::string witness;
};
EnhancementCheck enhancement_check(const HomotopyAlgebra& g, int N,
                                   const std::vector<Poly>& ideal_generators);

/// Degree-0 cohomology of the total (Q + D) complex at the truncation.
std::size_t bicomplex_h0_dim(const JetChart& chart);

}  // namespace linfty
