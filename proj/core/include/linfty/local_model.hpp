#pragma once

#include <linfty/homotopy_algebra.hpp>
#include <linfty/polynomial.hpp>

#include <string>

namespace linfty {

/// A cyclic (optionally unital) finite model of a deformation problem,
/// tagged with the dimension scenario its certificates apply to.
struct LocalModel {
    HomotopyAlgebra algebra;
    CyclicPairing pairing;
    int scenario = 3;    // 2, 3 or 4
    int truncation = 4;  // polynomial degree cap

    /// The degree-1 basis carries the coordinates b_1..b_m.
    std::vector<std::size_t> coordinates() const { return algebra.space->indices_of_degree(1); }
};

/// kappa(b) for the symbolic point b = sum b_i e_i: a polynomial-coefficient
/// element of degree 2, truncated at the model's polynomial cap.
PolyElement symbolic_kuranishi(const LocalModel& m);

/// <v, e_j> for a polynomial-coefficient element.
Poly pair_against(const LocalModel& m, const PolyElement& v, std::size_t j);

struct Dim2Certificate {
    bool strict_unit = false;
    bool cyclic = false;
    bool pairing_antisymmetric_deg1 = false;
    bool unit_pairs_top = false;
    Poly kappa_against_unit;
    bool kappa_vanishes = false;
    std::map<int, std::string> per_arity;  // which mechanism kills each arity
    bool passed = false;
    std::string witness;
};
Dim2Certificate check_dim2(const LocalModel& m);

struct Dim3Result {
    Poly psi;
    std::vector<Poly> kappa;            // components against the coordinates
    bool gradient_matches = false;      // dPsi = iota kappa, exact
    double fd_max_error = 0.0;          // float finite differences
    bool passed = false;
};
Dim3Result cs_potential(const LocalModel& m, int fd_samples = 10, double fd_step = 1e-5,
                        double fd_tol = 1e-6, std::uint64_t seed = 21);

struct Dim4Certificate {
    bool kappa_isotropic = false;       // <kappa, kappa> = 0
    bool dkappa_kills_kappa = false;    // <d_v kappa, kappa> = 0 for all v
    bool hessian_witness = false;       // <d_v k, d_w k> + <d_w d_v k, k> = 0
    bool ext2_line_forces_zero = true;  // dim g_2 = 1 => kappa = 0
    bool nonregular_witnessed = false;  // kappa != 0 and some d_v kappa != 0
    bool passed = false;
    std::string witness;
};
Dim4Certificate check_dim4(const LocalModel& m);

struct ThreeTermComplex {
    std::vector<std::vector<Poly>> d_kappa;       // g2-rows by coordinate-cols
    std::vector<std::vector<Poly>> d_kappa_dual;  // coordinate-rows by g2-cols
    bool dual_kills_kappa = false;
    bool composition_is_kappa_quadratic = false;
};
ThreeTermComplex curved_three_term_complex(const LocalModel& m);

}  // namespace linfty
