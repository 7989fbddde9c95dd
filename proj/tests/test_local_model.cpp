#include <linfty/linfty_ops.hpp>
#include <linfty/local_model.hpp>

#include "doctest.h"
#include "fixtures.hpp"

using namespace linfty;

namespace {

// surface-like model: unital exterior algebra on two odd generators with
// the duality pairing; the scenario-2 certificate target
LocalModel surface_model() {
    auto alg = ainf_from_dg(testing::with_orthonormal_metric(exterior_algebra(2)), 4);
    auto sp = alg.space;
    CyclicPairing pairing;
    pairing.space = sp;
    pairing.unit = sp->index_of("one");
    auto set = [&](const char* a, const char* b, int c) {
        pairing.gram[{sp->index_of(a), sp->index_of(b)}] = Rat(c);
    };
    set("one", "x12", 1);
    set("x12", "one", 1);
    set("x1", "x2", 1);
    set("x2", "x1", -1);
    return LocalModel{alg, pairing, 2, 5};
}

// cubic-potential model: symmetric brackets dual to C = b1^2 b2 + b1^4
HomotopyAlgebra two_variable_cubic() {
    auto sp = make_space({{"x1", 1}, {"x2", 1}, {"y1", 2}, {"y2", 2}});
    HomotopyAlgebra a;
    a.flavor = Flavor::Linfty;
    a.space = sp;
    a.truncation = 6;
    a.ops.push_back(GradedMultilinearMap(sp, sp, 0, 1, false));
    a.ops.push_back(GradedMultilinearMap(sp, sp, 1, 1, true));
    GradedMultilinearMap l2(sp, sp, 2, 1, true);
    // kappa = d(b1^2 b2): kappa_1 = 2 b1 b2, kappa_2 = b1^2 against y_i
    l2.add({0, 0}, 3, Rat(2));  // l2(x1,x1) = 2 y2
    l2.add({0, 1}, 2, Rat(2));  // l2(x1,x2) = 2 y1
    a.ops.push_back(l2);
    GradedMultilinearMap l3(sp, sp, 3, 1, true);
    // kappa_1 += 4 b1^3 from C = b1^4
    l3.add({0, 0, 0}, 2, Rat(24));
    a.ops.push_back(l3);
    a.validate(4);
    return a;
}

LocalModel cubic_model() {
    auto a = two_variable_cubic();
    CyclicPairing pairing;
    pairing.space = a.space;
    auto set = [&](const char* u, const char* v, int c) {
        pairing.gram[{a.space->index_of(u), a.space->index_of(v)}] = Rat(c);
    };
    set("x1", "y1", 1);
    set("y1", "x1", -1);
    set("x2", "y2", 1);
    set("y2", "x2", -1);
    return LocalModel{a, pairing, 3, 5};
}

LocalModel toy_bracket_model() {
    auto sp = make_space({{"x", 1}, {"y", 2}});
    HomotopyAlgebra a;
    a.flavor = Flavor::Linfty;
    a.space = sp;
    a.truncation = 6;
    a.ops.push_back(GradedMultilinearMap(sp, sp, 0, 1, false));
    a.ops.push_back(GradedMultilinearMap(sp, sp, 1, 1, true));
    GradedMultilinearMap l2(sp, sp, 2, 1, true);
    l2.add({0, 0}, 1, Rat(1));
    a.ops.push_back(l2);
    CyclicPairing pairing;
    pairing.space = sp;
    pairing.gram[{0, 1}] = Rat(1);
    pairing.gram[{1, 0}] = Rat(-1);
    return LocalModel{a, pairing, 3, 5};
}

// isotropic quadratic model over the split pairing of signature (1, 1)
LocalModel dim4_model() {
    auto sp = make_space({{"x1", 1}, {"x2", 1}, {"y1", 2}, {"y2", 2}});
    HomotopyAlgebra a;
    a.flavor = Flavor::Linfty;
    a.space = sp;
    a.truncation = 5;
    a.ops.push_back(GradedMultilinearMap(sp, sp, 0, 1, false));
    a.ops.push_back(GradedMultilinearMap(sp, sp, 1, 1, true));
    GradedMultilinearMap l2(sp, sp, 2, 1, true);
    l2.add({0, 1}, 2, Rat(1));
    l2.add({0, 1}, 3, Rat(1));  // l2(x1,x2) = y1 + y2
    a.ops.push_back(l2);
    CyclicPairing pairing;
    pairing.space = sp;
    pairing.gram[{2, 2}] = Rat(1);
    pairing.gram[{3, 3}] = Rat(-1);
    return LocalModel{a, pairing, 4, 5};
}

}  // namespace

TEST_CASE("dimension-2 certificate") {
    SUBCASE("unital cyclic surface model: kappa vanishes identically") {
        auto m = surface_model();
        auto cert = check_dim2(m);
        CHECK(cert.strict_unit);
        CHECK(cert.cyclic);
        CHECK(cert.pairing_antisymmetric_deg1);
        CHECK(cert.kappa_against_unit.is_zero());
        CHECK(cert.kappa_vanishes);
        CHECK(cert.passed);
        CHECK(cert.per_arity.at(2) == "antisymmetry on degree one");
    }
    SUBCASE("non-unital control with a cubic term fails") {
        auto sp = make_space({{"e", 0}, {"x1", 1}, {"x2", 1}, {"w", 2}});
        HomotopyAlgebra a;
        a.flavor = Flavor::Ainfty;
        a.space = sp;
        a.truncation = 5;
        a.ops.push_back(GradedMultilinearMap(sp, sp, 0, 1, false));
        a.ops.push_back(GradedMultilinearMap(sp, sp, 1, 1, false));
        a.ops.push_back(GradedMultilinearMap(sp, sp, 2, 1, false));
        GradedMultilinearMap m3(sp, sp, 3, 1, false);
        m3.add({1, 1, 1}, 3, Rat(1));  // m3(x1,x1,x1) = w
        a.ops.push_back(m3);
        a.validate(4);
        CyclicPairing pairing;
        pairing.space = sp;
        pairing.unit = sp->index_of("e");
        pairing.gram[{0, 3}] = Rat(1);
        pairing.gram[{3, 0}] = Rat(1);
        pairing.gram[{1, 2}] = Rat(1);
        pairing.gram[{2, 1}] = Rat(-1);
        LocalModel model{a, pairing, 2, 5};
        auto cert = check_dim2(model);
        CHECK_FALSE(cert.passed);
        CHECK_FALSE(cert.strict_unit);  // e is not a strict unit here
        CHECK_FALSE(cert.kappa_against_unit.is_zero());
        CHECK(cert.per_arity.at(3) == "NONZERO");
    }
    SUBCASE("zero algebra is trivially certified") {
        auto sp = make_space({{"e", 0}, {"x1", 1}, {"x2", 1}, {"w", 2}});
        HomotopyAlgebra a;
        a.flavor = Flavor::Ainfty;
        a.space = sp;
        a.truncation = 4;
        a.ops.push_back(GradedMultilinearMap(sp, sp, 0, 1, false));
        a.ops.push_back(GradedMultilinearMap(sp, sp, 1, 1, false));
        CyclicPairing pairing;
        pairing.space = sp;
        pairing.gram[{0, 3}] = Rat(1);
        pairing.gram[{3, 0}] = Rat(1);
        pairing.gram[{1, 2}] = Rat(1);
        pairing.gram[{2, 1}] = Rat(-1);
        LocalModel model{a, pairing, 2, 4};
        auto cert = check_dim2(model);
        CHECK(cert.kappa_vanishes);
        CHECK(cert.kappa_against_unit.is_zero());
    }
}

TEST_CASE("dimension-3 potential") {
    SUBCASE("one-bracket toy: Psi = b^3/6 and dPsi = kappa") {
        auto m = toy_bracket_model();
        auto res = cs_potential(m);
        Poly want(1, m.truncation);
        Poly::Mono cube{3};
        want.add_term(cube, Rat(1, 6));
        CHECK((res.psi == want));
        CHECK(res.gradient_matches);
        CHECK(res.fd_max_error < 1e-6);
        CHECK(res.passed);
        // kappa component: b^2/2 against the coordinate
        Poly k_want(1, m.truncation);
        k_want.add_term({2}, Rat(1, 2));
        CHECK((res.kappa[0] == k_want));
    }
    SUBCASE("b = 0 gives Psi = 0, dPsi = 0") {
        auto m = toy_bracket_model();
        auto res = cs_potential(m);
        std::vector<Rat> origin{Rat(0)};
        CHECK(res.psi.eval(origin) == Rat(0));
        CHECK(res.kappa[0].eval(origin) == Rat(0));
    }
    SUBCASE("two-variable model with l2 and l3: exact polynomial identity") {
        auto m = cubic_model();
        auto res = cs_potential(m);
        CHECK(res.gradient_matches);
        CHECK(res.passed);
        // Psi = b1^2 b2 + b1^4 by construction
        Poly want(2, m.truncation);
        want.add_term({2, 1}, Rat(1));
        want.add_term({4, 0}, Rat(1));
        CHECK((res.psi == want));
    }
}

TEST_CASE("dimension-4 certificate") {
    SUBCASE("kappa = 0 is trivially isotropic") {
        auto m = dim4_model();
        m.algebra.ops[2] = GradedMultilinearMap(m.algebra.space, m.algebra.space, 2, 1, true);
        auto cert = check_dim4(m);
        CHECK(cert.passed);
        CHECK_FALSE(cert.nonregular_witnessed);
        auto cx = curved_three_term_complex(m);
        CHECK(cx.dual_kills_kappa);
        CHECK(cx.composition_is_kappa_quadratic);
    }
    SUBCASE("isotropic quadratic model") {
        auto m = dim4_model();
        auto cert = check_dim4(m);
        CHECK(cert.kappa_isotropic);
        CHECK(cert.dkappa_kills_kappa);
        CHECK(cert.hessian_witness);
        CHECK(cert.passed);
        CHECK(cert.nonregular_witnessed);
        auto cx = curved_three_term_complex(m);
        CHECK(cx.dual_kills_kappa);
        CHECK(cx.composition_is_kappa_quadratic);
    }
    SUBCASE("one-dimensional obstruction space forces kappa = 0") {
        // symmetric pairing on a single degree-2 line; kappa = 0 model passes
        auto sp = make_space({{"x", 1}, {"y", 2}});
        HomotopyAlgebra a;
        a.flavor = Flavor::Linfty;
        a.space = sp;
        a.truncation = 5;
        a.ops.push_back(GradedMultilinearMap(sp, sp, 0, 1, false));
        a.ops.push_back(GradedMultilinearMap(sp, sp, 1, 1, true));
        a.ops.push_back(GradedMultilinearMap(sp, sp, 2, 1, true));
        CyclicPairing pairing;
        pairing.space = sp;
        pairing.gram[{1, 1}] = Rat(1);
        LocalModel model{a, pairing, 4, 5};
        auto cert = check_dim4(model);
        CHECK(cert.ext2_line_forces_zero);
        CHECK(cert.passed);
        // and a nonzero kappa on the same profile is flagged
        GradedMultilinearMap l2(sp, sp, 2, 1, true);
        l2.add({0, 0}, 1, Rat(1));
        model.algebra.ops[2] = l2;
        auto bad = check_dim4(model);
        CHECK_FALSE(bad.ext2_line_forces_zero);
        CHECK_FALSE(bad.passed);
    }
}
