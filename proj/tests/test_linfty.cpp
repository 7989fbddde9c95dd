#include <linfty/linfty_ops.hpp>

#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"

using namespace linfty;

namespace {

HomotopyAlgebra toy_bracket() {
    // single symmetric bracket l_2(x, x) = y on {x deg 1, y deg 2}
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
    return a;
}

}  // namespace

TEST_CASE("symmetrize: commutator bracket on an associative algebra") {
    auto a = ainf_from_dg(testing::with_orthonormal_metric(matrix_line()), 4);
    auto l = symmetrize(a);
    l.validate(3);
    auto sp = a.space;
    // on two degree-0 matrices the symmetrized product is the commutator
    std::size_t i1 = sp->index_of("e12"), i2 = sp->index_of("e21");
    Element x = Element::basis(sp, i1), y = Element::basis(sp, i2);
    Element br = l.op(2).apply_elements({x, y});
    Element ab = a.op(2).apply_elements({x, y});
    Element ba = a.op(2).apply_elements({y, x});
    // deg 0 elements have odd shifted degree: l_2(x,y) = m(x,y) - m(y,x)
    Element want = ab - ba;
    CHECK((br == want));
}

TEST_CASE("symmetrize: doubling on shifted-even pairs, vanishing on commutative input") {
    // graded-commutative input symmetrizes to the zero bracket
    auto a = ainf_from_dg(testing::with_orthonormal_metric(exterior_algebra(2)), 4);
    auto l = symmetrize(a);
    auto sp = a.space;
    CHECK(l.op(2).is_zero());
    l.validate(3);

    // fat point: x has shifted degree 0, so l_2(x, x) = 2 m_2(x, x)
    auto fpa = ainf_from_dg(testing::with_orthonormal_metric(fat_point()), 4);
    auto fl = symmetrize(fpa);
    auto fsp = fpa.space;
    std::size_t x = fsp->index_of("x");
    Element got = fl.op(2).apply_elements({Element::basis(fsp, x), Element::basis(fsp, x)});
    Element want = fpa.op(2).apply_elements({Element::basis(fsp, x), Element::basis(fsp, x)});
    want *= Rat(2);
    CHECK((got == want));
}

TEST_CASE("symmetrized transfer satisfies the symmetric relations; Massey shuffle oracle") {
    auto alg = testing::with_orthonormal_metric(heisenberg_cochains());
    auto r = retraction_from_inner_product(alg);
    Transfer tr(alg, r, 4);
    auto a = ainf_from_transfer(tr, 6);
    auto l = symmetrize(a);
    l.validate(4);

    // l_3 = six-term shuffle sum of m_3, on every basis triple
    auto H = r.cohomology;
    std::vector<std::size_t> perm(3);
    for (std::size_t x = 0; x < H->dim(); ++x)
        for (std::size_t y = 0; y < H->dim(); ++y)
            for (std::size_t z = 0; z < H->dim(); ++z) {
                std::vector<std::size_t> tup{x, y, z};
                std::vector<int> sdegs{H->sdeg(x), H->sdeg(y), H->sdeg(z)};
                Element want(H);
                std::vector<std::size_t> order{0, 1, 2};
                do {
                    int sign = koszul_sign(order, sdegs);
                    if (sign == 0) continue;
                    std::vector<std::map<std::size_t, Rat>> args;
                    for (auto o : order) args.push_back({{tup[o], Rat(1)}});
                    auto v = a.op(3).apply(args);
                    for (auto& [out, c] : v) want.coeffs[out] += Rat(sign) * c;
                } while (std::next_permutation(order.begin(), order.end()));
                want.prune();
                Element got = l.op(3).apply_elements(
                    {Element::basis(H, x), Element::basis(H, y), Element::basis(H, z)});
                CHECK((got == want));
            }
}

TEST_CASE("split off an abelian summand of the matrix line") {
    auto a = ainf_from_dg(testing::with_orthonormal_metric(matrix_line()), 4);
    auto l = symmetrize(a);
    auto sp = a.space;
    // traceless part: e12, e21, e11 - e22 and their u-partners; the basis is
    // not aligned, so build the aligned toy instead: scalars are e11+e22.
    // matrix_line uses the elementary basis; split along the scalar line
    // requires the Lie-aligned basis, so conjugate first.
    GradedMultilinearMap phi(sp, sp, 1, 0);
    // change coordinates so that slot e11 carries the scalar line and slot
    // e22 the traceless diagonal: phi(e11+e22) = e11, phi(e11-e22) = e22
    for (auto suffix : {"", "u"}) {
        std::string s(suffix);
        phi.add({sp->index_of("e11" + s)}, sp->index_of("e11" + s), Rat(1, 2));
        phi.add({sp->index_of("e11" + s)}, sp->index_of("e22" + s), Rat(1, 2));
        phi.add({sp->index_of("e22" + s)}, sp->index_of("e11" + s), Rat(1, 2));
        phi.add({sp->index_of("e22" + s)}, sp->index_of("e22" + s), Rat(-1, 2));
        phi.add({sp->index_of("e12" + s)}, sp->index_of("e12" + s), Rat(1));
        phi.add({sp->index_of("e21" + s)}, sp->index_of("e21" + s), Rat(1));
    }
    // in the new coordinates "e11" plays id and "e22" plays hd
    auto conj = conjugate(testing::with_orthonormal_metric(matrix_line()), phi);
    auto lconj = symmetrize(ainf_from_dg(conj, 4));
    std::vector<std::size_t> traceless{sp->index_of("e22"), sp->index_of("e12"),
                                       sp->index_of("e21"), sp->index_of("e22u"),
                                       sp->index_of("e12u"), sp->index_of("e21u")};
    auto sub = split_abelian_summand(lconj, traceless);
    sub.validate(3);
    CHECK(sub.space->dim() == 6);
    // inserting a complement element into any bracket gives zero: checked by
    // the splitting verification inside the call; spot-check l_2 explicitly
    Element id_elem = Element::basis(lconj.space, sp->index_of("e11"));
    for (std::size_t j = 0; j < sp->dim(); ++j)
        CHECK(lconj.op(2).apply_elements({id_elem, Element::basis(sp, j)}).is_zero());

    // C = whole algebra: restricted structure is zero
    auto zero_sub = split_abelian_summand(
        [&] {
            HomotopyAlgebra ab;
            ab.flavor = Flavor::Linfty;
            ab.space = lconj.space;
            ab.truncation = 4;
            ab.ops.push_back(GradedMultilinearMap(ab.space, ab.space, 0, 1, false));
            ab.ops.push_back(GradedMultilinearMap(ab.space, ab.space, 1, 1, true));
            ab.ops.push_back(GradedMultilinearMap(ab.space, ab.space, 2, 1, true));
            return ab;
        }(),
        {});
    CHECK(zero_sub.space->dim() == 0);
}

TEST_CASE("kuranishi map and perturbation") {
    auto a = toy_bracket();
    a.validate(4);
    auto sp = a.space;

    SUBCASE("kappa(b x) = b^2/2 y in the symmetric flavor") {
        for (int num = -3; num <= 3; ++num) {
            Element b(sp);
            b.coeffs[0] = Rat(num, 2);
            b.prune();
            Element k = kuranishi_element(a, b);
            Element want(sp);
            want.coeffs[1] = Rat(num, 2) * Rat(num, 2) / Rat(2);
            want.prune();
            CHECK((k == want));
        }
    }
    SUBCASE("fat point: kappa(b x) = b^2 m_2(x, x) in the associative flavor") {
        auto fp = ainf_from_dg(testing::with_orthonormal_metric(fat_point()), 4);
        Element b(fp.space);
        b.coeffs[fp.space->index_of("x")] = Rat(3, 2);
        Element k = kuranishi_element(fp, b);
        Element want = fp.op(2).apply_elements({b, b});
        CHECK((k == want));
        CHECK_FALSE(k.is_zero());
    }
    SUBCASE("direct associative data m_2(x, x) = y gives kappa = b^2 y on the nose") {
        auto fsp = make_space({{"x", 1}, {"y", 2}});
        HomotopyAlgebra fp;
        fp.flavor = Flavor::Ainfty;
        fp.space = fsp;
        fp.truncation = 4;
        fp.ops.push_back(GradedMultilinearMap(fsp, fsp, 0, 1, false));
        fp.ops.push_back(GradedMultilinearMap(fsp, fsp, 1, 1, false));
        GradedMultilinearMap m2(fsp, fsp, 2, 1, false);
        m2.add({0, 0}, 1, Rat(1));
        fp.ops.push_back(m2);
        fp.validate(4);
        Element b(fsp);
        b.coeffs[0] = Rat(3, 2);
        Element k = kuranishi_element(fp, b);
        Element want(fsp);
        want.coeffs[1] = Rat(9, 4);
        CHECK((k == want));
    }
    SUBCASE("perturbation: identity at b = 0, curvature = kappa, composition") {
        Element zero(sp);
        auto p0 = perturb_algebra(a, zero);
        for (int k = 0; k <= a.k_max(); ++k) CHECK((p0.op(k) == a.op(k)));

        Element b(sp);
        b.coeffs[0] = Rat(1, 3);
        auto pb = perturb_algebra(a, b);
        CHECK((pb.curvature() == kuranishi_element(a, b)));
        pb.validate(4);

        Element b2(sp);
        b2.coeffs[0] = Rat(2, 5);
        auto once = perturb_algebra(perturb_algebra(a, b), b2);
        auto direct = perturb_algebra(a, b + b2);
        for (int k = 0; k <= a.k_max(); ++k) CHECK((once.op(k) == direct.op(k)));
    }
    SUBCASE("ledger propagation: E = 4C inside the radius") {
        auto alg = testing::with_orthonormal_metric(heisenberg_cochains());
        auto r = retraction_from_inner_product(alg);
        Transfer tr(alg, r, 4);
        auto ha = symmetrize(ainf_from_transfer(tr, 6));
        REQUIRE(ha.norm_constant.has_value());
        CHECK(ha.normed_flag());
        Rat c = *ha.norm_constant;
        Element b(ha.space);
        b.coeffs[*ha.space->indices_of_degree(1).begin()] = Rat(1) / (Rat(8) * c);
        auto pb = perturb_algebra(ha, b);
        REQUIRE(pb.norm_constant.has_value());
        CHECK(*pb.norm_constant == Rat(4) * c);
        CHECK(pb.normed_flag());
    }
}

TEST_CASE("MC pushforward") {
    auto alg = testing::with_orthonormal_metric(heisenberg_cochains());
    auto r = retraction_from_inner_product(alg);
    Transfer tr(alg, r, 4);
    auto A = ainf_from_transfer(tr, 6);
    auto B = ainf_from_dg(alg, 6);
    auto lA = symmetrize(A);
    auto lB = symmetrize(B);
    auto I = symmetrize(morphism_I(tr, A, B), lA, lB);
    I.validate(3);

    // every degree-1 class with kappa = 0; on the Heisenberg cohomology all
    // products of degree-1 classes are exact, so kappa(b) = m2(b,b) transfers
    // to the Massey corrections only; pick b with kappa(b) = 0
    auto H = r.cohomology;
    auto deg1 = H->indices_of_degree(1);
    REQUIRE(deg1.size() == 2);
    Element b(H);
    b.coeffs[deg1[0]] = Rat(1, 2);
    auto mc = make_mc(lA, b);
    if (mc.is_mc()) {
        auto img = mc_pushforward(I, mc);
        CHECK(img.is_mc());
    }
    // strict linear morphism case: identity morphism on lB
    HomotopyMorphism idm;
    idm.flavor = Flavor::Linfty;
    idm.source = &lB;
    idm.target = &lB;
    idm.components.push_back(GradedMultilinearMap());
    idm.components.push_back(GradedMultilinearMap::identity(alg.space));
    for (int k = 2; k <= 3; ++k)
        idm.components.push_back(GradedMultilinearMap(alg.space, alg.space, k, 0, true));
    Element bb(alg.space);
    bb.coeffs[alg.space->index_of("x1")] = Rat(2);
    auto mcb = make_mc(lB, bb);
    REQUIRE(mcb.is_mc());
    auto img2 = mc_pushforward(idm, mcb);
    CHECK((img2.value == bb));

    // (g o f)_* = g_* o f_* for the composable transfer pair
    auto P = symmetrize(morphism_P(tr, B, A), lB, lA);
    auto PI = compose_morphisms(P, I);
    Element v(H);
    v.coeffs[deg1[1]] = Rat(1, 3);
    Element lhs = pushforward(PI, v);
    Element rhs = pushforward(P, pushforward(I, v));
    CHECK((lhs == rhs));
    CHECK((lhs == v));  // P o I = id
}

TEST_CASE("gauge flow") {
    auto alg = testing::with_orthonormal_metric(matrix_line());
    // matrix_line is non-unital by construction; use the fat point's line or
    // the contractible line which carries a unit
    auto uni = testing::with_orthonormal_metric(contractible_line());

    SUBCASE("C = 0 gives the unit") {
        auto res = gauge_flow(uni, [&](double) { return std::map<std::size_t, double>{}; }, 64);
        CHECK(res.g_one.at(*uni.unit) == doctest::Approx(1.0));
        CHECK(res.error_estimate < 1e-10);
    }
    SUBCASE("constant nilpotent C: exact polynomial exponential") {
        // in the contractible line, x is nilpotent: exp(tx) = 1 + tx
        std::map<std::size_t, double> c{{uni.space->index_of("x"), 0.75}};
        auto res = gauge_flow(uni, [&](double) { return c; }, 128);
        CHECK(res.g_one.at(uni.space->index_of("one")) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(res.g_one.at(uni.space->index_of("x")) == doctest::Approx(0.75).epsilon(1e-8));
    }
    SUBCASE("constant C with s^2 = 1: cosh/sinh oracle") {
        auto sp = make_space({{"one", 0}, {"s", 0}});
        std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>> prod;
        prod[{"one", "one"}]["one"] = Rat(1);
        prod[{"one", "s"}]["s"] = Rat(1);
        prod[{"s", "one"}]["s"] = Rat(1);
        prod[{"s", "s"}]["one"] = Rat(1);
        auto z2 = testing::with_orthonormal_metric(
            dg_algebra_from_classical(sp, prod, {}, std::string("one")));
        double c = 0.8;
        std::map<std::size_t, double> cs{{sp->index_of("s"), c}};
        auto res = gauge_flow(z2, [&](double) { return cs; }, 128);
        CHECK(res.g_one.at(sp->index_of("one")) == doctest::Approx(std::cosh(c)).epsilon(1e-8));
        CHECK(res.g_one.at(sp->index_of("s")) == doctest::Approx(std::sinh(c)).epsilon(1e-8));
    }
    SUBCASE("non-unital input is rejected") {
        CHECK_THROWS_AS(gauge_flow(alg, [&](double) { return std::map<std::size_t, double>{}; }, 16),
                        std::invalid_argument);
    }
}
