#include <linfty/linfty_ops.hpp>
#include <linfty/transfer.hpp>

#include "doctest.h"
#include "fixtures.hpp"

using namespace linfty;

namespace {

// all structure relations of the transferred family up to total arity n_max
bool ainf_relations_hold(const Transfer& tr, int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        GradedMultilinearMap rel(tr.retraction().cohomology, tr.retraction().cohomology, n, 2);
        for (int s = 1; s <= n && s <= tr.k_max(); ++s) {
            int outer = n - s + 1;
            if (outer > tr.k_max()) continue;
            for (int r = 0; r <= n - s; ++r) rel += compose(tr.m(outer), tr.m(s), r + 1);
        }
        if (!rel.is_zero()) return false;
    }
    return true;
}

bool morphism_equations_hold(const Transfer& tr, int n_max) {
    auto A = ainf_from_transfer(tr, 8);
    auto B = ainf_from_dg(tr.algebra(), 8);
    auto I = morphism_I(tr, A, B);
    auto P = morphism_P(tr, B, A);
    for (int n = 1; n <= n_max; ++n) {
        if (!I.equation_defect(n).is_zero()) return false;
        if (!P.equation_defect(n).is_zero()) return false;
    }
    return true;
}

bool p_after_i_is_identity(const Transfer& tr, int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        GradedMultilinearMap acc(tr.retraction().cohomology, tr.retraction().cohomology, n, 0);
        for (int s = 1; s <= n; ++s) {
            std::vector<std::vector<int>> comps;
            std::vector<int> cur;
            std::function<void(int, int)> rec = [&](int left, int parts) {
                if (parts == 1) {
                    cur.push_back(left);
                    comps.push_back(cur);
                    cur.pop_back();
                    return;
                }
                for (int f = 1; f + parts - 1 <= left; ++f) {
                    cur.push_back(f);
                    rec(left - f, parts - 1);
                    cur.pop_back();
                }
            };
            rec(n, s);
            for (auto& comp : comps) {
                std::vector<GradedMultilinearMap> blocks;
                for (int u = 1; u <= s; ++u) blocks.push_back(tr.I(comp[u - 1]));
                acc += tensor_compose(tr.P(s), blocks);
            }
        }
        bool ok = (n == 1) ? (acc == GradedMultilinearMap::identity(tr.retraction().cohomology))
                           : acc.is_zero();
        if (!ok) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("tree enumeration: Catalan counts and canonical order") {
    std::vector<unsigned long> catalan{1, 1, 2, 5, 14, 42, 132, 429};
    for (int k = 1; k <= 8; ++k) {
        auto trees = enumerate_trees(k);
        CHECK(trees.size() == catalan[k - 1]);
        CHECK(trees.size() == catalan_rec(k));
        for (auto& t : trees) CHECK(t->leaf_count() == k);
        for (std::size_t i = 1; i < trees.size(); ++i)
            CHECK(trees[i - 1]->serialize() < trees[i]->serialize());
    }
    CHECK_THROWS_AS(enumerate_trees(0), std::invalid_argument);
}

TEST_CASE("projection-side decorations: counts and bounds") {
    CHECK(q_terms(1).size() == 1);
    CHECK(q_terms(2).size() == 2);  // exactly the two decorated trees
    for (int k = 1; k <= 5; ++k) {
        unsigned long bound = 1;
        for (int i = 0; i < k; ++i) bound *= 16;
        CHECK(q_terms(k).size() <= bound);
    }
    // interpolation trees: |W(k)| <= 4^k for k <= 6
    for (int k = 1; k <= 6; ++k) {
        unsigned long bound = 1;
        for (int i = 0; i < k; ++i) bound *= 4;
        CHECK(w_terms(k).size() <= bound);
    }
    // every interpolation tree has exactly k-1 'h' edges (degree reasons)
    for (int k = 2; k <= 5; ++k)
        for (auto& term : w_terms(k)) CHECK(deco_tree_degree(term.tree) == 0);
    // one 'u' per variant
    for (auto& term : v_terms(3)) {
        std::function<int(const DecoTreePtr&)> blues = [&](const DecoTreePtr& t) {
            int n = t->color == 'u' ? 1 : 0;
            if (!t->is_leaf()) n += blues(t->left) + blues(t->right);
            return n;
        };
        CHECK(blues(term.tree) == 1);
    }
}

TEST_CASE("transfer on the corpus: relations, morphisms, inverse") {
    for (int i = 0; i < 6; ++i) {
        auto a = testing::corpus_algebra(i);
        auto r = retraction_from_inner_product(a);
        Transfer tr(a, r, 5);
        CHECK(tr.m(1).is_zero());  // harmonic representatives
        CHECK(ainf_relations_hold(tr, 5));
        CHECK(morphism_equations_hold(tr, 4));
        CHECK(p_after_i_is_identity(tr, 4));
    }
}

TEST_CASE("transferred product is p m2 (i x i); I_2 = h m2 (i x i)") {
    auto a = testing::with_orthonormal_metric(heisenberg_cochains());
    auto r = retraction_from_inner_product(a);
    Transfer tr(a, r, 3);
    CHECK(tr.m(2) == compose(r.p, tensor_compose(a.m2, {r.i, r.i}), 1));
    CHECK(tr.I(1) == r.i);
    CHECK(tr.I(2) == compose(r.h, tensor_compose(a.m2, {r.i, r.i}), 1));
    CHECK(tr.P(1) == r.p);
}

TEST_CASE("Massey product: m3 nonzero and equal to the two-term oracle") {
    auto a = testing::with_orthonormal_metric(heisenberg_cochains());
    auto r = retraction_from_inner_product(a);
    Transfer tr(a, r, 3);
    CHECK_FALSE(tr.m(3).is_zero());

    // direct oracle: m3(x,y,z) = p m2(h m2(ix, iy), iz) + p m2(ix, h m2(iy, iz)),
    // evaluated elementwise (the two bracketed blocks are even operators, so
    // evaluation introduces no signs)
    auto H = r.cohomology;
    for (std::size_t x = 0; x < H->dim(); ++x)
        for (std::size_t y = 0; y < H->dim(); ++y)
            for (std::size_t z = 0; z < H->dim(); ++z) {
                Element ix = r.i.apply_elements({Element::basis(H, x)});
                Element iy = r.i.apply_elements({Element::basis(H, y)});
                Element iz = r.i.apply_elements({Element::basis(H, z)});
                Element t1 = a.m2.apply_elements(
                    {r.h.apply_elements({a.m2.apply_elements({ix, iy})}), iz});
                Element t2 = a.m2.apply_elements(
                    {ix, r.h.apply_elements({a.m2.apply_elements({iy, iz})})});
                Element want = r.p.apply_elements({t1 + t2});
                Element got = tr.m(3).apply_elements(
                    {Element::basis(H, x), Element::basis(H, y), Element::basis(H, z)});
                CHECK((got == want));
            }
}

TEST_CASE("norm ledger: C <= 4 D^2 on the corpus") {
    for (int i = 0; i < 6; ++i) {
        auto a = testing::corpus_algebra(i);
        auto r = retraction_from_inner_product(a);
        Transfer tr(a, r, 5);
        CHECK(tr.ledger_m().within_bound);
        CHECK(tr.ledger_I().within_bound);
        CHECK(tr.ledger_P().within_bound);
    }
    // zero algebra: C = 0
    auto z = testing::with_orthonormal_metric(acyclic_two_term());
    auto rz = retraction_from_inner_product(z);
    Transfer tz(z, rz, 4);
    auto lz = tz.ledger_m();
    CHECK(lz.smallest_c == 0.0);
}

TEST_CASE("heat interpolation family") {
    auto a = testing::with_orthonormal_metric(heisenberg_cochains());
    auto r = retraction_from_inner_product(a);
    Transfer tr(a, r, 3);
    HeatFamily heat(a, r);
    HomotopyFamily fam(tr, heat, 3);

    SUBCASE("endpoints") {
        // R(0) = identity family
        auto R10 = fam.R(1, 0.0);
        CHECK((R10 - FloatMultiMap::identity(a.space)).norm() < 1e-12);
        for (int k = 2; k <= 3; ++k) CHECK(fam.R(k, 0.0).norm() < 1e-12);
        // R(inf) = I o P within 1e-8: compare at large t against the exact composite
        for (int k = 1; k <= 3; ++k) {
            auto diff = fam.R(k, 60.0);
            diff -= fam.R_inf(k);
            CHECK(diff.norm() < 1e-8);
        }
    }
    SUBCASE("morphism residual of R(t) and the flow equation") {
        for (double t : {0.1, 1.0, 10.0}) {
            for (int n = 1; n <= 3; ++n) {
                CHECK(fam.morphism_residual(t, n) < 1e-6);
                CHECK(fam.flow_residual(t, n) < 1e-6);
            }
        }
    }
    SUBCASE("reparametrized homotopy endpoints") {
        for (int k = 1; k <= 3; ++k) {
            auto h0 = fam.H_position(k, 0.0);
            if (k == 1) CHECK((h0 - FloatMultiMap::identity(a.space)).norm() < 1e-12);
            else CHECK(h0.norm() < 1e-12);
            auto h1 = fam.H_position(k, 1.0);
            h1 -= fam.R_inf(k);
            CHECK(h1.norm() < 1e-12);
        }
        // interior consistency: f(1/2) = tan(pi/4) = 1 exactly
        auto mid = fam.H_position(2, 0.5);
        mid -= fam.R(2, 1.0);
        CHECK(mid.norm() < 1e-12);
    }
}

TEST_CASE("regularity identity") {
    SUBCASE("b = 0") {
        auto a = testing::with_orthonormal_metric(heisenberg_cochains());
        auto r = retraction_from_inner_product(a);
        Transfer tr(a, r, 4);
        Element zero(r.cohomology);
        CHECK(regularity_identity_residual(tr, zero).is_zero());
    }
    SUBCASE("fat point: both sides b^2 I_1(y), residual zero") {
        auto a = testing::with_orthonormal_metric(fat_point());
        auto r = retraction_from_inner_product(a);
        Transfer tr(a, r, 4);
        for (int num = -2; num <= 2; ++num) {
            Element b(r.cohomology);
            for (auto i : r.cohomology->indices_of_degree(1)) b.coeffs[i] = Rat(num, 3);
            b.prune();
            CHECK(regularity_identity_residual(tr, b).is_zero());
        }
    }
    SUBCASE("generic corpus elements") {
        for (int i = 0; i < 4; ++i) {
            auto a = testing::corpus_algebra(i, 6);
            auto r = retraction_from_inner_product(a);
            Transfer tr(a, r, 5);
            Element b(r.cohomology);
            int fill = 0;
            for (auto idx : r.cohomology->indices_of_degree(1)) b.coeffs[idx] = Rat(1 + fill++, 2);
            b.prune();
            CHECK(regularity_identity_residual(tr, b).is_zero());
        }
    }
}
