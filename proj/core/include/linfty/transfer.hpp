#pragma once

#include <linfty/hodge.hpp>
#include <linfty/trees.hpp>

#include <functional>

namespace linfty {

/// Shifted-degree contribution of a decorated tree: +1 per vertex, -1 per
/// 'h' or 'u' edge.
int deco_tree_degree(const DecoTreePtr& t);

/// A decorated tree with its signed multiplicity in a tree-sum formula.
struct TreeTerm {
    DecoTreePtr tree;
    Rat coeff;
};

/// Decorated trees of the projection-side transfer formula at arity k,
/// produced by unwinding the perturbed projection of the length-filtered
/// tensor coalgebra: alternate rounds of (homotopy insertion, product
/// contraction) on k slots. Root color 'p'. Deduplicated, deterministic.
const std::vector<TreeTerm>& q_terms(int k);

/// Two-level trees of the one-parameter interpolation family: projection
/// blocks grafted under an inclusion-side top tree. 'b' edges carry the
/// interpolation kernel, 'h' edges the interpolation homotopy.
const std::vector<TreeTerm>& w_terms(int k);

/// w_terms with one 'b' edge switched to the 'u' (flow) color per variant.
const std::vector<TreeTerm>& v_terms(int k);

/// Operadic evaluation of a decorated tree: binary vertices carry `vertex`,
/// a leaf is fed through `leaf_base` (pass nullptr for the identity), and
/// each colored edge applies ops(color) on top (nullptr = identity).
template <class K>
MultiMapT<K> eval_deco_tree(const DecoTreePtr& t, const MultiMapT<K>& vertex,
                            const std::function<const MultiMapT<K>*(char)>& ops,
                            const MultiMapT<K>* leaf_base) {
    MultiMapT<K> sub = [&] {
        if (t->is_leaf()) {
            if (leaf_base) return *leaf_base;
            return MultiMapT<K>::identity(vertex.source());
        }
        auto l = eval_deco_tree(t->left, vertex, ops, leaf_base);
        auto r = eval_deco_tree(t->right, vertex, ops, leaf_base);
        return tensor_compose(vertex, {l, r});
    }();
    const MultiMapT<K>* op = ops(t->color);
    return op ? compose(*op, sub, 1) : sub;
}

/// Plain transfer tree (inclusion on leaves, homotopy on internal edges,
/// `root` on the root edge), for the oracle route.
GradedMultilinearMap eval_plain_tree(const TreePtr& t, const GradedMultilinearMap& vertex,
                                     const GradedMultilinearMap& leaf,
                                     const GradedMultilinearMap& internal,
                                     const GradedMultilinearMap& root);

struct NormLedger {
    std::vector<Rat> per_k;     // 1-based at [k]
    Rat bound;                  // the constructive constant (4 D^2)
    bool within_bound = false;  // per_k[k] <= bound^k for all k
    double smallest_c = 0.0;    // max_k per_k[k]^{1/k}, report only
};

NormLedger make_ledger(const std::vector<GradedMultilinearMap>& family_1based, const Rat& bound);

/// Homotopy transfer of a dg algebra along a retraction: the transferred
/// structure {m_k} on H, the inclusion-side morphism {I_k} and the
/// projection-side morphism {P_k}, all exact.
class Transfer {
public:
    Transfer(const DgAlgebra& alg, const RetractionData& r, int k_max);

    int k_max() const { return k_max_; }
    const DgAlgebra& algebra() const { return alg_; }
    const RetractionData& retraction() const { return r_; }

    const GradedMultilinearMap& m(int k) const { return m_.at(k); }
    const GradedMultilinearMap& I(int k) const { return I_.at(k); }
    const GradedMultilinearMap& P(int k) const { return P_.at(k); }
    std::vector<GradedMultilinearMap> m_family() const { return family(m_); }
    std::vector<GradedMultilinearMap> I_family() const { return family(I_); }
    std::vector<GradedMultilinearMap> P_family() const { return family(P_); }

    /// Arity-k component of the composite I o P (endpoint of the homotopy).
    GradedMultilinearMap IP(int k) const;

    /// Tree-sum route for the transferred structure, the cross-check of the
    /// recursive route.
    GradedMultilinearMap m_tree_sum(int k) const;
    GradedMultilinearMap I_tree_sum(int k) const;

    /// D = max(|m2|, |h|, 1); the tree-count argument bounds every family
    /// by (4 D^2)^k.
    Rat bound_constant() const;
    NormLedger ledger_m() const { return make_ledger(m_family(), bound_constant()); }
    NormLedger ledger_I() const { return make_ledger(I_family(), bound_constant()); }
    NormLedger ledger_P() const { return make_ledger(P_family(), bound_constant()); }

private:
    std::vector<GradedMultilinearMap> family(const std::vector<GradedMultilinearMap>& v) const {
        return {v.begin() + 1, v.end()};
    }
    DgAlgebra alg_;
    RetractionData r_;
    int k_max_;
    std::vector<GradedMultilinearMap> m_, I_, P_, M_;  // 1-based; M_ = pre-projection sums
};

/// Differential on Hom-complexes: d(f) = m1_tgt o f - (-1)^{deg f} sum_slots
/// f o_slot m1_src.
template <class K>
MultiMapT<K> hom_differential(const MultiMapT<K>& f, const MultiMapT<K>& m1_src,
                              const MultiMapT<K>& m1_tgt) {
    auto d = compose(m1_tgt, f, 1);
    auto ins = compose_all_slots(f, m1_src);
    if (f.degree() & 1) d += ins; else d -= ins;
    return d;
}

/// Defect of the arity-n component equation of a (possibly only candidate)
/// morphism family F between two dg algebras; zero iff the equation holds.
template <class K>
MultiMapT<K> morphism_defect(const std::vector<MultiMapT<K>>& F_1based, const MultiMapT<K>& m1_src,
                             const MultiMapT<K>& m2_src, const MultiMapT<K>& m1_tgt,
                             const MultiMapT<K>& m2_tgt, int n) {
    // sum_{slots} F_n o m1 + F_{n-1} o m2  =  m1 o F_n + sum m2 o (F_a (x) F_b)
    MultiMapT<K> lhs = compose_all_slots(F_1based.at(n), m1_src);
    if (n >= 2) lhs += compose_all_slots(F_1based.at(n - 1), m2_src);
    MultiMapT<K> rhs = compose(m1_tgt, F_1based.at(n), 1);
    for (int a = 1; a < n; ++a)
        rhs += tensor_compose(m2_tgt, {F_1based.at(a), F_1based.at(n - a)});
    return lhs - rhs;
}

/// Heat-flow interpolation between the identity and I o P: the float
/// backend evaluating the two-level tree sums at sampled times.
class HomotopyFamily {
public:
    HomotopyFamily(const Transfer& tr, const HeatFamily& heat, int k_max);

    FloatMultiMap R(int k, double t) const;
    FloatMultiMap S(int k, double t) const;
    FloatMultiMap R_inf(int k) const;

    /// Morphism defect of the fixed-time family R(t), arity n (norm).
    double morphism_residual(double t, int n) const;
    /// Defect of the flow equation coupling S and dR/dt, arity n; the
    /// derivative is a central finite difference with step dt.
    double flow_residual(double t, int n, double dt = 1e-5) const;

    /// Reparametrization t = tan(pi u / 2): form components of the pulled
    /// back homotopy on [0, 1]; u = 1 handled symbolically.
    FloatMultiMap H_position(int k, double u) const;  // the R part
    FloatMultiMap H_velocity(int k, double u) const;  // the S du part

    int k_max() const { return k_max_; }

private:
    const HeatFamily* heat_;
    int k_max_;
    FloatMultiMap m1f_, m2f_;
    std::vector<FloatMultiMap> ip_family_;  // I o P components, float casts
    FloatMultiMap eval_family(const std::vector<TreeTerm>& terms, double t, bool blue) const;
};

}  // namespace linfty
