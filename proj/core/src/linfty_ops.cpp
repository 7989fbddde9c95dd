#include <linfty/linfty_ops.hpp>

#include <algorithm>
#include <functional>
#include <set>
#include <cmath>
#include <stdexcept>

namespace linfty {

namespace {

GradedMultilinearMap zero_curvature(SpacePtr sp) {
    return GradedMultilinearMap(sp, sp, 0, 1, false);
}

std::vector<std::vector<std::size_t>> position_subsets(int n, int j) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(j);
    std::function<void(int, int)> rec2 = [&](int pos, int from) {
        if (pos == j) {
            out.push_back(idx);
            return;
        }
        for (int q = from; q < n; ++q) {
            idx[pos] = q;
            rec2(pos + 1, q + 1);
        }
    };
    rec2(0, 0);
    return out;
}

}  // namespace

HomotopyAlgebra ainf_from_dg(const DgAlgebra& alg, int truncation) {
    HomotopyAlgebra a;
    a.flavor = Flavor::Ainfty;
    a.space = alg.space;
    a.truncation = truncation;
    a.ops.push_back(zero_curvature(alg.space));
    a.ops.push_back(alg.m1);
    a.ops.push_back(alg.m2);
    return a;
}

HomotopyAlgebra ainf_from_transfer(const Transfer& tr, int truncation) {
    HomotopyAlgebra a;
    a.flavor = Flavor::Ainfty;
    a.space = tr.retraction().cohomology;
    a.truncation = truncation;
    a.ops.push_back(GradedMultilinearMap(a.space, a.space, 0, 1, false));
    for (int k = 1; k <= tr.k_max(); ++k) a.ops.push_back(tr.m(k));
    a.norm_constant = tr.bound_constant();
    return a;
}

HomotopyMorphism morphism_I(const Transfer& tr, const HomotopyAlgebra& src,
                            const HomotopyAlgebra& tgt) {
    HomotopyMorphism f;
    f.flavor = Flavor::Ainfty;
    f.source = &src;
    f.target = &tgt;
    f.components.push_back(GradedMultilinearMap());
    for (int k = 1; k <= tr.k_max(); ++k) f.components.push_back(tr.I(k));
    f.norm_constant = tr.bound_constant();
    return f;
}

HomotopyMorphism morphism_P(const Transfer& tr, const HomotopyAlgebra& src,
                            const HomotopyAlgebra& tgt) {
    HomotopyMorphism f;
    f.flavor = Flavor::Ainfty;
    f.source = &src;
    f.target = &tgt;
    f.components.push_back(GradedMultilinearMap());
    for (int k = 1; k <= tr.k_max(); ++k) f.components.push_back(tr.P(k));
    f.norm_constant = tr.bound_constant();
    return f;
}

namespace {

GradedMultilinearMap symmetrize_map(const GradedMultilinearMap& m) {
    int k = m.arity();
    GradedMultilinearMap l(m.source(), m.target(), k, m.degree(), true);
    if (k == 0) {
        for (auto& [key, row] : m.entries())
            for (auto& [o, c] : row) l.add({}, o, c);
        return l;
    }
    // l(sorted tuple) = sum over permutations sigma with Koszul sign
    std::set<std::vector<std::size_t>> keys;
    for (auto& [key, row] : m.entries()) {
        auto s = key;
        std::sort(s.begin(), s.end());
        keys.insert(s);
    }
    for (auto& skey : keys) {
        std::vector<int> sdegs(k);
        for (int i = 0; i < k; ++i) sdegs[i] = m.source()->sdeg(skey[i]);
        // the sum runs over all k! permutations, repeated entries included:
        // the stored value must equal the evaluation on the repeated tuple
        std::vector<std::size_t> order(k);
        std::map<std::size_t, Rat> val;
        std::function<void(int, std::vector<bool>&)> rec = [&](int pos, std::vector<bool>& used) {
            if (pos == k) {
                int sign = koszul_sign(order, sdegs);
                if (sign == 0) return;
                std::vector<std::size_t> img(k);
                for (int i = 0; i < k; ++i) img[i] = skey[order[i]];
                for (std::size_t o = 0; o < m.target()->dim(); ++o) {
                    Rat c = m.coeff(img, o);
                    if (!is_zero(c)) val[o] += Rat(sign) * c;
                }
                return;
            }
            for (int i = 0; i < k; ++i) {
                if (used[i]) continue;
                used[i] = true;
                order[pos] = i;
                rec(pos + 1, used);
                used[i] = false;
            }
        };
        std::vector<bool> used(k, false);
        rec(0, used);
        for (auto& [o, c] : val)
            if (!is_zero(c)) l.add(skey, o, c);
    }
    return l;
}

}  // namespace

HomotopyAlgebra symmetrize(const HomotopyAlgebra& a) {
    if (a.flavor != Flavor::Ainfty) throw std::invalid_argument("symmetrize expects the associative flavor");
    HomotopyAlgebra l;
    l.flavor = Flavor::Linfty;
    l.space = a.space;
    l.truncation = a.truncation;
    for (int k = 0; k <= a.k_max(); ++k) l.ops.push_back(symmetrize_map(a.op(k)));
    if (a.norm_constant) l.norm_constant = a.norm_constant;  // |l_k| <= k! |m_k|
    return l;
}

HomotopyMorphism symmetrize(const HomotopyMorphism& f, const HomotopyAlgebra& src,
                            const HomotopyAlgebra& tgt) {
    if (f.flavor != Flavor::Ainfty) throw std::invalid_argument("symmetrize expects the associative flavor");
    HomotopyMorphism g;
    g.flavor = Flavor::Linfty;
    g.source = &src;
    g.target = &tgt;
    g.components.push_back(GradedMultilinearMap());
    for (int k = 1; k <= f.k_max(); ++k) g.components.push_back(symmetrize_map(f.f(k)));
    g.norm_constant = f.norm_constant;
    return g;
}

HomotopyAlgebra split_abelian_summand(const HomotopyAlgebra& a,
                                      const std::vector<std::size_t>& summand_basis) {
    if (a.flavor != Flavor::Linfty) throw std::invalid_argument("split expects the symmetric flavor");
    std::vector<bool> keep(a.space->dim(), false);
    for (auto i : summand_basis) keep.at(i) = true;
    // the complement C must be an abelian dg-Lie factor: l_1 preserves the
    // splitting, l_2(C, -) = 0
    for (auto& [key, row] : a.op(1).entries())
        for (auto& [o, c] : row)
            if (keep[key[0]] != keep[o])
                throw std::invalid_argument("splitting not respected by the differential");
    for (auto& [key, row] : a.op(2).entries()) {
        bool has_c = !keep[key[0]] || !keep[key[1]];
        if (has_c && !row.empty())
            throw std::invalid_argument("complement is not an abelian dg-Lie factor");
    }
    // restrict: verify closure and the vanishing of complement insertions
    std::vector<BasisElement> basis;
    std::map<std::size_t, std::size_t> old_to_new;
    for (std::size_t i = 0; i < a.space->dim(); ++i)
        if (keep[i]) {
            old_to_new[i] = basis.size();
            basis.push_back(a.space->at(i));
        }
    SpacePtr sub = make_space(basis);
    HomotopyAlgebra out;
    out.flavor = Flavor::Linfty;
    out.space = sub;
    out.truncation = a.truncation;
    for (int k = 0; k <= a.k_max(); ++k) {
        GradedMultilinearMap m(sub, sub, k, 1, true);
        for (auto& [key, row] : a.op(k).entries()) {
            bool inside = true;
            for (auto i : key)
                if (!keep[i]) inside = false;
            if (!inside) continue;
            for (auto& [o, c] : row) {
                if (!keep[o])
                    throw std::invalid_argument("summand not closed under the brackets");
                std::vector<std::size_t> nk;
                for (auto i : key) nk.push_back(old_to_new[i]);
                m.add(nk, old_to_new[o], c);
            }
        }
        out.ops.push_back(std::move(m));
    }
    out.norm_constant = a.norm_constant;
    return out;
}

Element kuranishi_element(const HomotopyAlgebra& a, const Element& b) {
    if (b.degree() && *b.degree() != 1)
        throw std::invalid_argument("kuranishi expects a degree-1 element");
    Element acc(a.space);
    for (int k = 0; k <= a.k_max(); ++k) {
        std::vector<std::map<std::size_t, Rat>> args(k, b.coeffs);
        auto v = a.op(k).apply(args);
        Rat scale = a.flavor == Flavor::Linfty ? Rat(1) / factorial(k) : Rat(1);
        for (auto& [o, c] : v) acc.coeffs[o] += scale * c;
    }
    acc.prune();
    return acc;
}

MCElement make_mc(const HomotopyAlgebra& a, const Element& b) {
    return MCElement{b, kuranishi_element(a, b)};
}

namespace {

// partial evaluation l(b^j, -) of a symmetric map at the even element b,
// computed tuple by tuple (entry bookkeeping on repeated keys is subtle)
GradedMultilinearMap sym_insert(const GradedMultilinearMap& l, const Element& b, int j) {
    int k = l.arity() - j;
    GradedMultilinearMap out(l.source(), l.target(), k, l.degree(), k > 0);
    std::vector<std::size_t> tup(k);
    std::function<void(int, std::size_t)> rec = [&](int pos, std::size_t from) {
        if (pos == k) {
            std::vector<std::map<std::size_t, Rat>> args(j, b.coeffs);
            for (int q = 0; q < k; ++q) args.push_back({{tup[q], Rat(1)}});
            for (auto& [o, c] : l.apply(args)) out.add(tup, o, c);
            return;
        }
        for (std::size_t i = from; i < l.source()->dim(); ++i) {
            tup[pos] = i;
            rec(pos + 1, i);
        }
    };
    rec(0, 0);
    return out;
}

// associative flavor: absorb any subset of slots into b, order preserved
GradedMultilinearMap plain_insert(const GradedMultilinearMap& m, const Element& b, int j) {
    int k = m.arity() - j;
    GradedMultilinearMap out(m.source(), m.target(), k, m.degree(), false);
    for (auto& [key, row] : m.entries()) {
        for (auto& sel : position_subsets(m.arity(), j)) {
            Rat factor(1);
            bool dead = false;
            for (auto p : sel) {
                Rat c = b.coeff(key[p]);
                if (is_zero(c)) { dead = true; break; }
                factor *= c;
            }
            if (dead) continue;
            std::vector<std::size_t> rest;
            std::size_t si = 0;
            for (std::size_t q = 0; q < key.size(); ++q) {
                if (si < sel.size() && sel[si] == q) { ++si; continue; }
                rest.push_back(key[q]);
            }
            for (auto& [o, c] : row) out.add(rest, o, factor * c);
        }
    }
    return out;
}

}  // namespace

HomotopyAlgebra perturb_algebra(const HomotopyAlgebra& a, const Element& b) {
    if (!b.is_zero() && b.degree() && *b.degree() != 1)
        throw std::invalid_argument("perturbation element must be of degree 1");
    HomotopyAlgebra out;
    out.flavor = a.flavor;
    out.space = a.space;
    out.truncation = a.truncation;
    for (int k = 0; k <= a.k_max(); ++k) {
        bool sym = a.flavor == Flavor::Linfty && k > 0;
        GradedMultilinearMap acc(a.space, a.space, k, 1, sym);
        for (int j = 0; k + j <= a.k_max(); ++j) {
            auto ins = a.flavor == Flavor::Linfty ? sym_insert(a.op(k + j), b, j)
                                                  : plain_insert(a.op(k + j), b, j);
            if (a.flavor == Flavor::Linfty) ins *= Rat(1) / factorial(j);
            acc += ins;
        }
        out.ops.push_back(std::move(acc));
    }
    if (a.norm_constant) {
        Rat c = *a.norm_constant;
        if (!is_zero(c) && b.norm() < Rat(1) / (Rat(4) * c)) out.norm_constant = Rat(4) * c;
    }
    return out;
}

HomotopyMorphism perturb_morphism(const HomotopyMorphism& f, const Element& b,
                                  const HomotopyAlgebra& src_pert,
                                  const HomotopyAlgebra& tgt_pert) {
    HomotopyMorphism out;
    out.flavor = f.flavor;
    out.source = &src_pert;
    out.target = &tgt_pert;
    out.components.push_back(GradedMultilinearMap());
    for (int k = 1; k <= f.k_max(); ++k) {
        GradedMultilinearMap acc(f.f(k).source(), f.f(k).target(), k, 0,
                                 f.flavor == Flavor::Linfty);
        for (int j = 0; k + j <= f.k_max(); ++j) {
            auto ins = f.flavor == Flavor::Linfty ? sym_insert(f.f(k + j), b, j)
                                                  : plain_insert(f.f(k + j), b, j);
            if (f.flavor == Flavor::Linfty) ins *= Rat(1) / factorial(j);
            acc += ins;
        }
        out.components.push_back(std::move(acc));
    }
    if (f.norm_constant) {
        Rat c = *f.norm_constant;
        if (!is_zero(c) && b.norm() < Rat(1) / (Rat(4) * c)) out.norm_constant = Rat(4) * c;
    }
    return out;
}

HomotopyMorphism compose_morphisms(const HomotopyMorphism& g, const HomotopyMorphism& f) {
    if (g.flavor != f.flavor) throw std::invalid_argument("compose_morphisms: flavor mismatch");
    HomotopyMorphism out;
    out.flavor = f.flavor;
    out.source = f.source;
    out.target = g.target;
    out.components.push_back(GradedMultilinearMap());
    int kmax = std::min(f.k_max(), g.k_max());
    SpacePtr src = f.f(1).source(), tgt = g.f(1).target();
    for (int n = 1; n <= kmax; ++n) {
        if (f.flavor == Flavor::Ainfty) {
            GradedMultilinearMap acc(src, tgt, n, 0, false);
            std::vector<std::vector<int>> comps;
            std::vector<int> cur;
            std::function<void(int, int)> rec = [&](int left, int parts) {
                if (parts == 1) {
                    cur.push_back(left);
                    comps.push_back(cur);
                    cur.pop_back();
                    return;
                }
                for (int fst = 1; fst + parts - 1 <= left; ++fst) {
                    cur.push_back(fst);
                    rec(left - fst, parts - 1);
                    cur.pop_back();
                }
            };
            for (int j = 1; j <= n; ++j) {
                comps.clear();
                rec(n, j);
                if (j > g.k_max()) continue;
                for (auto& comp : comps) {
                    std::vector<GradedMultilinearMap> blocks;
                    bool ok = true;
                    for (int u : comp) {
                        if (u > f.k_max()) { ok = false; break; }
                        blocks.push_back(f.f(u));
                    }
                    if (ok) acc += tensor_compose(g.f(j), blocks);
                }
            }
            out.components.push_back(std::move(acc));
        } else {
            // symmetric flavor: partitions of [n] with blocks in min-order
            GradedMultilinearMap acc(src, tgt, n, 0, true);
            std::vector<std::vector<std::size_t>> tuples;
            {
                std::vector<std::size_t> curt;
                std::function<void(std::size_t)> rec = [&](std::size_t from) {
                    if ((int)curt.size() == n) {
                        tuples.push_back(curt);
                        return;
                    }
                    for (std::size_t i = from; i < src->dim(); ++i) {
                        curt.push_back(i);
                        rec(i);
                        curt.pop_back();
                    }
                };
                rec(0);
            }
            for (auto& tup : tuples) {
                std::vector<int> sdegs(n);
                for (int i = 0; i < n; ++i) sdegs[i] = src->sdeg(tup[i]);
                Element total(tgt);
                std::vector<std::vector<int>> blocks;
                std::function<void(int)> part = [&](int q) {
                    if (q == n) {
                        if ((int)blocks.size() > g.k_max()) return;
                        std::vector<std::size_t> perm;
                        for (auto& bl : blocks)
                            for (int x : bl) perm.push_back((std::size_t)x);
                        int sign = koszul_sign(perm, sdegs);
                        if (sign == 0) return;
                        std::vector<std::map<std::size_t, Rat>> vals;
                        for (auto& bl : blocks) {
                            if ((int)bl.size() > f.k_max()) return;
                            std::vector<std::map<std::size_t, Rat>> args;
                            for (int x : bl) args.push_back({{tup[x], Rat(1)}});
                            vals.push_back(f.f((int)bl.size()).apply(args));
                        }
                        auto w = g.f((int)blocks.size()).apply(vals);
                        for (auto& [o, c] : w) total.coeffs[o] += Rat(sign) * c;
                        return;
                    }
                    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                        blocks[bi].push_back(q);
                        part(q + 1);
                        blocks[bi].pop_back();
                    }
                    blocks.push_back({q});
                    part(q + 1);
                    blocks.pop_back();
                };
                part(0);
                total.prune();
                for (auto& [o, c] : total.coeffs) acc.add(tup, o, c);
            }
            out.components.push_back(std::move(acc));
        }
    }
    if (f.norm_constant && g.norm_constant) {
        // composition estimate: C(1+C) with C the larger constant
        Rat c = *f.norm_constant > *g.norm_constant ? *f.norm_constant : *g.norm_constant;
        out.norm_constant = c * (Rat(1) + c);
    }
    return out;
}

HomotopyMorphism identity_morphism(const HomotopyAlgebra& a, int k_max) {
    HomotopyMorphism f;
    f.flavor = a.flavor;
    f.source = &a;
    f.target = &a;
    f.components.push_back(GradedMultilinearMap());
    f.components.push_back(GradedMultilinearMap::identity(a.space));
    for (int k = 2; k <= k_max; ++k)
        f.components.push_back(
            GradedMultilinearMap(a.space, a.space, k, 0, a.flavor == Flavor::Linfty));
    f.norm_constant = Rat(1);
    return f;
}

Element pushforward(const HomotopyMorphism& f, const Element& b) {
    Element acc(f.f(1).target());
    for (int k = 1; k <= f.k_max(); ++k) {
        std::vector<std::map<std::size_t, Rat>> args(k, b.coeffs);
        auto v = f.f(k).apply(args);
        Rat scale = f.flavor == Flavor::Linfty ? Rat(1) / factorial(k) : Rat(1);
        for (auto& [o, c] : v) acc.coeffs[o] += scale * c;
    }
    acc.prune();
    return acc;
}

MCElement mc_pushforward(const HomotopyMorphism& f, const MCElement& b) {
    if (!b.is_mc()) throw std::invalid_argument("pushforward requires a Maurer-Cartan element");
    Element fb = pushforward(f, b.value);
    return make_mc(*f.target, fb);
}

GaugeFlowResult gauge_flow(const DgAlgebra& alg,
                           const std::function<std::map<std::size_t, double>(double)>& C,
                           int steps) {
    if (!alg.unit) throw std::invalid_argument("gauge flow needs a unital algebra");
    FloatMultiMap m2f(alg.space, alg.space, 2, 1);
    for (auto& [key, row] : alg.m2.entries())
        for (auto& [o, c] : row) m2f.add(key, o, to_double(c));
    // in the shifted convention the product of two degree-0 elements is
    // recovered without signs
    auto mul = [&](const std::map<std::size_t, double>& x, const std::map<std::size_t, double>& y) {
        return m2f.apply({x, y});
    };
    auto run = [&](int n) {
        std::map<std::size_t, double> g{{*alg.unit, 1.0}};
        double dt = 1.0 / n;
        for (int i = 0; i < n; ++i) {
            double t = i * dt;
            auto add = [](std::map<std::size_t, double> a, const std::map<std::size_t, double>& b,
                          double s) {
                for (auto& [k, v] : b) a[k] += s * v;
                return a;
            };
            auto k1 = mul(g, C(t));
            auto k2 = mul(add(g, k1, dt / 2), C(t + dt / 2));
            auto k3 = mul(add(g, k2, dt / 2), C(t + dt / 2));
            auto k4 = mul(add(g, k3, dt), C(t + dt));
            for (auto& [k, v] : k1) g[k] += dt / 6 * v;
            for (auto& [k, v] : k2) g[k] += dt / 3 * v;
            for (auto& [k, v] : k3) g[k] += dt / 3 * v;
            for (auto& [k, v] : k4) g[k] += dt / 6 * v;
        }
        return g;
    };
    auto g1 = run(steps);
    auto g2 = run(2 * steps);
    double err = 0;
    for (auto& [k, v] : g2) {
        double d = std::fabs(v - (g1.count(k) ? g1[k] : 0.0));
        if (d > err) err = d;
    }
    if (!(err < 1e-3)) throw std::runtime_error("gauge flow failed to converge under step halving");
    return GaugeFlowResult{std::move(g2), err, 2 * steps};
}

Element regularity_identity_residual(const Transfer& tr, const Element& b) {
    // the two sides agree as formal series in b; compare the graded pieces
    // of b-order n <= k_max, the orders the truncated transfer determines
    const auto& alg = tr.algebra();
    const int kmax = tr.k_max();
    auto Ib = [&](int k) {  // I_k(b^k)
        std::vector<std::map<std::size_t, Rat>> args(k, b.coeffs);
        Element e(alg.space);
        e.coeffs = tr.I(k).apply(args);
        return e;
    };
    auto kappa_order = [&](int o) {  // m_o(b^o)
        std::vector<std::map<std::size_t, Rat>> args(o, b.coeffs);
        Element e(tr.retraction().cohomology);
        e.coeffs = tr.m(o).apply(args);
        return e;
    };
    Element res(alg.space);
    for (int n = 1; n <= kmax; ++n) {
        Element lhs = alg.m1.apply_elements({Ib(n)});
        for (int k1 = 1; k1 < n; ++k1) lhs += alg.m2.apply_elements({Ib(k1), Ib(n - k1)});
        Element rhs(alg.space);
        for (int j = 1; j <= std::min(n, kmax); ++j) {
            int o = n - j + 1;  // order carried by the curvature slot
            if (o < 1 || o > kmax) continue;
            Element ko = kappa_order(o);
            for (int pos = 0; pos < j; ++pos) {
                std::vector<std::map<std::size_t, Rat>> args;
                for (int q = 0; q < j; ++q) args.push_back(q == pos ? ko.coeffs : b.coeffs);
                for (auto& [out, c] : tr.I(j).apply(args)) rhs.coeffs[out] += c;
            }
        }
        rhs.prune();
        res += lhs - rhs;
    }
    return res;
}

}  // namespace linfty
