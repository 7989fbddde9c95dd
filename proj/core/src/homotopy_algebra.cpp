#include <linfty/homotopy_algebra.hpp>
#include <linfty/rational_linalg.hpp>

#include <functional>
#include <stdexcept>

namespace linfty {

namespace {

// all sorted index tuples of length n over the space basis
void sorted_tuples_rec(const SpacePtr& sp, int n, std::size_t from, std::vector<std::size_t>& cur,
                       std::vector<std::vector<std::size_t>>& out) {
    if ((int)cur.size() == n) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = from; i < sp->dim(); ++i) {
        cur.push_back(i);
        sorted_tuples_rec(sp, n, i, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<std::size_t>> sorted_tuples(const SpacePtr& sp, int n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    sorted_tuples_rec(sp, n, 0, cur, out);
    return out;
}

// Koszul sign of pulling the subset S (ascending positions) to the front
int unshuffle_sign(const std::vector<std::size_t>& positions, const std::vector<int>& sdegs,
                   const std::vector<bool>& in_s) {
    std::vector<std::size_t> perm;
    for (std::size_t p = 0; p < positions.size(); ++p)
        if (in_s[p]) perm.push_back(p);
    for (std::size_t p = 0; p < positions.size(); ++p)
        if (!in_s[p]) perm.push_back(p);
    return koszul_sign(perm, sdegs);
}

}  // namespace

Element HomotopyAlgebra::curvature() const {
    Element e(space);
    if (!ops.empty() && ops[0].arity() == 0)
        for (auto& [key, row] : ops[0].entries())
            for (auto& [o, c] : row) e.coeffs[o] = c;
    e.prune();
    return e;
}

GradedMultilinearMap HomotopyAlgebra::relation_defect(int n) const {
    if (flavor == Flavor::Ainfty) {
        GradedMultilinearMap acc(space, space, n, 2, false);
        for (int s = 0; s <= n; ++s) {
            if (s > k_max()) continue;
            int rest = n - s;
            int outer = rest + 1;
            if (outer > k_max()) continue;
            for (int r = 0; r <= rest; ++r) acc += compose(op(outer), op(s), r + 1);
        }
        return acc;
    }
    // symmetric flavor: evaluate on sorted basis tuples
    GradedMultilinearMap acc(space, space, n, 2, true);
    for (auto& tup : sorted_tuples(space, n)) {
        std::vector<int> sdegs(n);
        for (int i = 0; i < n; ++i) sdegs[i] = space->sdeg(tup[i]);
        Element total(space);
        for (int i = 0; i <= n; ++i) {
            if (i > k_max() || n - i + 1 > k_max()) continue;
            // subsets of positions of size i
            std::vector<bool> in_s(n, false);
            std::vector<int> sel(i);
            std::function<void(int, int)> rec = [&](int pos, int from) {
                if (pos == i) {
                    std::vector<std::size_t> pos_list(n);
                    for (int q = 0; q < n; ++q) pos_list[q] = q;
                    int sign = unshuffle_sign(pos_list, sdegs, in_s);
                    if (sign == 0) return;
                    std::vector<std::map<std::size_t, Rat>> inner_args;
                    for (int q = 0; q < n; ++q)
                        if (in_s[q]) inner_args.push_back({{tup[q], Rat(1)}});
                    auto v = op(i).apply(inner_args);
                    if (v.empty()) return;
                    std::vector<std::map<std::size_t, Rat>> outer_args{v};
                    for (int q = 0; q < n; ++q)
                        if (!in_s[q]) outer_args.push_back({{tup[q], Rat(1)}});
                    auto w = op(n - i + 1).apply(outer_args);
                    for (auto& [o, c] : w) total.coeffs[o] += Rat(sign) * c;
                    return;
                }
                for (int q = from; q < n; ++q) {
                    in_s[q] = true;
                    rec(pos + 1, q + 1);
                    in_s[q] = false;
                }
            };
            rec(0, 0);
        }
        total.prune();
        for (auto& [o, c] : total.coeffs) acc.add(tup, o, c);
    }
    return acc;
}

void HomotopyAlgebra::validate(int n_max) const {
    for (int n = 0; n <= std::min(n_max, truncation); ++n) {
        if (n > 0 && n > k_max() + 1) break;
        if (!relation_defect(n).is_zero())
            throw std::invalid_argument("structure relation fails at arity " + std::to_string(n));
    }
}

bool HomotopyAlgebra::normed_flag() const {
    if (!norm_constant) return false;
    for (int k = 1; k <= k_max(); ++k)
        if (op(k).norm() > factorial(k) * rat_pow(*norm_constant, k)) return false;
    return true;
}

GradedMultilinearMap HomotopyMorphism::equation_defect(int n) const {
    const auto& A = *source;
    const auto& B = *target;
    if (flavor == Flavor::Ainfty) {
        GradedMultilinearMap lhs(A.space, B.space, n, 1, false);
        for (int s = 0; s <= n; ++s) {
            if (s > A.k_max()) continue;
            int outer = n - s + 1;
            if (outer < 1 || outer > k_max()) continue;
            for (int r = 0; r <= n - s; ++r) lhs += compose(f(outer), A.op(s), r + 1);
        }
        GradedMultilinearMap rhs(A.space, B.space, n, 1, false);
        for (int j = 1; j <= n && j <= B.k_max(); ++j) {
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
            rec(n, j);
            for (auto& comp : comps) {
                std::vector<GradedMultilinearMap> blocks;
                bool ok = true;
                for (int u : comp) {
                    if (u > k_max()) { ok = false; break; }
                    blocks.push_back(f(u));
                }
                if (ok) rhs += tensor_compose(B.op(j), blocks);
            }
        }
        if (n == 0 && B.k_max() >= 0) {
            GradedMultilinearMap curv(A.space, B.space, 0, 1, false);
            for (auto& [key, row] : B.op(0).entries())
                for (auto& [o, c] : row) curv.add({}, o, c);
            rhs += curv;
        }
        return lhs - rhs;
    }
    // symmetric flavor evaluated on sorted basis tuples
    GradedMultilinearMap acc(A.space, B.space, n, 1, true);
    auto tuples = sorted_tuples(A.space, n);
    for (auto& tup : tuples) {
        std::vector<int> sdegs(n);
        for (int i = 0; i < n; ++i) sdegs[i] = A.space->sdeg(tup[i]);
        Element total(B.space);
        // source side
        for (int i = 0; i <= n; ++i) {
            if (i > A.k_max() || n - i + 1 > k_max()) continue;
            std::vector<bool> in_s(n, false);
            std::function<void(int, int)> rec = [&](int pos, int from) {
                if (pos == i) {
                    std::vector<std::size_t> pos_list(n);
                    for (int q = 0; q < n; ++q) pos_list[q] = q;
                    int sign = unshuffle_sign(pos_list, sdegs, in_s);
                    if (sign == 0) return;
                    std::vector<std::map<std::size_t, Rat>> inner_args;
                    for (int q = 0; q < n; ++q)
                        if (in_s[q]) inner_args.push_back({{tup[q], Rat(1)}});
                    auto v = A.op(i).apply(inner_args);
                    if (v.empty()) return;
                    std::vector<std::map<std::size_t, Rat>> outer_args{v};
                    for (int q = 0; q < n; ++q)
                        if (!in_s[q]) outer_args.push_back({{tup[q], Rat(1)}});
                    auto w = f(n - i + 1).apply(outer_args);
                    for (auto& [o, c] : w) total.coeffs[o] += Rat(sign) * c;
                    return;
                }
                for (int q = from; q < n; ++q) {
                    in_s[q] = true;
                    rec(pos + 1, q + 1);
                    in_s[q] = false;
                }
            };
            rec(0, 0);
        }
        // target side: partitions into j blocks, blocks ordered by minimum
        std::function<void(std::vector<std::vector<int>>&, int)> dummy;
        std::vector<std::vector<std::vector<int>>> parts_by_j(n + 1);
        {
            std::vector<std::vector<int>> blocks;
            std::function<void(int)> rec = [&](int q) {
                if (q == n) {
                    parts_by_j[blocks.size()].push_back([&] {
                        std::vector<int> flat;
                        for (auto& b : blocks) {
                            flat.push_back((int)b.size());
                            for (int x : b) flat.push_back(x);
                        }
                        return flat;
                    }());
                    return;
                }
                for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                    blocks[bi].push_back(q);
                    rec(q + 1);
                    blocks[bi].pop_back();
                }
                blocks.push_back({q});
                rec(q + 1);
                blocks.pop_back();
            };
            rec(0);
        }
        for (int j = 1; j <= n; ++j) {
            if (j > B.k_max()) continue;
            for (auto& flat : parts_by_j[j]) {
                // decode blocks, compute unshuffle sign for block order
                std::vector<std::vector<int>> blocks;
                for (std::size_t q = 0; q < flat.size();) {
                    int len = flat[q++];
                    blocks.push_back({flat.begin() + q, flat.begin() + q + len});
                    q += len;
                }
                std::vector<std::size_t> perm;
                for (auto& b : blocks)
                    for (int x : b) perm.push_back((std::size_t)x);
                int sign = koszul_sign(perm, sdegs);
                if (sign == 0) continue;
                bool ok = true;
                std::vector<std::map<std::size_t, Rat>> vals;
                for (auto& b : blocks) {
                    if ((int)b.size() > k_max()) { ok = false; break; }
                    std::vector<std::map<std::size_t, Rat>> args;
                    for (int x : b) args.push_back({{tup[x], Rat(1)}});
                    vals.push_back(f((int)b.size()).apply(args));
                }
                if (!ok) continue;
                auto w = B.op(j).apply(vals);
                for (auto& [o, c] : w) total.coeffs[o] -= Rat(sign) * c;
            }
        }
        // curvature exchange at arity 0 handled separately below
        total.prune();
        for (auto& [o, c] : total.coeffs) acc.add(tup, o, c);
    }
    if (n == 0) {
        // f_1(l_0^A) = l_0^B
        Element lhs = f(1).apply_elements({source->curvature()});
        Element rhs = target->curvature();
        Element d = lhs - rhs;
        for (auto& [o, c] : d.coeffs) acc.add({}, o, c);
    }
    return acc;
}

void HomotopyMorphism::validate(int n_max) const {
    int lo = (source->curved() || target->curved()) ? 0 : 1;
    for (int n = lo; n <= n_max; ++n)
        if (!equation_defect(n).is_zero())
            throw std::invalid_argument("morphism equation fails at arity " + std::to_string(n));
}

bool HomotopyMorphism::bounded_flag() const {
    if (!norm_constant) return false;
    for (int k = 1; k <= k_max(); ++k)
        if (f(k).norm() > factorial(k) * rat_pow(*norm_constant, k)) return false;
    return true;
}

Rat CyclicPairing::pair(std::size_t i, std::size_t j) const {
    auto it = gram.find({i, j});
    return it == gram.end() ? Rat(0) : it->second;
}

Rat CyclicPairing::pair(const Element& a, const Element& b) const {
    Rat acc(0);
    for (auto& [i, ca] : a.coeffs)
        for (auto& [j, cb] : b.coeffs) acc += ca * cb * pair(i, j);
    return acc;
}

bool CyclicPairing::graded_symmetric() const {
    for (auto& [key, v] : gram) {
        auto [i, j] = key;
        int sign = ((space->degree(i) & 1) && (space->degree(j) & 1)) ? -1 : 1;
        auto it = gram.find({j, i});
        Rat other = it == gram.end() ? Rat(0) : it->second;
        if (other != Rat(sign) * v) return false;
    }
    return true;
}

bool CyclicPairing::nondegenerate_between(int d1, int d2) const {
    auto a = space->indices_of_degree(d1);
    auto b = space->indices_of_degree(d2);
    if (a.size() != b.size()) return false;
    RatMatrix m(a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < b.size(); ++c) m.at(r, c) = pair(a[r], b[c]);
    return m.rank() == a.size();
}

Rat classical_coeff(const HomotopyAlgebra& alg, int k, const std::vector<std::size_t>& in,
                    std::size_t out) {
    int e = 0;
    for (int i = 0; i < k; ++i) e += (k - 1 - i) * alg.space->degree(in[i]);
    Rat c = alg.op(k).coeff(in, out);
    return (e & 1) ? Rat(-1) * c : c;
}

bool CyclicPairing::cyclic_for(const HomotopyAlgebra& alg, int kmax) const {
    // <m_k(a_0..a_{k-1}), a_k> = (-1)^{k + |a_0| sum |a_l|} <m_k(a_1..a_k), a_0>
    auto pair_value = [&](int k, const std::vector<std::size_t>& args) {
        // classical m_k on args[0..k-1], paired with args[k]
        Rat acc(0);
        std::vector<std::size_t> in(args.begin(), args.end() - 1);
        for (std::size_t o = 0; o < space->dim(); ++o) {
            Rat c = classical_coeff(alg, k, in, o);
            if (!is_zero(c)) acc += c * pair(o, args.back());
        }
        return acc;
    };
    for (int k = 2; k <= std::min(kmax, alg.k_max()); ++k) {
        std::vector<std::size_t> tup(k + 1, 0);
        std::function<bool(int)> rec = [&](int pos) -> bool {
            if (pos == k + 1) {
                Rat lhs = pair_value(k, tup);
                std::vector<std::size_t> rot(tup.begin() + 1, tup.end());
                rot.push_back(tup[0]);
                int e = k;
                for (int l = 1; l <= k; ++l) e += space->degree(tup[0]) * space->degree(tup[l]);
                Rat rhs = pair_value(k, rot);
                if (e & 1) rhs = -rhs;
                return lhs == rhs;
            }
            for (std::size_t i = 0; i < space->dim(); ++i) {
                tup[pos] = i;
                if (!rec(pos + 1)) return false;
            }
            return true;
        };
        if (!rec(0)) return false;
    }
    return true;
}

bool CyclicPairing::strict_unit_for(const HomotopyAlgebra& alg) const {
    if (!unit) return false;
    std::size_t e = *unit;
    if (alg.k_max() >= 1 && !alg.op(1).apply_elements({Element::basis(space, e)}).is_zero())
        return false;
    if (alg.k_max() >= 2) {
        for (std::size_t a = 0; a < space->dim(); ++a) {
            Element ea = Element::basis(space, a);
            Element l = alg.op(2).apply_elements({Element::basis(space, e), ea});
            if (!(l == ea)) return false;
            Element r = alg.op(2).apply_elements({ea, Element::basis(space, e)});
            Element want = ea;
            if (space->degree(a) & 1) want *= Rat(-1);
            if (!(r == want)) return false;
        }
    }
    for (int k = 3; k <= alg.k_max(); ++k) {
        for (auto& [key, row] : alg.op(k).entries())
            for (auto idx : key)
                if (idx == e && !row.empty()) return false;
    }
    return true;
}

}  // namespace linfty
