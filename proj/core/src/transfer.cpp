#include <linfty/transfer.hpp>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace linfty {

int deco_tree_degree(const DecoTreePtr& t) {
    int d = (t->color == 'h' || t->color == 'u') ? -1 : 0;
    if (!t->is_leaf()) d += deco_tree_degree(t->left) + deco_tree_degree(t->right) + 1;
    return d;
}

namespace {

// zero-absorbing edge recoloring: b after h, h after h, h after b all vanish
DecoTreePtr top_apply(char c, const DecoTreePtr& t) {
    if (c == 'b') {
        if (t->color == '.') return recolor_root(t, 'b');
        if (t->color == 'b') return t;
        return nullptr;
    }
    if (c == 'h') {
        if (t->color == '.') return recolor_root(t, 'h');
        return nullptr;
    }
    if (c == 'p') {
        if (t->color == '.') return recolor_root(t, 'p');
        if (t->color == 'b') return recolor_root(t, 'p');  // p after i p collapses to p
        return nullptr;
    }
    throw std::logic_error("top_apply: bad color");
}

struct ForestTerm {
    std::vector<DecoTreePtr> slots;
    Rat coeff;
};

std::vector<TreeTerm> dedup(std::vector<std::pair<DecoTreePtr, Rat>> raw) {
    std::map<std::string, TreeTerm> acc;
    for (auto& [t, c] : raw) {
        auto key = t->serialize();
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, TreeTerm{t, c});
        else it->second.coeff += c;
    }
    std::vector<TreeTerm> out;
    for (auto& [k, term] : acc)
        if (!is_zero(term.coeff)) out.push_back(term);
    return out;
}

std::vector<TreeTerm> compute_q(int k) {
    std::vector<ForestTerm> cur;
    {
        ForestTerm base;
        base.coeff = Rat(1);
        for (int i = 0; i < k; ++i) base.slots.push_back(deco_leaf('.'));
        cur.push_back(std::move(base));
    }
    for (int round = 0; round + 1 < k; ++round) {
        // homotopy insertion: kernel dots left of the homotopy slot
        std::vector<ForestTerm> mid;
        for (auto& f : cur) {
            for (std::size_t s = 0; s < f.slots.size(); ++s) {
                ForestTerm g = f;
                int parity = 0;
                bool dead = false;
                for (std::size_t u = 0; u < s && !dead; ++u) {
                    parity += deco_tree_degree(f.slots[u]);
                    g.slots[u] = top_apply('b', g.slots[u]);
                    if (!g.slots[u]) dead = true;
                }
                if (dead) continue;
                g.slots[s] = top_apply('h', g.slots[s]);
                if (!g.slots[s]) continue;
                if (parity & 1) g.coeff = -g.coeff;
                mid.push_back(std::move(g));
            }
        }
        // product contraction of an adjacent pair
        std::vector<ForestTerm> next;
        for (auto& f : mid) {
            for (std::size_t s = 0; s + 1 < f.slots.size(); ++s) {
                ForestTerm g;
                g.coeff = f.coeff;
                int parity = 0;
                for (std::size_t u = 0; u < s; ++u) parity += deco_tree_degree(f.slots[u]);
                if (parity & 1) g.coeff = -g.coeff;
                for (std::size_t u = 0; u < f.slots.size(); ++u) {
                    if (u == s) g.slots.push_back(deco_node(f.slots[s], f.slots[s + 1], '.'));
                    else if (u != s + 1) g.slots.push_back(f.slots[u]);
                }
                next.push_back(std::move(g));
            }
        }
        cur = std::move(next);
    }
    std::vector<std::pair<DecoTreePtr, Rat>> raw;
    for (auto& f : cur) {
        auto rooted = top_apply('p', f.slots[0]);
        if (rooted) raw.emplace_back(rooted, f.coeff);
    }
    return dedup(std::move(raw));
}

void compositions_rec(int k, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        if (k >= 1) {
            cur.push_back(k);
            out.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    for (int first = 1; first + parts - 1 <= k; ++first) {
        cur.push_back(first);
        compositions_rec(k - first, parts - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> compositions(int k, int parts) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    compositions_rec(k, parts, cur, out);
    return out;
}

DecoTreePtr graft(const TreePtr& top, const std::vector<DecoTreePtr>& blocks, std::size_t& next) {
    if (top->is_leaf()) return recolor_root(blocks[next++], 'b');
    auto l = graft(top->left, blocks, next);
    auto r = graft(top->right, blocks, next);
    return deco_node(l, r, 'h');
}

std::vector<TreeTerm> compute_w(int k) {
    std::vector<std::pair<DecoTreePtr, Rat>> raw;
    for (int s = 1; s <= k; ++s) {
        for (auto& top : enumerate_trees(s)) {
            for (auto& comp : compositions(k, s)) {
                // all choices of projection blocks for the s leaves
                std::vector<std::size_t> pick(s, 0);
                while (true) {
                    std::vector<DecoTreePtr> blocks;
                    Rat coeff(1);
                    for (int u = 0; u < s; ++u) {
                        const auto& terms = q_terms(comp[u]);
                        blocks.push_back(terms[pick[u]].tree);
                        coeff *= terms[pick[u]].coeff;
                    }
                    std::size_t next = 0;
                    raw.emplace_back(graft(top, blocks, next), coeff);
                    int pos = s - 1;
                    while (pos >= 0 && pick[pos] + 1 == q_terms(comp[pos]).size()) {
                        pick[pos] = 0;
                        --pos;
                    }
                    if (pos < 0) break;
                    ++pick[pos];
                }
            }
        }
    }
    return dedup(std::move(raw));
}

void blue_variants(const DecoTreePtr& t, std::vector<DecoTreePtr>& out,
                   const std::function<DecoTreePtr(DecoTreePtr)>& rebuild) {
    if (t->color == 'b') {
        auto swapped = std::make_shared<DecoratedTree>(*t);
        swapped->color = 'u';
        out.push_back(rebuild(swapped));
    }
    if (!t->is_leaf()) {
        blue_variants(t->left, out, [&](DecoTreePtr nl) {
            auto n = std::make_shared<DecoratedTree>(*t);
            n->left = std::move(nl);
            return rebuild(n);
        });
        blue_variants(t->right, out, [&](DecoTreePtr nr) {
            auto n = std::make_shared<DecoratedTree>(*t);
            n->right = std::move(nr);
            return rebuild(n);
        });
    }
}

std::vector<TreeTerm> compute_v(int k) {
    std::vector<std::pair<DecoTreePtr, Rat>> raw;
    for (auto& term : w_terms(k)) {
        std::vector<DecoTreePtr> variants;
        blue_variants(term.tree, variants, [](DecoTreePtr t) { return t; });
        for (auto& v : variants) raw.emplace_back(v, term.coeff);
    }
    return dedup(std::move(raw));
}

std::map<int, std::vector<TreeTerm>> q_cache, w_cache, v_cache;
std::recursive_mutex cache_mutex;

const std::vector<TreeTerm>& cached(std::map<int, std::vector<TreeTerm>>& cache, int k,
                                    std::vector<TreeTerm> (*fn)(int)) {
    std::lock_guard<std::recursive_mutex> lock(cache_mutex);
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, fn(k)).first;
    return it->second;
}

}  // namespace

const std::vector<TreeTerm>& q_terms(int k) {
    if (k < 1) throw std::invalid_argument("q_terms: k >= 1");
    return cached(q_cache, k, compute_q);
}

const std::vector<TreeTerm>& w_terms(int k) {
    if (k < 1) throw std::invalid_argument("w_terms: k >= 1");
    return cached(w_cache, k, compute_w);
}

const std::vector<TreeTerm>& v_terms(int k) {
    if (k < 1) throw std::invalid_argument("v_terms: k >= 1");
    return cached(v_cache, k, compute_v);
}

GradedMultilinearMap eval_plain_tree(const TreePtr& t, const GradedMultilinearMap& vertex,
                                     const GradedMultilinearMap& leaf,
                                     const GradedMultilinearMap& internal,
                                     const GradedMultilinearMap& root) {
    std::function<GradedMultilinearMap(const TreePtr&, bool)> rec =
        [&](const TreePtr& node, bool at_root) -> GradedMultilinearMap {
        if (node->is_leaf()) {
            if (at_root) return compose(root, leaf, 1);
            return leaf;
        }
        auto l = rec(node->left, false);
        auto r = rec(node->right, false);
        auto v = tensor_compose(vertex, {l, r});
        return compose(at_root ? root : internal, v, 1);
    };
    return rec(t, true);
}

NormLedger make_ledger(const std::vector<GradedMultilinearMap>& family, const Rat& bound) {
    NormLedger l;
    l.bound = bound;
    l.within_bound = true;
    l.per_k.push_back(Rat(0));  // pad index 0
    double cbest = 0.0;
    for (std::size_t k = 1; k <= family.size(); ++k) {
        Rat n = family[k - 1].norm();
        l.per_k.push_back(n);
        if (n > rat_pow(bound, (unsigned)k)) l.within_bound = false;
        double c = std::pow(to_double(n), 1.0 / (double)k);
        if (c > cbest) cbest = c;
    }
    l.smallest_c = cbest;
    return l;
}

Transfer::Transfer(const DgAlgebra& alg, const RetractionData& r, int k_max)
    : alg_(alg), r_(r), k_max_(k_max) {
    if (k_max < 1) throw std::invalid_argument("transfer: k_max >= 1");
    m_.resize(k_max + 1);
    I_.resize(k_max + 1);
    P_.resize(k_max + 1);
    M_.resize(k_max + 1);
    I_[1] = r.i;
    m_[1] = compose(compose(r.p, alg.m1, 1), r.i, 1);
    for (int k = 2; k <= k_max; ++k) {
        GradedMultilinearMap Mk(r.cohomology, alg.space, k, 1);
        for (int a = 1; a < k; ++a) Mk += tensor_compose(alg.m2, {I_[a], I_[k - a]});
        m_[k] = compose(r.p, Mk, 1);
        I_[k] = compose(r.h, Mk, 1);
        M_[k] = std::move(Mk);
    }
    // projection side from the decorated-tree sum
    for (int k = 1; k <= k_max; ++k) {
        GradedMultilinearMap Pk(alg.space, r.cohomology, k, 0);
        auto pop = r.p;
        auto ipop = compose(r.i, r.p, 1);
        for (auto& term : q_terms(k)) {
            auto ops = [&](char c) -> const GradedMultilinearMap* {
                switch (c) {
                    case 'b': return &ipop;
                    case 'h': return &r_.h;
                    case 'p': return &pop;
                    default: return nullptr;
                }
            };
            auto val = eval_deco_tree<Rat>(term.tree, alg.m2, ops, nullptr);
            Pk += term.coeff * val;
        }
        P_[k] = std::move(Pk);
    }
}

GradedMultilinearMap Transfer::IP(int k) const {
    GradedMultilinearMap acc(alg_.space, alg_.space, k, 0);
    for (int s = 1; s <= k; ++s) {
        for (auto& comp : [&] {
                 std::vector<std::vector<int>> out;
                 std::vector<int> cur;
                 compositions_rec(k, s, cur, out);
                 return out;
             }()) {
            std::vector<GradedMultilinearMap> blocks;
            for (int u = 1; u <= s; ++u) blocks.push_back(P_.at(comp[u - 1]));
            acc += tensor_compose(I_.at(s), blocks);
        }
    }
    return acc;
}

GradedMultilinearMap Transfer::m_tree_sum(int k) const {
    if (k == 1) return m_.at(1);
    GradedMultilinearMap acc(r_.cohomology, r_.cohomology, k, 1);
    for (auto& t : enumerate_trees(k)) acc += eval_plain_tree(t, alg_.m2, r_.i, r_.h, r_.p);
    return acc;
}

GradedMultilinearMap Transfer::I_tree_sum(int k) const {
    if (k == 1) return I_.at(1);
    GradedMultilinearMap acc(r_.cohomology, alg_.space, k, 0);
    for (auto& t : enumerate_trees(k)) acc += eval_plain_tree(t, alg_.m2, r_.i, r_.h, r_.h);
    return acc;
}

Rat Transfer::bound_constant() const {
    Rat d = alg_.m2.norm();
    Rat hn = r_.h.norm();
    if (hn > d) d = hn;
    if (Rat(1) > d) d = Rat(1);
    return Rat(4) * d * d;
}

HomotopyFamily::HomotopyFamily(const Transfer& tr, const HeatFamily& heat, int k_max)
    : heat_(&heat), k_max_(k_max), m1f_(heat.differential()), m2f_(heat.product()) {
    for (int k = 1; k <= k_max; ++k) {
        auto ip = tr.IP(k);
        FloatMultiMap f(ip.source(), ip.target(), ip.arity(), ip.degree());
        for (auto& [key, row] : ip.entries())
            for (auto& [o, c] : row) f.add(key, o, to_double(c));
        ip_family_.push_back(std::move(f));
    }
}

FloatMultiMap HomotopyFamily::eval_family(const std::vector<TreeTerm>& terms, double t,
                                          bool blue) const {
    auto kt = heat_->K(t);
    auto ht = heat_->h(t);
    auto ut = blue ? heat_->flow(t) : FloatMultiMap();
    FloatMultiMap acc;
    bool first = true;
    for (auto& term : terms) {
        auto ops = [&](char c) -> const FloatMultiMap* {
            switch (c) {
                case 'b': return &kt;
                case 'h': return &ht;
                case 'u': return &ut;
                default: return nullptr;
            }
        };
        auto val = eval_deco_tree<double>(term.tree, m2f_, ops, nullptr);
        val *= to_double(term.coeff);
        if (first) {
            acc = std::move(val);
            first = false;
        } else {
            acc += val;
        }
    }
    return acc;
}

FloatMultiMap HomotopyFamily::R(int k, double t) const {
    if (k == 1) return heat_->K(t);
    return eval_family(w_terms(k), t, false);
}

FloatMultiMap HomotopyFamily::S(int k, double t) const {
    if (k == 1) return heat_->flow(t);
    return eval_family(v_terms(k), t, true);
}

FloatMultiMap HomotopyFamily::R_inf(int k) const { return ip_family_.at(k - 1); }

double HomotopyFamily::morphism_residual(double t, int n) const {
    std::vector<FloatMultiMap> F{FloatMultiMap()};  // 1-based
    for (int k = 1; k <= n; ++k) F.push_back(R(k, t));
    return morphism_defect(F, m1f_, m2f_, m1f_, m2f_, n).norm();
}

double HomotopyFamily::flow_residual(double t, int n, double dt) const {
    // dt-component of the form-valued morphism equation; the sign pattern is
    // pinned by the polynomial interpolation family, where it holds exactly:
    //   sum_slots S_n o m1 + sum_slots S_{n-1} o m2 + m1 o S_n
    //     + sum m2(R (x) S) + m2(S (x) R)  =  dR_n/dt.
    std::vector<FloatMultiMap> Rv{FloatMultiMap()}, Sv{FloatMultiMap()};
    for (int k = 1; k <= n; ++k) {
        Rv.push_back(R(k, t));
        Sv.push_back(S(k, t));
    }
    FloatMultiMap lhs = compose_all_slots(Sv[n], m1f_);
    if (n >= 2) lhs += compose_all_slots(Sv[n - 1], m2f_);
    lhs += compose(m1f_, Sv[n], 1);
    for (int a = 1; a < n; ++a) {
        lhs += tensor_compose(m2f_, {Rv[a], Sv[n - a]});
        lhs += tensor_compose(m2f_, {Sv[a], Rv[n - a]});
    }
    auto rp = R(n, t + dt);
    auto rm = R(n, t - dt);
    rp -= rm;
    rp *= 1.0 / (2.0 * dt);
    lhs -= rp;
    return lhs.norm();
}

FloatMultiMap HomotopyFamily::H_position(int k, double u) const {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("homotopy parameter must lie in [0,1]");
    if (u == 1.0) return R_inf(k);
    return R(k, std::tan(M_PI * u / 2.0));
}

FloatMultiMap HomotopyFamily::H_velocity(int k, double u) const {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("homotopy parameter must lie in [0,1]");
    if (u == 1.0) {  // exponential decay beats the polynomial blow-up
        FloatMultiMap z = S(k, 1.0);
        z *= 0.0;
        z.prune();
        return z;
    }
    double c = std::cos(M_PI * u / 2.0);
    auto s = S(k, std::tan(M_PI * u / 2.0));
    s *= M_PI / (2.0 * c * c);
    return s;
}

}  // namespace linfty
