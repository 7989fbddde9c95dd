#pragma once

#include <linfty/graded.hpp>

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <vector>

namespace linfty {

template <class K>
struct CoeffOps;

template <>
struct CoeffOps<Rat> {
    static bool is_zero(const Rat& c) { return sgn(c) == 0; }
    static Rat abs(const Rat& c) { return rat_abs(c); }
};

template <>
struct CoeffOps<double> {
    static bool is_zero(double c) { return c == 0.0; }
    static double abs(double c) { return std::fabs(c); }
};

/// Sparse structure constants of a degree-homogeneous k-ary map between
/// graded spaces, written on the shifted spaces: a map of arity k and
/// degree d sends input tuples of shifted degrees (s_1,...,s_k) to outputs
/// of shifted degree s_1+...+s_k+d. All Koszul bookkeeping downstream is
/// driven by this convention; no formula carries hand-made signs.
///
/// Arity-0 maps are elements (curvature terms). A map flagged symmetric
/// stores entries on sorted index tuples only and is invariant under input
/// permutation up to the Koszul sign on shifted degrees.
template <class K>
class MultiMapT {
public:
    using Key = std::vector<std::size_t>;
    using OutRow = std::map<std::size_t, K>;
    using Table = std::map<Key, OutRow>;

    MultiMapT() = default;
    MultiMapT(SpacePtr source, SpacePtr target, int arity, int degree, bool symmetric = false)
        : source_(std::move(source)), target_(std::move(target)), arity_(arity), degree_(degree),
          symmetric_(symmetric) {
        if (arity < 0) throw std::invalid_argument("negative arity");
    }

    static MultiMapT identity(SpacePtr space) {
        MultiMapT m(space, space, 1, 0);
        for (std::size_t i = 0; i < space->dim(); ++i) m.entries_[{i}][i] = K(1);
        return m;
    }

    SpacePtr source() const { return source_; }
    SpacePtr target() const { return target_; }
    int arity() const { return arity_; }
    int degree() const { return degree_; }
    bool symmetric() const { return symmetric_; }
    const Table& entries() const { return entries_; }
    std::size_t entry_count() const {
        std::size_t n = 0;
        for (auto& [k, row] : entries_) n += row.size();
        return n;
    }

    bool is_zero() const {
        for (auto& [k, row] : entries_)
            for (auto& [o, c] : row)
                if (!CoeffOps<K>::is_zero(c)) return false;
        return true;
    }

    /// Adds coeff * (in -> out). Symmetric maps canonicalize the key first.
    void add(Key in, std::size_t out, K coeff) {
        if (in.size() != static_cast<std::size_t>(arity_)) throw std::invalid_argument("key arity mismatch");
        if (symmetric_) {
            std::vector<int> sdegs(in.size());
            for (std::size_t i = 0; i < in.size(); ++i) sdegs[i] = source_->sdeg(in[i]);
            int sign = sort_with_koszul_sign(in, sdegs);
            if (sign == 0) return;
            if (sign < 0) coeff = K(-1) * coeff;
        }
        check_homogeneous(in, out);
        K& slot = entries_[in][out];
        slot = slot + coeff;
        if (CoeffOps<K>::is_zero(slot)) {
            entries_[in].erase(out);
            if (entries_[in].empty()) entries_.erase(in);
        }
    }

    /// Coefficient of `out` in the value on the (ordered) basis tuple `in`.
    K coeff(Key in, std::size_t out) const {
        K sign_adj(1);
        if (symmetric_) {
            std::vector<int> sdegs(in.size());
            for (std::size_t i = 0; i < in.size(); ++i) sdegs[i] = source_->sdeg(in[i]);
            int sign = sort_with_koszul_sign(in, sdegs);
            if (sign == 0) return K(0);
            sign_adj = K(sign);
        }
        auto it = entries_.find(in);
        if (it == entries_.end()) return K(0);
        auto jt = it->second.find(out);
        if (jt == it->second.end()) return K(0);
        return sign_adj * jt->second;
    }

    MultiMapT& operator+=(const MultiMapT& o) {
        require_same_shape(o);
        for (auto& [k, row] : o.entries_)
            for (auto& [out, c] : row) {
                K& slot = entries_[k][out];
                slot = slot + c;
            }
        prune();
        return *this;
    }
    MultiMapT& operator-=(const MultiMapT& o) {
        require_same_shape(o);
        for (auto& [k, row] : o.entries_)
            for (auto& [out, c] : row) {
                K& slot = entries_[k][out];
                slot = slot - c;
            }
        prune();
        return *this;
    }
    MultiMapT& operator*=(const K& c) {
        for (auto& [k, row] : entries_)
            for (auto& [out, v] : row) v = v * c;
        prune();
        return *this;
    }
    friend MultiMapT operator+(MultiMapT a, const MultiMapT& b) { return a += b; }
    friend MultiMapT operator-(MultiMapT a, const MultiMapT& b) { return a -= b; }
    friend MultiMapT operator*(const K& c, MultiMapT a) { return a *= c; }
    bool operator==(const MultiMapT& o) const {
        MultiMapT d = *this;
        d -= o;
        return d.is_zero();
    }

    /// Max over output basis of the sum of absolute coefficients over input
    /// tuples: an exactly computable bound for the sup->sup operator norm.
    K norm() const {
        std::map<std::size_t, K> row_sums;
        for (auto& [k, row] : entries_)
            for (auto& [out, c] : row) {
                K& s = row_sums[out];
                s = s + CoeffOps<K>::abs(c);
            }
        K m(0);
        for (auto& [out, s] : row_sums)
            if (s > m) m = s;
        return m;
    }

    /// Evaluation on an ordered tuple of sparse vectors. No signs arise
    /// here: Koszul signs belong to operator rearrangement, not evaluation.
    std::map<std::size_t, K> apply(const std::vector<std::map<std::size_t, K>>& args) const {
        if (args.size() != static_cast<std::size_t>(arity_)) throw std::invalid_argument("apply arity mismatch");
        std::map<std::size_t, K> out;
        if (!symmetric_) {
            for (auto& [key, row] : entries_) {
                K f(1);
                bool dead = false;
                for (std::size_t i = 0; i < key.size() && !dead; ++i) {
                    auto it = args[i].find(key[i]);
                    if (it == args[i].end() || CoeffOps<K>::is_zero(it->second)) dead = true;
                    else f = f * it->second;
                }
                if (dead) continue;
                for (auto& [o, c] : row) {
                    K& slot = out[o];
                    slot = slot + f * c;
                }
            }
        } else {
            // iterate over index combinations drawn from the supports
            std::vector<std::vector<std::size_t>> supports(arity_);
            for (int i = 0; i < arity_; ++i)
                for (auto& [idx, c] : args[i])
                    if (!CoeffOps<K>::is_zero(c)) supports[i].push_back(idx);
            Key combo(arity_);
            eval_sym_rec(0, combo, K(1), supports, args, out);
        }
        for (auto it = out.begin(); it != out.end();)
            it = CoeffOps<K>::is_zero(it->second) ? out.erase(it) : std::next(it);
        return out;
    }

    Element apply_elements(const std::vector<Element>& args) const
        requires std::same_as<K, Rat>
    {
        std::vector<std::map<std::size_t, Rat>> raw;
        raw.reserve(args.size());
        for (auto& a : args) raw.push_back(a.coeffs);
        Element e(target_);
        e.coeffs = apply(raw);
        return e;
    }

    /// Flattens a symmetric map into plain (ordered-key) storage.
    MultiMapT desymmetrized() const {
        if (!symmetric_) return *this;
        MultiMapT flat(source_, target_, arity_, degree_, false);
        for (auto& [key, row] : entries_) {
            const Key& k = key;  // sorted
            std::vector<int> sdegs(arity_);
            for (int i = 0; i < arity_; ++i) sdegs[i] = source_->sdeg(k[i]);
            std::vector<std::size_t> order(arity_);
            for (int i = 0; i < arity_; ++i) order[i] = i;
            do {
                // among equal indices keep one representative ordering
                bool dup = false;
                for (int i = 0; i < arity_ && !dup; ++i)
                    for (int j = i + 1; j < arity_; ++j)
                        if (k[order[i]] == k[order[j]] && order[i] > order[j]) { dup = true; break; }
                if (dup) continue;
                int sign = koszul_sign(order, sdegs);
                if (sign == 0) continue;
                Key img(arity_);
                for (int i = 0; i < arity_; ++i) img[i] = k[order[i]];
                for (auto& [out, c] : row) flat.add(img, out, K(sign) * c);
            } while (std::next_permutation(order.begin(), order.end()));
        }
        return flat;
    }

    void prune() {
        for (auto it = entries_.begin(); it != entries_.end();) {
            for (auto jt = it->second.begin(); jt != it->second.end();)
                jt = CoeffOps<K>::is_zero(jt->second) ? it->second.erase(jt) : std::next(jt);
            it = it->second.empty() ? entries_.erase(it) : std::next(it);
        }
    }

    void check_homogeneous(const Key& in, std::size_t out) const {
        int s = degree_;
        for (auto i : in) s += source_->sdeg(i);
        if (target_->sdeg(out) != s)
            throw std::invalid_argument("entry violates degree homogeneity: out " +
                                        target_->at(out).name);
    }

private:
    void require_same_shape(const MultiMapT& o) const {
        if (arity_ != o.arity_ || degree_ != o.degree_ || symmetric_ != o.symmetric_)
            throw std::invalid_argument("map shape mismatch");
    }

    void eval_sym_rec(int pos, Key& combo, K f, const std::vector<std::vector<std::size_t>>& supports,
                      const std::vector<std::map<std::size_t, K>>& args,
                      std::map<std::size_t, K>& out) const {
        if (pos == arity_) {
            Key sorted = combo;
            std::vector<int> sdegs(arity_);
            for (int i = 0; i < arity_; ++i) sdegs[i] = source_->sdeg(combo[i]);
            int sign = sort_with_koszul_sign(sorted, sdegs);
            if (sign == 0) return;
            auto it = entries_.find(sorted);
            if (it == entries_.end()) return;
            for (auto& [o, c] : it->second) {
                K& slot = out[o];
                slot = slot + K(sign) * f * c;
            }
            return;
        }
        for (auto idx : supports[pos]) {
            combo[pos] = idx;
            eval_sym_rec(pos + 1, combo, f * args[pos].at(idx), supports, args, out);
        }
    }

    SpacePtr source_, target_;
    int arity_ = 0;
    int degree_ = 0;
    bool symmetric_ = false;
    Table entries_;
};

using GradedMultilinearMap = MultiMapT<Rat>;
using FloatMultiMap = MultiMapT<double>;

/// Operadic partial composition outer o_slot inner (slot is 1-based).
/// The Koszul sign of moving `inner` past the first slot-1 inputs of
/// `outer` is applied; everything downstream inherits its signs from here.
/// When outer has arity > 1 the remaining slots keep outer's source, so
/// inner.source must agree with it; use tensor_compose to change spaces.
template <class K>
MultiMapT<K> compose(const MultiMapT<K>& outer, const MultiMapT<K>& inner, std::size_t slot) {
    if (outer.symmetric() || inner.symmetric())
        throw std::invalid_argument("compose expects plain (ordered) maps; desymmetrize first");
    if (slot < 1 || slot > static_cast<std::size_t>(outer.arity()))
        throw std::invalid_argument("compose: slot out of range");
    if (!inner.target() || !outer.source() || !inner.target()->same_basis_as(*outer.source()))
        throw std::invalid_argument("compose: inner target does not match outer source");
    if (outer.arity() > 1 && inner.arity() > 0 && !inner.source()->same_basis_as(*outer.source()))
        throw std::invalid_argument("compose: mixed sources need tensor_compose");

    MultiMapT<K> result(inner.source(), outer.target(), outer.arity() + inner.arity() - 1,
                        outer.degree() + inner.degree(), false);
    const bool inner_odd = inner.degree() & 1;
    for (auto& [okey, orow] : outer.entries()) {
        int pre = 0;
        for (std::size_t u = 0; u + 1 < slot; ++u) pre += outer.source()->sdeg(okey[u]);
        int sign = (inner_odd && (pre & 1)) ? -1 : 1;
        for (auto& [ikey, irow] : inner.entries()) {
            auto jt = irow.find(okey[slot - 1]);
            if (jt == irow.end()) continue;
            typename MultiMapT<K>::Key key;
            key.reserve(result.arity());
            key.insert(key.end(), okey.begin(), okey.begin() + (slot - 1));
            key.insert(key.end(), ikey.begin(), ikey.end());
            key.insert(key.end(), okey.begin() + slot, okey.end());
            for (auto& [out, oc] : orow) result.add(key, out, K(sign) * jt->second * oc);
        }
    }
    return result;
}

/// Full operadic composition outer o (f_1 (x) ... (x) f_k): one inner map
/// per slot of outer, all sharing a common source. Per-entry Koszul signs
/// of moving f_u past the inputs of f_1..f_{u-1} are applied.
template <class K>
MultiMapT<K> tensor_compose(const MultiMapT<K>& outer, const std::vector<MultiMapT<K>>& inners) {
    if (outer.symmetric()) throw std::invalid_argument("tensor_compose expects plain maps");
    if (inners.size() != static_cast<std::size_t>(outer.arity()))
        throw std::invalid_argument("tensor_compose: one inner per slot");
    SpacePtr src = inners.empty() ? outer.source() : inners[0].source();
    int total_arity = 0, total_degree = outer.degree();
    for (auto& f : inners) {
        if (f.symmetric()) throw std::invalid_argument("tensor_compose expects plain maps");
        if (!f.target()->same_basis_as(*outer.source()))
            throw std::invalid_argument("tensor_compose: inner target mismatch");
        if (f.arity() > 0 && !f.source()->same_basis_as(*src))
            throw std::invalid_argument("tensor_compose: inners must share a source");
        total_arity += f.arity();
        total_degree += f.degree();
    }
    MultiMapT<K> result(src, outer.target(), total_arity, total_degree, false);

    // for each outer entry, run over inner-entry combinations
    std::vector<const typename MultiMapT<K>::Table*> tables;
    for (auto& f : inners) tables.push_back(&f.entries());
    for (auto& [okey, orow] : outer.entries()) {
        // collect, per slot, the inner entries landing on okey[u]
        std::vector<std::vector<std::pair<const typename MultiMapT<K>::Key*, K>>> hits(inners.size());
        bool dead = false;
        for (std::size_t u = 0; u < inners.size() && !dead; ++u) {
            for (auto& [ikey, irow] : *tables[u]) {
                auto jt = irow.find(okey[u]);
                if (jt != irow.end()) hits[u].push_back({&ikey, jt->second});
            }
            if (hits[u].empty()) dead = true;
        }
        if (dead) continue;
        std::vector<std::size_t> pick(inners.size(), 0);
        while (true) {
            typename MultiMapT<K>::Key key;
            key.reserve(total_arity);
            int sign_exp = 0, running = 0;
            K coeff(1);
            for (std::size_t u = 0; u < inners.size(); ++u) {
                if (inners[u].degree() & 1) sign_exp += running;
                const auto* ikey = hits[u][pick[u]].first;
                for (auto idx : *ikey) {
                    key.push_back(idx);
                    running += src->sdeg(idx) & 1;
                }
                coeff = coeff * hits[u][pick[u]].second;
            }
            if (sign_exp & 1) coeff = K(-1) * coeff;
            for (auto& [out, oc] : orow) result.add(key, out, coeff * oc);
            std::size_t pos = inners.size();
            while (pos > 0 && pick[pos - 1] + 1 == hits[pos - 1].size()) pick[--pos] = 0;
            if (pos == 0) break;
            ++pick[pos - 1];
        }
    }
    return result;
}

/// Rehangs a map on equal-basis replacement spaces (e.g. after installing
/// an inner product on a fresh copy of the space).
template <class K>
MultiMapT<K> rebind(const MultiMapT<K>& m, SpacePtr src, SpacePtr tgt) {
    if (!src->same_basis_as(*m.source()) || !tgt->same_basis_as(*m.target()))
        throw std::invalid_argument("rebind: basis mismatch");
    MultiMapT<K> out(src, tgt, m.arity(), m.degree(), m.symmetric());
    for (auto& [key, row] : m.entries())
        for (auto& [o, c] : row) out.add(key, o, c);
    return out;
}

/// inner composed into every slot of outer, summed.
template <class K>
MultiMapT<K> compose_all_slots(const MultiMapT<K>& outer, const MultiMapT<K>& inner) {
    MultiMapT<K> acc(inner.source(), outer.target(), outer.arity() + inner.arity() - 1,
                     outer.degree() + inner.degree(), false);
    for (std::size_t s = 1; s <= static_cast<std::size_t>(outer.arity()); ++s)
        acc += compose(outer, inner, s);
    return acc;
}

}  // namespace linfty
