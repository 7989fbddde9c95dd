#include <linfty/graded.hpp>
#include <linfty/rational_linalg.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace linfty {

GradedVectorSpace::GradedVectorSpace(std::vector<BasisElement> basis) : basis_(std::move(basis)) {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        auto [it, fresh] = index_.emplace(basis_[i].name, i);
        if (!fresh) throw std::invalid_argument("duplicate basis name: " + basis_[i].name);
    }
}

std::size_t GradedVectorSpace::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("no basis element named " + name);
    return it->second;
}

std::vector<std::size_t> GradedVectorSpace::indices_of_degree(int d) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].degree == d) out.push_back(i);
    return out;
}

std::vector<int> GradedVectorSpace::degrees_present() const {
    std::set<int> ds;
    for (auto& b : basis_) ds.insert(b.degree);
    return {ds.begin(), ds.end()};
}

void GradedVectorSpace::set_inner_product(std::map<std::pair<std::size_t, std::size_t>, Rat> g) {
    for (auto& [key, val] : g) {
        auto [i, j] = key;
        if (i >= dim() || j >= dim()) throw std::invalid_argument("gram index out of range");
        if (degree(i) != degree(j) && !is_zero(val))
            throw std::invalid_argument("inner product pairs distinct degrees");
    }
    // symmetry
    for (auto& [key, val] : g) {
        auto [i, j] = key;
        auto it = g.find({j, i});
        Rat other = (it == g.end()) ? Rat(0) : it->second;
        if (other != val) throw std::invalid_argument("inner product not symmetric");
    }
    // positive-definiteness per degree block, via leading principal minors
    for (int d : degrees_present()) {
        auto idx = indices_of_degree(d);
        RatMatrix block(idx.size(), idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) {
                auto it = g.find({idx[a], idx[b]});
                block.at(a, b) = (it == g.end()) ? Rat(0) : it->second;
            }
        if (!block.is_positive_definite())
            throw std::invalid_argument("inner product block not positive definite in degree " +
                                        std::to_string(d));
    }
    gram_ = std::move(g);
}

void GradedVectorSpace::set_orthonormal_inner_product() {
    gram_.clear();
    for (std::size_t i = 0; i < dim(); ++i) gram_[{i, i}] = Rat(1);
}

Rat GradedVectorSpace::gram(std::size_t i, std::size_t j) const {
    auto it = gram_.find({i, j});
    return it == gram_.end() ? Rat(0) : it->second;
}

bool GradedVectorSpace::same_basis_as(const GradedVectorSpace& o) const {
    if (dim() != o.dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (basis_[i].name != o.basis_[i].name || basis_[i].degree != o.basis_[i].degree)
            return false;
    return true;
}

bool Element::is_zero() const {
    for (auto& [i, c] : coeffs)
        if (!linfty::is_zero(c)) return false;
    return true;
}

std::optional<int> Element::degree() const {
    std::optional<int> d;
    for (auto& [i, c] : coeffs) {
        if (linfty::is_zero(c)) continue;
        int di = space->degree(i);
        if (d && *d != di) return std::nullopt;
        d = di;
    }
    return d;
}

Rat Element::coeff(std::size_t i) const {
    auto it = coeffs.find(i);
    return it == coeffs.end() ? Rat(0) : it->second;
}

Rat Element::norm() const {
    Rat m(0);
    for (auto& [i, c] : coeffs) {
        Rat a = rat_abs(c);
        if (a > m) m = a;
    }
    return m;
}

Element& Element::operator+=(const Element& o) {
    if (!space) space = o.space;
    for (auto& [i, c] : o.coeffs) coeffs[i] += c;
    prune();
    return *this;
}

Element& Element::operator-=(const Element& o) {
    if (!space) space = o.space;
    for (auto& [i, c] : o.coeffs) coeffs[i] -= c;
    prune();
    return *this;
}

Element& Element::operator*=(const Rat& c) {
    for (auto& [i, v] : coeffs) v *= c;
    prune();
    return *this;
}

bool Element::operator==(const Element& o) const {
    Element d = *this;
    d -= o;
    return d.is_zero();
}

void Element::prune() {
    for (auto it = coeffs.begin(); it != coeffs.end();)
        it = linfty::is_zero(it->second) ? coeffs.erase(it) : std::next(it);
}

int koszul_sign(const std::vector<std::size_t>& perm, const std::vector<int>& sdegs) {
    if (perm.size() != sdegs.size()) throw std::invalid_argument("koszul_sign: length mismatch");
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t p : perm) {
        if (p >= perm.size() || seen[p]) throw std::invalid_argument("koszul_sign: not a permutation");
        seen[p] = true;
    }
    // bubble the identity into the image tuple, counting odd-odd swaps
    std::vector<std::size_t> cur(perm.size());
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = i;
    int sign = 1;
    for (std::size_t target = 0; target < perm.size(); ++target) {
        std::size_t pos = target;
        while (cur[pos] != perm[target]) ++pos;
        while (pos > target) {
            if ((sdegs[cur[pos]] & 1) && (sdegs[cur[pos - 1]] & 1)) sign = -sign;
            std::swap(cur[pos], cur[pos - 1]);
            --pos;
        }
    }
    return sign;
}

std::vector<std::vector<std::size_t>> shuffles(const std::vector<std::size_t>& block_sizes) {
    if (block_sizes.empty()) throw std::invalid_argument("shuffles: empty block list");
    std::size_t n = 0;
    for (std::size_t b : block_sizes) {
        if (b == 0) throw std::invalid_argument("shuffles: zero block size");
        n += b;
    }
    // A shuffle is determined by which block each position draws from; order
    // within a block is forced. Picking the smallest block id first yields
    // image tuples in lexicographic order.
    std::vector<std::size_t> starts(block_sizes.size(), 0);
    for (std::size_t b = 1; b < block_sizes.size(); ++b)
        starts[b] = starts[b - 1] + block_sizes[b - 1];

    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> remaining = block_sizes;
    std::vector<std::size_t> used(block_sizes.size(), 0);
    std::vector<std::size_t> img;
    img.reserve(n);
    auto rec = [&](auto&& self) -> void {
        if (img.size() == n) {
            out.push_back(img);
            return;
        }
        for (std::size_t b = 0; b < block_sizes.size(); ++b) {
            if (remaining[b] == 0) continue;
            remaining[b]--;
            img.push_back(starts[b] + used[b]++);
            self(self);
            img.pop_back();
            used[b]--;
            remaining[b]++;
        }
    };
    rec(rec);
    return out;
}

int sort_with_koszul_sign(std::vector<std::size_t>& idx, std::vector<int>& sdegs) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            if ((sdegs[j] & 1) && (sdegs[j - 1] & 1)) sign = -sign;
            std::swap(idx[j], idx[j - 1]);
            std::swap(sdegs[j], sdegs[j - 1]);
        }
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1] && (sdegs[i] & 1)) return 0;
    return sign;
}

}  // namespace linfty
