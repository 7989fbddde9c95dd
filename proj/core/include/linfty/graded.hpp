#pragma once

#include <linfty/rational.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace linfty {

struct BasisElement {
    std::string name;
    int degree = 0;  // cohomological degree, unshifted
};

class RatMatrix;

/// Finite-dimensional graded vector space with a named, ordered basis.
/// An optional inner product is stored as a symmetric positive-definite
/// rational Gram matrix per degree (block-diagonal across degrees).
class GradedVectorSpace {
public:
    GradedVectorSpace() = default;
    explicit GradedVectorSpace(std::vector<BasisElement> basis);

    std::size_t dim() const { return basis_.size(); }
    const BasisElement& at(std::size_t i) const { return basis_.at(i); }
    const std::vector<BasisElement>& basis() const { return basis_; }

    int degree(std::size_t i) const { return basis_.at(i).degree; }
    /// Degree on the shifted space (degree - 1); Koszul signs live here.
    int sdeg(std::size_t i) const { return basis_.at(i).degree - 1; }

    std::size_t index_of(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }

    std::vector<std::size_t> indices_of_degree(int d) const;
    std::vector<int> degrees_present() const;

    /// Installs <e_i, e_j> = g(i, j); entries pairing distinct degrees must
    /// vanish and each degree block must be symmetric positive-definite.
    void set_inner_product(std::map<std::pair<std::size_t, std::size_t>, Rat> g);
    /// Basis is declared orthonormal (the default metric).
    void set_orthonormal_inner_product();
    bool has_inner_product() const { return !gram_.empty(); }
    Rat gram(std::size_t i, std::size_t j) const;

    bool same_basis_as(const GradedVectorSpace& o) const;

private:
    std::vector<BasisElement> basis_;
    std::map<std::string, std::size_t> index_;
    std::map<std::pair<std::size_t, std::size_t>, Rat> gram_;
};

using SpacePtr = std::shared_ptr<const GradedVectorSpace>;

inline SpacePtr make_space(std::vector<BasisElement> basis) {
    return std::make_shared<GradedVectorSpace>(std::move(basis));
}

/// Sparse vector in a graded space.
struct Element {
    SpacePtr space;
    std::map<std::size_t, Rat> coeffs;

    Element() = default;
    explicit Element(SpacePtr s) : space(std::move(s)) {}

    static Element basis(SpacePtr s, std::size_t i) {
        Element e(std::move(s));
        e.coeffs[i] = Rat(1);
        return e;
    }

    bool is_zero() const;
    /// Homogeneous degree; nullopt for 0 or mixed-degree elements.
    std::optional<int> degree() const;
    Rat coeff(std::size_t i) const;
    /// Max absolute coefficient (the element norm used by every ledger).
    Rat norm() const;

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element& operator*=(const Rat& c);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(const Rat& c, Element a) { return a *= c; }
    bool operator==(const Element& o) const;

    void prune();
};

/// Sign accumulated by rearranging graded symbols: the image tuple
/// (a_{perm[0]}, a_{perm[1]}, ...) is produced from (a_0, ..., a_{k-1}) by
/// adjacent transpositions, each odd-odd swap contributing -1.
/// Degrees are the *shifted* ones throughout.
int koszul_sign(const std::vector<std::size_t>& perm, const std::vector<int>& sdegs);

/// All (i_1,...,i_k)-shuffles of {0,...,n-1} in lexicographic order,
/// n = sum of block sizes. A shuffle is returned as the image tuple.
std::vector<std::vector<std::size_t>> shuffles(const std::vector<std::size_t>& block_sizes);

/// Sorts `idx` ascending (carrying `sdegs` along), accumulating the Koszul
/// sign of the rearrangement. Returns 0 when two equal entries of odd degree
/// collide.
int sort_with_koszul_sign(std::vector<std::size_t>& idx, std::vector<int>& sdegs);

}  // namespace linfty
