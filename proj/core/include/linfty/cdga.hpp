#pragma once

#include <linfty/rational.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace linfty {

/// Generator of a free graded-commutative algebra. Odd generators square
/// to zero; the weight of every generator is one and monomials above the
/// weight cap are dropped, a quotient every derivation here respects.
struct CdgaGen {
    std::string name;
    int degree = 0;  // cohomological degree
};

class Cdga {
public:
    using Mono = std::vector<std::uint8_t>;

    Cdga() = default;
    Cdga(std::vector<CdgaGen> gens, int weight_cap)
        : gens_(std::move(gens)), cap_(weight_cap) {}

    std::size_t ngens() const { return gens_.size(); }
    const CdgaGen& gen(std::size_t i) const { return gens_.at(i); }
    int cap() const { return cap_; }

    int degree_of(const Mono& m) const;
    int weight_of(const Mono& m) const;
    /// Koszul sign of merging two canonical monomials; 0 when an odd
    /// generator would repeat.
    int merge_sign(const Mono& a, const Mono& b) const;

private:
    std::vector<CdgaGen> gens_;
    int cap_ = 0;
};

using CdgaPtr = std::shared_ptr<const Cdga>;

class CdgaElem {
public:
    CdgaElem() = default;
    explicit CdgaElem(CdgaPtr ring) : ring_(std::move(ring)) {}

    static CdgaElem one(CdgaPtr ring);
    static CdgaElem generator(CdgaPtr ring, std::size_t i);

    const CdgaPtr& ring() const { return ring_; }
    const std::map<Cdga::Mono, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Homogeneous degree if defined, otherwise a mixed-term marker.
    bool is_homogeneous(int& degree) const;

    void add_term(Cdga::Mono m, const Rat& c, int extra_weight = 0);
    CdgaElem& operator+=(const CdgaElem& o);
    CdgaElem& operator-=(const CdgaElem& o);
    CdgaElem& operator*=(const Rat& c);
    friend CdgaElem operator+(CdgaElem a, const CdgaElem& b) { return a += b; }
    friend CdgaElem operator-(CdgaElem a, const CdgaElem& b) { return a -= b; }
    friend CdgaElem operator*(const Rat& c, CdgaElem a) { return a *= c; }
    bool operator==(const CdgaElem& o) const;

    /// Graded-commutative product, weight-capped. extra_weight tightens the
    /// cap (used when differential-form factors carry weight of their own).
    CdgaElem mul(const CdgaElem& o, int extra_weight = 0) const;

    /// Extends gen_image to a derivation by the Leibniz rule; the term that
    /// strikes a factor g carries the sign (-1)^{|g| * (degree before g)},
    /// which covers derivations of either parity. extra_weight as above.
    CdgaElem derive(const std::vector<CdgaElem>& gen_image, int extra_weight = 0) const;

private:
    CdgaPtr ring_;
    std::map<Cdga::Mono, Rat> terms_;
};

}  // namespace linfty
