#pragma once

#include <linfty/multilinear.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace linfty {

/// Truncated multivariate polynomial over the rationals: monomials above
/// the total-degree cap are dropped by every operation, so all identities
/// are identities in Q[b_1..b_m] / (degree > trunc).
class Poly {
public:
    using Mono = std::vector<std::uint8_t>;

    Poly() = default;
    Poly(int nvars, int trunc) : nvars_(nvars), trunc_(trunc) {}

    static Poly constant(int nvars, int trunc, const Rat& c);
    static Poly variable(int nvars, int trunc, int i);

    int nvars() const { return nvars_; }
    int trunc() const { return trunc_; }
    const std::map<Mono, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rat& c);
    Poly operator*(const Poly& o) const;
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Rat& c, Poly a) { return a *= c; }
    bool operator==(const Poly& o) const;

    Poly derivative(int var) const;
    Rat eval(const std::vector<Rat>& point) const;
    double eval_d(const std::vector<double>& point) const;
    Rat coefficient(const Mono& m) const;
    /// Max absolute coefficient.
    Rat max_coeff() const;

    void add_term(Mono m, const Rat& c);
    /// Monomial pretty-printer "b1^2 b2"; the constant monomial is "1".
    static std::string mono_name(const Mono& m, const std::string& stem = "b");

private:
    int nvars_ = 0;
    int trunc_ = 0;
    std::map<Mono, Rat> terms_;
};

/// Element with polynomial coefficients (the symbolic base point).
struct PolyElement {
    SpacePtr space;
    std::map<std::size_t, Poly> coeffs;

    bool is_zero() const {
        for (auto& [i, p] : coeffs)
            if (!p.is_zero()) return false;
        return true;
    }
};

/// Evaluation of a multilinear map on polynomial-coefficient arguments.
/// Koszul signs are computed from the basis degrees exactly as for plain
/// elements (polynomial coefficients are even).
std::map<std::size_t, Poly> apply_poly(const GradedMultilinearMap& f,
                                       const std::vector<std::map<std::size_t, Poly>>& args);

}  // namespace linfty
