#pragma once

#include <linfty/dg_algebra.hpp>

#include <functional>
#include <map>

namespace linfty {

/// Homotopy retraction (i, p, h) of a dg algebra onto its cohomology:
/// p o i = id_H, i o p = id + m1 h + h m1, and the side conditions
/// h o h = 0, p o h = 0, h o i = 0 (automatic for the metric construction).
struct RetractionData {
    SpacePtr ambient;
    SpacePtr cohomology;
    GradedMultilinearMap i;  // arity 1, degree 0
    GradedMultilinearMap p;  // arity 1, degree 0
    GradedMultilinearMap h;  // arity 1, degree -1

    /// All five identities, exactly; throws on the first violation.
    void validate(const GradedMultilinearMap& m1) const;
};

/// Exact adjoint of m1 with respect to the stored inner product.
GradedMultilinearMap m1_adjoint(const DgAlgebra& alg);

/// Delta = m1 m1* + m1* m1, symmetric positive semidefinite.
GradedMultilinearMap laplacian(const DgAlgebra& alg);

/// H = ker Delta, p = orthogonal projection, h = -m1* G with G the exact
/// pseudo-inverse of Delta on its image. Always succeeds at finite dimension.
RetractionData retraction_from_inner_product(const DgAlgebra& alg);

/// Float backend: K_t = e^{-t Delta} and h_t = int_0^t -m1* e^{-s Delta} ds
/// through a per-degree eigendecomposition. t = infinity is evaluated
/// symbolically (K = i p, h = the exact homotopy), not as a limit.
class HeatFamily {
public:
    HeatFamily(const DgAlgebra& alg, const RetractionData& r);

    FloatMultiMap K(double t) const;
    FloatMultiMap h(double t) const;
    /// -m1* e^{-t Delta}, the integrand of h_t.
    FloatMultiMap flow(double t) const;
    FloatMultiMap K_inf() const;
    FloatMultiMap h_inf() const;
    FloatMultiMap product() const { return m2f_; }
    FloatMultiMap differential() const { return m1f_; }
    SpacePtr space() const { return space_; }

private:
    SpacePtr space_;
    FloatMultiMap m1f_, m2f_, m1_adj_f_, K_inf_, h_inf_;
    // per basis pair: sum over eigenpairs, V diag(f(lambda)) V^T G
    struct Eigen_ {
        std::vector<double> lambda;
        // column-major eigenvectors per degree, with basis index lists
        std::vector<std::vector<double>> vectors;  // vectors[e][local]
        std::vector<std::size_t> idx;              // local -> global basis
        std::vector<std::vector<double>> vt_g;     // (V^T G)[e][local]
    };
    std::map<int, Eigen_> decomp_;

    FloatMultiMap assemble(const std::function<double(double)>& f) const;
};

}  // namespace linfty
