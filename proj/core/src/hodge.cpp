#include <linfty/hodge.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace linfty {

namespace {

RatMatrix degree_block(const GradedMultilinearMap& f, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols) {
    RatMatrix m(rows.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows.size(); ++r) m.at(r, c) = f.coeff({cols[c]}, rows[r]);
    return m;
}

RatMatrix gram_block(const GradedVectorSpace& sp, const std::vector<std::size_t>& idx) {
    RatMatrix g(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) g.at(r, c) = sp.gram(idx[r], idx[c]);
    return g;
}

void add_block(GradedMultilinearMap& f, const RatMatrix& m, const std::vector<std::size_t>& rows,
               const std::vector<std::size_t>& cols) {
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (!is_zero(m.at(r, c))) f.add({cols[c]}, rows[r], m.at(r, c));
}

}  // namespace

void RetractionData::validate(const GradedMultilinearMap& m1) const {
    if (!(compose(p, i, 1) == GradedMultilinearMap::identity(cohomology)))
        throw std::invalid_argument("retraction: p i != id");
    auto lhs = compose(i, p, 1);
    auto rhs = GradedMultilinearMap::identity(ambient) + compose(m1, h, 1) + compose(h, m1, 1);
    if (!(lhs == rhs)) throw std::invalid_argument("retraction: i p != id + m1 h + h m1");
    if (!compose(h, h, 1).is_zero()) throw std::invalid_argument("retraction: h h != 0");
    if (!compose(p, h, 1).is_zero()) throw std::invalid_argument("retraction: p h != 0");
    if (!compose(h, i, 1).is_zero()) throw std::invalid_argument("retraction: h i != 0");
}

GradedMultilinearMap m1_adjoint(const DgAlgebra& alg) {
    const auto& sp = *alg.space;
    if (!sp.has_inner_product()) throw std::invalid_argument("adjoint needs an inner product");
    GradedMultilinearMap adj(alg.space, alg.space, 1, -1);
    for (int d : sp.degrees_present()) {
        auto lo = sp.indices_of_degree(d);
        auto hi = sp.indices_of_degree(d + 1);
        if (lo.empty() || hi.empty()) continue;
        RatMatrix M = degree_block(alg.m1, hi, lo);  // d -> d+1
        RatMatrix Glo = gram_block(sp, lo), Ghi = gram_block(sp, hi);
        auto Glo_inv = Glo.inverse();
        if (!Glo_inv) throw std::invalid_argument("degenerate inner product");
        RatMatrix A = (*Glo_inv) * M.transpose() * Ghi;  // d+1 -> d
        add_block(adj, A, lo, hi);
    }
    return adj;
}

GradedMultilinearMap laplacian(const DgAlgebra& alg) {
    auto adj = m1_adjoint(alg);
    return compose(alg.m1, adj, 1) + compose(adj, alg.m1, 1);
}

RetractionData retraction_from_inner_product(const DgAlgebra& alg) {
    const auto& sp = *alg.space;
    auto delta = laplacian(alg);
    auto adj = m1_adjoint(alg);

    // kernel basis -> cohomology space
    std::vector<BasisElement> hbasis;
    std::map<int, RatMatrix> kernels;
    for (int d : sp.degrees_present()) {
        auto idx = sp.indices_of_degree(d);
        RatMatrix D = degree_block(delta, idx, idx);
        RatMatrix K = D.kernel_basis();
        kernels[d] = K;
        for (std::size_t j = 0; j < K.cols(); ++j)
            hbasis.push_back({"h" + std::to_string(d) + "_" + std::to_string(j), d});
    }
    SpacePtr H = make_space(hbasis);

    GradedMultilinearMap i(H, alg.space, 1, 0);
    GradedMultilinearMap p(alg.space, H, 1, 0);
    GradedMultilinearMap green(alg.space, alg.space, 1, 0);

    std::size_t hoff = 0;
    for (int d : sp.degrees_present()) {
        auto idx = sp.indices_of_degree(d);
        auto& K = kernels[d];
        RatMatrix D = degree_block(delta, idx, idx);
        RatMatrix G = gram_block(sp, idx);

        // inclusion
        for (std::size_t j = 0; j < K.cols(); ++j)
            for (std::size_t r = 0; r < idx.size(); ++r)
                if (!is_zero(K.at(r, j))) i.add({H->index_of("h" + std::to_string(d) + "_" + std::to_string(j))},
                                                idx[r], K.at(r, j));
        // orthogonal projection: P = K (K^T G K)^{-1} K^T G
        if (K.cols() > 0) {
            RatMatrix KtG = K.transpose() * G;
            auto nrm = (KtG * K).inverse();
            if (!nrm) throw std::logic_error("kernel gram block not invertible");
            RatMatrix P = (*nrm) * KtG;  // H-coords of the projection
            for (std::size_t j = 0; j < K.cols(); ++j)
                for (std::size_t c = 0; c < idx.size(); ++c)
                    if (!is_zero(P.at(j, c)))
                        p.add({idx[c]}, H->index_of("h" + std::to_string(d) + "_" + std::to_string(j)),
                              P.at(j, c));
        }
        // Green operator: zero on ker Delta, (Delta|_im)^{-1} on im Delta.
        // Write e_c = k + Delta w and solve Delta x = e_c - k with x in im.
        RatMatrix C = D.column_space_basis();
        if (C.cols() > 0) {
            RatMatrix DC = D * C;
            // basis change [K | C] is invertible
            RatMatrix M(idx.size(), K.cols() + C.cols());
            for (std::size_t r = 0; r < idx.size(); ++r) {
                for (std::size_t j = 0; j < K.cols(); ++j) M.at(r, j) = K.at(r, j);
                for (std::size_t j = 0; j < C.cols(); ++j) M.at(r, K.cols() + j) = C.at(r, j);
            }
            auto Minv = M.inverse();
            if (!Minv) throw std::logic_error("ker + im decomposition failed");
            for (std::size_t c = 0; c < idx.size(); ++c) {
                // im-part coefficients of e_c
                std::vector<Rat> e(idx.size(), Rat(0));
                e[c] = Rat(1);
                auto z = Minv->apply(e);
                std::vector<Rat> im_part(idx.size(), Rat(0));
                for (std::size_t j = 0; j < C.cols(); ++j)
                    for (std::size_t r = 0; r < idx.size(); ++r)
                        im_part[r] += C.at(r, j) * z[K.cols() + j];
                // solve DC w = im_part, then x = C w
                RatMatrix aug = DC;
                auto w = aug.solve(im_part);
                if (!w) throw std::logic_error("green solve failed");
                for (std::size_t r = 0; r < idx.size(); ++r) {
                    Rat x(0);
                    for (std::size_t j = 0; j < C.cols(); ++j) x += C.at(r, j) * (*w)[j];
                    if (!is_zero(x)) green.add({idx[c]}, idx[r], x);
                }
            }
        }
        hoff += K.cols();
    }
    (void)hoff;

    RetractionData r{alg.space, H, std::move(i), std::move(p),
                     Rat(-1) * compose(adj, green, 1)};
    r.validate(alg.m1);
    return r;
}

HeatFamily::HeatFamily(const DgAlgebra& alg, const RetractionData& r) : space_(alg.space) {
    auto to_float = [](const GradedMultilinearMap& m) {
        FloatMultiMap f(m.source(), m.target(), m.arity(), m.degree());
        for (auto& [key, row] : m.entries())
            for (auto& [o, c] : row) f.add(key, o, to_double(c));
        return f;
    };
    m1f_ = to_float(alg.m1);
    m2f_ = to_float(alg.m2);
    m1_adj_f_ = to_float(m1_adjoint(alg));
    K_inf_ = to_float(compose(r.i, r.p, 1));
    h_inf_ = to_float(r.h);

    auto delta = laplacian(alg);
    const auto& sp = *alg.space;
    for (int d : sp.degrees_present()) {
        auto idx = sp.indices_of_degree(d);
        std::size_t n = idx.size();
        Eigen::MatrixXd D(n, n), G(n, n);
        for (std::size_t rr = 0; rr < n; ++rr)
            for (std::size_t c = 0; c < n; ++c) {
                D(rr, c) = to_double(delta.coeff({idx[c]}, idx[rr]));
                G(rr, c) = to_double(sp.gram(idx[rr], idx[c]));
            }
        // Delta is G-selfadjoint: solve (G D) v = lambda G v, A = GD symmetric
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(G * D, G);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
        Eigen_ e;
        e.idx = idx;
        Eigen::MatrixXd V = es.eigenvectors();  // G-orthonormal columns
        Eigen::MatrixXd VtG = V.transpose() * G;
        for (std::size_t k = 0; k < n; ++k) {
            e.lambda.push_back(es.eigenvalues()(k));
            std::vector<double> col(n), row(n);
            for (std::size_t rr = 0; rr < n; ++rr) {
                col[rr] = V(rr, k);
                row[rr] = VtG(k, rr);
            }
            e.vectors.push_back(std::move(col));
            e.vt_g.push_back(std::move(row));
        }
        decomp_[d] = std::move(e);
    }
}

FloatMultiMap HeatFamily::assemble(const std::function<double(double)>& f) const {
    FloatMultiMap out(space_, space_, 1, 0);
    for (auto& [d, e] : decomp_) {
        std::size_t n = e.idx.size();
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t r = 0; r < n; ++r) {
                double v = 0;
                for (std::size_t k = 0; k < n; ++k) v += e.vectors[k][r] * f(e.lambda[k]) * e.vt_g[k][c];
                if (v != 0.0) out.add({e.idx[c]}, e.idx[r], v);
            }
        }
    }
    return out;
}

FloatMultiMap HeatFamily::K(double t) const {
    if (t < 0) throw std::invalid_argument("heat time must be nonnegative");
    return assemble([t](double l) { return std::exp(-t * l); });
}

FloatMultiMap HeatFamily::h(double t) const {
    if (t < 0) throw std::invalid_argument("heat time must be nonnegative");
    auto integral = assemble([t](double l) {
        return std::fabs(l) < 1e-12 ? t : (1.0 - std::exp(-t * l)) / l;
    });
    return -1.0 * compose(m1_adj_f_, integral, 1);
}

FloatMultiMap HeatFamily::flow(double t) const {
    auto kt = K(t);
    return -1.0 * compose(m1_adj_f_, kt, 1);
}

FloatMultiMap HeatFamily::K_inf() const { return K_inf_; }
FloatMultiMap HeatFamily::h_inf() const { return h_inf_; }

}  // namespace linfty
