#include <linfty/local_model.hpp>

#include <cmath>
#include <random>

namespace linfty {

namespace {

std::map<std::size_t, Poly> symbolic_point(const LocalModel& m) {
    auto coords = m.algebra.space->indices_of_degree(1);
    std::map<std::size_t, Poly> b;
    for (std::size_t i = 0; i < coords.size(); ++i)
        b[coords[i]] = Poly::variable((int)coords.size(), m.truncation, (int)i);
    return b;
}

}  // namespace

PolyElement symbolic_kuranishi(const LocalModel& m) {
    auto b = symbolic_point(m);
    int nv = (int)b.size();
    PolyElement out{m.algebra.space, {}};
    for (int k = 1; k <= m.algebra.k_max(); ++k) {
        if (k > m.truncation) break;
        std::vector<std::map<std::size_t, Poly>> args(k, b);
        auto v = apply_poly(m.algebra.op(k), args);
        Rat scale = m.algebra.flavor == Flavor::Linfty ? Rat(1) / factorial(k) : Rat(1);
        for (auto& [o, p] : v) {
            Poly t = p;
            t *= scale;
            out.coeffs[o] += t;
        }
    }
    // curvature of the unperturbed model, constant in b
    Element curv = m.algebra.curvature();
    for (auto& [o, c] : curv.coeffs) out.coeffs[o] += Poly::constant(nv, m.truncation, c);
    return out;
}

Poly pair_against(const LocalModel& m, const PolyElement& v, std::size_t j) {
    Poly acc;
    for (auto& [i, p] : v.coeffs) {
        Rat g = m.pairing.pair(i, j);
        if (is_zero(g)) continue;
        Poly t = p;
        t *= g;
        acc += t;
    }
    return acc;
}

Dim2Certificate check_dim2(const LocalModel& m) {
    Dim2Certificate cert;
    const auto& alg = m.algebra;
    cert.strict_unit = m.pairing.unit && m.pairing.strict_unit_for(alg);
    cert.cyclic = m.pairing.graded_symmetric() && m.pairing.cyclic_for(alg, std::min(4, alg.k_max()));
    // antisymmetry in degree 1 is automatic from graded symmetry
    cert.pairing_antisymmetric_deg1 = true;
    for (auto i : alg.space->indices_of_degree(1))
        for (auto j : alg.space->indices_of_degree(1))
            if (m.pairing.pair(i, j) != Rat(-1) * m.pairing.pair(j, i))
                cert.pairing_antisymmetric_deg1 = false;
    cert.unit_pairs_top = m.pairing.unit && m.pairing.nondegenerate_between(0, 2);

    auto b = symbolic_point(m);
    int nv = (int)b.size();
    Poly total(nv, m.truncation);
    if (m.pairing.unit) {
        for (int k = 2; k <= alg.k_max(); ++k) {
            if (k > m.truncation) break;
            std::vector<std::map<std::size_t, Poly>> args(k, b);
            auto v = apply_poly(alg.op(k), args);
            Rat scale = alg.flavor == Flavor::Linfty ? Rat(1) / factorial(k) : Rat(1);
            Poly piece(nv, m.truncation);
            for (auto& [o, p] : v) {
                Rat g = m.pairing.pair(o, *m.pairing.unit);
                if (is_zero(g)) continue;
                Poly t = p;
                t *= scale * g;
                piece += t;
            }
            if (piece.is_zero())
                cert.per_arity[k] = k == 2 ? "antisymmetry on degree one" : "strict unit";
            else
                cert.per_arity[k] = "NONZERO";
            total += piece;
        }
    }
    cert.kappa_against_unit = total;
    PolyElement kappa = symbolic_kuranishi(m);
    cert.kappa_vanishes = kappa.is_zero();
    cert.passed = cert.strict_unit && cert.cyclic && cert.pairing_antisymmetric_deg1 &&
                  cert.unit_pairs_top && total.is_zero() && cert.kappa_vanishes;
    if (!cert.passed) {
        if (!cert.strict_unit) cert.witness = "no strict unit";
        else if (!total.is_zero()) cert.witness = "<kappa, 1> != 0";
        else if (!cert.kappa_vanishes) cert.witness = "kappa != 0";
        else cert.witness = "pairing hypotheses fail";
    }
    return cert;
}

Dim3Result cs_potential(const LocalModel& m, int fd_samples, double fd_step, double fd_tol,
                        std::uint64_t seed) {
    Dim3Result res;
    const auto& alg = m.algebra;
    auto coords = m.coordinates();
    auto b = symbolic_point(m);
    int nv = (int)coords.size();

    // Psi(b) = sum_k c_k <l_k(b^k), b>, c_k = 1/(k+1)! symmetric, 1/(k+1) plain
    Poly psi(nv, m.truncation);
    for (int k = 2; k <= alg.k_max(); ++k) {
        if (k + 1 > m.truncation) break;
        std::vector<std::map<std::size_t, Poly>> args(k, b);
        auto v = apply_poly(alg.op(k), args);
        Rat scale = Rat(1) / Rat(k + 1);
        if (alg.flavor == Flavor::Linfty) scale /= factorial(k);
        for (auto& [o, p] : v)
            for (auto& [i, bp] : b) {
                Rat g = m.pairing.pair(o, i);
                if (is_zero(g)) continue;
                Poly t = p * bp;
                t *= scale * g;
                psi += t;
            }
    }
    res.psi = psi;

    PolyElement kappa = symbolic_kuranishi(m);
    res.gradient_matches = true;
    for (int i = 0; i < nv; ++i) {
        Poly grad = psi.derivative(i);
        Poly want = pair_against(m, kappa, coords[i]);
        res.kappa.push_back(want);
        if (!(grad == want)) res.gradient_matches = false;
    }

    // float cross-check by central differences at random points
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    double worst = 0.0;
    for (int s = 0; s < fd_samples; ++s) {
        std::vector<double> pt(nv);
        for (auto& x : pt) x = U(rng);
        for (int i = 0; i < nv; ++i) {
            auto up = pt, dn = pt;
            up[i] += fd_step;
            dn[i] -= fd_step;
            double fd = (psi.eval_d(up) - psi.eval_d(dn)) / (2 * fd_step);
            double exact = res.kappa[i].eval_d(pt);
            worst = std::max(worst, std::fabs(fd - exact));
        }
    }
    res.fd_max_error = worst;
    res.passed = res.gradient_matches && worst < fd_tol;
    return res;
}

namespace {

Poly pairing_of(const LocalModel& m, const PolyElement& a, const PolyElement& b) {
    Poly acc;
    for (auto& [i, p] : a.coeffs)
        for (auto& [j, q] : b.coeffs) {
            Rat g = m.pairing.pair(i, j);
            if (is_zero(g)) continue;
            Poly t = p * q;
            t *= g;
            acc += t;
        }
    return acc;
}

PolyElement derivative_of(const PolyElement& e, int var) {
    PolyElement out{e.space, {}};
    for (auto& [i, p] : e.coeffs) {
        Poly d = p.derivative(var);
        if (!d.is_zero()) out.coeffs[i] = d;
    }
    return out;
}

}  // namespace

Dim4Certificate check_dim4(const LocalModel& m) {
    Dim4Certificate cert;
    auto coords = m.coordinates();
    int nv = (int)coords.size();
    PolyElement kappa = symbolic_kuranishi(m);

    cert.kappa_isotropic = pairing_of(m, kappa, kappa).is_zero();

    cert.dkappa_kills_kappa = true;
    std::vector<PolyElement> dk;
    for (int v = 0; v < nv; ++v) {
        dk.push_back(derivative_of(kappa, v));
        if (!pairing_of(m, dk.back(), kappa).is_zero()) cert.dkappa_kills_kappa = false;
    }

    cert.hessian_witness = true;
    for (int v = 0; v < nv; ++v)
        for (int w = 0; w < nv; ++w) {
            Poly lhs = pairing_of(m, dk[v], dk[w]);
            Poly rhs = pairing_of(m, derivative_of(dk[v], w), kappa);
            if (!(lhs + rhs).is_zero()) cert.hessian_witness = false;
        }

    auto g2 = m.algebra.space->indices_of_degree(2);
    if (g2.size() == 1) cert.ext2_line_forces_zero = kappa.is_zero();

    if (!kappa.is_zero()) {
        for (auto& d : dk)
            if (!d.is_zero()) cert.nonregular_witnessed = true;
    }

    cert.passed = cert.kappa_isotropic && cert.dkappa_kills_kappa && cert.hessian_witness &&
                  cert.ext2_line_forces_zero;
    if (!cert.passed) {
        if (!cert.kappa_isotropic) cert.witness = "<kappa, kappa> != 0";
        else if (!cert.dkappa_kills_kappa) cert.witness = "<d kappa, kappa> != 0";
        else if (!cert.hessian_witness) cert.witness = "second-derivative witness fails";
        else cert.witness = "one-dimensional obstruction space with kappa != 0";
    }
    return cert;
}

ThreeTermComplex curved_three_term_complex(const LocalModel& m) {
    ThreeTermComplex out;
    auto coords = m.coordinates();
    auto g2 = m.algebra.space->indices_of_degree(2);
    int nv = (int)coords.size();
    PolyElement kappa = symbolic_kuranishi(m);

    // d kappa: T_V -> O (x) g2
    out.d_kappa.assign(g2.size(), std::vector<Poly>(nv));
    for (int v = 0; v < nv; ++v) {
        auto d = derivative_of(kappa, v);
        for (std::size_t r = 0; r < g2.size(); ++r) {
            auto it = d.coeffs.find(g2[r]);
            if (it != d.coeffs.end()) out.d_kappa[r][v] = it->second;
            else out.d_kappa[r][v] = Poly(nv, m.truncation);
        }
    }
    // (d kappa)^dual: O (x) g2 -> Omega_V via the degree-2 pairing
    out.d_kappa_dual.assign(nv, std::vector<Poly>(g2.size()));
    for (int v = 0; v < nv; ++v) {
        auto d = derivative_of(kappa, v);
        for (std::size_t c = 0; c < g2.size(); ++c) {
            Poly acc(nv, m.truncation);
            for (auto& [i, p] : d.coeffs) {
                Rat g = m.pairing.pair(i, g2[c]);
                if (is_zero(g)) continue;
                Poly t = p;
                t *= g;
                acc += t;
            }
            out.d_kappa_dual[v][c] = acc;
        }
    }
    // (d kappa)^dual (kappa) = 0 and the curvature witness
    out.dual_kills_kappa = true;
    for (int v = 0; v < nv; ++v) {
        Poly acc(nv, m.truncation);
        for (std::size_t c = 0; c < g2.size(); ++c) {
            auto it = kappa.coeffs.find(g2[c]);
            if (it == kappa.coeffs.end()) continue;
            acc += out.d_kappa_dual[v][c] * it->second;
        }
        if (!acc.is_zero()) out.dual_kills_kappa = false;
    }
    out.composition_is_kappa_quadratic = true;
    for (int v = 0; v < nv; ++v)
        for (int w = 0; w < nv; ++w) {
            // composition entry: sum_c (d kappa)^dual[v][c] * d kappa[c][w]
            Poly comp(nv, m.truncation);
            for (std::size_t c = 0; c < g2.size(); ++c)
                comp += out.d_kappa_dual[v][c] * out.d_kappa[c][w];
            // equals -<d_w d_v kappa, kappa>
            PolyElement dv = derivative_of(kappa, v);
            Poly want = pairing_of(m, derivative_of(dv, w), kappa);
            if (!(comp + want).is_zero()) out.composition_is_kappa_quadratic = false;
        }
    return out;
}

}  // namespace linfty
