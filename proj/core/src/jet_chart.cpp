#include <linfty/jet_chart.hpp>
#include <linfty/rational_linalg.hpp>

#include <bit>
#include <functional>
#include <stdexcept>

namespace linfty {

bool JetForm::is_zero() const {
    for (auto& [mask, e] : parts)
        if (!e.is_zero()) return false;
    return true;
}

JetForm& JetForm::operator+=(const JetForm& o) {
    if (!ring) ring = o.ring;
    for (auto& [mask, e] : o.parts) {
        auto it = parts.try_emplace(mask, CdgaElem(ring)).first;
        it->second += e;
        if (it->second.is_zero()) parts.erase(it);
    }
    return *this;
}

JetForm& JetForm::operator-=(const JetForm& o) {
    if (!ring) ring = o.ring;
    for (auto& [mask, e] : o.parts) {
        auto it = parts.try_emplace(mask, CdgaElem(ring)).first;
        it->second -= e;
        if (it->second.is_zero()) parts.erase(it);
    }
    return *this;
}

bool JetForm::operator==(const JetForm& o) const {
    JetForm d = *this;
    d -= o;
    return d.is_zero();
}

namespace {

int mask_weight(std::uint32_t mask) { return std::popcount(mask); }

// sign of dt_i wedged onto the left of dt_mask; 0 when already present
int wedge_sign(std::uint32_t mask, int i) {
    if (mask & (1u << i)) return 0;
    int below = std::popcount(mask & ((1u << i) - 1));
    return (below & 1) ? -1 : 1;
}

}  // namespace

JetChart::JetChart(const HomotopyAlgebra& fiber, int N) : fiber_(fiber), N_(N) {
    if (fiber.flavor != Flavor::Linfty)
        throw std::invalid_argument("jet charts take the symmetric flavor");
    coord_basis_ = fiber.space->indices_of_degree(1);
    m_ = (int)coord_basis_.size();
    if (m_ == 0) throw std::invalid_argument("jet chart needs a nonzero degree-1 part");
    for (std::size_t i = 0; i < fiber.space->dim(); ++i)
        if (fiber.space->degree(i) >= 2) higher_.push_back(i);
    for (std::size_t i = 0; i < fiber.space->dim(); ++i)
        if (fiber.space->degree(i) < 1)
            throw std::invalid_argument("fiber must be concentrated in degrees >= 1");

    std::vector<CdgaGen> gens;
    for (int i = 0; i < m_; ++i)
        gens.push_back({"t" + std::to_string(i + 1), 0});
    for (int i = 0; i < m_; ++i)
        gens.push_back({"x" + std::to_string(i + 1), 0});
    for (auto j : higher_)
        gens.push_back({"w_" + fiber.space->at(j).name, 1 - fiber.space->degree(j)});
    ring_ = std::make_shared<Cdga>(std::move(gens), N);

    // symbolic base point b(t) = sum t_i e_i with polynomial coefficients
    std::map<std::size_t, Poly> b;
    for (int i = 0; i < m_; ++i) b[coord_basis_[i]] = Poly::variable(m_, N, i);

    // fiber index -> generator index
    std::map<std::size_t, std::size_t> dual_gen;
    for (int i = 0; i < m_; ++i) dual_gen[coord_basis_[i]] = x_gen(i);
    for (std::size_t j = 0; j < higher_.size(); ++j) dual_gen[higher_[j]] = xi_gen((int)j);

    // Q on generators: Q(t) = 0, Q(dual of e_a) = sum over sorted fiber
    // tuples B of (1/prod mult!) P^a_B(t) z^B with P the perturbed bracket
    q_image_.assign(ring_->ngens(), CdgaElem(ring_));
    std::vector<std::size_t> all_fiber;
    for (auto& [fi, gi] : dual_gen) all_fiber.push_back(fi);

    for (auto& [a, ga] : dual_gen) {
        CdgaElem img(ring_);
        for (int k = 0; k <= fiber.k_max(); ++k) {
            // sorted tuples of fiber indices with repetition, length k
            std::vector<std::size_t> tup(k);
            std::function<void(int, std::size_t)> rec = [&](int pos, std::size_t from) {
                if (pos == k) {
                    // multiplicity normalization 1 / prod mult!
                    Rat norm(1);
                    std::size_t run = 1;
                    for (int q = 1; q < k; ++q) {
                        if (tup[q] == tup[q - 1]) ++run;
                        else run = 1;
                        norm *= Rat((long)run);
                    }
                    // coefficient polynomial: sum_j 1/j! l_{k+j}(b^j, tuple)
                    Poly pa(m_, N_);
                    for (int j = 0; k + j <= fiber.k_max(); ++j) {
                        if (k + j == 0) continue;
                        std::vector<std::map<std::size_t, Poly>> args(j, b);
                        for (int q = 0; q < k; ++q)
                            args.push_back({{tup[q], Poly::constant(m_, N_, Rat(1))}});
                        auto v = apply_poly(fiber.op(k + j), args);
                        auto it = v.find(a);
                        if (it == v.end()) continue;
                        Poly t = it->second;
                        t *= Rat(1) / factorial(j);
                        pa += t;
                    }
                    // constant curvature feeds the k = 0 slot
                    if (k == 0 && fiber.curved()) {
                        Rat c = fiber.curvature().coeff(a);
                        if (!is_zero(c)) pa += Poly::constant(m_, N_, c);
                    }
                    if (pa.is_zero()) return;
                    // emit monomials t^gamma z^tup
                    for (auto& [mono, coeff] : pa.terms()) {
                        Cdga::Mono cm(ring_->ngens(), 0);
                        for (int i = 0; i < m_; ++i) cm[t_gen(i)] = mono[i];
                        bool dead = false;
                        for (int q = 0; q < k; ++q) {
                            std::size_t g = dual_gen[tup[q]];
                            if ((ring_->gen(g).degree & 1) && cm[g]) { dead = true; break; }
                            cm[g]++;
                        }
                        if (dead) continue;
                        img.add_term(std::move(cm), coeff / norm);
                    }
                    return;
                }
                for (std::size_t u = from; u < all_fiber.size(); ++u) {
                    tup[pos] = all_fiber[u];
                    rec(pos + 1, u);
                }
            };
            rec(0, 0);
        }
        q_image_[ga] = std::move(img);
    }
    verify();
}

CdgaElem JetChart::Q(const CdgaElem& e) const { return e.derive(q_image_); }

JetForm JetChart::Q(const JetForm& f) const {
    JetForm out{ring_, {}};
    for (auto& [mask, e] : f.parts) {
        CdgaElem qe = e.derive(q_image_, mask_weight(mask));
        if (mask_weight(mask) & 1) qe *= Rat(-1);  // Q passes the dt factors
        if (!qe.is_zero()) {
            auto it = out.parts.try_emplace(mask, CdgaElem(ring_)).first;
            it->second += qe;
            if (it->second.is_zero()) out.parts.erase(it);
        }
    }
    return out;
}

JetForm JetChart::D(const CdgaElem& e) const {
    // strike one t (coefficient derivative) or one x (tau part); with the
    // t and x generators leading the canonical order no signs arise,
    // and the new dt moves to the mask directly
    JetForm out{ring_, {}};
    for (int i = 0; i < m_; ++i) {
        std::vector<CdgaElem> im(ring_->ngens(), CdgaElem(ring_));
        im[t_gen(i)] = CdgaElem::one(ring_);
        im[x_gen(i)] = CdgaElem::one(ring_);
        CdgaElem di = e.derive(im, 1);
        if (di.is_zero()) continue;
        out.parts[1u << i] = std::move(di);
    }
    return out;
}

JetForm JetChart::D(const JetForm& f) const {
    JetForm out{ring_, {}};
    for (auto& [mask, e] : f.parts) {
        int sign = (mask_weight(mask) & 1) ? -1 : 1;
        for (int i = 0; i < m_; ++i) {
            int ws = wedge_sign(mask, i);
            if (ws == 0) continue;
            std::vector<CdgaElem> im(ring_->ngens(), CdgaElem(ring_));
            im[t_gen(i)] = CdgaElem::one(ring_);
            im[x_gen(i)] = CdgaElem::one(ring_);
            CdgaElem di = e.derive(im, mask_weight(mask) + 1);
            if (di.is_zero()) continue;
            di *= Rat(sign * ws);
            std::uint32_t nm = mask | (1u << i);
            auto it = out.parts.try_emplace(nm, CdgaElem(ring_)).first;
            it->second += di;
            if (it->second.is_zero()) out.parts.erase(it);
        }
    }
    return out;
}

CdgaElem JetChart::Qbar(const CdgaElem& e) const {
    CdgaElem q = Q(e);
    CdgaElem out(ring_);
    for (auto& [m, c] : q.terms()) {
        bool has_x = false;
        for (int i = 0; i < m_; ++i)
            if (m[x_gen(i)]) has_x = true;
        if (!has_x) out.add_term(m, c);
    }
    return out;
}

void JetChart::verify() const {
    for (std::size_t g = 0; g < ring_->ngens(); ++g) {
        CdgaElem zg = CdgaElem::generator(ring_, g);
        if (!Q(Q(zg)).is_zero())
            throw std::logic_error("Q^2 != 0 on generator " + ring_->gen(g).name);
        JetForm f{ring_, {{0u, zg}}};
        if (!D(D(f)).is_zero())
            throw std::logic_error("D^2 != 0 on generator " + ring_->gen(g).name);
        JetForm dq = D(JetForm{ring_, {{0u, Q(zg)}}});
        JetForm qd = Q(D(f));
        dq += qd;
        if (!dq.is_zero())
            throw std::logic_error("[D,Q] != 0 on generator " + ring_->gen(g).name);
    }
    for (int i = 0; i < m_; ++i)
        if (!Q(CdgaElem::generator(ring_, x_gen(i))).is_zero())
            throw std::logic_error("Q does not vanish on the degree-0 fiber duals");
    // a couple of products exercise the Leibniz bookkeeping
    if (ring_->ngens() >= 3) {
        CdgaElem p = CdgaElem::generator(ring_, 0).mul(CdgaElem::generator(ring_, ring_->ngens() - 1));
        if (!Q(Q(p)).is_zero()) throw std::logic_error("Q^2 != 0 on a product");
        JetForm f{ring_, {{0u, p}}};
        JetForm dq = D(JetForm{ring_, {{0u, Q(p)}}});
        dq += Q(D(f));
        if (!dq.is_zero()) throw std::logic_error("[D,Q] != 0 on a product");
    }
}

JetChart build_jet_chart(const HomotopyAlgebra& g, int N) { return JetChart(g, N); }

// ---- Koszul contraction ---------------------------------------------------

namespace {

int xdt_weight(const JetChart& c, std::uint32_t mask, const Cdga::Mono& m) {
    int w = mask_weight(mask);
    for (int i = 0; i < c.coords(); ++i) w += m[c.x_gen(i)];
    return w;
}

}  // namespace

JetForm koszul_tau(const JetChart& c, const JetForm& f) {
    // derivation x_i -> dt_i, everything else untouched
    JetForm out{c.ring(), {}};
    for (auto& [mask, e] : f.parts) {
        int sign = (mask_weight(mask) & 1) ? -1 : 1;
        for (int i = 0; i < c.coords(); ++i) {
            int ws = wedge_sign(mask, i);
            if (ws == 0) continue;
            std::vector<CdgaElem> im(c.ring()->ngens(), CdgaElem(c.ring()));
            im[c.x_gen(i)] = CdgaElem::one(c.ring());
            CdgaElem di = e.derive(im, mask_weight(mask) + 1);
            if (di.is_zero()) continue;
            di *= Rat(sign * ws);
            std::uint32_t nm = mask | (1u << i);
            auto it = out.parts.try_emplace(nm, CdgaElem(c.ring())).first;
            it->second += di;
            if (it->second.is_zero()) out.parts.erase(it);
        }
    }
    return out;
}

JetForm koszul_h(const JetChart& c, const JetForm& f) {
    // h = -sigma / E with sigma: dt_i -> x_i and E the (x, dt)-count
    JetForm out{c.ring(), {}};
    for (auto& [mask, e] : f.parts) {
        for (int i = 0; i < c.coords(); ++i) {
            if (!(mask & (1u << i))) continue;
            // remove dt_i (it sits leftmost: crossing the earlier dt's)
            int below = std::popcount(mask & ((1u << i) - 1));
            int sign = (below & 1) ? -1 : 1;
            std::uint32_t nm = mask & ~(1u << i);
            for (auto& [mono, coeff] : e.terms()) {
                int E = xdt_weight(c, mask, mono);
                Cdga::Mono m2 = mono;
                m2[c.x_gen(i)]++;
                CdgaElem piece(c.ring());
                piece.add_term(std::move(m2), Rat(-sign) * coeff / Rat((long)E), mask_weight(nm));
                auto it = out.parts.try_emplace(nm, CdgaElem(c.ring())).first;
                it->second += piece;
                if (it->second.is_zero()) out.parts.erase(it);
            }
        }
    }
    return out;
}

JetForm koszul_eps(const JetChart& c, const JetForm& f) {
    JetForm out{c.ring(), {}};
    auto it = f.parts.find(0u);
    if (it == f.parts.end()) return out;
    CdgaElem kept(c.ring());
    for (auto& [m, coeff] : it->second.terms()) {
        bool pure = true;
        for (int i = 0; i < c.coords(); ++i)
            if (m[c.x_gen(i)]) pure = false;
        if (pure) kept.add_term(m, coeff);
    }
    if (!kept.is_zero()) out.parts[0u] = std::move(kept);
    return out;
}

// ---- derived-locus cohomology --------------------------------------------

namespace {

struct BarBasis {
    std::vector<Cdga::Mono> monos;                 // x-free monomials
    std::map<Cdga::Mono, std::size_t> index;
    std::map<int, std::vector<std::size_t>> by_degree;
};

BarBasis bar_basis(const JetChart& chart) {
    BarBasis b;
    const auto& ring = *chart.ring();
    std::function<void(std::size_t, Cdga::Mono&, int)> rec = [&](std::size_t g, Cdga::Mono& m,
                                                                 int weight) {
        if (g == ring.ngens()) {
            b.index[m] = b.monos.size();
            b.by_degree[ring.degree_of(m)].push_back(b.monos.size());
            b.monos.push_back(m);
            return;
        }
        bool is_x = false;
        for (int i = 0; i < chart.coords(); ++i)
            if (chart.x_gen(i) == g) is_x = true;
        int maxe = is_x ? 0 : ((ring.gen(g).degree & 1) ? 1 : ring.cap() - weight);
        for (int e = 0; e <= maxe && weight + e <= ring.cap(); ++e) {
            m[g] = (std::uint8_t)e;
            rec(g + 1, m, weight + e);
        }
        m[g] = 0;
    };
    Cdga::Mono m(ring.ngens(), 0);
    rec(0, m, 0);
    return b;
}

int t_degree(const JetChart& chart, const Cdga::Mono& m) {
    int d = 0;
    for (int i = 0; i < chart.coords(); ++i) d += m[chart.t_gen(i)];
    return d;
}

std::map<int, std::size_t> bar_cohomology_dims(const JetChart& chart, const BarBasis& basis,
                                               int lo, int hi,
                                               std::map<int, std::vector<std::size_t>>* filt) {
    std::map<int, std::size_t> dims;
    auto block = [&](int d) -> RatMatrix {
        auto itsrc = basis.by_degree.find(d);
        auto ittgt = basis.by_degree.find(d + 1);
        std::size_t nc = itsrc == basis.by_degree.end() ? 0 : itsrc->second.size();
        std::size_t nr = ittgt == basis.by_degree.end() ? 0 : ittgt->second.size();
        RatMatrix mtx(nr, nc);
        if (nc == 0 || nr == 0) return mtx;
        std::map<std::size_t, std::size_t> row_of;
        for (std::size_t r = 0; r < nr; ++r) row_of[ittgt->second[r]] = r;
        for (std::size_t c = 0; c < nc; ++c) {
            CdgaElem e(chart.ring());
            e.add_term(basis.monos[itsrc->second[c]], Rat(1));
            CdgaElem qe = chart.Qbar(e);
            for (auto& [m, coeff] : qe.terms()) {
                auto it = basis.index.find(m);
                if (it == basis.index.end()) continue;
                mtx.at(row_of.at(it->second), c) = coeff;
            }
        }
        return mtx;
    };
    for (int d = lo; d <= hi; ++d) {
        RatMatrix out = block(d);
        RatMatrix in = block(d - 1);
        std::size_t dim_d = basis.by_degree.count(d) ? basis.by_degree.at(d).size() : 0;
        std::size_t z = dim_d - out.rank();
        std::size_t bnd = in.rank();
        dims[d] = z - bnd;
        if (filt) {
            // cumulative filtration by t-degree: classes representable with
            // t-degree <= f, boundaries intersected with the same subspace
            std::vector<std::size_t> levels;
            static const std::vector<std::size_t> kEmpty;
            const std::vector<std::size_t>& idx =
                basis.by_degree.count(d) ? basis.by_degree.at(d) : kEmpty;
            for (int f = 0; f <= chart.N(); ++f) {
                std::vector<std::size_t> sub;
                for (std::size_t c = 0; c < idx.size(); ++c)
                    if (t_degree(chart, basis.monos[idx[c]]) <= f) sub.push_back(c);
                RatMatrix outs(out.rows(), sub.size());
                for (std::size_t c = 0; c < sub.size(); ++c)
                    for (std::size_t r = 0; r < out.rows(); ++r) outs.at(r, c) = out.at(r, sub[c]);
                std::size_t zf = sub.size() - outs.rank();
                // dim(im cap V_f) = dim im + dim V_f - dim(im + V_f)
                std::size_t dimU = in.rank();
                std::size_t dimW = sub.size();
                RatMatrix uw(dim_d, in.cols() + sub.size());
                for (std::size_t c = 0; c < in.cols(); ++c)
                    for (std::size_t r = 0; r < dim_d; ++r) uw.at(r, c) = in.at(r, c);
                for (std::size_t c = 0; c < sub.size(); ++c) uw.at(sub[c], in.cols() + c) = Rat(1);
                std::size_t bf = dimU + dimW - uw.rank();
                levels.push_back(zf >= bf ? zf - bf : 0);
            }
            (*filt)[d] = levels;
        }
    }
    return dims;
}

std::vector<Poly> kappa_polynomials(const HomotopyAlgebra& g, int N) {
    auto coords = g.space->indices_of_degree(1);
    std::map<std::size_t, Poly> b;
    for (std::size_t i = 0; i < coords.size(); ++i)
        b[coords[i]] = Poly::variable((int)coords.size(), N, (int)i);
    std::map<std::size_t, Poly> acc;
    for (int k = 1; k <= g.k_max(); ++k) {
        std::vector<std::map<std::size_t, Poly>> args(k, b);
        auto v = apply_poly(g.op(k), args);
        Rat scale = g.flavor == Flavor::Linfty ? Rat(1) / factorial(k) : Rat(1);
        for (auto& [o, p] : v) {
            Poly t = p;
            t *= scale;
            acc[o] += t;
        }
    }
    std::vector<Poly> out;
    for (std::size_t j = 0; j < g.space->dim(); ++j) {
        if (g.space->degree(j) < 2) continue;
        auto it = acc.find(j);
        out.push_back(it == acc.end() ? Poly((int)coords.size(), N) : it->second);
    }
    return out;
}

}  // namespace

CeCohomology ce_cohomology(const HomotopyAlgebra& g, int N, int window_lo, int window_hi,
                           bool require_stable) {
    CeCohomology out;
    JetChart chart(g, N);
    auto basis = bar_basis(chart);
    out.dims = bar_cohomology_dims(chart, basis, window_lo, window_hi, &out.dims_by_filtration);
    out.h0_relations = kappa_polynomials(g, N);
    out.h0_dim = out.dims.count(0) ? out.dims.at(0) : 0;

    // truncated dims grow with N on free summands; stability is judged on
    // the common filtration prefix (t-degree <= N - 1) in every window degree
    JetChart next(g, N + 1);
    auto nbasis = bar_basis(next);
    std::map<int, std::vector<std::size_t>> nfilt;
    bar_cohomology_dims(next, nbasis, window_lo, window_hi, &nfilt);
    out.stable = true;
    for (int d = window_lo; d <= window_hi; ++d) {
        auto& a = out.dims_by_filtration.at(d);
        auto& b = nfilt.at(d);
        for (int f = 0; f + 1 <= N && f < (int)a.size() && f < (int)b.size(); ++f)
            if (a[f] != b[f]) out.stable = false;
    }
    if (require_stable && !out.stable)
        throw std::runtime_error("increase N: cohomology window has not stabilized at truncation " +
                                 std::to_string(N));
    return out;
}

EnhancementCheck enhancement_check(const HomotopyAlgebra& g, int N,
                                   const std::vector<Poly>& ideal_generators) {
    EnhancementCheck res;
    // candidate ideal must equal the annihilator cut out by Qbar in degree 0
    auto kappa = kappa_polynomials(g, N);
    // both ideals truncated: span of generator * monomial, weight <= N
    auto coords = (int)g.space->indices_of_degree(1).size();
    std::vector<Poly::Mono> monos;
    {
        std::function<void(Poly::Mono&, int, int)> rec = [&](Poly::Mono& m, int pos, int left) {
            if (pos == coords) {
                monos.push_back(m);
                return;
            }
            for (int e = 0; e <= left; ++e) {
                m[pos] = (std::uint8_t)e;
                rec(m, pos + 1, left - e);
            }
            m[pos] = 0;
        };
        Poly::Mono m(coords, 0);
        rec(m, 0, N);
    }
    std::map<Poly::Mono, std::size_t> mono_index;
    for (std::size_t i = 0; i < monos.size(); ++i) mono_index[monos[i]] = i;
    auto span_matrix = [&](const std::vector<Poly>& gens) {
        std::vector<std::vector<Rat>> cols;
        for (auto& p : gens)
            for (auto& m : monos) {
                Poly shift = p;
                Poly monop(coords, N);
                monop.add_term(m, Rat(1));
                Poly prod = shift * monop;
                if (prod.is_zero()) continue;
                std::vector<Rat> col(monos.size(), Rat(0));
                for (auto& [mm, c] : prod.terms()) col[mono_index.at(mm)] = c;
                cols.push_back(std::move(col));
            }
        RatMatrix mtx(monos.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < monos.size(); ++r) mtx.at(r, c) = cols[c][r];
        return mtx;
    };
    RatMatrix A = span_matrix(kappa);
    RatMatrix B = span_matrix(ideal_generators);
    // equality of column spans: rank A = rank B = rank [A B]
    RatMatrix AB(monos.size(), A.cols() + B.cols());
    for (std::size_t c = 0; c < A.cols(); ++c)
        for (std::size_t r = 0; r < monos.size(); ++r) AB.at(r, c) = A.at(r, c);
    for (std::size_t c = 0; c < B.cols(); ++c)
        for (std::size_t r = 0; r < monos.size(); ++r) AB.at(r, A.cols() + c) = B.at(r, c);
    std::size_t ra = A.rank(), rb = B.rank(), rab = AB.rank();
    res.passed = (ra == rb) && (rb == rab);
    if (!res.passed) {
        res.witness = ra != rab ? "candidate ideal misses a relation" : "candidate ideal too large";
    }
    return res;
}

std::size_t bicomplex_h0_dim(const JetChart& chart) {
    // total complex of (Q, D): basis (mask, monomial), total degree = |mask| + ce degree
    const auto& ring = *chart.ring();
    struct Key {
        std::uint32_t mask;
        Cdga::Mono m;
        bool operator<(const Key& o) const { return mask != o.mask ? mask < o.mask : m < o.m; }
    };
    std::vector<Key> basis;
    std::map<Key, std::size_t> index;
    std::function<void(std::size_t, Cdga::Mono&, int)> rec = [&](std::size_t g, Cdga::Mono& m,
                                                                 int weight) {
        if (g == ring.ngens()) {
            for (std::uint32_t mask = 0; mask < (1u << chart.coords()); ++mask) {
                if (weight + std::popcount(mask) > ring.cap()) continue;
                Key k{mask, m};
                index[k] = basis.size();
                basis.push_back(k);
            }
            return;
        }
        int maxe = (ring.gen(g).degree & 1) ? 1 : ring.cap() - weight;
        for (int e = 0; e <= maxe && weight + e <= ring.cap(); ++e) {
            m[g] = (std::uint8_t)e;
            rec(g + 1, m, weight + e);
        }
        m[g] = 0;
    };
    Cdga::Mono m(ring.ngens(), 0);
    rec(0, m, 0);

    auto total_degree = [&](const Key& k) { return ring.degree_of(k.m) + std::popcount(k.mask); };
    std::map<int, std::vector<std::size_t>> by_deg;
    for (std::size_t i = 0; i < basis.size(); ++i) by_deg[total_degree(basis[i])].push_back(i);

    auto block = [&](int d) -> RatMatrix {
        auto src = by_deg.count(d) ? by_deg.at(d) : std::vector<std::size_t>{};
        auto tgt = by_deg.count(d + 1) ? by_deg.at(d + 1) : std::vector<std::size_t>{};
        std::map<std::size_t, std::size_t> row_of;
        for (std::size_t r = 0; r < tgt.size(); ++r) row_of[tgt[r]] = r;
        RatMatrix mtx(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            const Key& k = basis[src[c]];
            CdgaElem e(chart.ring());
            e.add_term(k.m, Rat(1));
            JetForm f{chart.ring(), {{k.mask, e}}};
            JetForm img = chart.Q(f);
            img += chart.D(f);
            for (auto& [mask2, el] : img.parts)
                for (auto& [m2, c2] : el.terms()) {
                    auto it = index.find(Key{mask2, m2});
                    if (it == index.end()) continue;
                    auto rt = row_of.find(it->second);
                    if (rt == row_of.end()) continue;
                    mtx.at(rt->second, c) += c2;
                }
        }
        return mtx;
    };
    RatMatrix out = block(0);
    RatMatrix in = block(-1);
    std::size_t dim0 = by_deg.count(0) ? by_deg.at(0).size() : 0;
    return dim0 - out.rank() - in.rank();
}

}  // namespace linfty
