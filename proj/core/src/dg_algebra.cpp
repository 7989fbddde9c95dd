#include <linfty/dg_algebra.hpp>

#include <algorithm>
#include <stdexcept>

namespace linfty {

DgAlgebra::DgAlgebra(SpacePtr s, GradedMultilinearMap d, GradedMultilinearMap prod,
                     std::optional<std::size_t> u)
    : space(std::move(s)), m1(std::move(d)), m2(std::move(prod)), unit(u) {}

void DgAlgebra::validate() const {
    if (m1.arity() != 1 || m1.degree() != 1) throw std::invalid_argument("m1 must be arity 1 degree 1");
    if (m2.arity() != 2 || m2.degree() != 1) throw std::invalid_argument("m2 must be arity 2 degree 1");
    if (!compose(m1, m1, 1).is_zero()) throw std::invalid_argument("m1^2 != 0");
    auto leibniz = compose(m1, m2, 1) + compose(m2, m1, 1) + compose(m2, m1, 2);
    if (!leibniz.is_zero()) throw std::invalid_argument("Leibniz identity fails");
    auto assoc = compose(m2, m2, 1) + compose(m2, m2, 2);
    if (!assoc.is_zero()) throw std::invalid_argument("associativity fails");
    if (unit && !is_unital()) throw std::invalid_argument("declared unit is not a strict unit");
}

bool DgAlgebra::is_unital() const {
    if (!unit) return false;
    std::size_t e = *unit;
    if (space->degree(e) != 0) return false;
    if (!m1.apply_elements({Element::basis(space, e)}).is_zero()) return false;
    for (std::size_t a = 0; a < space->dim(); ++a) {
        // shifted convention: m2(e, a) = a, m2(a, e) = (-1)^{|a|} a
        Element left = m2.apply_elements({Element::basis(space, e), Element::basis(space, a)});
        Element want = Element::basis(space, a);
        if (!(left == want)) return false;
        Element right = m2.apply_elements({Element::basis(space, a), Element::basis(space, e)});
        Element want_r = want;
        if (space->degree(a) & 1) want_r *= Rat(-1);
        if (!(right == want_r)) return false;
    }
    return true;
}

DgAlgebra dg_algebra_from_classical(
    SpacePtr space,
    const std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>>& products,
    const std::map<std::string, std::map<std::string, Rat>>& differential,
    std::optional<std::string> unit_name) {
    GradedMultilinearMap m1(space, space, 1, 1);
    for (auto& [from, row] : differential)
        for (auto& [to, c] : row) m1.add({space->index_of(from)}, space->index_of(to), c);
    GradedMultilinearMap m2(space, space, 2, 1);
    for (auto& [pair, row] : products) {
        std::size_t a = space->index_of(pair.first);
        std::size_t b = space->index_of(pair.second);
        int sign = (space->degree(a) & 1) ? -1 : 1;  // decalage sign on the first slot
        for (auto& [to, c] : row) m2.add({a, b}, space->index_of(to), Rat(sign) * c);
    }
    std::optional<std::size_t> unit;
    if (unit_name) unit = space->index_of(*unit_name);
    DgAlgebra alg(space, std::move(m1), std::move(m2), unit);
    alg.validate();
    return alg;
}

DgAlgebra conjugate(const DgAlgebra& a, const GradedMultilinearMap& phi) {
    if (phi.arity() != 1 || phi.degree() != 0) throw std::invalid_argument("conjugate: phi must be arity 1, degree 0");
    // invert phi degreewise
    const auto& sp = *a.space;
    GradedMultilinearMap inv(a.space, a.space, 1, 0);
    for (int d : sp.degrees_present()) {
        auto idx = sp.indices_of_degree(d);
        RatMatrix block(idx.size(), idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c) block.at(r, c) = phi.coeff({idx[c]}, idx[r]);
        auto binv = block.inverse();
        if (!binv) throw std::invalid_argument("conjugate: phi not invertible in degree " + std::to_string(d));
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                if (!is_zero(binv->at(r, c))) inv.add({idx[c]}, idx[r], binv->at(r, c));
    }
    GradedMultilinearMap m1c = compose(compose(phi, a.m1, 1), inv, 1);
    GradedMultilinearMap m2c = compose(compose(compose(phi, a.m2, 1), inv, 1), inv, 2);
    DgAlgebra out(a.space, std::move(m1c), std::move(m2c), std::nullopt);
    if (a.unit) {
        // unit moves along phi; keep it only if phi fixes it
        Element e = phi.apply_elements({Element::basis(a.space, *a.unit)});
        if (e == Element::basis(a.space, *a.unit)) out.unit = a.unit;
    }
    out.validate();
    return out;
}

DgAlgebra tensor_product(const DgAlgebra& A, const DgAlgebra& B) {
    std::vector<BasisElement> basis;
    auto nm = [&](std::size_t i, std::size_t j) {
        return A.space->at(i).name + "*" + B.space->at(j).name;
    };
    for (std::size_t i = 0; i < A.space->dim(); ++i)
        for (std::size_t j = 0; j < B.space->dim(); ++j)
            basis.push_back({nm(i, j), A.space->degree(i) + B.space->degree(j)});
    SpacePtr sp = make_space(basis);
    auto idx = [&](std::size_t i, std::size_t j) { return i * B.space->dim() + j; };

    // build classical structure constants, then shift
    std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>> products;
    std::map<std::string, std::map<std::string, Rat>> diff;
    // classical product of A from the stored shifted one: undo the decalage sign
    auto classical_m2 = [](const DgAlgebra& X, std::size_t a, std::size_t b, std::size_t to) {
        Rat c = X.m2.coeff({a, b}, to);
        if (X.space->degree(a) & 1) c = -c;
        return c;
    };
    for (std::size_t i = 0; i < A.space->dim(); ++i)
        for (std::size_t j = 0; j < B.space->dim(); ++j) {
            // d(x*y) = dx*y + (-1)^{|x|} x*dy
            for (auto& [key, row] : A.m1.entries())
                if (key[0] == i)
                    for (auto& [to, c] : row) diff[nm(i, j)][nm(to, j)] += c;
            int sx = (A.space->degree(i) & 1) ? -1 : 1;
            for (auto& [key, row] : B.m1.entries())
                if (key[0] == j)
                    for (auto& [to, c] : row) diff[nm(i, j)][nm(i, to)] += Rat(sx) * c;
            for (std::size_t k = 0; k < A.space->dim(); ++k)
                for (std::size_t l = 0; l < B.space->dim(); ++l) {
                    // (x*y)(x'*y') = (-1)^{|y||x'|} xx' * yy'
                    int s = ((B.space->degree(j) & 1) && (A.space->degree(k) & 1)) ? -1 : 1;
                    for (std::size_t to_a = 0; to_a < A.space->dim(); ++to_a) {
                        Rat ca = classical_m2(A, i, k, to_a);
                        if (is_zero(ca)) continue;
                        for (std::size_t to_b = 0; to_b < B.space->dim(); ++to_b) {
                            Rat cb = classical_m2(B, j, l, to_b);
                            if (is_zero(cb)) continue;
                            products[{nm(i, j), nm(k, l)}][nm(to_a, to_b)] += Rat(s) * ca * cb;
                        }
                    }
                }
        }
    std::optional<std::string> unit;
    if (A.unit && B.unit) unit = nm(*A.unit, *B.unit);
    (void)idx;
    return dg_algebra_from_classical(sp, products, diff, unit);
}

DgAlgebra exterior_algebra(int n) {
    // basis: subsets of {1..n}, name xS, degree |S|
    std::vector<std::vector<int>> subsets(1);
    for (int g = 1; g <= n; ++g) {
        auto prev = subsets;
        for (auto s : prev) {
            s.push_back(g);
            subsets.push_back(std::move(s));
        }
    }
    std::sort(subsets.begin(), subsets.end(), [](auto& a, auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    auto name = [](const std::vector<int>& s) {
        if (s.empty()) return std::string("one");
        std::string n = "x";
        for (int g : s) n += std::to_string(g);
        return n;
    };
    std::vector<BasisElement> basis;
    for (auto& s : subsets) basis.push_back({name(s), (int)s.size()});
    SpacePtr sp = make_space(basis);

    std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>> products;
    for (auto& s : subsets)
        for (auto& t : subsets) {
            std::vector<int> inter;
            std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(inter));
            if (!inter.empty()) continue;
            std::vector<int> uni = s;
            uni.insert(uni.end(), t.begin(), t.end());
            int sign = 1;  // sort concatenation, counting transpositions (all gens odd)
            for (std::size_t i = 1; i < uni.size(); ++i)
                for (std::size_t j = i; j > 0 && uni[j] < uni[j - 1]; --j) {
                    std::swap(uni[j], uni[j - 1]);
                    sign = -sign;
                }
            products[{name(s), name(t)}][name(uni)] = Rat(sign);
        }
    return dg_algebra_from_classical(sp, products, {}, std::string("one"));
}

DgAlgebra heisenberg_cochains() {
    DgAlgebra ext = exterior_algebra(3);  // generators x1=x, x2=y, x3=z
    // install dz = x^y as a derivation: d(xS) = sum over z in S of +-(S with z -> xy)
    SpacePtr sp = ext.space;
    GradedMultilinearMap m1(sp, sp, 1, 1);
    auto add_d = [&](const std::string& from, const std::string& to, Rat c) {
        m1.add({sp->index_of(from)}, sp->index_of(to), c);
    };
    // by hand on the 8 basis monomials (derivation of the exterior algebra):
    add_d("x3", "x12", Rat(1));
    // d(x13) = -x1 ^ dx3 = -x1 x1 x2 = 0 ; d(x23) = -x2 x1 x2 = 0
    // d(x123) = x1 x2 dx3 = x1 x2 x1 x2 = 0
    DgAlgebra h(sp, std::move(m1), ext.m2, ext.unit);
    h.validate();
    return h;
}

DgAlgebra fat_point() {
    SpacePtr sp = make_space({{"one", 0}, {"x", 1}, {"y", 2}});
    std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>> products;
    for (auto n : {"one", "x", "y"}) {
        products[{"one", std::string(n)}][n] = Rat(1);
        if (std::string(n) != "one") products[{std::string(n), "one"}][n] = Rat(1);
    }
    products[{"x", "x"}]["y"] = Rat(1);
    return dg_algebra_from_classical(sp, products, {}, std::string("one"));
}

DgAlgebra acyclic_two_term() {
    SpacePtr sp = make_space({{"a", 0}, {"b", 1}});
    std::map<std::string, std::map<std::string, Rat>> diff;
    diff["a"]["b"] = Rat(1);
    return dg_algebra_from_classical(sp, {}, diff, std::nullopt);
}

DgAlgebra contractible_line() {
    SpacePtr sp = make_space({{"one", 0}, {"x", 0}, {"dx", 1}});
    std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>> products;
    for (auto n : {"one", "x", "dx"}) {
        products[{"one", std::string(n)}][n] = Rat(1);
        if (std::string(n) != "one") products[{std::string(n), "one"}][n] = Rat(1);
    }
    std::map<std::string, std::map<std::string, Rat>> diff;
    diff["x"]["dx"] = Rat(1);
    return dg_algebra_from_classical(sp, products, diff, std::string("one"));
}

DgAlgebra matrix_line() {
    // gl_2 in degree 0 tensored with an exterior line Lambda(u), deg u = 1
    std::vector<BasisElement> basis;
    const char* names[4] = {"e11", "e12", "e21", "e22"};
    for (int i = 0; i < 4; ++i) basis.push_back({names[i], 0});
    for (int i = 0; i < 4; ++i) basis.push_back({std::string(names[i]) + "u", 1});
    SpacePtr sp = make_space(basis);
    std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>> products;
    auto mat = [&](int a, int b) { return std::string(names[2 * a + b]); };
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    if (b != c) continue;
                    products[{mat(a, b), mat(c, d)}][mat(a, d)] = Rat(1);
                    products[{mat(a, b) + "u", mat(c, d)}][mat(a, d) + "u"] = Rat(1);
                    products[{mat(a, b), mat(c, d) + "u"}][mat(a, d) + "u"] = Rat(1);
                    // u^2 = 0: odd*odd vanishes
                }
    return dg_algebra_from_classical(sp, products, {}, std::nullopt);
}

namespace {
GradedMultilinearMap random_degree_preserving_iso(SpacePtr sp, std::mt19937_64& rng) {
    GradedMultilinearMap phi(sp, sp, 1, 0);
    std::uniform_int_distribution<int> val(-2, 2);
    for (int d : sp->degrees_present()) {
        auto idx = sp->indices_of_degree(d);
        std::size_t n = idx.size();
        // unit upper-triangular times unit lower-triangular: determinant 1
        RatMatrix u = RatMatrix::identity(n), l = RatMatrix::identity(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c) {
                u.at(r, c) = Rat(val(rng));
                l.at(c, r) = Rat(val(rng));
            }
        RatMatrix block = u * l;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (!is_zero(block.at(r, c))) phi.add({idx[c]}, idx[r], block.at(r, c));
    }
    return phi;
}
}  // namespace

void install_random_inner_product(DgAlgebra& a, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> val(-1, 1);
    std::map<std::pair<std::size_t, std::size_t>, Rat> gram;
    for (int d : a.space->degrees_present()) {
        auto idx = a.space->indices_of_degree(d);
        std::size_t n = idx.size();
        RatMatrix l = RatMatrix::identity(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < r; ++c) l.at(r, c) = Rat(val(rng));
        RatMatrix g = l * l.transpose();
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (!is_zero(g.at(r, c))) gram[{idx[r], idx[c]}] = g.at(r, c);
    }
    // spaces are shared read-only; hang the metric on a fresh copy
    auto fresh = std::make_shared<GradedVectorSpace>(*a.space);
    fresh->set_inner_product(std::move(gram));
    a.m1 = rebind(a.m1, fresh, fresh);
    a.m2 = rebind(a.m2, fresh, fresh);
    a.space = fresh;
}

DgAlgebra random_corpus_algebra(std::mt19937_64& rng, int max_dim) {
    std::vector<DgAlgebra> pool;
    pool.push_back(exterior_algebra(1));
    pool.push_back(exterior_algebra(2));
    pool.push_back(fat_point());
    pool.push_back(acyclic_two_term());
    pool.push_back(contractible_line());
    pool.push_back(heisenberg_cochains());
    pool.push_back(exterior_algebra(3));
    pool.push_back(tensor_product(exterior_algebra(1), contractible_line()));
    std::vector<DgAlgebra> fitting;
    for (auto& a : pool)
        if ((int)a.space->dim() <= max_dim) fitting.push_back(a);
    std::uniform_int_distribution<std::size_t> pick(0, fitting.size() - 1);
    DgAlgebra base = fitting[pick(rng)];
    DgAlgebra out = conjugate(base, random_degree_preserving_iso(base.space, rng));
    install_random_inner_product(out, rng);
    return out;
}

}  // namespace linfty
