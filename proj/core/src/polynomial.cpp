#include <linfty/polynomial.hpp>

#include <functional>
#include <stdexcept>

namespace linfty {

Poly Poly::constant(int nvars, int trunc, const Rat& c) {
    Poly p(nvars, trunc);
    p.add_term(Mono(nvars, 0), c);
    return p;
}

Poly Poly::variable(int nvars, int trunc, int i) {
    Poly p(nvars, trunc);
    Mono m(nvars, 0);
    m.at(i) = 1;
    p.add_term(std::move(m), Rat(1));
    return p;
}

void Poly::add_term(Mono m, const Rat& c) {
    if ((int)m.size() != nvars_) throw std::invalid_argument("monomial width mismatch");
    int total = 0;
    for (auto e : m) total += e;
    if (total > trunc_) return;
    auto it = terms_.try_emplace(std::move(m), Rat(0)).first;
    it->second += c;
    if (linfty::is_zero(it->second)) terms_.erase(it);
}

Poly& Poly::operator+=(const Poly& o) {
    if (nvars_ == 0 && terms_.empty()) {
        nvars_ = o.nvars_;
        trunc_ = o.trunc_;
    }
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (nvars_ == 0 && terms_.empty()) {
        nvars_ = o.nvars_;
        trunc_ = o.trunc_;
    }
    for (auto& [m, c] : o.terms_) add_term(m, Rat(-1) * c);
    return *this;
}

Poly& Poly::operator*=(const Rat& c) {
    if (linfty::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly Poly::operator*(const Poly& o) const {
    Poly p(nvars_, trunc_);
    for (auto& [m1, c1] : terms_)
        for (auto& [m2, c2] : o.terms_) {
            Mono m = m1;
            int total = 0;
            for (int i = 0; i < nvars_; ++i) {
                m[i] = (std::uint8_t)(m[i] + m2[i]);
                total += m[i];
            }
            if (total > trunc_) continue;
            p.add_term(std::move(m), c1 * c2);
        }
    return p;
}

bool Poly::operator==(const Poly& o) const {
    Poly d = *this;
    d -= o;
    return d.is_zero();
}

Poly Poly::derivative(int var) const {
    Poly p(nvars_, trunc_);
    for (auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Mono d = m;
        d[var] -= 1;
        p.add_term(std::move(d), Rat((long)m[var]) * c);
    }
    return p;
}

Rat Poly::eval(const std::vector<Rat>& point) const {
    Rat acc(0);
    for (auto& [m, c] : terms_) {
        Rat t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < m[i]; ++e) t *= point[i];
        acc += t;
    }
    return acc;
}

double Poly::eval_d(const std::vector<double>& point) const {
    double acc = 0;
    for (auto& [m, c] : terms_) {
        double t = to_double(c);
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < m[i]; ++e) t *= point[i];
        acc += t;
    }
    return acc;
}

Rat Poly::coefficient(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat Poly::max_coeff() const {
    Rat m(0);
    for (auto& [mono, c] : terms_) {
        Rat a = rat_abs(c);
        if (a > m) m = a;
    }
    return m;
}

std::string Poly::mono_name(const Mono& m, const std::string& stem) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += " ";
        out += stem + std::to_string(i + 1);
        if (m[i] > 1) out += "^" + std::to_string((int)m[i]);
    }
    return out.empty() ? "1" : out;
}

std::map<std::size_t, Poly> apply_poly(const GradedMultilinearMap& f,
                                       const std::vector<std::map<std::size_t, Poly>>& args) {
    if ((int)args.size() != f.arity()) throw std::invalid_argument("apply_poly arity mismatch");
    std::map<std::size_t, Poly> out;
    // iterate over support combinations; symmetric maps sort with sign
    std::vector<std::vector<std::size_t>> supports(args.size());
    for (std::size_t i = 0; i < args.size(); ++i)
        for (auto& [idx, p] : args[i])
            if (!p.is_zero()) supports[i].push_back(idx);
    std::vector<std::size_t> combo(args.size());
    std::function<void(std::size_t, Poly)> rec = [&](std::size_t pos, Poly acc) {
        if (pos == args.size()) {
            if (f.symmetric()) {
                auto sorted = combo;
                std::vector<int> sdegs(combo.size());
                for (std::size_t i = 0; i < combo.size(); ++i) sdegs[i] = f.source()->sdeg(combo[i]);
                int sign = sort_with_koszul_sign(sorted, sdegs);
                if (sign == 0) return;
                for (std::size_t o = 0; o < f.target()->dim(); ++o) {
                    auto it = f.entries().find(sorted);
                    if (it == f.entries().end()) return;
                    auto jt = it->second.find(o);
                    if (jt == it->second.end()) continue;
                    Poly t = acc;
                    t *= Rat(sign) * jt->second;
                    out[o] += t;
                }
            } else {
                auto it = f.entries().find(combo);
                if (it == f.entries().end()) return;
                for (auto& [o, c] : it->second) {
                    Poly t = acc;
                    t *= c;
                    out[o] += t;
                }
            }
            return;
        }
        for (auto idx : supports[pos]) {
            combo[pos] = idx;
            rec(pos + 1, acc * args[pos].at(idx));
        }
    };
    if (f.arity() == 0)
        throw std::invalid_argument("apply_poly: arity-0 values are plain elements");
    int nv = 0, tr = 0;
    for (auto& a : args)
        for (auto& [i, p] : a) {
            nv = p.nvars();
            tr = p.trunc();
        }
    rec(0, Poly::constant(nv, tr, Rat(1)));
    return out;
}

}  // namespace linfty
