#include <linfty/cdga.hpp>

#include <stdexcept>

namespace linfty {

int Cdga::degree_of(const Mono& m) const {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * gens_[i].degree;
    return d;
}

int Cdga::weight_of(const Mono& m) const {
    int w = 0;
    for (auto e : m) w += e;
    return w;
}

int Cdga::merge_sign(const Mono& a, const Mono& b) const {
    // move each odd generator of b leftwards past the odd generators of a
    // with larger index; odd squares vanish
    int exp = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (!(gens_[i].degree & 1)) continue;
        if (a[i] + b[i] >= 2) return 0;
        if (b[i] == 0) continue;
        for (std::size_t j = i + 1; j < gens_.size(); ++j)
            if ((gens_[j].degree & 1) && a[j]) exp += a[j];
    }
    return (exp & 1) ? -1 : 1;
}

CdgaElem CdgaElem::one(CdgaPtr ring) {
    CdgaElem e(ring);
    e.add_term(Cdga::Mono(ring->ngens(), 0), Rat(1));
    return e;
}

CdgaElem CdgaElem::generator(CdgaPtr ring, std::size_t i) {
    CdgaElem e(ring);
    Cdga::Mono m(ring->ngens(), 0);
    m.at(i) = 1;
    e.add_term(std::move(m), Rat(1));
    return e;
}

bool CdgaElem::is_homogeneous(int& degree) const {
    bool first = true;
    for (auto& [m, c] : terms_) {
        int d = ring_->degree_of(m);
        if (first) {
            degree = d;
            first = false;
        } else if (d != degree) {
            return false;
        }
    }
    return true;
}

void CdgaElem::add_term(Cdga::Mono m, const Rat& c, int extra_weight) {
    if ((int)m.size() != (int)ring_->ngens()) throw std::invalid_argument("monomial width mismatch");
    if (ring_->weight_of(m) + extra_weight > ring_->cap()) return;
    auto it = terms_.try_emplace(std::move(m), Rat(0)).first;
    it->second += c;
    if (linfty::is_zero(it->second)) terms_.erase(it);
}

CdgaElem& CdgaElem::operator+=(const CdgaElem& o) {
    if (!ring_) ring_ = o.ring_;
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

CdgaElem& CdgaElem::operator-=(const CdgaElem& o) {
    if (!ring_) ring_ = o.ring_;
    for (auto& [m, c] : o.terms_) add_term(m, Rat(-1) * c);
    return *this;
}

CdgaElem& CdgaElem::operator*=(const Rat& c) {
    if (linfty::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

bool CdgaElem::operator==(const CdgaElem& o) const {
    CdgaElem d = *this;
    d -= o;
    return d.is_zero();
}

CdgaElem CdgaElem::mul(const CdgaElem& o, int extra_weight) const {
    CdgaElem out(ring_);
    for (auto& [m1, c1] : terms_)
        for (auto& [m2, c2] : o.terms_) {
            int sign = ring_->merge_sign(m1, m2);
            if (sign == 0) continue;
            Cdga::Mono m = m1;
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = (std::uint8_t)(m[i] + m2[i]);
            out.add_term(std::move(m), Rat(sign) * c1 * c2, extra_weight);
        }
    return out;
}

CdgaElem CdgaElem::derive(const std::vector<CdgaElem>& gen_image, int extra_weight) const {
    CdgaElem out(ring_);
    for (auto& [m, c] : terms_) {
        // Leibniz over the canonical factor order; writing the struck term
        // image(g) * rest costs (-1)^{|g| * (degree of the factors before g)}
        int passed_parity = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            int gdeg = ring_->gen(i).degree;
            if (!gen_image[i].is_zero()) {
                Cdga::Mono rest = m;
                rest[i] -= 1;
                CdgaElem restel(ring_);
                restel.add_term(rest, Rat((long)m[i]) * c);
                CdgaElem piece = gen_image[i].mul(restel, extra_weight);
                if ((gdeg & 1) && (passed_parity & 1)) piece *= Rat(-1);
                out += piece;
            }
            passed_parity += m[i] * (gdeg & 1);
        }
    }
    return out;
}

}  // namespace linfty
