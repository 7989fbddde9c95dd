#include <linfty/rational_linalg.hpp>

#include <stdexcept>

namespace linfty {

namespace {

struct Echelon {
    RatMatrix m;                       // reduced row echelon form
    std::vector<std::size_t> pivots;   // pivot column per pivot row
};

Echelon rref(RatMatrix a) {
    Echelon e{std::move(a), {}};
    std::size_t r = 0;
    for (std::size_t c = 0; c < e.m.cols() && r < e.m.rows(); ++c) {
        std::size_t p = r;
        while (p < e.m.rows() && is_zero(e.m.at(p, c))) ++p;
        if (p == e.m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < e.m.cols(); ++j) std::swap(e.m.at(p, j), e.m.at(r, j));
        Rat inv = Rat(1) / e.m.at(r, c);
        for (std::size_t j = c; j < e.m.cols(); ++j) e.m.at(r, j) *= inv;
        for (std::size_t i = 0; i < e.m.rows(); ++i) {
            if (i == r || is_zero(e.m.at(i, c))) continue;
            Rat f = e.m.at(i, c);
            for (std::size_t j = c; j < e.m.cols(); ++j) e.m.at(i, j) -= f * e.m.at(r, j);
        }
        e.pivots.push_back(c);
        ++r;
    }
    return e;
}

}  // namespace

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rat(1);
    return m;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    RatMatrix p(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (linfty::is_zero(at(r, k))) continue;
            for (std::size_t c = 0; c < o.cols_; ++c) p.at(r, c) += at(r, k) * o.at(k, c);
        }
    return p;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    RatMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] + o.data_[i];
    return s;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix diff shape mismatch");
    RatMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] - o.data_[i];
    return s;
}

bool RatMatrix::operator==(const RatMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (data_[i] != o.data_[i]) return false;
    return true;
}

bool RatMatrix::is_zero() const {
    for (auto& v : data_)
        if (!linfty::is_zero(v)) return false;
    return true;
}

std::size_t RatMatrix::rank() const { return rref(*this).pivots.size(); }

RatMatrix RatMatrix::kernel_basis() const {
    Echelon e = rref(*this);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols_; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    RatMatrix k(cols_, free_cols.size());
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
        k.at(free_cols[f], f) = Rat(1);
        for (std::size_t pr = 0; pr < e.pivots.size(); ++pr)
            k.at(e.pivots[pr], f) = -e.m.at(pr, free_cols[f]);
    }
    return k;
}

RatMatrix RatMatrix::column_space_basis() const {
    Echelon e = rref(*this);
    RatMatrix b(rows_, e.pivots.size());
    for (std::size_t j = 0; j < e.pivots.size(); ++j)
        for (std::size_t r = 0; r < rows_; ++r) b.at(r, j) = at(r, e.pivots[j]);
    return b;
}

std::optional<RatMatrix> RatMatrix::inverse() const {
    if (rows_ != cols_) return std::nullopt;
    RatMatrix aug(rows_, 2 * cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, cols_ + r) = Rat(1);
    }
    Echelon e = rref(std::move(aug));
    if (e.pivots.size() != rows_ || e.pivots.back() >= cols_) return std::nullopt;
    RatMatrix inv(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) inv.at(r, c) = e.m.at(r, cols_ + c);
    return inv;
}

std::optional<std::vector<Rat>> RatMatrix::solve(const std::vector<Rat>& b) const {
    if (b.size() != rows_) throw std::invalid_argument("solve: rhs length mismatch");
    RatMatrix aug(rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, cols_) = b[r];
    }
    Echelon e = rref(std::move(aug));
    for (std::size_t pr = 0; pr < e.pivots.size(); ++pr)
        if (e.pivots[pr] == cols_) return std::nullopt;  // inconsistent
    std::vector<Rat> x(cols_, Rat(0));
    for (std::size_t pr = 0; pr < e.pivots.size(); ++pr) x[e.pivots[pr]] = e.m.at(pr, cols_);
    return x;
}

bool RatMatrix::is_positive_definite() const {
    if (rows_ != cols_) return false;
    // Gaussian elimination without pivoting: all leading pivots positive.
    RatMatrix a = *this;
    for (std::size_t k = 0; k < rows_; ++k) {
        if (sgn(a.at(k, k)) <= 0) return false;
        for (std::size_t i = k + 1; i < rows_; ++i) {
            Rat f = a.at(i, k) / a.at(k, k);
            for (std::size_t j = k; j < cols_; ++j) a.at(i, j) -= f * a.at(k, j);
        }
    }
    return true;
}

std::vector<Rat> RatMatrix::apply(const std::vector<Rat>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("apply: length mismatch");
    std::vector<Rat> out(rows_, Rat(0));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (!linfty::is_zero(at(r, c))) out[r] += at(r, c) * v[c];
    return out;
}

}  // namespace linfty
