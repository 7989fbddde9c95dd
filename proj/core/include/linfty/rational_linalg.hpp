#pragma once

#include <linfty/rational.hpp>

#include <optional>
#include <vector>

namespace linfty {

/// Dense rational matrix; plain Gaussian elimination. Dimensions in this
/// artifact stay small (a few hundred at most), exactness is the point.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix operator+(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    bool operator==(const RatMatrix& o) const;
    bool is_zero() const;

    std::size_t rank() const;
    /// Columns span the null space; exact reduced echelon back-substitution.
    RatMatrix kernel_basis() const;
    /// Columns of the result span the column space (pivot columns).
    RatMatrix column_space_basis() const;
    std::optional<RatMatrix> inverse() const;
    /// One solution x of Ax = b, if the system is consistent.
    std::optional<std::vector<Rat>> solve(const std::vector<Rat>& b) const;
    /// Leading-principal-minor test; requires a symmetric square matrix.
    bool is_positive_definite() const;

    std::vector<Rat> apply(const std::vector<Rat>& v) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> data_;
};

}  // namespace linfty
