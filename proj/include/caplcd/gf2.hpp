#pragma once

// Bit-packed linear algebra over F2.
//
// Points of F2^m (m <= 32) are single 32-bit words: bit i holds coordinate
// a_{i+1}, so e_1 is the mask 0x1. Matrices are row-major with rows packed
// into 64-bit words and may be arbitrarily wide, which is needed for the
// generator matrices of codes whose length exceeds 32.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace caplcd {

inline constexpr int kMaxDim = 32;

/// An element of F2^m for 1 <= m <= 32.
class Gf2Vector {
public:
    Gf2Vector(std::uint32_t bits, int dim);

    /// e_{index+1} in F2^dim (0-based index).
    static Gf2Vector unit(int index, int dim);
    static Gf2Vector all_ones(int dim);

    [[nodiscard]] std::uint32_t bits() const noexcept { return bits_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] bool get(int index) const noexcept { return ((bits_ >> index) & 1U) != 0; }
    [[nodiscard]] int weight() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept { return bits_ == 0; }

    /// Standard inner product <x, y> in F2.
    [[nodiscard]] bool dot(const Gf2Vector& other) const;

    Gf2Vector& operator+=(const Gf2Vector& other);
    friend Gf2Vector operator+(Gf2Vector a, const Gf2Vector& b) { return a += b; }
    friend bool operator==(const Gf2Vector&, const Gf2Vector&) = default;

    [[nodiscard]] std::string to_string() const;

private:
    std::uint32_t bits_;
    int dim_;
};

/// Mask with the low `dim` bits set.
[[nodiscard]] constexpr std::uint32_t low_mask(int dim) noexcept
{
    return dim >= 32 ? 0xFFFFFFFFU : ((1U << dim) - 1U);
}

/// Parity of popcount(a & b).
[[nodiscard]] bool dot(std::uint32_t a, std::uint32_t b) noexcept;

/// Dense row-major matrix over F2.
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols);

    static Gf2Matrix identity(std::size_t n);
    static Gf2Matrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    /// One row per vector; all vectors must share the same dim.
    static Gf2Matrix from_rows(std::span<const Gf2Vector> rows);
    /// Rows given as masks of width `cols` (<= 32).
    static Gf2Matrix from_row_masks(std::span<const std::uint32_t> rows, int cols);
    /// The m x n matrix whose j-th column is points[j] (the matrix H_S).
    static Gf2Matrix from_columns(std::span<const std::uint32_t> points, int dim);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t words_per_row() const noexcept { return words_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    [[nodiscard]] bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);
    void flip(std::size_t r, std::size_t c);

    [[nodiscard]] std::span<const std::uint64_t> row(std::size_t r) const;
    [[nodiscard]] std::span<std::uint64_t> row(std::size_t r);
    /// Row r as a mask; requires cols() <= 32.
    [[nodiscard]] std::uint32_t row_mask(std::size_t r) const;
    /// Column c as a mask; requires rows() <= 32. Returns a copy.
    [[nodiscard]] std::uint32_t column_mask(std::size_t c) const;
    /// Column c as a mask; requires rows() <= 64.
    [[nodiscard]] std::uint64_t column_mask64(std::size_t c) const;

    [[nodiscard]] Gf2Matrix transpose() const;
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_symmetric() const;

    Gf2Matrix& operator+=(const Gf2Matrix& other);
    friend Gf2Matrix operator+(Gf2Matrix a, const Gf2Matrix& b) { return a += b; }
    friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

    /// Rows of '0'/'1' separated by newlines.
    [[nodiscard]] std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

/// Row rank over F2 by Gaussian elimination on a copy.
[[nodiscard]] std::size_t rank(const Gf2Matrix& m);

/// Rank of the matrix whose rows are the given masks. Allocation free.
[[nodiscard]] int rank_of_masks(std::span<const std::uint32_t> rows) noexcept;

/// True iff the square matrix has full rank. Throws PreconditionError when
/// the matrix is not square.
[[nodiscard]] bool is_nonsingular(const Gf2Matrix& m);

/// Basis of {x : M x = 0}, one basis vector per row of the result (width
/// cols(M)). Vectors appear in ascending order of their free column.
[[nodiscard]] Gf2Matrix kernel_basis(const Gf2Matrix& m);

/// Sum over the points of s s^T; a dim x dim symmetric matrix.
[[nodiscard]] Gf2Matrix outer_accumulate(std::span<const std::uint32_t> points, int dim);
[[nodiscard]] Gf2Matrix outer_accumulate(std::span<const Gf2Vector> points);

/// A * B^T. Throws PreconditionError when column counts differ.
[[nodiscard]] Gf2Matrix mat_mul_t(const Gf2Matrix& a, const Gf2Matrix& b);

/// M x for a column vector x given as packed words of width cols(M).
[[nodiscard]] std::vector<std::uint64_t> mat_vec(const Gf2Matrix& m, std::span<const std::uint64_t> x);

/// True iff `v` (width cols(M)) lies in the row space of M.
[[nodiscard]] bool in_row_space(const Gf2Matrix& m, std::span<const std::uint64_t> v);

/// Nonzero rows of the reduced row echelon form (pivots lowest column first).
[[nodiscard]] Gf2Matrix row_echelon_basis(const Gf2Matrix& m);

} // namespace caplcd
