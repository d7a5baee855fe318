#include "caplcd/gf2.hpp"

#include "caplcd/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <utility>

namespace caplcd {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t cols)
{
    return (cols + kWordBits - 1) / kWordBits;
}

void check_dim(int dim)
{
    if (dim < 1 || dim > kMaxDim) {
        throw PreconditionError("dimension " + std::to_string(dim) + " outside 1..32");
    }
}

bool test_bit(std::span<const std::uint64_t> row, std::size_t c)
{
    return ((row[c / kWordBits] >> (c % kWordBits)) & 1U) != 0;
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src)
{
    for (std::size_t w = 0; w < dst.size(); ++w) {
        dst[w] ^= src[w];
    }
}

struct Echelon {
    Gf2Matrix reduced; // fully reduced; first pivots.size() rows are nonzero
    std::vector<std::size_t> pivots;
};

// Reduced row echelon form. Columns are scanned left to right and the first
// row carrying a 1 in the current column becomes the pivot.
Echelon reduce(Gf2Matrix m)
{
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c = 0; c < m.cols() && next < m.rows(); ++c) {
        std::size_t found = m.rows();
        for (std::size_t r = next; r < m.rows(); ++r) {
            if (m.get(r, c)) {
                found = r;
                break;
            }
        }
        if (found == m.rows()) {
            continue;
        }
        if (found != next) {
            auto a = m.row(found);
            auto b = m.row(next);
            std::swap_ranges(a.begin(), a.end(), b.begin());
        }
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r != next && m.get(r, c)) {
                xor_into(m.row(r), m.row(next));
            }
        }
        pivots.push_back(c);
        ++next;
    }
    return {std::move(m), std::move(pivots)};
}

} // namespace

// ---------------------------------------------------------------------------
// Gf2Vector

Gf2Vector::Gf2Vector(std::uint32_t bits, int dim) : bits_(bits), dim_(dim)
{
    check_dim(dim);
    if ((bits & ~low_mask(dim)) != 0) {
        throw PreconditionError("vector has bits set at or above dimension " + std::to_string(dim));
    }
}

Gf2Vector Gf2Vector::unit(int index, int dim)
{
    if (index < 0 || index >= dim) {
        throw PreconditionError("unit vector index out of range");
    }
    return {1U << index, dim};
}

Gf2Vector Gf2Vector::all_ones(int dim)
{
    check_dim(dim);
    return {low_mask(dim), dim};
}

int Gf2Vector::weight() const noexcept
{
    return std::popcount(bits_);
}

bool Gf2Vector::dot(const Gf2Vector& other) const
{
    if (dim_ != other.dim_) {
        throw PreconditionError("inner product of vectors with different dimensions");
    }
    return caplcd::dot(bits_, other.bits_);
}

Gf2Vector& Gf2Vector::operator+=(const Gf2Vector& other)
{
    if (dim_ != other.dim_) {
        throw PreconditionError("sum of vectors with different dimensions");
    }
    bits_ ^= other.bits_;
    return *this;
}

std::string Gf2Vector::to_string() const
{
    std::string s;
    s.reserve(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
        s.push_back(get(i) ? '1' : '0');
    }
    return s;
}

bool dot(std::uint32_t a, std::uint32_t b) noexcept
{
    return (std::popcount(a & b) & 1) != 0;
}

// ---------------------------------------------------------------------------
// Gf2Matrix

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_(words_for(cols)), data_(rows * words_for(cols), 0)
{
}

Gf2Matrix Gf2Matrix::identity(std::size_t n)
{
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, true);
    }
    return m;
}

Gf2Matrix Gf2Matrix::from_rows(std::span<const Gf2Vector> rows)
{
    if (rows.empty()) {
        return {};
    }
    const int dim = rows.front().dim();
    Gf2Matrix m(rows.size(), static_cast<std::size_t>(dim));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].dim() != dim) {
            throw PreconditionError("matrix rows have different dimensions");
        }
        m.data_[r * m.words_] = rows[r].bits();
    }
    return m;
}

Gf2Matrix Gf2Matrix::from_row_masks(std::span<const std::uint32_t> rows, int cols)
{
    check_dim(cols);
    Gf2Matrix m(rows.size(), static_cast<std::size_t>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if ((rows[r] & ~low_mask(cols)) != 0) {
            throw PreconditionError("row mask wider than column count");
        }
        m.data_[r * m.words_] = rows[r];
    }
    return m;
}

Gf2Matrix Gf2Matrix::from_columns(std::span<const std::uint32_t> points, int dim)
{
    check_dim(dim);
    Gf2Matrix m(static_cast<std::size_t>(dim), points.size());
    for (std::size_t c = 0; c < points.size(); ++c) {
        if ((points[c] & ~low_mask(dim)) != 0) {
            throw PreconditionError("column mask exceeds the row count");
        }
        for (std::uint32_t bits = points[c]; bits != 0; bits &= bits - 1) {
            m.set(static_cast<std::size_t>(std::countr_zero(bits)), c, true);
        }
    }
    return m;
}

bool Gf2Matrix::get(std::size_t r, std::size_t c) const
{
    return test_bit(row(r), c);
}

void Gf2Matrix::set(std::size_t r, std::size_t c, bool value)
{
    auto& word = data_[r * words_ + c / kWordBits];
    const std::uint64_t bit = std::uint64_t{1} << (c % kWordBits);
    word = value ? (word | bit) : (word & ~bit);
}

void Gf2Matrix::flip(std::size_t r, std::size_t c)
{
    data_[r * words_ + c / kWordBits] ^= std::uint64_t{1} << (c % kWordBits);
}

std::span<const std::uint64_t> Gf2Matrix::row(std::size_t r) const
{
    return {data_.data() + r * words_, words_};
}

std::span<std::uint64_t> Gf2Matrix::row(std::size_t r)
{
    return {data_.data() + r * words_, words_};
}

std::uint32_t Gf2Matrix::row_mask(std::size_t r) const
{
    if (cols_ > 32) {
        throw PreconditionError("row_mask needs at most 32 columns");
    }
    return cols_ == 0 ? 0U : static_cast<std::uint32_t>(data_[r * words_]);
}

std::uint32_t Gf2Matrix::column_mask(std::size_t c) const
{
    if (rows_ > 32) {
        throw PreconditionError("column_mask needs at most 32 rows");
    }
    return static_cast<std::uint32_t>(column_mask64(c));
}

std::uint64_t Gf2Matrix::column_mask64(std::size_t c) const
{
    if (rows_ > 64) {
        throw PreconditionError("column_mask64 needs at most 64 rows");
    }
    std::uint64_t mask = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
        if (get(r, c)) {
            mask |= std::uint64_t{1} << r;
        }
    }
    return mask;
}

Gf2Matrix Gf2Matrix::transpose() const
{
    Gf2Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (get(r, c)) {
                t.set(c, r, true);
            }
        }
    }
    return t;
}

bool Gf2Matrix::is_zero() const noexcept
{
    return std::ranges::all_of(data_, [](std::uint64_t w) { return w == 0; });
}

bool Gf2Matrix::is_symmetric() const
{
    return rows_ == cols_ && *this == transpose();
}

Gf2Matrix& Gf2Matrix::operator+=(const Gf2Matrix& other)
{
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw PreconditionError("matrix sum with mismatched shapes");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] ^= other.data_[i];
    }
    return *this;
}

std::string Gf2Matrix::to_string() const
{
    std::string s;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            s.push_back(get(r, c) ? '1' : '0');
        }
        s.push_back('\n');
    }
    return s;
}

// ---------------------------------------------------------------------------
// Operations

std::size_t rank(const Gf2Matrix& m)
{
    if (m.cols() <= 32) {
        std::vector<std::uint32_t> rows(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            rows[r] = m.row_mask(r);
        }
        return static_cast<std::size_t>(rank_of_masks(rows));
    }
    return reduce(m).pivots.size();
}

int rank_of_masks(std::span<const std::uint32_t> rows) noexcept
{
    // XOR basis indexed by lowest set bit.
    std::array<std::uint32_t, 32> basis{};
    int r = 0;
    for (std::uint32_t v : rows) {
        while (v != 0) {
            const int low = std::countr_zero(v);
            if (basis[static_cast<std::size_t>(low)] == 0) {
                basis[static_cast<std::size_t>(low)] = v;
                ++r;
                break;
            }
            v ^= basis[static_cast<std::size_t>(low)];
        }
        if (r == 32) {
            break;
        }
    }
    return r;
}

bool is_nonsingular(const Gf2Matrix& m)
{
    if (m.rows() != m.cols()) {
        throw PreconditionError("is_nonsingular requires a square matrix");
    }
    return rank(m) == m.rows();
}

Gf2Matrix kernel_basis(const Gf2Matrix& m)
{
    const auto [reduced, pivots] = reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : pivots) {
        is_pivot[c] = true;
    }
    Gf2Matrix basis(m.cols() - pivots.size(), m.cols());
    std::size_t out = 0;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) {
            continue;
        }
        basis.set(out, f, true);
        for (std::size_t p = 0; p < pivots.size(); ++p) {
            if (reduced.get(p, f)) {
                basis.set(out, pivots[p], true);
            }
        }
        ++out;
    }
    return basis;
}

Gf2Matrix outer_accumulate(std::span<const std::uint32_t> points, int dim)
{
    check_dim(dim);
    std::array<std::uint32_t, 32> rows{};
    for (std::uint32_t s : points) {
        if ((s & ~low_mask(dim)) != 0) {
            throw PreconditionError("point exceeds the dimension");
        }
        for (std::uint32_t bits = s; bits != 0; bits &= bits - 1) {
            rows[static_cast<std::size_t>(std::countr_zero(bits))] ^= s;
        }
    }
    return Gf2Matrix::from_row_masks(std::span(rows.data(), static_cast<std::size_t>(dim)), dim);
}

Gf2Matrix outer_accumulate(std::span<const Gf2Vector> points)
{
    if (points.empty()) {
        throw PreconditionError("outer_accumulate of Gf2Vectors needs at least one point to fix the dimension");
    }
    const int dim = points.front().dim();
    std::vector<std::uint32_t> masks;
    masks.reserve(points.size());
    for (const auto& p : points) {
        if (p.dim() != dim) {
            throw PreconditionError("points have different dimensions");
        }
        masks.push_back(p.bits());
    }
    return outer_accumulate(masks, dim);
}

Gf2Matrix mat_mul_t(const Gf2Matrix& a, const Gf2Matrix& b)
{
    if (a.cols() != b.cols()) {
        throw PreconditionError("mat_mul_t: column counts differ");
    }
    Gf2Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ra = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const auto rb = b.row(j);
            int parity = 0;
            for (std::size_t w = 0; w < ra.size(); ++w) {
                parity ^= std::popcount(ra[w] & rb[w]) & 1;
            }
            if (parity != 0) {
                c.set(i, j, true);
            }
        }
    }
    return c;
}

std::vector<std::uint64_t> mat_vec(const Gf2Matrix& m, std::span<const std::uint64_t> x)
{
    if (x.size() != m.words_per_row()) {
        throw PreconditionError("mat_vec: vector width does not match the column count");
    }
    std::vector<std::uint64_t> y((m.rows() + kWordBits - 1) / kWordBits, 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        int parity = 0;
        for (std::size_t w = 0; w < row.size(); ++w) {
            parity ^= std::popcount(row[w] & x[w]) & 1;
        }
        if (parity != 0) {
            y[r / kWordBits] |= std::uint64_t{1} << (r % kWordBits);
        }
    }
    return y;
}

bool in_row_space(const Gf2Matrix& m, std::span<const std::uint64_t> v)
{
    if (v.size() != m.words_per_row()) {
        throw PreconditionError("in_row_space: vector width does not match the column count");
    }
    const auto [reduced, pivots] = reduce(m);
    std::vector<std::uint64_t> rest(v.begin(), v.end());
    for (std::size_t p = 0; p < pivots.size(); ++p) {
        if (test_bit(rest, pivots[p])) {
            xor_into(rest, reduced.row(p));
        }
    }
    return std::ranges::all_of(rest, [](std::uint64_t w) { return w == 0; });
}

Gf2Matrix row_echelon_basis(const Gf2Matrix& m)
{
    const auto [reduced, pivots] = reduce(m);
    Gf2Matrix out(pivots.size(), m.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        std::ranges::copy(reduced.row(r), out.row(r).begin());
    }
    return out;
}

} // namespace caplcd
