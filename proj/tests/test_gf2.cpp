#include "caplcd/caps.hpp"
#include "caplcd/error.hpp"
#include "caplcd/gf2.hpp"
#include "caplcd/random.hpp"
#include "oracles.hpp"

#include "doctest.h"

using namespace caplcd;

namespace {

oracle::Matrix dense(const Gf2Matrix& m)
{
    oracle::Matrix out(m.rows(), std::vector<int>(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out[r][c] = m.get(r, c) ? 1 : 0;
        }
    }
    return out;
}

Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng)
{
    Gf2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m.set(r, c, rng.coin());
        }
    }
    return m;
}

std::vector<std::uint32_t> all_nonzero(int m)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t p = 1; p < (1U << m); ++p) {
        out.push_back(p);
    }
    return out;
}

} // namespace

TEST_CASE("vectors follow the bit convention")
{
    CHECK(Gf2Vector::unit(0, 5).bits() == 0x1U);
    CHECK(Gf2Vector::unit(4, 5).bits() == 0x10U);
    CHECK(Gf2Vector::all_ones(4).bits() == 0xFU);
    CHECK(Gf2Vector(0b1011, 4).weight() == 3);
    CHECK(Gf2Vector(0b0110, 4).dot(Gf2Vector(0b0100, 4)));
    CHECK_FALSE(Gf2Vector(0b0110, 4).dot(Gf2Vector(0b0110, 4)));
    CHECK((Gf2Vector(0b0110, 4) + Gf2Vector(0b0011, 4)).bits() == 0b0101U);
    CHECK_THROWS_AS(Gf2Vector(0b10000, 4), PreconditionError);
    CHECK_THROWS_AS(Gf2Vector(1, 0), PreconditionError);
    CHECK_THROWS_AS(Gf2Vector(1, 33), PreconditionError);
    CHECK_THROWS_AS(Gf2Vector(1, 3) + Gf2Vector(1, 4), PreconditionError);
}

TEST_CASE("rank examples")
{
    CHECK(rank(Gf2Matrix::identity(7)) == 7);
    CHECK(rank(Gf2Matrix::zero(5, 9)) == 0);
    CHECK(rank(gram(construct_s1(7))) == 7);
    const std::uint32_t rows[] = {0b011, 0b110, 0b101};
    CHECK(rank_of_masks(rows) == 2);
}

TEST_CASE("is_nonsingular examples")
{
    CHECK(is_nonsingular(Gf2Matrix::identity(4)));
    CHECK_FALSE(is_nonsingular(Gf2Matrix::zero(4, 4)));
    const std::uint32_t block[] = {0b1110, 0b1101, 0b1011, 0b0111};
    CHECK(is_nonsingular(Gf2Matrix::from_row_masks(block, 4)));
    CHECK_THROWS_AS((void)is_nonsingular(Gf2Matrix::zero(2, 3)), PreconditionError);
}

TEST_CASE("kernel_basis examples")
{
    CHECK(kernel_basis(Gf2Matrix::identity(5)).rows() == 0);

    const std::uint32_t ones[] = {0b11};
    const Gf2Matrix k = kernel_basis(Gf2Matrix::from_row_masks(ones, 2));
    REQUIRE(k.rows() == 1);
    CHECK(k.row_mask(0) == 0b11U);

    const auto pts = all_nonzero(3);
    const Gf2Matrix h = Gf2Matrix::from_columns(pts, 3);
    const Gf2Matrix basis = kernel_basis(h);
    CHECK(basis.rows() == 4);
    CHECK(rank(basis) == 4);
    CHECK(mat_mul_t(h, basis).is_zero());
}

TEST_CASE("outer_accumulate examples")
{
    std::vector<std::uint32_t> units;
    for (int i = 0; i < 6; ++i) {
        units.push_back(1U << i);
    }
    CHECK(outer_accumulate(units, 6) == Gf2Matrix::identity(6));
    for (int m = 3; m <= 6; ++m) {
        CHECK(outer_accumulate(all_nonzero(m), m).is_zero());
    }
    Gf2Matrix expected = Gf2Matrix::identity(7);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            expected.set(i, j, i != j);
        }
    }
    CHECK(gram(construct_s2(7)) == expected);
}

TEST_CASE("mat_mul_t examples")
{
    CHECK(mat_mul_t(Gf2Matrix::identity(5), Gf2Matrix::identity(5)) == Gf2Matrix::identity(5));
    const std::uint32_t row[] = {0b111};
    const Gf2Matrix a = Gf2Matrix::from_row_masks(row, 3);
    const Gf2Matrix p = mat_mul_t(a, a);
    CHECK(p.rows() == 1);
    CHECK(p.cols() == 1);
    CHECK(p.get(0, 0));
    const PointSet s1 = construct_s1(7);
    const Gf2Matrix h = s1.column_matrix();
    CHECK(mat_mul_t(h, h) == Gf2Matrix::identity(7));
    CHECK(mat_mul_t(h, h) == outer_accumulate(s1.points(), 7));
}

TEST_CASE("wide matrices beyond one word")
{
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 1 + rng.below(12);
        const std::size_t cols = 1 + rng.below(200);
        const Gf2Matrix m = random_matrix(rows, cols, rng);
        CHECK(static_cast<int>(rank(m)) == oracle::rank(dense(m)));
        CHECK(m.transpose().transpose() == m);
    }
}

TEST_CASE("property: rank equals rank of transpose and the oracle")
{
    Rng rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        const Gf2Matrix m = random_matrix(1 + rng.below(20), 1 + rng.below(70), rng);
        const auto r = rank(m);
        CHECK(r == rank(m.transpose()));
        CHECK(static_cast<int>(r) == oracle::rank(dense(m)));
        CHECK(r <= std::min(m.rows(), m.cols()));
    }
}

TEST_CASE("property: rank-nullity and kernel vectors are annihilated")
{
    Rng rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        const Gf2Matrix m = random_matrix(1 + rng.below(16), 1 + rng.below(80), rng);
        const Gf2Matrix k = kernel_basis(m);
        CHECK(rank(m) + k.rows() == m.cols());
        if (k.rows() > 0) {
            CHECK(k.cols() == m.cols());
            CHECK(mat_mul_t(m, k).is_zero());
            CHECK(rank(k) == k.rows());
        }
    }
}

TEST_CASE("property: outer_accumulate matches the oracle, H H^T, permutations and disjoint unions")
{
    Rng rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(10));
        std::vector<std::uint32_t> pts = all_nonzero(m);
        rng.shuffle(std::span(pts));
        pts.resize(rng.below(pts.size() + 1));
        const Gf2Matrix u = outer_accumulate(pts, m);
        CHECK(u.is_symmetric());
        CHECK(dense(u) == oracle::gram(pts, m));
        if (!pts.empty()) {
            const Gf2Matrix h = Gf2Matrix::from_columns(pts, m);
            CHECK(u == mat_mul_t(h, h));
        }
        auto shuffled = pts;
        rng.shuffle(std::span(shuffled));
        CHECK(outer_accumulate(shuffled, m) == u);
        const std::size_t cut = rng.below(pts.size() + 1);
        const std::span<const std::uint32_t> all(pts);
        CHECK(outer_accumulate(all.first(cut), m) + outer_accumulate(all.subspan(cut), m) == u);
    }
}

TEST_CASE("row space membership and echelon basis")
{
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const Gf2Matrix m = random_matrix(1 + rng.below(8), 1 + rng.below(90), rng);
        const Gf2Matrix e = row_echelon_basis(m);
        CHECK(e.rows() == rank(m));
        for (std::size_t r = 0; r < m.rows(); ++r) {
            CHECK(in_row_space(e, m.row(r)));
        }
        std::vector<std::uint64_t> x(m.words_per_row(), 0);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (rng.coin()) {
                x[c / 64] |= std::uint64_t{1} << (c % 64);
            }
        }
        const auto y = mat_vec(m, x);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            int sum = 0;
            for (std::size_t c = 0; c < m.cols(); ++c) {
                sum += (m.get(r, c) && ((x[c / 64] >> (c % 64)) & 1U)) ? 1 : 0;
            }
            CHECK(((y[r / 64] >> (r % 64)) & 1U) == static_cast<std::uint64_t>(sum % 2));
        }
    }
}
