#pragma once

// Binary linear codes held in parity-check form, with the analytics needed to
// certify LCD codes: hull dimension, LCD/even/self-orthogonal predicates and a
// bounded minimum-distance search over column dependencies of H.

#include "caplcd/caps.hpp"
#include "caplcd/gf2.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace caplcd {

class LinearCode {
public:
    /// C = {x : H x = 0}. Dependent rows of H are dropped. Throws
    /// PreconditionError for the zero code (k = 0).
    static LinearCode from_parity_check(Gf2Matrix h);
    /// C = row space of G.
    static LinearCode from_generator(const Gf2Matrix& g);

    [[nodiscard]] std::size_t length() const noexcept { return parity_.cols(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return length() - parity_.rows(); }
    [[nodiscard]] std::size_t redundancy() const noexcept { return parity_.rows(); }

    /// Full row rank parity-check matrix.
    [[nodiscard]] const Gf2Matrix& parity_check() const noexcept { return parity_; }
    /// Generator matrix derived from kernel_basis(H) on first use.
    [[nodiscard]] const Gf2Matrix& generator() const;

    /// C^perp, obtained by swapping the generator and parity-check roles.
    [[nodiscard]] LinearCode dual() const;

private:
    struct GeneratorCache {
        std::once_flag once;
        Gf2Matrix matrix;
    };

    LinearCode(Gf2Matrix parity, std::optional<Gf2Matrix> generator);

    Gf2Matrix parity_;
    std::shared_ptr<GeneratorCache> cache_;
};

/// Either an exact minimum distance or the marker ">= value".
struct MinDistance {
    int value = 0;
    bool exact = false;

    friend bool operator==(const MinDistance&, const MinDistance&) = default;
    [[nodiscard]] std::string to_string() const;
};

struct CodeReport {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t hull_dim = 0;
    bool is_lcd = false;
    bool is_even = false;
    bool is_self_orthogonal = false;
    MinDistance min_distance;
};

/// C_S with H_S as parity-check matrix, columns in the set's input order.
/// Throws PreconditionError("span deficiency") when <S> != F2^m and
/// PreconditionError("zero-dimensional code") when |S| = m.
[[nodiscard]] LinearCode code_from_points(const PointSet& s);

/// Column set of H. Throws PreconditionError on a zero or repeated column or
/// when H has more than 32 rows.
[[nodiscard]] PointSet points_from_parity_check(const Gf2Matrix& h);

/// k - rank(G G^T).
[[nodiscard]] std::size_t hull_dimension(const LinearCode& code);
[[nodiscard]] bool is_lcd(const LinearCode& code);
[[nodiscard]] bool is_self_orthogonal(const LinearCode& code);
/// Every codeword has even weight, i.e. the all-ones word is in the row space of H.
[[nodiscard]] bool is_even_code(const LinearCode& code);

/// Smallest number of linearly dependent columns of H if it is <= w_max,
/// otherwise ">= w_max + 1". Requires 1 <= w_max <= n and at most 64 rows in H.
///
/// Weights are tried in increasing order. At weight w the sums of all
/// ceil(w/2)- and floor(w/2)-subsets of columns are compared; since nothing
/// smaller was dependent, any two distinct subsets with equal sums have a
/// symmetric difference of size exactly w.
[[nodiscard]] MinDistance min_distance_bounded(const LinearCode& code, int w_max);

inline constexpr int kDefaultDistanceBound = 5;

[[nodiscard]] CodeReport analyze_code(const LinearCode& code, int w_max = kDefaultDistanceBound);

} // namespace caplcd
