#pragma once

// Point sets in F2^m: the cap predicate, periods, maximal caps, hyperplane
// geometry and the two explicit LCD-friendly cap constructions.

#include "caplcd/gf2.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace caplcd {

/// Operations that enumerate all of F2^m are limited to this dimension.
inline constexpr int kMaxEnumerableDim = 24;

/// Duplicate-free set of nonzero points of F2^m. Input order is kept (it fixes
/// the column order of H_S); set semantics use the ascending view.
class PointSet {
public:
    PointSet(int dim, std::vector<std::uint32_t> points);

    static PointSet from_vectors(std::span<const Gf2Vector> points);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }

    /// Points in input order.
    [[nodiscard]] std::span<const std::uint32_t> points() const noexcept { return points_; }
    /// Points in ascending mask order.
    [[nodiscard]] std::span<const std::uint32_t> sorted() const noexcept { return sorted_; }
    [[nodiscard]] bool contains(std::uint32_t p) const;
    [[nodiscard]] std::vector<Gf2Vector> vectors() const;

    /// H_S: the dim x n matrix with the points as columns, in input order.
    [[nodiscard]] Gf2Matrix column_matrix() const;

    friend bool operator==(const PointSet& a, const PointSet& b)
    {
        return a.dim_ == b.dim_ && a.sorted_ == b.sorted_;
    }

private:
    int dim_;
    std::vector<std::uint32_t> points_;
    std::vector<std::uint32_t> sorted_;
};

struct PeriodInfo {
    int dim = 0;                        // |Per(S)| = 2^dim
    std::vector<std::uint32_t> basis;   // reduced echelon basis, ascending
};

struct CapStructureReport {
    bool is_cap = false;
    PeriodInfo period;
    bool is_maximal = false;            // only meaningful when is_cap
    std::optional<std::uint32_t> avoided_hyperplane_normal;
};

/// No three points of S are linearly dependent.
[[nodiscard]] bool is_cap(const PointSet& s);

/// Per(S) = {v : s + v in S for all s in S}. Requires S nonempty.
[[nodiscard]] PeriodInfo period(const PointSet& s);

/// Membership test for Per(S).
[[nodiscard]] bool is_period_vector(const PointSet& s, std::uint32_t v);

/// S is a cap that no outside nonzero point extends. Throws PreconditionError
/// when S is not a cap.
[[nodiscard]] bool is_maximal_cap(const PointSet& s);

/// Greedy completion to a maximal cap: candidates are visited in a seeded
/// Fisher-Yates order and each one that keeps the cap property is added.
[[nodiscard]] PointSet complete_to_maximal(const PointSet& s, std::uint64_t seed);

/// U_S = sum of s s^T.
[[nodiscard]] Gf2Matrix gram(const PointSet& s);

/// Some v with <v, s> = 1 for every s in S, or nothing when no such v exists.
[[nodiscard]] std::optional<std::uint32_t> avoided_hyperplane(const PointSet& s);

[[nodiscard]] CapStructureReport analyze_structure(const PointSet& s);

/// F2^m minus (H union {e_1..e_m}) with H = <e_1 + ... + e_m>^perp. 4 <= m <= 24.
[[nodiscard]] PointSet construct_s1(int m);

/// Two-clause cap T (odd weight with at most one of a1,a2,a3 set, or even
/// weight with a1=a2=a3=1) minus {e_1..e_m, e_1+e_2+e_3+e_4}. 7 <= m <= 24.
[[nodiscard]] PointSet construct_s2(int m);

/// The cap T above, before the removals. Maximal of size 2^{m-2}+2^{m-4}
/// with period <e_4..e_m> intersected with H. 4 <= m <= 24.
[[nodiscard]] PointSet two_clause_cap(int m);

/// F2^m \ <v>^perp.
[[nodiscard]] PointSet hyperplane_complement(std::uint32_t normal, int m);

/// |S intersected with <v>^perp|.
[[nodiscard]] std::size_t hyperplane_intersection_size(const PointSet& s, std::uint32_t normal);

/// Expected U_{S_2}: the 4x4 all-ones-minus-identity block direct sum I_{m-4}.
[[nodiscard]] Gf2Matrix s2_gram_pattern(int m);

} // namespace caplcd
