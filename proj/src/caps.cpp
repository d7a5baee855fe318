#include "caplcd/caps.hpp"

#include "caplcd/error.hpp"
#include "caplcd/random.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

namespace caplcd {

namespace {

void require_enumerable(int m, const char* what)
{
    if (m > kMaxEnumerableDim) {
        throw PreconditionError(std::string(what) + " enumerates F2^m and supports m <= 24");
    }
}

// Point membership with O(1) lookups when 2^m fits in memory.
class Membership {
public:
    explicit Membership(const PointSet& s) : set_(&s)
    {
        if (s.dim() <= kMaxEnumerableDim) {
            bitmap_.assign(std::size_t{1} << s.dim(), 0);
            for (std::uint32_t p : s.points()) {
                bitmap_[p] = 1;
            }
        }
    }

    [[nodiscard]] bool operator()(std::uint32_t p) const
    {
        if (!bitmap_.empty()) {
            return p < bitmap_.size() && bitmap_[p] != 0;
        }
        return set_->contains(p);
    }

private:
    const PointSet* set_;
    std::vector<std::uint8_t> bitmap_;
};

// Reduced echelon basis of the span, sorted ascending.
std::vector<std::uint32_t> reduced_basis(std::span<const std::uint32_t> vectors)
{
    std::array<std::uint32_t, 32> by_top{};
    for (std::uint32_t v : vectors) {
        while (v != 0) {
            const int top = 31 - std::countl_zero(v);
            auto& slot = by_top[static_cast<std::size_t>(top)];
            if (slot == 0) {
                slot = v;
                break;
            }
            v ^= slot;
        }
    }
    for (int top = 0; top < 32; ++top) {
        const std::uint32_t pivot = by_top[static_cast<std::size_t>(top)];
        if (pivot == 0) {
            continue;
        }
        for (int other = top + 1; other < 32; ++other) {
            auto& row = by_top[static_cast<std::size_t>(other)];
            if (row != 0 && ((row >> top) & 1U) != 0) {
                row ^= pivot;
            }
        }
    }
    std::vector<std::uint32_t> basis;
    for (std::uint32_t v : by_top) {
        if (v != 0) {
            basis.push_back(v);
        }
    }
    std::ranges::sort(basis);
    return basis;
}

std::vector<std::uint32_t> all_nonzero_where(int m, auto&& keep)
{
    std::vector<std::uint32_t> out;
    const std::uint32_t limit = std::uint32_t{1} << m;
    for (std::uint32_t p = 1; p < limit; ++p) {
        if (keep(p)) {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(int dim, std::vector<std::uint32_t> points) : dim_(dim), points_(std::move(points))
{
    if (dim < 1 || dim > kMaxDim) {
        throw PreconditionError("point set dimension " + std::to_string(dim) + " outside 1..32");
    }
    for (std::uint32_t p : points_) {
        if (p == 0) {
            throw PreconditionError("point set contains the zero vector");
        }
        if ((p & ~low_mask(dim)) != 0) {
            throw PreconditionError("point " + std::to_string(p) + " lies outside F2^" + std::to_string(dim));
        }
    }
    sorted_ = points_;
    std::ranges::sort(sorted_);
    if (std::ranges::adjacent_find(sorted_) != sorted_.end()) {
        throw PreconditionError("point set contains a duplicate point");
    }
}

PointSet PointSet::from_vectors(std::span<const Gf2Vector> points)
{
    if (points.empty()) {
        throw PreconditionError("cannot infer the dimension of an empty vector list");
    }
    std::vector<std::uint32_t> masks;
    masks.reserve(points.size());
    for (const auto& p : points) {
        if (p.dim() != points.front().dim()) {
            throw PreconditionError("points have different dimensions");
        }
        masks.push_back(p.bits());
    }
    return {points.front().dim(), std::move(masks)};
}

bool PointSet::contains(std::uint32_t p) const
{
    return std::ranges::binary_search(sorted_, p);
}

std::vector<Gf2Vector> PointSet::vectors() const
{
    std::vector<Gf2Vector> out;
    out.reserve(points_.size());
    for (std::uint32_t p : points_) {
        out.emplace_back(p, dim_);
    }
    return out;
}

Gf2Matrix PointSet::column_matrix() const
{
    return Gf2Matrix::from_columns(points_, dim_);
}

// ---------------------------------------------------------------------------
// Predicates

bool is_cap(const PointSet& s)
{
    const Membership member(s);
    const auto pts = s.sorted();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (member(pts[i] ^ pts[j])) {
                return false;
            }
        }
    }
    return true;
}

bool is_period_vector(const PointSet& s, std::uint32_t v)
{
    if (v == 0) {
        return true;
    }
    const Membership member(s);
    return std::ranges::all_of(s.points(), [&](std::uint32_t p) { return member(p ^ v); });
}

PeriodInfo period(const PointSet& s)
{
    if (s.empty()) {
        throw PreconditionError("period of an empty set");
    }
    const Membership member(s);
    // v in Per(S) forces s0 + v in S, so v ranges over s0 + S.
    const std::uint32_t anchor = s.sorted().front();
    std::vector<std::uint32_t> members;
    for (std::uint32_t t : s.sorted()) {
        const std::uint32_t v = anchor ^ t;
        if (v == 0) {
            continue;
        }
        if (std::ranges::all_of(s.sorted(), [&](std::uint32_t p) { return member(p ^ v); })) {
            members.push_back(v);
        }
    }
    PeriodInfo info;
    info.basis = reduced_basis(members);
    info.dim = static_cast<int>(info.basis.size());
    return info;
}

bool is_maximal_cap(const PointSet& s)
{
    if (!is_cap(s)) {
        throw PreconditionError("is_maximal_cap: input is not a cap");
    }
    require_enumerable(s.dim(), "is_maximal_cap");
    std::vector<std::uint8_t> covered(std::size_t{1} << s.dim(), 0);
    covered[0] = 1;
    const auto pts = s.sorted();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        covered[pts[i]] = 1;
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            covered[pts[i] ^ pts[j]] = 1;
        }
    }
    return std::ranges::all_of(covered, [](std::uint8_t c) { return c != 0; });
}

PointSet complete_to_maximal(const PointSet& s, std::uint64_t seed)
{
    if (!is_cap(s)) {
        throw PreconditionError("complete_to_maximal: input is not a cap");
    }
    require_enumerable(s.dim(), "complete_to_maximal");
    std::vector<std::uint8_t> blocked(std::size_t{1} << s.dim(), 0);
    blocked[0] = 1;
    std::vector<std::uint32_t> chosen(s.points().begin(), s.points().end());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        blocked[chosen[i]] = 1;
        for (std::size_t j = i + 1; j < chosen.size(); ++j) {
            blocked[chosen[i] ^ chosen[j]] = 1;
        }
    }
    auto candidates = all_nonzero_where(s.dim(), [&](std::uint32_t p) { return blocked[p] == 0; });
    Rng rng(seed);
    rng.shuffle(std::span(candidates));
    for (std::uint32_t p : candidates) {
        if (blocked[p] != 0) {
            continue;
        }
        for (std::uint32_t q : chosen) {
            blocked[p ^ q] = 1;
        }
        blocked[p] = 1;
        chosen.push_back(p);
    }
    return {s.dim(), std::move(chosen)};
}

Gf2Matrix gram(const PointSet& s)
{
    return outer_accumulate(s.points(), s.dim());
}

std::optional<std::uint32_t> avoided_hyperplane(const PointSet& s)
{
    if (s.empty()) {
        throw PreconditionError("avoided_hyperplane of an empty set");
    }
    // Solve <v, p> = 1 for all p: rows are p with an augmented constant bit.
    const int m = s.dim();
    const std::uint64_t rhs = std::uint64_t{1} << m;
    std::vector<std::uint64_t> rows;
    rows.reserve(s.size());
    for (std::uint32_t p : s.points()) {
        rows.push_back(std::uint64_t{p} | rhs);
    }
    std::vector<int> pivot_cols;
    std::size_t next = 0;
    for (int c = 0; c < m && next < rows.size(); ++c) {
        const std::uint64_t bit = std::uint64_t{1} << c;
        auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(next), rows.end(),
                               [&](std::uint64_t r) { return (r & bit) != 0; });
        if (it == rows.end()) {
            continue;
        }
        std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(next), it);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != next && (rows[r] & bit) != 0) {
                rows[r] ^= rows[next];
            }
        }
        pivot_cols.push_back(c);
        ++next;
    }
    for (std::size_t r = next; r < rows.size(); ++r) {
        if (rows[r] == rhs) {
            return std::nullopt;
        }
    }
    std::uint32_t v = 0;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
        if ((rows[r] & rhs) != 0) {
            v |= std::uint32_t{1} << pivot_cols[r];
        }
    }
    return v;
}

CapStructureReport analyze_structure(const PointSet& s)
{
    CapStructureReport report;
    report.is_cap = is_cap(s);
    if (!s.empty()) {
        report.period = period(s);
        report.avoided_hyperplane_normal = avoided_hyperplane(s);
    }
    if (report.is_cap && s.dim() <= kMaxEnumerableDim) {
        report.is_maximal = is_maximal_cap(s);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Constructions

PointSet construct_s1(int m)
{
    if (m < 4 || m > kMaxEnumerableDim) {
        throw PreconditionError("construct_s1 requires 4 <= m <= 24, got m=" + std::to_string(m));
    }
    return {m, all_nonzero_where(m, [](std::uint32_t p) {
                return (std::popcount(p) & 1) == 1 && std::popcount(p) != 1;
            })};
}

PointSet two_clause_cap(int m)
{
    if (m < 4 || m > kMaxEnumerableDim) {
        throw PreconditionError("two_clause_cap requires 4 <= m <= 24, got m=" + std::to_string(m));
    }
    return {m, all_nonzero_where(m, [](std::uint32_t p) {
                const bool off_h = (std::popcount(p) & 1) == 1;
                const int lead = std::popcount(p & 0x7U);
                return off_h ? lead <= 1 : lead == 3;
            })};
}

PointSet construct_s2(int m)
{
    if (m < 7 || m > kMaxEnumerableDim) {
        throw PreconditionError("construct_s2 requires 7 <= m <= 24, got m=" + std::to_string(m));
    }
    const PointSet t = two_clause_cap(m);
    std::vector<std::uint32_t> pts;
    for (std::uint32_t p : t.points()) {
        if (std::popcount(p) != 1 && p != 0xFU) {
            pts.push_back(p);
        }
    }
    return {m, std::move(pts)};
}

PointSet hyperplane_complement(std::uint32_t normal, int m)
{
    if (m < 1 || m > kMaxEnumerableDim) {
        throw PreconditionError("hyperplane_complement requires 1 <= m <= 24");
    }
    if (normal == 0 || (normal & ~low_mask(m)) != 0) {
        throw PreconditionError("hyperplane normal must be a nonzero vector of F2^m");
    }
    return {m, all_nonzero_where(m, [normal](std::uint32_t p) { return dot(p, normal); })};
}

std::size_t hyperplane_intersection_size(const PointSet& s, std::uint32_t normal)
{
    return static_cast<std::size_t>(
        std::ranges::count_if(s.points(), [normal](std::uint32_t p) { return !dot(p, normal); }));
}

Gf2Matrix s2_gram_pattern(int m)
{
    if (m < 4) {
        throw PreconditionError("s2_gram_pattern requires m >= 4");
    }
    auto u = Gf2Matrix::identity(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            u.set(i, j, i != j);
        }
    }
    return u;
}

} // namespace caplcd
