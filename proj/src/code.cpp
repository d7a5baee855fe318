#include "caplcd/code.hpp"

#include "caplcd/error.hpp"

#include <algorithm>
#include <unordered_set>
#include <vector>

namespace caplcd {

namespace {

// Calls visit(sum) for the XOR of every size-`size` subset of `cols`; stops
// early and returns true as soon as visit returns true.
template <typename Visit>
bool for_each_subset_sum(const std::vector<std::uint64_t>& cols, int size, Visit&& visit)
{
    struct Walker {
        const std::vector<std::uint64_t>& cols;
        Visit& visit;

        bool walk(std::size_t start, int remaining, std::uint64_t acc)
        {
            if (remaining == 0) {
                return visit(acc);
            }
            const std::size_t last = cols.size() - static_cast<std::size_t>(remaining);
            for (std::size_t i = start; i <= last; ++i) {
                if (walk(i + 1, remaining - 1, acc ^ cols[i])) {
                    return true;
                }
            }
            return false;
        }
    };
    if (static_cast<std::size_t>(size) > cols.size()) {
        return false;
    }
    Walker walker{cols, visit};
    return walker.walk(0, size, 0);
}

// Set of syndromes; a byte map when 2^r is small.
class SyndromeSet {
public:
    explicit SyndromeSet(std::size_t rows)
    {
        if (rows <= kBitmapRows) {
            bitmap_.assign(std::size_t{1} << rows, 0);
        }
    }

    /// Returns false when the value was already present.
    bool insert(std::uint64_t v)
    {
        if (!bitmap_.empty()) {
            auto& slot = bitmap_[static_cast<std::size_t>(v)];
            const bool fresh = slot == 0;
            slot = 1;
            return fresh;
        }
        return hashed_.insert(v).second;
    }

    [[nodiscard]] bool contains(std::uint64_t v) const
    {
        if (!bitmap_.empty()) {
            return bitmap_[static_cast<std::size_t>(v)] != 0;
        }
        return hashed_.contains(v);
    }

private:
    static constexpr std::size_t kBitmapRows = 22;
    std::vector<std::uint8_t> bitmap_;
    std::unordered_set<std::uint64_t> hashed_;
};

} // namespace

// ---------------------------------------------------------------------------
// LinearCode

LinearCode::LinearCode(Gf2Matrix parity, std::optional<Gf2Matrix> generator)
    : parity_(std::move(parity)), cache_(std::make_shared<GeneratorCache>())
{
    if (parity_.rows() >= parity_.cols()) {
        throw PreconditionError("zero-dimensional code");
    }
    if (generator) {
        std::call_once(cache_->once, [&] { cache_->matrix = std::move(*generator); });
    }
}

LinearCode LinearCode::from_parity_check(Gf2Matrix h)
{
    if (rank(h) < h.rows()) {
        h = row_echelon_basis(h);
    }
    return {std::move(h), std::nullopt};
}

LinearCode LinearCode::from_generator(const Gf2Matrix& g)
{
    Gf2Matrix basis = rank(g) < g.rows() ? row_echelon_basis(g) : g;
    if (basis.rows() == 0) {
        throw PreconditionError("zero-dimensional code");
    }
    return {kernel_basis(basis), std::move(basis)};
}

const Gf2Matrix& LinearCode::generator() const
{
    std::call_once(cache_->once, [this] { cache_->matrix = kernel_basis(parity_); });
    return cache_->matrix;
}

LinearCode LinearCode::dual() const
{
    return {generator(), parity_};
}

std::string MinDistance::to_string() const
{
    return exact ? std::to_string(value) : ">= " + std::to_string(value);
}

// ---------------------------------------------------------------------------
// Construction from point sets

LinearCode code_from_points(const PointSet& s)
{
    Gf2Matrix h = s.column_matrix();
    if (rank(h) < static_cast<std::size_t>(s.dim())) {
        throw PreconditionError("span deficiency: the points do not span F2^" + std::to_string(s.dim()));
    }
    if (s.size() == static_cast<std::size_t>(s.dim())) {
        throw PreconditionError("zero-dimensional code");
    }
    return LinearCode::from_parity_check(std::move(h));
}

PointSet points_from_parity_check(const Gf2Matrix& h)
{
    if (h.rows() == 0 || h.rows() > static_cast<std::size_t>(kMaxDim)) {
        throw PreconditionError("parity-check matrix must have between 1 and 32 rows");
    }
    std::vector<std::uint32_t> cols;
    cols.reserve(h.cols());
    for (std::size_t c = 0; c < h.cols(); ++c) {
        cols.push_back(h.column_mask(c));
    }
    for (std::uint32_t c : cols) {
        if (c == 0) {
            throw PreconditionError("parity-check matrix has a zero column (d <= 1)");
        }
    }
    try {
        return {static_cast<int>(h.rows()), std::move(cols)};
    } catch (const PreconditionError&) {
        throw PreconditionError("parity-check matrix has a repeated column (d <= 2)");
    }
}

// ---------------------------------------------------------------------------
// Analytics

std::size_t hull_dimension(const LinearCode& code)
{
    const Gf2Matrix& g = code.generator();
    return code.dimension() - rank(mat_mul_t(g, g));
}

bool is_lcd(const LinearCode& code)
{
    return hull_dimension(code) == 0;
}

bool is_self_orthogonal(const LinearCode& code)
{
    return hull_dimension(code) == code.dimension();
}

bool is_even_code(const LinearCode& code)
{
    const std::size_t n = code.length();
    std::vector<std::uint64_t> ones(code.parity_check().words_per_row(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        ones[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return in_row_space(code.parity_check(), ones);
}

MinDistance min_distance_bounded(const LinearCode& code, int w_max)
{
    const std::size_t n = code.length();
    if (w_max < 1 || static_cast<std::size_t>(w_max) > n) {
        throw PreconditionError("min_distance_bounded requires 1 <= w_max <= n");
    }
    const Gf2Matrix& h = code.parity_check();
    if (h.rows() > 64) {
        throw PreconditionError("min_distance_bounded supports at most 64 parity checks");
    }
    std::vector<std::uint64_t> cols(n);
    for (std::size_t c = 0; c < n; ++c) {
        cols[c] = h.column_mask64(c);
    }

    for (int half = 0; 2 * half <= w_max; ++half) {
        SyndromeSet sums(h.rows());
        if (half == 0) {
            sums.insert(0);
        } else {
            const bool collision =
                for_each_subset_sum(cols, half, [&](std::uint64_t v) { return !sums.insert(v); });
            if (collision) {
                return {2 * half, true};
            }
        }
        if (2 * half + 1 > w_max) {
            break;
        }
        const bool hit = for_each_subset_sum(cols, half + 1, [&](std::uint64_t v) { return sums.contains(v); });
        if (hit) {
            return {2 * half + 1, true};
        }
    }
    return {w_max + 1, false};
}

CodeReport analyze_code(const LinearCode& code, int w_max)
{
    CodeReport report;
    report.n = code.length();
    report.k = code.dimension();
    report.hull_dim = hull_dimension(code);
    report.is_lcd = report.hull_dim == 0;
    report.is_self_orthogonal = report.hull_dim == report.k;
    report.is_even = is_even_code(code);
    const int bound = std::min<int>(w_max, static_cast<int>(report.n));
    report.min_distance = min_distance_bounded(code, bound);
    return report;
}

} // namespace caplcd
