#include "caplcd/selftest.hpp"

#include "caplcd/code.hpp"
#include "caplcd/error.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

namespace caplcd {

std::uint32_t random_nonzero(int m, Rng& rng)
{
    return static_cast<std::uint32_t>(1 + rng.below((std::uint64_t{1} << m) - 1));
}

PointSet random_subset(int m, std::size_t size, Rng& rng)
{
    std::vector<std::uint32_t> all;
    for (std::uint32_t p = 1; p < (std::uint32_t{1} << m); ++p) {
        all.push_back(p);
    }
    rng.shuffle(std::span(all));
    all.resize(std::min(size, all.size()));
    return PointSet(m, std::move(all));
}

PointSet random_periodic_set(int m, int period_dim, Rng& rng)
{
    std::vector<std::uint32_t> basis(static_cast<std::size_t>(period_dim));
    do {
        for (auto& b : basis) {
            b = random_nonzero(m, rng);
        }
    } while (rank_of_masks(basis) != period_dim);
    std::vector<std::uint32_t> subspace{0};
    for (std::uint32_t b : basis) {
        const std::size_t half = subspace.size();
        for (std::size_t i = 0; i < half; ++i) {
            subspace.push_back(subspace[i] ^ b);
        }
    }
    for (;;) {
        std::vector<std::uint32_t> pts;
        for (std::uint32_t x = 1; x < (std::uint32_t{1} << m); ++x) {
            std::uint32_t rep = x;
            for (std::uint32_t w : subspace) {
                rep = std::min(rep, x ^ w);
            }
            if (rep != 0 && rep == x && rng.coin()) {
                for (std::uint32_t w : subspace) {
                    pts.push_back(x ^ w);
                }
            }
        }
        if (!pts.empty()) {
            return PointSet(m, std::move(pts));
        }
    }
}

PointSet random_periodic_cap(int m, std::uint32_t v, Rng& rng)
{
    const std::uint32_t size = std::uint32_t{1} << m;
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t p = 1; p < size; ++p) {
        if (p != v && p < (p ^ v)) {
            candidates.push_back(p);
        }
    }
    rng.shuffle(std::span(candidates));
    const auto max_pairs = 1 + rng.below(std::uint64_t{1} << (m - 2));
    // x extends the cap iff x is neither a member nor a sum of two members.
    std::vector<std::uint8_t> blocked(size, 0);
    std::vector<std::uint8_t> member(size, 0);
    blocked[0] = 1;
    std::vector<std::uint32_t> pts;
    auto add = [&](std::uint32_t x) {
        for (std::uint32_t a : pts) {
            blocked[a ^ x] = 1;
        }
        blocked[x] = 1;
        member[x] = 1;
        pts.push_back(x);
    };
    for (std::uint32_t p : candidates) {
        if (pts.size() / 2 >= max_pairs) {
            break;
        }
        // After adding p, p + v is blocked only through v itself being a member.
        const std::uint32_t q = p ^ v;
        if (blocked[p] == 0 && blocked[q] == 0 && member[v] == 0) {
            add(p);
            add(q);
        }
    }
    return PointSet(m, std::move(pts));
}

PointSet one_point_hyperplane_cap(int m, std::uint32_t normal, std::uint32_t h, Rng& rng)
{
    if (h == 0 || dot(normal, h)) {
        throw PreconditionError("h must be a nonzero point of the hyperplane");
    }
    std::vector<std::uint32_t> pts{h};
    for (std::uint32_t a = 1; a < (std::uint32_t{1} << m); ++a) {
        if (dot(normal, a) && a < (a ^ h)) {
            pts.push_back(rng.coin() ? a : a ^ h);
        }
    }
    return PointSet(m, std::move(pts));
}

PointSet random_complement_cap(int m, std::uint32_t normal, std::size_t size, Rng& rng)
{
    std::vector<std::uint32_t> outside;
    for (std::uint32_t a = 1; a < (std::uint32_t{1} << m); ++a) {
        if (dot(normal, a)) {
            outside.push_back(a);
        }
    }
    rng.shuffle(std::span(outside));
    outside.resize(std::min(size, outside.size()));
    return PointSet(m, std::move(outside));
}

bool SelftestReport::pass() const
{
    return std::ranges::all_of(properties, [](const PropertyResult& p) { return p.violations == 0; });
}

namespace {

std::string describe(const PointSet& s)
{
    std::ostringstream out;
    out << "m=" << s.dim() << " S=[";
    for (std::size_t i = 0; i < s.sorted().size(); ++i) {
        out << (i ? "," : "") << s.sorted()[i];
    }
    out << "]";
    return out.str();
}

bool spans(const PointSet& s)
{
    return rank_of_masks(s.points()) == s.dim();
}

int draw(Rng& rng, int lo, int hi)
{
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

// A spanning set of size > m: subsets of a hyperplane complement, optionally
// plus one more point, or arbitrary subsets.
PointSet random_code_set(Rng& rng, int m_lo, int m_hi, std::size_t max_size)
{
    for (;;) {
        const int m = draw(rng, m_lo, m_hi);
        const std::size_t cap_max = std::min<std::size_t>(max_size, std::size_t{1} << (m - 1));
        PointSet s = [&] {
            if (rng.coin() && cap_max >= static_cast<std::size_t>(m + 1)) {
                const std::uint32_t v = random_nonzero(m, rng);
                const auto size = static_cast<std::size_t>(draw(rng, m + 1, static_cast<int>(cap_max)));
                PointSet c = random_complement_cap(m, v, size, rng);
                if (!rng.coin()) {
                    return c;
                }
                std::vector<std::uint32_t> pts(c.points().begin(), c.points().end());
                std::uint32_t h = 0;
                do {
                    h = random_nonzero(m, rng);
                } while (dot(v, h));
                pts.push_back(h);
                return PointSet(m, std::move(pts));
            }
            const std::size_t all_max = std::min<std::size_t>(max_size, (std::size_t{1} << m) - 1);
            const auto size = static_cast<std::size_t>(draw(rng, m + 1, static_cast<int>(all_max)));
            return random_subset(m, size, rng);
        }();
        if (spans(s) && s.size() > static_cast<std::size_t>(m)) {
            return s;
        }
    }
}

class Suite {
public:
    explicit Suite(const SelftestOptions& options) : options_(options) {}

    Gf2Matrix gram_under_test(const PointSet& s) const
    {
        Gf2Matrix u = gram(s);
        if (options_.inject_gram_fault) {
            u.flip(0, 0);
        }
        return u;
    }

    void property(const std::string& name, const std::function<std::optional<std::string>(Rng&)>& check)
    {
        PropertyResult result;
        result.name = name;
        Rng rng(derive_seed(options_.seed, report_.properties.size()));
        for (int i = 0; i < options_.iterations; ++i) {
            ++result.checked;
            if (auto bad = check(rng)) {
                if (result.violations++ == 0) {
                    result.first_violation = *bad;
                }
            }
        }
        report_.properties.push_back(std::move(result));
    }

    SelftestReport take() { return std::move(report_); }

private:
    SelftestOptions options_;
    SelftestReport report_;
};

} // namespace

SelftestReport run_selftest(const SelftestOptions& options)
{
    if (options.iterations < 1) {
        throw PreconditionError("iterations must be positive, got " + std::to_string(options.iterations));
    }
    Suite suite(options);
    using Verdict = std::optional<std::string>;

    suite.property("rank bound: rank(U_S) <= |S|", [&](Rng& rng) -> Verdict {
        const int m = draw(rng, 2, 8);
        const PointSet s = random_subset(m, static_cast<std::size_t>(draw(rng, 1, (1 << m) - 1)), rng);
        if (rank(suite.gram_under_test(s)) > s.size()) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("gram agreement: outer-product sum equals H_S H_S^T", [&](Rng& rng) -> Verdict {
        const int m = draw(rng, 2, 8);
        const PointSet s = random_subset(m, static_cast<std::size_t>(draw(rng, 1, (1 << m) - 1)), rng);
        const Gf2Matrix h = s.column_matrix();
        if (!(suite.gram_under_test(s) == mat_mul_t(h, h))) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("period law: nontrivial period gives rank(U_S) <= 2", [&](Rng& rng) -> Verdict {
        const int m = draw(rng, 3, 8);
        const PointSet s = rng.coin() ? random_periodic_cap(m, random_nonzero(m, rng), rng)
                                      : random_periodic_set(m, 1, rng);
        if (period(s).dim >= 1 && rank(suite.gram_under_test(s)) > 2) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("period law: period dimension >= 3 gives U_S = 0", [&](Rng& rng) -> Verdict {
        const int m = draw(rng, 4, 8);
        const PointSet s = random_periodic_set(m, draw(rng, 3, m - 1), rng);
        if (period(s).dim >= 3 && !suite.gram_under_test(s).is_zero()) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("one-point hyperplane: caps of size 2^{m-2}+1 have rank(U_S) <= 2", [&](Rng& rng) -> Verdict {
        const int m = draw(rng, 5, 6);
        const std::uint32_t v = random_nonzero(m, rng);
        std::uint32_t h = 0;
        do {
            h = random_nonzero(m, rng);
        } while (dot(v, h));
        const PointSet s = one_point_hyperplane_cap(m, v, h, rng);
        if (!is_cap(s) || hyperplane_intersection_size(s, v) != 1 || rank(suite.gram_under_test(s)) > 2) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("structure bound: |S| + rank(U_S) <= 2^{m-1}", [&](Rng& rng) -> Verdict {
        const int m = draw(rng, 7, 8);
        const auto size = static_cast<std::size_t>(draw(rng, 1, 1 << (m - 1)));
        const PointSet s = random_complement_cap(m, random_nonzero(m, rng), size, rng);
        if (!is_cap(s) || s.size() + rank(suite.gram_under_test(s)) > (std::size_t{1} << (m - 1))) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("spectrum: large maximal caps have size 2^{m-2} + 2^j", [&](Rng& rng) -> Verdict {
        const int m = draw(rng, 3, 5);
        PointSet seed_set = random_subset(m, static_cast<std::size_t>(draw(rng, 1, 2)), rng);
        const PointSet t = complete_to_maximal(seed_set, rng.next());
        const std::size_t base = std::size_t{1} << (m - 2);
        if (!is_maximal_cap(t)) {
            return describe(t);
        }
        if (t.size() <= base) {
            return std::nullopt;
        }
        const std::size_t excess = t.size() - base;
        const int j = std::countr_zero(excess);
        const bool j_allowed = std::has_single_bit(excess) && (j == m - 2 || j <= m - 4);
        // The j = m-2 family is the hyperplane complement, whose period is the whole hyperplane.
        const int expected_period = j == m - 2 ? m - 1 : j;
        if (!j_allowed || period(t).dim != expected_period) {
            return describe(t);
        }
        return std::nullopt;
    });

    suite.property("even criterion: C_S even iff S avoids a hyperplane", [&](Rng& rng) -> Verdict {
        const PointSet s = random_code_set(rng, 4, 8, 200);
        if (is_even_code(code_from_points(s)) != avoided_hyperplane(s).has_value()) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("LCD criterion: C_S is LCD iff U_S is nonsingular", [&](Rng& rng) -> Verdict {
        const PointSet s = random_code_set(rng, 3, 8, 200);
        if (is_lcd(code_from_points(s)) != is_nonsingular(suite.gram_under_test(s))) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("cap criterion: d(C_S) >= 4 iff S is a cap", [&](Rng& rng) -> Verdict {
        const PointSet s = random_code_set(rng, 3, 7, 48);
        const bool far = min_distance_bounded(code_from_points(s), 3) == MinDistance{4, false};
        if (far != is_cap(s)) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("duality: C is LCD iff its dual is LCD", [&](Rng& rng) -> Verdict {
        const PointSet s = random_code_set(rng, 3, 8, 200);
        const LinearCode c = code_from_points(s);
        if (is_lcd(c) != is_lcd(c.dual())) {
            return describe(s);
        }
        return std::nullopt;
    });

    suite.property("even LCD codes have even dimension", [&](Rng& rng) -> Verdict {
        const PointSet s = random_code_set(rng, 3, 8, 200);
        const LinearCode c = code_from_points(s);
        if (is_even_code(c) && is_lcd(c) && c.dimension() % 2 != 0) {
            return describe(s);
        }
        return std::nullopt;
    });

    return suite.take();
}

} // namespace caplcd
