#include "caplcd/search.hpp"

#include "caplcd/error.hpp"
#include "caplcd/random.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace caplcd {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

// Iterations without a rank improvement before a restart.
constexpr std::uint64_t kStallLimit = 4000;

void toggle_outer(std::array<std::uint32_t, 32>& u, std::uint32_t s)
{
    for (std::uint32_t bits = s; bits != 0; bits &= bits - 1) {
        u[static_cast<std::size_t>(std::countr_zero(bits))] ^= s;
    }
}

std::uint32_t apply_linear_map(std::span<const std::uint32_t> columns, std::uint32_t p)
{
    std::uint32_t image = 0;
    for (std::uint32_t bits = p; bits != 0; bits &= bits - 1) {
        image ^= columns[static_cast<std::size_t>(std::countr_zero(bits))];
    }
    return image;
}

std::vector<std::uint32_t> random_invertible_columns(int m, Rng& rng)
{
    std::vector<std::uint32_t> cols(static_cast<std::size_t>(m));
    do {
        for (auto& c : cols) {
            c = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << m));
        }
    } while (rank_of_masks(cols) != m);
    return cols;
}

struct Start {
    std::vector<std::uint32_t> points;
    std::string description;
};

// Random size-n subset of a cap taken from one of three families, tried in an
// order rotated by the restart index.
std::optional<Start> initial_cap(const SearchSpec& spec, int restart, Rng& rng)
{
    const int m = spec.m;
    const auto n = static_cast<std::size_t>(spec.n);
    using Family = std::function<std::optional<Start>()>;
    const std::array<Family, 3> families{
        [&]() -> std::optional<Start> {
            if (n > (std::size_t{1} << (m - 1))) {
                return std::nullopt;
            }
            const auto v = static_cast<std::uint32_t>(1 + rng.below((std::uint64_t{1} << m) - 1));
            const PointSet h = hyperplane_complement(v, m);
            return Start{{h.points().begin(), h.points().end()}, "hyperplane-complement v=" + std::to_string(v)};
        },
        [&]() -> std::optional<Start> {
            if (m < 5 || n > (std::size_t{1} << (m - 2)) + (std::size_t{1} << (m - 4))) {
                return std::nullopt;
            }
            const auto cols = random_invertible_columns(m, rng);
            const PointSet base = two_clause_cap(m);
            std::vector<std::uint32_t> pts;
            for (std::uint32_t p : base.points()) {
                pts.push_back(apply_linear_map(cols, p));
            }
            return Start{std::move(pts), "two-clause-cap image"};
        },
        [&]() -> std::optional<Start> {
            const PointSet t = complete_to_maximal(PointSet(m, {}), rng.next());
            if (t.size() < n) {
                return std::nullopt;
            }
            return Start{{t.points().begin(), t.points().end()}, "greedy-maximal size=" + std::to_string(t.size())};
        },
    };
    for (std::size_t k = 0; k < families.size(); ++k) {
        auto start = families[(static_cast<std::size_t>(restart) + k) % families.size()]();
        if (start) {
            rng.shuffle(std::span(start->points));
            start->points.resize(n);
            return start;
        }
    }
    return std::nullopt;
}

// The standard basis (when it fits) plus random distinct nonzero points.
Start initial_points(const SearchSpec& spec, Rng& rng)
{
    const int m = spec.m;
    const auto n = static_cast<std::size_t>(spec.n);
    std::vector<std::uint32_t> pts;
    std::vector<std::uint32_t> rest;
    const std::uint32_t limit = std::uint32_t{1} << m;
    const bool with_basis = n >= static_cast<std::size_t>(m);
    for (std::uint32_t p = 1; p < limit; ++p) {
        (with_basis && std::has_single_bit(p) ? pts : rest).push_back(p);
    }
    rng.shuffle(std::span(rest));
    rest.resize(n - pts.size());
    pts.insert(pts.end(), rest.begin(), rest.end());
    return {std::move(pts), with_basis ? "basis+random" : "random"};
}

class LocalSearch {
public:
    LocalSearch(const SearchSpec& spec, std::vector<std::uint32_t> points)
        : spec_(spec), size_(std::uint32_t{1} << spec.m), pts_(std::move(points)), member_(size_, 0)
    {
        for (std::uint32_t p : pts_) {
            member_[p] = 1;
            toggle_outer(u_, p);
        }
        if (spec_.require_cap) {
            pair_count_.assign(size_, 0);
            for (std::size_t i = 0; i < pts_.size(); ++i) {
                for (std::size_t j = i + 1; j < pts_.size(); ++j) {
                    ++pair_count_[pts_[i] ^ pts_[j]];
                }
            }
        }
        current_ = objective();
        best_ = current_;
    }

    [[nodiscard]] int best() const noexcept { return best_; }
    [[nodiscard]] bool solved() const noexcept { return current_ == spec_.m; }
    [[nodiscard]] const std::vector<std::uint32_t>& points() const noexcept { return pts_; }
    [[nodiscard]] std::uint64_t iterations() const noexcept { return iterations_; }

    /// Runs until solved, stalled, or the deadline passes. Returns false on deadline.
    bool run(Rng& rng, std::optional<Clock::time_point> deadline)
    {
        std::uint64_t stall = 0;
        while (!solved() && stall < kStallLimit) {
            if (deadline && (iterations_ & 0xFFU) == 0 && Clock::now() >= *deadline) {
                return false;
            }
            ++iterations_;
            if (step(rng)) {
                stall = 0;
            } else {
                ++stall;
            }
        }
        return true;
    }

private:
    int objective() const
    {
        if (spec_.require_nonsingular) {
            return rank_of_masks(std::span(u_.data(), static_cast<std::size_t>(spec_.m)));
        }
        return rank_of_masks(pts_);
    }

    void adjust_pairs(std::uint32_t p, int delta)
    {
        for (std::uint32_t a : pts_) {
            if (a != p) {
                pair_count_[a ^ p] = static_cast<std::uint16_t>(pair_count_[a ^ p] + delta);
            }
        }
    }

    // One swap attempt; true when the objective improved.
    bool step(Rng& rng)
    {
        const auto index = static_cast<std::size_t>(rng.below(pts_.size()));
        const std::uint32_t out = pts_[index];
        std::uint32_t in = 0;
        if (spec_.require_cap) {
            adjust_pairs(out, -1);
            candidates_.clear();
            for (std::uint32_t p = 1; p < size_; ++p) {
                if (member_[p] == 0 && pair_count_[p] == 0) {
                    candidates_.push_back(p);
                }
            }
            if (candidates_.empty()) {
                adjust_pairs(out, +1);
                return false;
            }
            in = candidates_[static_cast<std::size_t>(rng.below(candidates_.size()))];
        } else {
            if (pts_.size() + 1 >= size_) {
                return false;
            }
            do {
                in = static_cast<std::uint32_t>(1 + rng.below(size_ - 1));
            } while (member_[in] != 0);
        }

        pts_[index] = in;
        member_[out] = 0;
        member_[in] = 1;
        toggle_outer(u_, out);
        toggle_outer(u_, in);
        const int value = objective();
        if (value >= current_) {
            if (spec_.require_cap) {
                adjust_pairs(in, +1);
            }
            const bool improved = value > current_;
            current_ = value;
            best_ = std::max(best_, value);
            return improved;
        }
        pts_[index] = out;
        member_[in] = 0;
        member_[out] = 1;
        toggle_outer(u_, out);
        toggle_outer(u_, in);
        if (spec_.require_cap) {
            adjust_pairs(out, +1);
        }
        return false;
    }

    const SearchSpec& spec_;
    std::uint32_t size_;
    std::vector<std::uint32_t> pts_;
    std::vector<std::uint8_t> member_;
    std::vector<std::uint16_t> pair_count_;
    std::vector<std::uint32_t> candidates_;
    std::array<std::uint32_t, 32> u_{};
    int current_ = 0;
    int best_ = 0;
    std::uint64_t iterations_ = 0;
};

// Independent of the incremental bookkeeping above.
void reverify(const SearchSpec& spec, const PointSet& s)
{
    if (s.size() != static_cast<std::size_t>(spec.n)) {
        throw InternalError("search produced a set of the wrong size");
    }
    if (spec.require_cap && !is_cap(s)) {
        throw InternalError("search produced a non-cap for a cap target");
    }
    if (spec.require_nonsingular && !is_nonsingular(gram(s))) {
        throw InternalError("search produced a singular Gram matrix");
    }
    if (rank(s.column_matrix()) != static_cast<std::size_t>(spec.m)) {
        throw InternalError("search produced a set that does not span F2^m");
    }
}

} // namespace

void validate(const SearchSpec& spec)
{
    if (spec.m < 2 || spec.m > kMaxSearchDim) {
        throw PreconditionError("search requires 2 <= m <= 16, got m=" + std::to_string(spec.m));
    }
    const long long max_n = (1LL << spec.m) - 1;
    if (spec.n < 1 || spec.n > max_n) {
        throw PreconditionError("search requires 1 <= n <= 2^m - 1 = " + std::to_string(max_n) +
                                ", got n=" + std::to_string(spec.n));
    }
    if (spec.max_restarts < 1) {
        throw PreconditionError("max_restarts must be positive");
    }
    if (spec.budget_ms && *spec.budget_ms <= 0) {
        throw PreconditionError("budget_ms must be positive");
    }
}

SearchResult find_witness(const SearchSpec& spec, std::ostream* progress)
{
    validate(spec);
    const auto started = Clock::now();
    std::optional<Clock::time_point> deadline;
    if (spec.budget_ms) {
        deadline = started + std::chrono::milliseconds(*spec.budget_ms);
    }

    SearchResult result;
    for (int restart = 0; restart < spec.max_restarts; ++restart) {
        if (deadline && Clock::now() >= *deadline) {
            result.budget_exhausted = true;
            break;
        }
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(restart)));
        RestartRecord record;
        record.restart = restart;

        std::optional<Start> start;
        if (spec.require_cap) {
            start = initial_cap(spec, restart, rng);
        } else {
            start = initial_points(spec, rng);
        }
        bool finished = true;
        std::optional<LocalSearch> search;
        if (start) {
            record.start = start->description;
            search.emplace(spec, std::move(start->points));
            finished = search->run(rng, deadline);
            record.best_rank = search->best();
            record.iterations = search->iterations();
            result.iterations += search->iterations();
        } else {
            record.start = "no cap of size n in any start family";
        }
        result.transcript.push_back(record);
        if (progress != nullptr) {
            *progress << "restart=" << restart << " best_rank=" << record.best_rank << " size=" << spec.n
                      << " elapsed_ms=" << elapsed_ms(started) << '\n';
        }
        if (search && search->solved()) {
            PointSet witness(spec.m, search->points());
            reverify(spec, witness);
            result.witness = std::move(witness);
            result.found_at_restart = restart;
            break;
        }
        if (!finished) {
            result.budget_exhausted = true;
            break;
        }
    }
    result.elapsed_ms = elapsed_ms(started);
    return result;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

int default_nonexistence_n_min(int m)
{
    return (1 << (m - 2)) + 2;
}

namespace {

class CapEnumerator {
public:
    CapEnumerator(int m, int n_min, NonexistenceReport& report, std::optional<Clock::time_point> deadline)
        : m_(m), n_min_(n_min), report_(report), deadline_(deadline)
    {
        const int points = 1 << m;
        full_ = points == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << points) - 1);
        full_ &= ~std::uint64_t{1};
    }

    void run() { visit(0, 1); }
    [[nodiscard]] bool aborted() const noexcept { return aborted_; }

private:
    static std::uint64_t above(std::uint32_t last)
    {
        return last >= 63 ? 0 : ~((std::uint64_t{2} << last) - 1);
    }

    void record()
    {
        const int n = size_;
        ++report_.caps_enumerated;
        ++report_.caps_by_size[n];
        if (rank_of_masks(std::span(u_.data(), static_cast<std::size_t>(m_))) != m_) {
            return;
        }
        ++report_.nonsingular_by_size[n];
        const bool allowed = n < nonexistence_threshold(m_) || ((n - m_) % 2 == 0 && n <= report_.n_max_bound);
        if (!allowed) {
            ++report_.witnesses_found;
            if (report_.counterexamples.size() < 10) {
                report_.counterexamples.emplace_back(chosen_.begin(), chosen_.begin() + size_);
            }
        }
    }

    void visit(std::uint32_t last, std::uint64_t forbidden)
    {
        if (aborted_) {
            return;
        }
        if (deadline_ && (++nodes_ & 0xFFFFU) == 0 && Clock::now() >= *deadline_) {
            aborted_ = true;
            return;
        }
        if (size_ >= n_min_) {
            record();
        }
        std::uint64_t avail = ~forbidden & full_ & above(last);
        while (avail != 0) {
            const auto p = static_cast<std::uint32_t>(std::countr_zero(avail));
            avail &= avail - 1;
            if (size_ + 1 + std::popcount(avail) < n_min_) {
                break;
            }
            std::uint64_t next = forbidden | (std::uint64_t{1} << p);
            for (int i = 0; i < size_; ++i) {
                next |= std::uint64_t{1} << (p ^ chosen_[static_cast<std::size_t>(i)]);
            }
            chosen_[static_cast<std::size_t>(size_++)] = p;
            toggle_outer(u_, p);
            visit(p, next);
            toggle_outer(u_, p);
            --size_;
            if (aborted_) {
                return;
            }
        }
    }

    int m_;
    int n_min_;
    NonexistenceReport& report_;
    std::optional<Clock::time_point> deadline_;
    std::uint64_t full_ = 0;
    std::array<std::uint32_t, 64> chosen_{};
    std::array<std::uint32_t, 32> u_{};
    int size_ = 0;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

} // namespace

NonexistenceReport verify_nonexistence_exhaustive(int m, std::optional<int> n_min, const NonexistenceOptions& options)
{
    if (m == 6 && !options.allow_m6) {
        throw PreconditionError("m=6 exhaustive enumeration is off by default (allow it explicitly; it may not finish)");
    }
    if (m < 4 || m > 6) {
        throw PreconditionError("exhaustive enumeration supports m in {4, 5} (6 when allowed), got m=" + std::to_string(m));
    }
    NonexistenceReport report;
    report.m = m;
    report.n_min = n_min.value_or(default_nonexistence_n_min(m));
    if (report.n_min < 1) {
        throw PreconditionError("n_min must be positive");
    }
    report.n_max_bound = (1 << (m - 1)) - m;

    const auto started = Clock::now();
    std::optional<Clock::time_point> deadline;
    if (options.budget_ms) {
        deadline = started + std::chrono::milliseconds(*options.budget_ms);
    }
    CapEnumerator enumerator(m, report.n_min, report, deadline);
    enumerator.run();
    report.exhaustive = !enumerator.aborted();
    report.elapsed_ms = elapsed_ms(started);
    return report;
}

// ---------------------------------------------------------------------------
// Campaigns

std::vector<Certificate> CampaignResult::certificates() const
{
    std::vector<Certificate> out;
    for (const auto& item : items) {
        if (item.certificate) {
            out.push_back(*item.certificate);
        }
    }
    return out;
}

std::size_t CampaignResult::failures() const
{
    return static_cast<std::size_t>(std::ranges::count_if(items, [](const CampaignItem& i) { return !i.certificate; }));
}

namespace {

CampaignItem run_target(const CampaignOptions& options, const WitnessTarget& target, std::ostream& log)
{
    CampaignItem item;
    item.target = target;
    const int m = options.m;

    auto accept = [&](const PointSet& s, std::string provenance, std::string tag) {
        Certificate cert = make_certificate(s, std::move(provenance));
        const auto report = verify_certificate(cert);
        if (!report.pass || cert.claims.gram_rank != m || (target.require_cap && !cert.claims.is_cap)) {
            throw InternalError("campaign witness for n=" + std::to_string(target.n) + " failed verification");
        }
        item.certificate = std::move(cert);
        item.tag = std::move(tag);
    };

    if (options.use_constructions) {
        if (m >= 4 && m <= kMaxEnumerableDim && target.n == (1 << (m - 1)) - m) {
            accept(construct_s1(m), "construction s1 m=" + std::to_string(m), "s1");
            return item;
        }
        if (m >= 7 && m <= kMaxEnumerableDim && target.n == (1 << (m - 2)) + (1 << (m - 4)) - m - 1) {
            accept(construct_s2(m), "construction s2 m=" + std::to_string(m), "s2");
            return item;
        }
    }

    for (std::uint64_t seed : options.seeds) {
        SearchSpec spec;
        spec.m = m;
        spec.n = target.n;
        spec.require_cap = target.require_cap;
        spec.require_nonsingular = true;
        spec.seed = seed;
        spec.max_restarts = options.max_restarts;
        spec.budget_ms = options.budget_ms_per_target;
        log << "target n=" << target.n << " cap=" << (target.require_cap ? 1 : 0) << " seed=" << seed << '\n';
        const auto result = find_witness(spec, &log);
        if (result.witness) {
            accept(*result.witness,
                   "search seed=" + std::to_string(seed) + " restart=" + std::to_string(result.found_at_restart),
                   "search-s" + std::to_string(seed));
            return item;
        }
    }
    item.failure = "not found within budget";
    return item;
}

} // namespace

CampaignResult batch_witness_campaign(const CampaignOptions& options)
{
    CampaignResult result;
    result.items.resize(options.targets.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    std::exception_ptr error;

    auto worker = [&] {
        for (std::size_t i = next++; i < options.targets.size(); i = next++) {
            std::ostringstream log;
            try {
                result.items[i] = run_target(options, options.targets[i], log);
            } catch (...) {
                const std::lock_guard lock(log_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
            if (options.progress != nullptr) {
                const std::lock_guard lock(log_mutex);
                *options.progress << log.str();
            }
        }
    };

    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(options.targets.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return result;
}

} // namespace caplcd
