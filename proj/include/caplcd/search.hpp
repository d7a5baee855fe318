#pragma once

// Witness search for point sets with a nonsingular Gram matrix, exhaustive
// cap enumeration for small m, and batch campaigns producing certificates.

#include "caplcd/caps.hpp"
#include "caplcd/certificate.hpp"
#include "caplcd/table.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace caplcd {

/// The local search enumerates F2^m for candidate moves.
inline constexpr int kMaxSearchDim = 16;

struct SearchSpec {
    int m = 0;
    int n = 0;
    bool require_cap = false;
    bool require_nonsingular = true;
    std::uint64_t seed = 1;
    int max_restarts = 64;
    std::optional<std::int64_t> budget_ms;
};

/// Throws PreconditionError when the spec is invalid (n > 2^m - 1, m out of
/// range, non-positive restarts or budget).
void validate(const SearchSpec& spec);

/// Per-restart record. Deterministic given the spec (no timing inside).
struct RestartRecord {
    int restart = 0;
    std::string start; // how the initial set was built
    int best_rank = -1; // -1 when no initial set of size n could be built
    std::uint64_t iterations = 0;

    friend bool operator==(const RestartRecord&, const RestartRecord&) = default;
};

struct SearchResult {
    std::optional<PointSet> witness;
    int found_at_restart = -1;
    std::vector<RestartRecord> transcript;
    std::uint64_t iterations = 0;
    std::int64_t elapsed_ms = 0;
    bool budget_exhausted = false;
};

/// Randomized construction plus single-swap hill climbing on rank(U_S)
/// (or on the span rank when nonsingularity is not required), restarting on
/// stalls. Cap starts rotate through hyperplane complements, linear images of
/// the two-clause cap, and random greedy maximal caps. Any returned set has
/// been re-verified through is_cap / gram / rank; a failed re-verification
/// throws InternalError. Progress lines go to `progress` when given:
///   restart=<i> best_rank=<r> size=<n> elapsed_ms=<t>
[[nodiscard]] SearchResult find_witness(const SearchSpec& spec, std::ostream* progress = nullptr);

struct NonexistenceOptions {
    /// m = 6 is refused unless set; the enumeration is far too large to finish.
    bool allow_m6 = false;
    std::optional<std::int64_t> budget_ms;
};

struct NonexistenceReport {
    int m = 0;
    int n_min = 0;
    int n_max_bound = 0; // 2^{m-1} - m
    std::uint64_t caps_enumerated = 0; // caps of size >= n_min
    std::map<int, std::uint64_t> caps_by_size;
    std::map<int, std::uint64_t> nonsingular_by_size;
    // rank m caps at or above the theorem's size threshold that violate the
    // parity/size conclusion
    std::uint64_t witnesses_found = 0;
    std::vector<std::vector<std::uint32_t>> counterexamples; // first few
    std::int64_t elapsed_ms = 0;
    bool exhaustive = false;
};

/// Default smallest size: 2^{m-2} + 2.
[[nodiscard]] int default_nonexistence_n_min(int m);

/// Backtracking over all caps of F2^m built in strictly increasing mask
/// order, with a forbidden-sum bitmap. Every cap of size >= n_min is counted
/// and its Gram rank tested. m must be 4 or 5 (6 with allow_m6).
[[nodiscard]] NonexistenceReport verify_nonexistence_exhaustive(int m, std::optional<int> n_min = std::nullopt,
                                                                const NonexistenceOptions& options = {});

struct CampaignOptions {
    int m = 0;
    std::vector<WitnessTarget> targets;
    std::vector<std::uint64_t> seeds{1};
    std::optional<std::int64_t> budget_ms_per_target;
    int max_restarts = 64;
    int threads = 1;
    bool use_constructions = true;
    std::ostream* progress = nullptr;
};

struct CampaignItem {
    WitnessTarget target;
    std::optional<Certificate> certificate;
    std::string tag;     // file tag when certified: construction name or search seed
    std::string failure; // empty on success
};

struct CampaignResult {
    std::vector<CampaignItem> items; // one per target, in target order

    [[nodiscard]] std::vector<Certificate> certificates() const;
    [[nodiscard]] std::size_t failures() const;
};

/// Runs find_witness per target (constructions first when they match n),
/// optionally on several threads. Every certificate returned has passed
/// verify_certificate.
[[nodiscard]] CampaignResult batch_witness_campaign(const CampaignOptions& options);

} // namespace caplcd
