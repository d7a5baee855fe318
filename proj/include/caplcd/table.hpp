#pragma once

// Tables of the largest minimum distance of binary LCD [n, n-m] codes,
// assembled from three kinds of evidence: published values (a reviewed data
// file), the cap-structure nonexistence bounds, and verified certificates.

#include "caplcd/certificate.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caplcd {

enum class LowerSource { construction, search_certificate, published };

enum class UpperSource {
    nonexistence_large_m, // caps meeting the size threshold for m >= 7
    nonexistence_small_m, // same conclusion for 4 <= m <= 6
    published_d_nk,       // best known linear codes, LCD or not
    published_lcd,
};

[[nodiscard]] std::string_view to_string(LowerSource s);
[[nodiscard]] std::string_view to_string(UpperSource s);
[[nodiscard]] LowerSource parse_lower_source(std::string_view s);
[[nodiscard]] UpperSource parse_upper_source(std::string_view s);

/// One published datum: for n in [n_min, n_max] (n_max empty = unbounded)
/// either the LCD optimum is exactly d (kind lcd) or every linear [n, n-m]
/// code has distance at most d (kind d_nk).
struct PublishedEntry {
    enum class Kind { lcd, d_nk };
    int m = 0;
    int n_min = 0;
    std::optional<int> n_max;
    Kind kind = Kind::lcd;
    int d = 0;
    std::string citation;

    [[nodiscard]] bool covers(int m_, int n) const
    {
        return m_ == m && n >= n_min && (!n_max || n <= *n_max);
    }
};

struct PublishedLedger {
    std::vector<PublishedEntry> entries;
};

/// Throws FormatError.
[[nodiscard]] PublishedLedger parse_ledger(std::string_view text);
[[nodiscard]] PublishedLedger load_ledger(const std::filesystem::path& path);

/// d <= 3 whenever the cap-structure nonexistence results exclude an LCD
/// [n, n-m, >= 4] code: n at or above the size threshold with n of the wrong
/// parity or n > 2^{m-1} - m. Empty when no such result applies.
struct TheoremBound {
    int d = 3;
    UpperSource source = UpperSource::nonexistence_large_m;
    std::string citation;
};
[[nodiscard]] std::optional<TheoremBound> nonexistence_bound(int m, int n);

/// Smallest n for which the nonexistence results apply.
[[nodiscard]] int nonexistence_threshold(int m);

struct DistanceTableEntry {
    int m = 0;
    int n = 0;
    int k = 0;
    int d = 0;
    LowerSource lower_source = LowerSource::published;
    UpperSource upper_source = UpperSource::published_lcd;
    std::string lower_citation;
    std::string upper_citation;

    friend bool operator==(const DistanceTableEntry&, const DistanceTableEntry&) = default;
};

/// Best upper bound for (m, n) from the ledger and the nonexistence results.
struct UpperBound {
    int d = 0;
    UpperSource source = UpperSource::published_lcd;
    std::string citation;
};
[[nodiscard]] std::optional<UpperBound> best_upper_bound(const PublishedLedger& ledger, int m, int n);

/// A certificate that passed verification and certifies an LCD code.
struct VerifiedWitness {
    Certificate cert;
    int distance = 0; // certified lower bound on d (exact when known)
    std::string file;
};

/// Loads every cert-m<m>-*.json in `dir`, keeping those that PASS
/// verification and have gram_rank = m.
[[nodiscard]] std::vector<VerifiedWitness> load_verified_witnesses(const std::filesystem::path& dir, int m);

struct TableRange {
    int m = 0;
    int n_min = 0;
    int n_max = 0;
};

/// Default n range: 17.. for m = 6 (smaller n is not covered by the
/// ledger), m+1.. otherwise, up to 2^m + 4.
[[nodiscard]] TableRange default_table_range(int m);

/// Merges published values, nonexistence bounds and certificates. Every
/// entry must have matching lower and upper bounds; otherwise throws
/// TableError listing each coverage gap or inconsistency.
[[nodiscard]] std::vector<DistanceTableEntry> assemble_table(const TableRange& range, const PublishedLedger& ledger,
                                                             const std::vector<VerifiedWitness>& witnesses);
[[nodiscard]] std::vector<DistanceTableEntry> assemble_table(const TableRange& range, const PublishedLedger& ledger,
                                                             const std::filesystem::path& cert_dir);

enum class TableFormat { markdown, csv, json };
[[nodiscard]] TableFormat parse_table_format(std::string_view s);

/// Byte-stable rendering. Markdown compresses runs of equal (d, sources,
/// citations), including alternating odd/even runs.
[[nodiscard]] std::string emit_table(const std::vector<DistanceTableEntry>& entries, TableFormat format);

/// Inverse of emit_table(..., json).
[[nodiscard]] std::vector<DistanceTableEntry> parse_table_json(std::string_view text);

/// Witness targets that would close every gap left by the ledger in the
/// range: a cap target where the upper bound allows d >= 4, a distinct-point
/// target where it allows d = 3.
struct WitnessTarget {
    int n = 0;
    bool require_cap = false;

    friend bool operator==(const WitnessTarget&, const WitnessTarget&) = default;
};
[[nodiscard]] std::vector<WitnessTarget> plan_table_targets(const TableRange& range, const PublishedLedger& ledger);

} // namespace caplcd
