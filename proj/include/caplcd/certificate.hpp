#pragma once

// Serializable witness certificates. A certificate stores a point set and
// the claims made about it; verification recomputes every claim from the
// points and never trusts the stored values.

#include "caplcd/caps.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caplcd {

inline constexpr std::string_view kCertificateSchemaVersion = "1";

struct CertificateClaims {
    bool is_cap = false;
    int gram_rank = 0;
    int min_distance_floor = 0;
    std::optional<int> exact_min_distance;

    friend bool operator==(const CertificateClaims&, const CertificateClaims&) = default;
};

struct Certificate {
    std::string schema_version{kCertificateSchemaVersion};
    int m = 0;
    int n = 0;
    // Kept wide and signed so that malformed coordinates survive parsing and
    // are reported by verification instead of being silently truncated.
    std::vector<std::int64_t> points;
    CertificateClaims claims;
    std::string provenance;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// Builds a certificate whose claims are computed from the set. The set must
/// span F2^m. Points are stored in ascending order.
[[nodiscard]] Certificate make_certificate(const PointSet& s, std::string provenance);

/// Canonical JSON text (2-space indent, trailing newline).
[[nodiscard]] std::string to_json_text(const Certificate& cert);
/// Throws FormatError on malformed JSON, missing fields or wrong types.
[[nodiscard]] Certificate parse_certificate(std::string_view text);
[[nodiscard]] Certificate load_certificate(const std::filesystem::path& path);
/// Writes the certificate as <dir>/cert-m<m>-n<n>-<tag>.json and returns the path.
std::filesystem::path write_certificate(const Certificate& cert, const std::filesystem::path& dir,
                                        std::string_view tag);
[[nodiscard]] std::string certificate_filename(int m, int n, std::string_view tag);

struct Finding {
    std::string code;
    std::string message;
};

struct VerificationReport {
    bool pass = false;
    std::vector<Finding> findings;
    /// Claims recomputed from the points; empty when the point list itself
    /// is malformed.
    std::optional<CertificateClaims> recomputed;
    /// Recomputed minimum distance is exact (otherwise it is a lower bound).
    bool distance_exact = false;
    int distance = 0;
    bool spans = false;

    [[nodiscard]] bool has(std::string_view code) const;
};

/// Recomputes cap, Gram rank, span and the minimum distance (searched up to
/// max(5, claimed floor, claimed exact)). PASS iff every stored claim matches.
[[nodiscard]] VerificationReport verify_certificate(const Certificate& cert);

/// Parse + verify; parse problems become a "parse" finding.
[[nodiscard]] VerificationReport verify_certificate_file(const std::filesystem::path& path);

} // namespace caplcd
