#include "caplcd/certificate.hpp"

#include "caplcd/code.hpp"
#include "caplcd/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace caplcd {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename T>
T field(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key)) {
        throw FormatError(std::string("certificate field '") + key + "' is missing");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("certificate field '") + key + "' has the wrong type");
    }
}

void require_integer(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw FormatError(std::string("certificate field '") + key + "' must be an integer");
    }
}

} // namespace

Certificate make_certificate(const PointSet& s, std::string provenance)
{
    const LinearCode code = code_from_points(s);
    Certificate cert;
    cert.m = s.dim();
    cert.n = static_cast<int>(s.size());
    cert.points.assign(s.sorted().begin(), s.sorted().end());
    cert.claims.is_cap = is_cap(s);
    cert.claims.gram_rank = static_cast<int>(rank(gram(s)));
    // Distinct nonzero columns already give d >= 3.
    cert.claims.min_distance_floor = cert.claims.is_cap ? 4 : 3;
    const int bound = std::min<int>(kDefaultDistanceBound, cert.n);
    const MinDistance d = min_distance_bounded(code, bound);
    if (d.exact) {
        cert.claims.exact_min_distance = d.value;
    }
    cert.provenance = std::move(provenance);
    return cert;
}

std::string to_json_text(const Certificate& cert)
{
    ordered_json j;
    j["schema_version"] = cert.schema_version;
    j["m"] = cert.m;
    j["n"] = cert.n;
    j["points"] = cert.points;
    ordered_json claims;
    claims["is_cap"] = cert.claims.is_cap;
    claims["gram_rank"] = cert.claims.gram_rank;
    claims["min_distance_floor"] = cert.claims.min_distance_floor;
    claims["exact_min_distance"] =
        cert.claims.exact_min_distance ? ordered_json(*cert.claims.exact_min_distance) : ordered_json(nullptr);
    j["claims"] = claims;
    j["provenance"] = cert.provenance;
    return j.dump(2) + "\n";
}

Certificate parse_certificate(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("certificate is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw FormatError("certificate must be a JSON object");
    }
    Certificate cert;
    cert.schema_version = field<std::string>(j, "schema_version");
    require_integer(j, "m");
    require_integer(j, "n");
    cert.m = field<int>(j, "m");
    cert.n = field<int>(j, "n");
    if (!j.contains("points") || !j.at("points").is_array()) {
        throw FormatError("certificate field 'points' must be an array");
    }
    for (const auto& p : j.at("points")) {
        if (!p.is_number_integer()) {
            throw FormatError("certificate points must be integers");
        }
        cert.points.push_back(p.get<std::int64_t>());
    }
    if (!j.contains("claims") || !j.at("claims").is_object()) {
        throw FormatError("certificate field 'claims' must be an object");
    }
    const auto& c = j.at("claims");
    cert.claims.is_cap = field<bool>(c, "is_cap");
    require_integer(c, "gram_rank");
    require_integer(c, "min_distance_floor");
    cert.claims.gram_rank = field<int>(c, "gram_rank");
    cert.claims.min_distance_floor = field<int>(c, "min_distance_floor");
    if (c.contains("exact_min_distance") && !c.at("exact_min_distance").is_null()) {
        require_integer(c, "exact_min_distance");
        cert.claims.exact_min_distance = c.at("exact_min_distance").get<int>();
    }
    cert.provenance = field<std::string>(j, "provenance");
    return cert;
}

Certificate load_certificate(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open certificate " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_certificate(buffer.str());
}

std::string certificate_filename(int m, int n, std::string_view tag)
{
    return "cert-m" + std::to_string(m) + "-n" + std::to_string(n) + "-" + std::string(tag) + ".json";
}

std::filesystem::path write_certificate(const Certificate& cert, const std::filesystem::path& dir,
                                        std::string_view tag)
{
    std::filesystem::create_directories(dir);
    const auto path = dir / certificate_filename(cert.m, cert.n, tag);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write certificate " + path.string());
    }
    out << to_json_text(cert);
    return path;
}

bool VerificationReport::has(std::string_view code) const
{
    return std::ranges::any_of(findings, [&](const Finding& f) { return f.code == code; });
}

VerificationReport verify_certificate(const Certificate& cert)
{
    VerificationReport report;
    auto fail = [&](std::string code, std::string message) {
        report.findings.push_back({std::move(code), std::move(message)});
    };

    if (cert.schema_version != kCertificateSchemaVersion) {
        fail("schema_version", "unsupported schema_version '" + cert.schema_version + "'");
    }
    if (cert.m < 1 || cert.m > kMaxDim) {
        fail("dimension", "m=" + std::to_string(cert.m) + " outside 1..32");
        return report;
    }

    const std::int64_t limit = std::int64_t{1} << cert.m;
    std::set<std::int64_t> seen;
    bool structural = false;
    for (std::int64_t p : cert.points) {
        if (p == 0) {
            fail("nonzero", "nonzero violation: the zero vector is listed");
            structural = true;
        } else if (p < 0 || p >= limit) {
            fail("range", "coordinate out of range: " + std::to_string(p));
            structural = true;
        } else if (!seen.insert(p).second) {
            fail("duplicate", "duplicate point " + std::to_string(p));
            structural = true;
        }
    }
    if (static_cast<std::int64_t>(cert.points.size()) != cert.n) {
        fail("count", "count mismatch: n=" + std::to_string(cert.n) + " but " +
                          std::to_string(cert.points.size()) + " points listed");
        structural = true;
    }
    if (structural) {
        return report;
    }

    std::vector<std::uint32_t> masks;
    masks.reserve(cert.points.size());
    for (std::int64_t p : cert.points) {
        masks.push_back(static_cast<std::uint32_t>(p));
    }
    const PointSet s(cert.m, std::move(masks));

    CertificateClaims actual;
    actual.is_cap = is_cap(s);
    actual.gram_rank = static_cast<int>(rank(gram(s)));
    report.spans = rank(s.column_matrix()) == static_cast<std::size_t>(cert.m);

    if (actual.is_cap != cert.claims.is_cap) {
        fail("is_cap", std::string("claimed is_cap=") + (cert.claims.is_cap ? "true" : "false") +
                           " but recomputed " + (actual.is_cap ? "true" : "false"));
    }
    if (actual.gram_rank != cert.claims.gram_rank) {
        fail("gram_rank", "claimed gram_rank=" + std::to_string(cert.claims.gram_rank) + " but recomputed " +
                              std::to_string(actual.gram_rank));
    }
    if (!report.spans) {
        fail("span", "span deficiency: the points do not span F2^" + std::to_string(cert.m));
        report.recomputed = actual;
        return report;
    }
    if (s.size() == static_cast<std::size_t>(cert.m)) {
        fail("span", "zero-dimensional code: n equals m");
        report.recomputed = actual;
        return report;
    }

    const LinearCode code = code_from_points(s);
    const int wanted = std::max({kDefaultDistanceBound, cert.claims.min_distance_floor,
                                 cert.claims.exact_min_distance.value_or(0)});
    const int bound = std::min(wanted, cert.n);
    const MinDistance d = min_distance_bounded(code, bound);
    report.distance_exact = d.exact;
    report.distance = d.value;
    actual.min_distance_floor = d.value;
    if (d.exact) {
        actual.exact_min_distance = d.value;
    }
    report.recomputed = actual;

    if (d.exact && d.value < cert.claims.min_distance_floor) {
        fail("min_distance_floor", "claimed d >= " + std::to_string(cert.claims.min_distance_floor) +
                                       " but the code has d = " + std::to_string(d.value));
    }
    if (cert.claims.exact_min_distance) {
        const int claimed = *cert.claims.exact_min_distance;
        if (!d.exact || d.value != claimed) {
            fail("exact_min_distance", "claimed d = " + std::to_string(claimed) + " but recomputed " + d.to_string());
        }
    }
    report.pass = report.findings.empty();
    return report;
}

VerificationReport verify_certificate_file(const std::filesystem::path& path)
{
    try {
        return verify_certificate(load_certificate(path));
    } catch (const FormatError& e) {
        VerificationReport report;
        report.findings.push_back({"parse", e.what()});
        return report;
    }
}

} // namespace caplcd
