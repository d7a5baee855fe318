#include "caplcd/table.hpp"

#include "caplcd/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace caplcd {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kSearchCitation = "randomized local search certificate";

int pow2(int e)
{
    return 1 << e;
}

int lower_priority(LowerSource s)
{
    switch (s) {
    case LowerSource::published: return 0;
    case LowerSource::construction: return 1;
    case LowerSource::search_certificate: return 2;
    }
    return 3;
}

int upper_priority(UpperSource s)
{
    switch (s) {
    case UpperSource::published_lcd: return 0;
    case UpperSource::published_d_nk: return 1;
    case UpperSource::nonexistence_large_m:
    case UpperSource::nonexistence_small_m: return 2;
    }
    return 3;
}

std::string lower_label(LowerSource s)
{
    switch (s) {
    case LowerSource::construction: return "construction";
    case LowerSource::search_certificate: return "search certificate";
    case LowerSource::published: return "published";
    }
    return {};
}

std::string upper_label(UpperSource s)
{
    switch (s) {
    case UpperSource::nonexistence_large_m: return "nonexistence (m >= 7)";
    case UpperSource::nonexistence_small_m: return "nonexistence (4 <= m <= 6)";
    case UpperSource::published_d_nk: return "published d(n,k)";
    case UpperSource::published_lcd: return "published LCD";
    }
    return {};
}

std::string csv_quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

struct Run {
    int first = 0;
    int last = 0;
    int step = 1;
    const DistanceTableEntry* sample = nullptr;
};

auto row_key(const DistanceTableEntry& e)
{
    return std::tie(e.m, e.d, e.lower_source, e.upper_source, e.lower_citation, e.upper_citation);
}

bool same_row(const DistanceTableEntry& a, const DistanceTableEntry& b)
{
    return row_key(a) == row_key(b);
}

std::vector<Run> compress(const std::vector<DistanceTableEntry>& entries)
{
    std::vector<Run> runs;
    for (const auto& e : entries) {
        if (!runs.empty() && runs.back().last + 1 == e.n && same_row(*runs.back().sample, e)) {
            runs.back().last = e.n;
        } else {
            runs.push_back({e.n, e.n, 1, &e});
        }
    }

    // Fold windows of alternating singletons A B A B ... into two runs of step 2.
    std::vector<Run> out;
    std::size_t i = 0;
    while (i < runs.size()) {
        std::size_t j = i;
        if (runs[i].first == runs[i].last) {
            // Adjacent runs always differ, so only the period-2 repeat needs checking.
            while (j + 1 < runs.size()) {
                const std::size_t t = j + 1;
                const bool single = runs[t].first == runs[t].last && runs[t].first == runs[j].last + 1;
                if (!single || (t - i >= 2 && !same_row(*runs[t].sample, *runs[t - 2].sample))) {
                    break;
                }
                j = t;
            }
        }
        if (j - i + 1 >= 3) {
            Run a{runs[i].first, runs[i].first, 2, runs[i].sample};
            Run b{runs[i + 1].first, runs[i + 1].first, 2, runs[i + 1].sample};
            for (std::size_t t = i; t <= j; ++t) {
                ((t - i) % 2 == 0 ? a : b).last = runs[t].first;
            }
            out.push_back(a);
            out.push_back(b);
            i = j + 1;
        } else {
            out.push_back(runs[i]);
            ++i;
        }
    }
    std::ranges::stable_sort(out, {}, &Run::first);
    return out;
}

std::string range_label(const Run& r)
{
    if (r.first == r.last) {
        return std::to_string(r.first);
    }
    std::string label = std::to_string(r.first) + "-" + std::to_string(r.last);
    if (r.step == 2) {
        label = std::string(r.first % 2 == 0 ? "even " : "odd ") + label;
    }
    return label;
}

} // namespace

std::string_view to_string(LowerSource s)
{
    switch (s) {
    case LowerSource::construction: return "construction";
    case LowerSource::search_certificate: return "search_certificate";
    case LowerSource::published: return "published";
    }
    return "unknown";
}

std::string_view to_string(UpperSource s)
{
    switch (s) {
    case UpperSource::nonexistence_large_m: return "nonexistence_large_m";
    case UpperSource::nonexistence_small_m: return "nonexistence_small_m";
    case UpperSource::published_d_nk: return "published_d_nk";
    case UpperSource::published_lcd: return "published_lcd";
    }
    return "unknown";
}

LowerSource parse_lower_source(std::string_view s)
{
    for (auto v : {LowerSource::construction, LowerSource::search_certificate, LowerSource::published}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw FormatError("unknown lower bound source '" + std::string(s) + "'");
}

UpperSource parse_upper_source(std::string_view s)
{
    for (auto v : {UpperSource::nonexistence_large_m, UpperSource::nonexistence_small_m, UpperSource::published_d_nk,
                   UpperSource::published_lcd}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw FormatError("unknown upper bound source '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Ledger

PublishedLedger parse_ledger(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("ledger is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array()) {
        throw FormatError("ledger must be an object with an 'entries' array");
    }
    PublishedLedger ledger;
    try {
        for (const auto& e : j.at("entries")) {
            PublishedEntry entry;
            entry.m = e.at("m").get<int>();
            entry.n_min = e.at("n_min").get<int>();
            if (!e.at("n_max").is_null()) {
                entry.n_max = e.at("n_max").get<int>();
            }
            const auto kind = e.at("kind").get<std::string>();
            if (kind == "lcd") {
                entry.kind = PublishedEntry::Kind::lcd;
            } else if (kind == "d_nk") {
                entry.kind = PublishedEntry::Kind::d_nk;
            } else {
                throw FormatError("ledger entry kind must be 'lcd' or 'd_nk', got '" + kind + "'");
            }
            entry.d = e.at("d").get<int>();
            entry.citation = e.at("citation").get<std::string>();
            if (entry.citation.empty()) {
                throw FormatError("ledger entry without citation");
            }
            ledger.entries.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed ledger entry: ") + e.what());
    }
    return ledger;
}

PublishedLedger load_ledger(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open ledger " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_ledger(buffer.str());
}

// ---------------------------------------------------------------------------
// Bounds

int nonexistence_threshold(int m)
{
    if (m >= 7) {
        return pow2(m - 2) + pow2(m - 4) - m + 1;
    }
    if (m == 6) {
        return pow2(m - 2) + 1;
    }
    if (m >= 4) {
        return pow2(m - 2) + 2;
    }
    throw PreconditionError("no nonexistence result for m < 4");
}

std::optional<TheoremBound> nonexistence_bound(int m, int n)
{
    if (m < 4 || m > 30 || n < nonexistence_threshold(m)) {
        return std::nullopt;
    }
    const bool parity_mismatch = (n - m) % 2 != 0;
    const bool too_long = n > pow2(m - 1) - m;
    if (!parity_mismatch && !too_long) {
        return std::nullopt;
    }
    TheoremBound bound;
    bound.source = m >= 7 ? UpperSource::nonexistence_large_m : UpperSource::nonexistence_small_m;
    bound.citation = too_long ? "n > 2^(m-1) - m excludes LCD d >= 4" : "n - m odd excludes LCD d >= 4";
    return bound;
}

std::optional<UpperBound> best_upper_bound(const PublishedLedger& ledger, int m, int n)
{
    std::optional<UpperBound> best;
    auto offer = [&](int d, UpperSource source, const std::string& citation) {
        if (!best || d < best->d || (d == best->d && upper_priority(source) < upper_priority(best->source))) {
            best = UpperBound{d, source, citation};
        }
    };
    for (const auto& e : ledger.entries) {
        if (e.covers(m, n)) {
            offer(e.d, e.kind == PublishedEntry::Kind::lcd ? UpperSource::published_lcd : UpperSource::published_d_nk,
                  e.citation);
        }
    }
    if (auto t = nonexistence_bound(m, n)) {
        offer(t->d, t->source, t->citation);
    }
    return best;
}

std::vector<VerifiedWitness> load_verified_witnesses(const std::filesystem::path& dir, int m)
{
    std::vector<VerifiedWitness> out;
    if (!std::filesystem::is_directory(dir)) {
        return out;
    }
    std::vector<std::filesystem::path> files;
    const std::string prefix = "cert-m" + std::to_string(m) + "-";
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with(prefix) && name.ends_with(".json")) {
            files.push_back(entry.path());
        }
    }
    std::ranges::sort(files);
    for (const auto& path : files) {
        const auto report = verify_certificate_file(path);
        if (!report.pass || !report.recomputed || report.recomputed->gram_rank != m) {
            continue;
        }
        out.push_back({load_certificate(path), report.distance, path.filename().string()});
    }
    return out;
}

TableRange default_table_range(int m)
{
    if (m < 6 || m > 8) {
        throw PreconditionError("tables are available for m in {6, 7, 8}");
    }
    return {m, m == 6 ? 17 : m + 1, pow2(m) + 4};
}

std::vector<DistanceTableEntry> assemble_table(const TableRange& range, const PublishedLedger& ledger,
                                               const std::vector<VerifiedWitness>& witnesses)
{
    if (range.m < 6 || range.m > 8) {
        throw PreconditionError("tables are available for m in {6, 7, 8}");
    }
    if (range.n_min <= range.m || range.n_max < range.n_min) {
        throw PreconditionError("table range must satisfy m < n_min <= n_max");
    }
    std::multimap<int, const VerifiedWitness*> by_n;
    for (const auto& w : witnesses) {
        if (w.cert.m == range.m) {
            by_n.emplace(w.cert.n, &w);
        }
    }

    std::vector<DistanceTableEntry> entries;
    std::vector<std::string> problems;
    for (int n = range.n_min; n <= range.n_max; ++n) {
        struct Lower {
            int d;
            LowerSource source;
            std::string citation;
        };
        std::optional<Lower> lower;
        auto offer = [&](int d, LowerSource source, std::string citation) {
            if (!lower || d > lower->d || (d == lower->d && lower_priority(source) < lower_priority(lower->source))) {
                lower = Lower{d, source, std::move(citation)};
            }
        };
        for (const auto& e : ledger.entries) {
            if (e.kind == PublishedEntry::Kind::lcd && e.covers(range.m, n)) {
                offer(e.d, LowerSource::published, e.citation);
            }
        }
        auto [from, to] = by_n.equal_range(n);
        for (auto it = from; it != to; ++it) {
            const auto& w = *it->second;
            if (w.cert.provenance.starts_with("construction")) {
                offer(w.distance, LowerSource::construction, w.cert.provenance);
            } else {
                offer(w.distance, LowerSource::search_certificate, std::string(kSearchCitation));
            }
        }
        const auto upper = best_upper_bound(ledger, range.m, n);

        const std::string at = " at n=" + std::to_string(n);
        if (!upper) {
            problems.push_back("no upper bound" + at);
            continue;
        }
        if (!lower) {
            problems.push_back("coverage gap" + at);
            continue;
        }
        if (lower->d > upper->d) {
            problems.push_back("inconsistency" + at + ": lower bound " + std::to_string(lower->d) +
                               " exceeds upper bound " + std::to_string(upper->d));
            continue;
        }
        if (lower->d < upper->d) {
            problems.push_back("bounds gap" + at + ": lower " + std::to_string(lower->d) + " < upper " +
                               std::to_string(upper->d));
            continue;
        }
        entries.push_back({range.m, n, n - range.m, lower->d, lower->source, upper->source, lower->citation,
                           upper->citation});
    }
    if (!problems.empty()) {
        std::string what = "table m=" + std::to_string(range.m) + " is incomplete: " + problems.front();
        if (problems.size() > 1) {
            what += " (and " + std::to_string(problems.size() - 1) + " more)";
        }
        throw TableError(what, std::move(problems));
    }
    return entries;
}

std::vector<DistanceTableEntry> assemble_table(const TableRange& range, const PublishedLedger& ledger,
                                               const std::filesystem::path& cert_dir)
{
    return assemble_table(range, ledger, load_verified_witnesses(cert_dir, range.m));
}

// ---------------------------------------------------------------------------
// Rendering

TableFormat parse_table_format(std::string_view s)
{
    if (s == "markdown" || s == "md") {
        return TableFormat::markdown;
    }
    if (s == "csv") {
        return TableFormat::csv;
    }
    if (s == "json") {
        return TableFormat::json;
    }
    throw PreconditionError("unknown table format '" + std::string(s) + "'");
}

std::string emit_table(const std::vector<DistanceTableEntry>& entries, TableFormat format)
{
    std::ostringstream out;
    switch (format) {
    case TableFormat::markdown: {
        out << "| n | d2E | lower bound | upper bound |\n";
        out << "|---|---|---|---|\n";
        for (const auto& run : compress(entries)) {
            const auto& e = *run.sample;
            std::string lower = e.lower_citation;
            if (e.lower_source == LowerSource::search_certificate) {
                lower = std::string(lower_label(e.lower_source));
            } else if (e.lower_source == LowerSource::published) {
                lower = std::string(lower_label(e.lower_source)) + ": " + lower;
            }
            out << "| " << range_label(run) << " | " << e.d << " | " << lower << " | " << upper_label(e.upper_source)
                << ": " << e.upper_citation << " |\n";
        }
        break;
    }
    case TableFormat::csv: {
        out << "m,n,k,d,lower_source,upper_source,lower_citation,upper_citation\n";
        for (const auto& e : entries) {
            out << e.m << ',' << e.n << ',' << e.k << ',' << e.d << ',' << to_string(e.lower_source) << ','
                << to_string(e.upper_source) << ',' << csv_quote(e.lower_citation) << ','
                << csv_quote(e.upper_citation) << '\n';
        }
        break;
    }
    case TableFormat::json: {
        ordered_json doc;
        doc["schema_version"] = "1";
        doc["entries"] = ordered_json::array();
        for (const auto& e : entries) {
            ordered_json row;
            row["m"] = e.m;
            row["n"] = e.n;
            row["k"] = e.k;
            row["d"] = e.d;
            row["lower_source"] = std::string(to_string(e.lower_source));
            row["upper_source"] = std::string(to_string(e.upper_source));
            row["lower_citation"] = e.lower_citation;
            row["upper_citation"] = e.upper_citation;
            doc["entries"].push_back(std::move(row));
        }
        out << doc.dump(2) << '\n';
        break;
    }
    }
    return out.str();
}

std::vector<DistanceTableEntry> parse_table_json(std::string_view text)
{
    std::vector<DistanceTableEntry> entries;
    try {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& row : doc.at("entries")) {
            DistanceTableEntry e;
            e.m = row.at("m").get<int>();
            e.n = row.at("n").get<int>();
            e.k = row.at("k").get<int>();
            e.d = row.at("d").get<int>();
            e.lower_source = parse_lower_source(row.at("lower_source").get<std::string>());
            e.upper_source = parse_upper_source(row.at("upper_source").get<std::string>());
            e.lower_citation = row.at("lower_citation").get<std::string>();
            e.upper_citation = row.at("upper_citation").get<std::string>();
            entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed table JSON: ") + e.what());
    }
    return entries;
}

std::vector<WitnessTarget> plan_table_targets(const TableRange& range, const PublishedLedger& ledger)
{
    std::vector<WitnessTarget> targets;
    for (int n = range.n_min; n <= range.n_max; ++n) {
        const bool published = std::ranges::any_of(ledger.entries, [&](const PublishedEntry& e) {
            return e.kind == PublishedEntry::Kind::lcd && e.covers(range.m, n);
        });
        if (published || n >= pow2(range.m)) {
            continue;
        }
        const auto upper = best_upper_bound(ledger, range.m, n);
        if (!upper || upper->d < 3) {
            continue;
        }
        targets.push_back({n, upper->d >= 4});
    }
    return targets;
}

} // namespace caplcd
