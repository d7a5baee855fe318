#include "caplcd/caps.hpp"
#include "caplcd/error.hpp"
#include "caplcd/table.hpp"
#include "golden.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>

using namespace caplcd;
namespace fs = std::filesystem;

namespace {

const fs::path kData = CAPLCD_TEST_DATA;

PublishedLedger ledger()
{
    return load_ledger(kData / "published.json");
}

const std::vector<DistanceTableEntry>& committed_table(int m)
{
    static std::map<int, std::vector<DistanceTableEntry>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) {
        it = cache.emplace(m, assemble_table(default_table_range(m), ledger(), kData / "certs")).first;
    }
    return it->second;
}

const DistanceTableEntry& row(int m, int n)
{
    const auto& t = committed_table(m);
    const auto it = std::ranges::find(t, n, &DistanceTableEntry::n);
    REQUIRE(it != t.end());
    return *it;
}

std::vector<std::string> problems_of(const auto& call)
{
    try {
        call();
    } catch (const TableError& e) {
        return e.problems();
    }
    return {};
}

VerifiedWitness fake_witness(int m, int n, int distance, std::string provenance = "search seed=1")
{
    VerifiedWitness w;
    w.cert.m = m;
    w.cert.n = n;
    w.cert.provenance = std::move(provenance);
    w.distance = distance;
    return w;
}

} // namespace

TEST_CASE("nonexistence thresholds and bounds")
{
    CHECK(nonexistence_threshold(4) == 6);
    CHECK(nonexistence_threshold(5) == 10);
    CHECK(nonexistence_threshold(6) == 17);
    CHECK(nonexistence_threshold(7) == 34);
    CHECK(nonexistence_threshold(8) == 73);
    CHECK_THROWS_AS((void)nonexistence_threshold(3), PreconditionError);

    CHECK_FALSE(nonexistence_bound(8, 71).has_value());
    CHECK_FALSE(nonexistence_bound(8, 72).has_value());
    CHECK_FALSE(nonexistence_bound(8, 74).has_value());
    CHECK_FALSE(nonexistence_bound(8, 120).has_value());
    const auto odd = nonexistence_bound(8, 73);
    REQUIRE(odd);
    CHECK(odd->d == 3);
    CHECK(odd->source == UpperSource::nonexistence_large_m);
    CHECK(odd->citation.find("odd") != std::string::npos);
    const auto long_even = nonexistence_bound(8, 122);
    REQUIRE(long_even);
    CHECK(long_even->citation.find("2^(m-1) - m") != std::string::npos);
    const auto small = nonexistence_bound(6, 19);
    REQUIRE(small);
    CHECK(small->source == UpperSource::nonexistence_small_m);
    CHECK_FALSE(nonexistence_bound(6, 18).has_value());
    CHECK_FALSE(nonexistence_bound(6, 15).has_value());
}

TEST_CASE("best upper bound prefers the smaller value, then LCD data, then d(n,k)")
{
    const auto l = ledger();
    auto u = best_upper_bound(l, 8, 247);
    REQUIRE(u);
    CHECK(u->d == 3);
    CHECK(u->source == UpperSource::published_lcd);

    u = best_upper_bound(l, 8, 125);
    REQUIRE(u);
    CHECK(u->d == 3);
    CHECK(u->source == UpperSource::nonexistence_large_m);

    u = best_upper_bound(l, 8, 100);
    REQUIRE(u);
    CHECK(u->d == 4);
    CHECK(u->source == UpperSource::published_d_nk);

    CHECK_FALSE(best_upper_bound(PublishedLedger{}, 8, 50).has_value());
}

TEST_CASE("assemble_table examples")
{
    const auto& a = row(8, 73);
    CHECK(a.d == 3);
    CHECK(a.k == 65);
    CHECK(a.lower_source == LowerSource::search_certificate);
    CHECK(a.upper_source == UpperSource::nonexistence_large_m);

    CHECK(row(7, 57).d == 4);
    CHECK(row(8, 248).d == 2);
    CHECK(row(8, 248).lower_source == LowerSource::published);

    CHECK(row(8, 120).lower_source == LowerSource::construction);
    CHECK(row(8, 120).lower_citation == "construction s1 m=8");
    CHECK(row(8, 71).lower_source == LowerSource::construction);
}

TEST_CASE("m = 6 odd rows in 17..25 cite the nonexistence result")
{
    for (int n = 17; n <= 25; n += 2) {
        const auto& e = row(6, n);
        CHECK(e.d == 3);
        CHECK(e.upper_source == UpperSource::nonexistence_small_m);
        CHECK(e.lower_source != LowerSource::published);
    }
    for (int n = 18; n <= 26; n += 2) {
        CHECK(row(6, n).d == 4);
    }
}

TEST_CASE("committed certificates reproduce the hand-transcribed case functions")
{
    const auto cases = golden::load_cases(golden::cases_path());
    for (const int m : {7, 8}) {
        const auto& g = cases.at(m);
        const auto t = assemble_table({m, g.n_min, g.n_max}, ledger(), kData / "certs");
        REQUIRE(t.size() == g.d_by_n.size());
        for (const auto& e : t) {
            INFO("m=" << m << " n=" << e.n);
            CHECK(e.d == g.d_by_n.at(e.n));
        }
    }
    const auto& m6 = committed_table(6);
    CHECK(m6.front().n == 17);
    CHECK(m6.back().n == 68);
}

TEST_CASE("assembly failures list every gap")
{
    const auto l = ledger();
    auto p = problems_of([&] { (void)assemble_table({8, 41, 44}, l, std::vector<VerifiedWitness>{}); });
    REQUIRE(p.size() == 4);
    CHECK(p.front() == "coverage gap at n=41");

    const std::vector<VerifiedWitness> too_strong = {fake_witness(8, 73, 4)};
    p = problems_of([&] { (void)assemble_table({8, 73, 73}, l, too_strong); });
    REQUIRE(p.size() == 1);
    CHECK(p.front().starts_with("inconsistency at n=73"));

    const std::vector<VerifiedWitness> too_weak = {fake_witness(8, 41, 3)};
    p = problems_of([&] { (void)assemble_table({8, 41, 41}, l, too_weak); });
    REQUIRE(p.size() == 1);
    CHECK(p.front().starts_with("bounds gap at n=41"));

    p = problems_of([&] { (void)assemble_table({8, 9, 10}, PublishedLedger{}, std::vector<VerifiedWitness>{}); });
    CHECK(p == std::vector<std::string>{"no upper bound at n=9", "no upper bound at n=10"});

    try {
        (void)assemble_table({8, 41, 44}, l, std::vector<VerifiedWitness>{});
        FAIL("expected TableError");
    } catch (const TableError& e) {
        CHECK(std::string(e.what()).find("(and 3 more)") != std::string::npos);
    }

    CHECK_THROWS_AS((void)assemble_table({5, 6, 10}, l, std::vector<VerifiedWitness>{}), PreconditionError);
    CHECK_THROWS_AS((void)assemble_table({8, 8, 10}, l, std::vector<VerifiedWitness>{}), PreconditionError);
    CHECK_THROWS_AS((void)default_table_range(9), PreconditionError);
}

TEST_CASE("witnesses for other m are ignored and constructions outrank search")
{
    const auto l = ledger();
    const std::vector<VerifiedWitness> ws = {fake_witness(7, 41, 4), fake_witness(8, 41, 4),
                                             fake_witness(8, 41, 4, "construction test")};
    const auto t = assemble_table({8, 41, 41}, l, ws);
    REQUIRE(t.size() == 1);
    CHECK(t[0].lower_source == LowerSource::construction);
    CHECK(t[0].lower_citation == "construction test");
}

TEST_CASE("load_verified_witnesses keeps only passing, spanning, nonsingular certificates")
{
    const fs::path dir = fs::temp_directory_path() / "caplcd-test-witnesses";
    fs::remove_all(dir);
    fs::create_directories(dir);
    (void)write_certificate(make_certificate(construct_s1(7), "construction s1 m=7"), dir, "s1");
    Certificate lying = make_certificate(construct_s2(7), "construction s2 m=7");
    lying.claims.gram_rank = 6;
    (void)write_certificate(lying, dir, "s2");
    std::ofstream(dir / "cert-m7-n9-junk.json") << "not json";
    (void)write_certificate(make_certificate(construct_s1(8), "construction s1 m=8"), dir, "s1");

    const auto ws = load_verified_witnesses(dir, 7);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].file == "cert-m7-n57-s1.json");
    CHECK(ws[0].distance == 4);
    CHECK(load_verified_witnesses(dir / "missing", 7).empty());
    fs::remove_all(dir);
}

TEST_CASE("emit_table formats")
{
    CHECK(emit_table({}, TableFormat::markdown) == "| n | d2E | lower bound | upper bound |\n|---|---|---|---|\n");
    CHECK(emit_table({}, TableFormat::csv) == "m,n,k,d,lower_source,upper_source,lower_citation,upper_citation\n");

    const auto& t = committed_table(8);
    const std::string json = emit_table(t, TableFormat::json);
    CHECK(parse_table_json(json) == t);
    CHECK(emit_table(parse_table_json(json), TableFormat::json) == json);
    CHECK(emit_table(t, TableFormat::markdown) == emit_table(t, TableFormat::markdown));

    const std::string md = emit_table(t, TableFormat::markdown);
    CHECK(md.find("| odd 73-119 | 3 | search certificate |") != std::string::npos);
    CHECK(md.find("| 248-260 | 2 | published: ") != std::string::npos);

    const std::string csv = emit_table(t, TableFormat::csv);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(t.size()) + 1);

    CHECK(parse_table_format("md") == TableFormat::markdown);
    CHECK(parse_table_format("csv") == TableFormat::csv);
    CHECK_THROWS_AS((void)parse_table_format("xml"), PreconditionError);
    CHECK_THROWS_AS((void)parse_table_json("{}"), FormatError);
    CHECK_THROWS_AS((void)parse_upper_source("guess"), FormatError);
}

TEST_CASE("ledger parsing")
{
    const auto l = ledger();
    CHECK_FALSE(l.entries.empty());
    for (const auto& e : l.entries) {
        CHECK_FALSE(e.citation.empty());
    }
    CHECK_THROWS_AS((void)parse_ledger("nope"), FormatError);
    CHECK_THROWS_AS((void)parse_ledger(R"({"schema_version":"1"})"), FormatError);
    CHECK_THROWS_AS((void)parse_ledger(
                        R"({"entries":[{"m":8,"n_min":9,"n_max":9,"kind":"guess","d":9,"citation":"x"}]})"),
                    FormatError);
    CHECK_THROWS_AS(
        (void)parse_ledger(R"({"entries":[{"m":8,"n_min":9,"n_max":9,"kind":"lcd","d":9,"citation":""}]})"),
        FormatError);
    CHECK_THROWS_AS((void)load_ledger(kData / "missing.json"), FormatError);
    const auto one = parse_ledger(R"({"entries":[{"m":8,"n_min":9,"n_max":null,"kind":"d_nk","d":9,"citation":"x"}]})");
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].covers(8, 1000));
    CHECK_FALSE(one.entries[0].covers(7, 1000));
}

TEST_CASE("plan_table_targets fills exactly the unpublished gaps")
{
    const auto l = ledger();
    const auto plan = plan_table_targets(default_table_range(8), l);
    CHECK(plan.size() == 206);
    CHECK(plan.front() == WitnessTarget{41, true});
    CHECK(plan.back() == WitnessTarget{246, false});
    CHECK(std::ranges::find(plan, WitnessTarget{73, false}) != plan.end());
    CHECK(std::ranges::find(plan, WitnessTarget{120, true}) != plan.end());
    CHECK(std::ranges::find(plan, WitnessTarget{121, false}) != plan.end());
    CHECK(plan_table_targets(default_table_range(7), l).size() == 87);
    CHECK(plan_table_targets(default_table_range(6), l).size() == 41);
}
