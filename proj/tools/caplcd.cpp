// caplcd: constructions, witness search, certificate verification and table
// assembly for binary LCD codes of small codimension.

#include "caplcd/caps.hpp"
#include "caplcd/certificate.hpp"
#include "caplcd/code.hpp"
#include "caplcd/error.hpp"
#include "caplcd/search.hpp"
#include "caplcd/selftest.hpp"
#include "caplcd/table.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace caplcd;

namespace {

constexpr const char* kVersion = "1.0.0";

#ifndef CAPLCD_DATA_DIR
#define CAPLCD_DATA_DIR "data"
#endif

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

int resolve_threads(int requested)
{
    if (const char* env = std::getenv("CAPLCD_THREADS"); env != nullptr && *env != '\0') {
        try {
            requested = std::stoi(env);
        } catch (const std::exception&) {
            throw PreconditionError(std::string("CAPLCD_THREADS is not an integer: ") + env);
        }
    }
    if (requested < 1) {
        throw PreconditionError("thread count must be positive");
    }
    return requested;
}

void echo_config(const CLI::App& sub, int threads)
{
    std::cerr << "caplcd " << kVersion << '\n' << "config: subcommand=" << sub.get_name();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_name() == "--help") {
            continue;
        }
        std::string value;
        if (opt->count() > 0) {
            for (std::size_t i = 0; i < opt->results().size(); ++i) {
                value += (i ? "," : "") + opt->results()[i];
            }
            if (opt->get_expected_max() == 0) {
                value = "true";
            }
        } else {
            value = opt->get_expected_max() == 0 ? "false" : opt->get_default_str();
        }
        std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
        name.erase(0, name.find_first_not_of('-'));
        std::cerr << ' ' << name << '=' << (value.empty() ? "-" : value);
    }
    if (threads > 0) {
        std::cerr << " effective_threads=" << threads;
    }
    std::cerr << '\n';
}

std::string summary_line(const Certificate& cert)
{
    std::ostringstream out;
    out << '[' << cert.n << ", " << cert.n - cert.m << ", " << cert.claims.min_distance_floor
        << "] lcd=" << (cert.claims.gram_rank == cert.m ? "true" : "false") << " cap=" << (cert.claims.is_cap ? "true" : "false");
    if (cert.claims.exact_min_distance) {
        out << " d=" << *cert.claims.exact_min_distance;
    }
    return out.str();
}

// A cap with nonsingular Gram matrix at a size excluded by the nonexistence
// results means a bug somewhere; refuse to emit it.
void guard_theorem(const Certificate& cert)
{
    if (cert.m >= 4 && cert.claims.is_cap && cert.claims.gram_rank == cert.m) {
        if (auto t = nonexistence_bound(cert.m, cert.n)) {
            throw InternalError("witness contradicts the nonexistence bound at m=" + std::to_string(cert.m) +
                                " n=" + std::to_string(cert.n) + " (" + t->citation + ")");
        }
    }
}

Certificate checked(Certificate cert)
{
    const auto report = verify_certificate(cert);
    if (!report.pass) {
        throw InternalError("generated certificate failed verification: " + report.findings.front().message);
    }
    guard_theorem(cert);
    return cert;
}

std::vector<int> parse_int_list(const std::string& text, const char* what)
{
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto dash = item.find('-', 1);
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, dash));
                const int hi = std::stoi(item.substr(dash + 1));
                for (int v = lo; v <= hi; ++v) {
                    out.push_back(v);
                }
            }
        } catch (const std::exception&) {
            throw PreconditionError(std::string("cannot parse ") + what + " '" + item + "'");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
    std::string name;
    int m = 0;
    std::string out = ".";
};

int run_construct(const ConstructArgs& a)
{
    PointSet s = [&] {
        if (a.name == "s1") {
            return construct_s1(a.m);
        }
        if (a.name == "s2") {
            return construct_s2(a.m);
        }
        throw PreconditionError("unknown construction '" + a.name + "' (expected s1 or s2)");
    }();
    const Certificate cert = checked(make_certificate(s, "construction " + a.name + " m=" + std::to_string(a.m)));
    const auto path = write_certificate(cert, a.out, a.name);
    std::cout << summary_line(cert) << '\n' << "wrote " << path.string() << '\n';
    return kOk;
}

struct SearchArgs {
    int m = 0;
    int n = 0;
    bool cap = false;
    bool allow_singular = false;
    std::uint64_t seed = 1;
    std::optional<std::int64_t> budget_ms;
    int max_restarts = 64;
    int threads = 1;
    std::string out = ".";
};

int run_search(const SearchArgs& a, int threads)
{
    // Each thread runs its own seed (seed, seed+1, ...); the lowest seed that
    // succeeds wins, so the result does not depend on scheduling.
    std::vector<SearchSpec> specs;
    for (int t = 0; t < threads; ++t) {
        SearchSpec spec;
        spec.m = a.m;
        spec.n = a.n;
        spec.require_cap = a.cap;
        spec.require_nonsingular = !a.allow_singular;
        spec.seed = a.seed + static_cast<std::uint64_t>(t);
        spec.max_restarts = a.max_restarts;
        spec.budget_ms = a.budget_ms;
        validate(spec);
        specs.push_back(spec);
    }
    std::vector<SearchResult> results(specs.size());
    std::vector<std::ostringstream> logs(specs.size());
    std::vector<std::exception_ptr> errors(specs.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            pool.emplace_back([&, i] {
                try {
                    results[i] = find_witness(specs[i], &logs[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::uint64_t iterations = 0;
    std::size_t restarts = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        std::cerr << logs[i].str();
        iterations += results[i].iterations;
        restarts += results[i].transcript.size();
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!results[i].witness) {
            continue;
        }
        const std::string provenance =
            "search seed=" + std::to_string(specs[i].seed) + " restart=" + std::to_string(results[i].found_at_restart);
        const Certificate cert = checked(make_certificate(*results[i].witness, provenance));
        const auto path = write_certificate(cert, a.out, "search-s" + std::to_string(specs[i].seed));
        std::cout << summary_line(cert) << '\n' << "wrote " << path.string() << '\n';
        return kOk;
    }
    std::cout << "not found within budget: restarts=" << restarts << " iterations=" << iterations << '\n';
    return kNegative;
}

struct VerifyArgs {
    std::vector<std::string> paths;
};

int run_verify(const VerifyArgs& a)
{
    std::vector<fs::path> files;
    for (const auto& p : a.paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".json") {
                    found.push_back(entry.path());
                }
            }
            std::ranges::sort(found);
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::exists(p)) {
            files.emplace_back(p);
        } else {
            throw PreconditionError("no such file or directory: " + p);
        }
    }
    std::size_t failed = 0;
    for (const auto& f : files) {
        const auto report = verify_certificate_file(f);
        if (report.pass) {
            std::cout << "PASS " << f.string() << '\n';
            continue;
        }
        ++failed;
        std::cout << "FAIL " << f.string() << '\n';
        for (const auto& finding : report.findings) {
            std::cout << "  " << finding.code << ": " << finding.message << '\n';
        }
    }
    std::cout << files.size() - failed << "/" << files.size() << " certificates pass\n";
    return failed == 0 ? kOk : kNegative;
}

struct TableArgs {
    int m = 0;
    std::string certs = CAPLCD_DATA_DIR "/certs";
    std::string ledger = CAPLCD_DATA_DIR "/published.json";
    std::string format = "markdown";
    std::optional<int> n_min;
    std::optional<int> n_max;
    std::string out;
};

int run_table(const TableArgs& a)
{
    const TableFormat format = parse_table_format(a.format);
    TableRange range = default_table_range(a.m);
    range.n_min = a.n_min.value_or(range.n_min);
    range.n_max = a.n_max.value_or(range.n_max);
    const PublishedLedger ledger = load_ledger(a.ledger);
    std::vector<DistanceTableEntry> entries;
    try {
        entries = assemble_table(range, ledger, fs::path(a.certs));
    } catch (const TableError& e) {
        bool inconsistent = false;
        std::cerr << "error: " << e.what() << '\n';
        for (const auto& p : e.problems()) {
            std::cerr << "  " << p << '\n';
            inconsistent = inconsistent || p.starts_with("inconsistency");
        }
        return inconsistent ? kInternal : kNegative;
    }
    const std::string doc = emit_table(entries, format);
    if (a.out.empty()) {
        std::cout << doc;
        return kOk;
    }
    const char* ext = format == TableFormat::markdown ? "md" : format == TableFormat::csv ? "csv" : "json";
    fs::create_directories(a.out);
    const fs::path path = fs::path(a.out) / ("d2e-m" + std::to_string(a.m) + "." + ext);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error("cannot write " + path.string());
    }
    file << doc;
    std::cout << "table m=" << a.m << " n=" << range.n_min << ".." << range.n_max << ": " << entries.size()
              << " entries, wrote " << path.string() << '\n';
    return kOk;
}

struct NonexistenceArgs {
    int m = 0;
    std::optional<int> n_min;
    bool exhaustive_m6 = false;
    std::optional<std::int64_t> budget_ms;
};

int run_nonexistence(const NonexistenceArgs& a)
{
    NonexistenceOptions options;
    options.allow_m6 = a.exhaustive_m6;
    options.budget_ms = a.budget_ms;
    const NonexistenceReport r = verify_nonexistence_exhaustive(a.m, a.n_min, options);
    std::cout << "m=" << r.m << " n>=" << r.n_min << " exhaustive=" << (r.exhaustive ? "true" : "false")
              << " caps_enumerated=" << r.caps_enumerated << " witnesses_found=" << r.witnesses_found
              << " elapsed_ms=" << r.elapsed_ms << '\n';
    for (const auto& [size, count] : r.caps_by_size) {
        const auto it = r.nonsingular_by_size.find(size);
        std::cout << "  size " << size << ": caps=" << count
                  << " nonsingular=" << (it == r.nonsingular_by_size.end() ? 0 : it->second) << '\n';
    }
    std::cout << "conclusion checked: nonsingular caps have n = m (mod 2) and n <= " << r.n_max_bound << '\n';
    for (const auto& c : r.counterexamples) {
        std::cout << "  counterexample:";
        for (std::uint32_t p : c) {
            std::cout << ' ' << p;
        }
        std::cout << '\n';
    }
    if (r.witnesses_found > 0) {
        std::cerr << "error: counterexamples to the nonexistence bound were found\n";
        return kInternal;
    }
    return r.exhaustive ? kOk : kNegative;
}

struct CampaignArgs {
    int m = 0;
    std::string cap_n;
    std::string plain_n;
    bool plan = false;
    std::string ledger = CAPLCD_DATA_DIR "/published.json";
    std::string seeds = "1";
    std::optional<std::int64_t> budget_ms;
    int max_restarts = 64;
    int threads = 1;
    bool no_constructions = false;
    std::string out = "certs";
};

int run_campaign(const CampaignArgs& a, int threads)
{
    CampaignOptions options;
    options.m = a.m;
    options.threads = threads;
    options.budget_ms_per_target = a.budget_ms;
    options.max_restarts = a.max_restarts;
    options.use_constructions = !a.no_constructions;
    options.progress = &std::cerr;
    options.seeds.clear();
    for (int s : parse_int_list(a.seeds, "seed")) {
        options.seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (a.plan) {
        options.targets = plan_table_targets(default_table_range(a.m), load_ledger(a.ledger));
    }
    for (int n : parse_int_list(a.cap_n, "size")) {
        options.targets.push_back({n, true});
    }
    for (int n : parse_int_list(a.plain_n, "size")) {
        options.targets.push_back({n, false});
    }
    for (const auto& t : options.targets) {
        SearchSpec probe;
        probe.m = a.m;
        probe.n = t.n;
        validate(probe);
    }
    const CampaignResult result = batch_witness_campaign(options);
    for (const auto& item : result.items) {
        const std::string what = "n=" + std::to_string(item.target.n) + (item.target.require_cap ? " cap" : "");
        if (item.certificate) {
            guard_theorem(*item.certificate);
            const auto path = write_certificate(*item.certificate, a.out, item.tag);
            std::cout << "OK   " << what << ' ' << summary_line(*item.certificate) << ' ' << path.string() << '\n';
        } else {
            std::cout << "MISS " << what << ": " << item.failure << '\n';
        }
    }
    std::cout << result.items.size() - result.failures() << "/" << result.items.size() << " targets certified\n";
    return result.failures() == 0 ? kOk : kNegative;
}

struct SelftestArgs {
    std::uint64_t seed = 1;
    int iterations = 200;
    bool inject_gram_fault = false;
};

int run_selftest_cmd(const SelftestArgs& a)
{
    SelftestOptions options;
    options.seed = a.seed;
    options.iterations = a.iterations;
    options.inject_gram_fault = a.inject_gram_fault;
    const SelftestReport report = run_selftest(options);
    for (const auto& p : report.properties) {
        if (p.violations == 0) {
            std::cout << "PASS " << p.name << " (" << p.checked << " instances)\n";
        } else {
            std::cout << "FAIL " << p.name << " (" << p.violations << "/" << p.checked
                      << " violated; first: " << p.first_violation << ")\n";
        }
    }
    return report.pass() ? kOk : kNegative;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Constructions, searches, certificates and tables for binary LCD codes of small codimension"};
    app.set_version_flag("--version", std::string("caplcd ") + kVersion);
    app.require_subcommand(1);

    ConstructArgs construct;
    auto* c = app.add_subcommand("construct", "Build an explicit cap construction and write its certificate");
    c->add_option("name", construct.name, "s1 or s2")->required()->check(CLI::IsMember({"s1", "s2"}));
    c->add_option("--m", construct.m, "dimension")->required();
    c->add_option("--out", construct.out, "certificate directory")->capture_default_str();

    SearchArgs search;
    auto* s = app.add_subcommand("search", "Search for a witness set of a given size");
    s->add_option("--m", search.m, "dimension")->required();
    s->add_option("--n", search.n, "set size")->required();
    s->add_flag("--cap", search.cap, "require a cap (code distance >= 4)");
    s->add_flag("--allow-singular", search.allow_singular, "do not require a nonsingular Gram matrix");
    s->add_option("--seed", search.seed, "base seed")->capture_default_str();
    s->add_option("--budget-ms", search.budget_ms, "wall-clock budget");
    s->add_option("--max-restarts", search.max_restarts, "restarts per seed")->capture_default_str();
    s->add_option("--threads", search.threads, "parallel seeds (CAPLCD_THREADS overrides)")->capture_default_str();
    s->add_option("--out", search.out, "certificate directory")->capture_default_str();

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Re-verify certificate files or directories");
    v->add_option("paths", verify.paths, "files or directories")->required();

    TableArgs table;
    auto* t = app.add_subcommand("table", "Assemble the d2E(n, n-m) table");
    t->add_option("--m", table.m, "codimension (6, 7 or 8)")->required();
    t->add_option("--certs", table.certs, "certificate directory")->capture_default_str();
    t->add_option("--ledger", table.ledger, "published-values ledger")->capture_default_str();
    t->add_option("--format", table.format, "markdown, csv or json")->capture_default_str();
    t->add_option("--n-min", table.n_min, "first n");
    t->add_option("--n-max", table.n_max, "last n");
    t->add_option("--out", table.out, "write d2e-m<m>.<ext> into this directory");

    NonexistenceArgs nonexistence;
    auto* x = app.add_subcommand("nonexistence", "Enumerate all large caps for small m and check their Gram ranks");
    x->add_option("--m", nonexistence.m, "dimension (4 or 5)")->required();
    x->add_option("--n-min", nonexistence.n_min, "smallest cap size (default 2^(m-2)+2)");
    x->add_flag("--exhaustive-m6", nonexistence.exhaustive_m6, "allow m=6 (very long)");
    x->add_option("--budget-ms", nonexistence.budget_ms, "stop early; the report is then not exhaustive");

    CampaignArgs campaign;
    auto* g = app.add_subcommand("campaign", "Certify many sizes at once");
    g->add_option("--m", campaign.m, "dimension")->required();
    g->add_option("--cap-n", campaign.cap_n, "cap targets, e.g. 41-72,74");
    g->add_option("--n", campaign.plain_n, "distinct-point targets, e.g. 73,121-246");
    g->add_flag("--plan", campaign.plan, "add every target the table needs beyond the ledger");
    g->add_option("--ledger", campaign.ledger, "published-values ledger")->capture_default_str();
    g->add_option("--seeds", campaign.seeds, "seeds tried in order, e.g. 1,2,3")->capture_default_str();
    g->add_option("--budget-ms", campaign.budget_ms, "budget per target and seed");
    g->add_option("--max-restarts", campaign.max_restarts, "restarts per seed")->capture_default_str();
    g->add_option("--threads", campaign.threads, "worker threads (CAPLCD_THREADS overrides)")->capture_default_str();
    g->add_flag("--no-constructions", campaign.no_constructions, "search even where a construction fits");
    g->add_option("--out", campaign.out, "certificate directory")->capture_default_str();

    SelftestArgs selftest;
    auto* st = app.add_subcommand("selftest", "Run the embedded invariant suite on seeded random instances");
    st->add_option("--seed", selftest.seed, "seed")->capture_default_str();
    st->add_option("--iterations", selftest.iterations, "instances per property")->capture_default_str();
    st->add_flag("--inject-gram-fault", selftest.inject_gram_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        int threads = 0;
        if (s->parsed()) {
            threads = resolve_threads(search.threads);
        } else if (g->parsed()) {
            threads = resolve_threads(campaign.threads);
        }
        for (const CLI::App* sub : app.get_subcommands()) {
            echo_config(*sub, threads);
        }
        if (c->parsed()) {
            return run_construct(construct);
        }
        if (s->parsed()) {
            return run_search(search, threads);
        }
        if (v->parsed()) {
            return run_verify(verify);
        }
        if (t->parsed()) {
            return run_table(table);
        }
        if (x->parsed()) {
            return run_nonexistence(nonexistence);
        }
        if (g->parsed()) {
            return run_campaign(campaign, threads);
        }
        return run_selftest_cmd(selftest);
    } catch (const PreconditionError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kUsage;
    } catch (const InternalError& e) {
        std::cerr << "internal inconsistency: " << e.what() << '\n';
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNegative;
    }
}
