#include "caplcd/certificate.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

const fs::path& scratch()
{
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "caplcd-test-cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args)
{
    const fs::path out = scratch() / "stdout.txt";
    const fs::path err = scratch() / "stderr.txt";
    const std::string cmd = std::string("env -u CAPLCD_THREADS ") + CAPLCD_CLI + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string in_scratch(const std::string& name)
{
    const fs::path d = scratch() / name;
    fs::create_directories(d);
    return d.string();
}

} // namespace

TEST_CASE("construct")
{
    const std::string dir = in_scratch("construct");
    auto r = run("construct s1 --m 7 --out " + dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("[57, 50, 4] lcd=true cap=true d=4") != std::string::npos);
    CHECK(fs::exists(fs::path(dir) / "cert-m7-n57-s1.json"));
    CHECK(r.err.find("caplcd 1.0.0") != std::string::npos);
    CHECK(r.err.find("config: subcommand=construct") != std::string::npos);

    r = run("construct s2 --m 8 --out " + dir);
    CHECK(r.code == 0);
    CHECK(fs::exists(fs::path(dir) / "cert-m8-n71-s2.json"));

    CHECK(run("construct s1 --m 3 --out " + dir).code == 2);
    CHECK(run("construct s3 --m 8 --out " + dir).code == 2);
    CHECK(run("construct s2 --m 6 --out " + dir).code == 2);
}

TEST_CASE("search")
{
    const std::string dir = in_scratch("search");
    auto r = run("search --m 8 --n 41 --cap --out " + dir);
    CHECK(r.code == 0);
    CHECK(r.err.find("restart=0 best_rank=") != std::string::npos);
    CHECK(r.out.find("lcd=true cap=true") != std::string::npos);
    CHECK(run("verify " + dir).code == 0);

    CHECK(run("search --m 8 --n 300 --out " + dir).code == 2);
    CHECK(run("search --m 8 --out " + dir).code == 2);

    r = run("search --m 8 --n 121 --cap --budget-ms 1000 --out " + dir);
    CHECK(r.code == 1);
    CHECK(r.out.find("not found within budget") != std::string::npos);

    r = run("search --m 8 --n 73 --threads 2 --out " + dir);
    CHECK(r.code == 0);
    CHECK(r.err.find("effective_threads=2") != std::string::npos);
}

TEST_CASE("verify reports findings")
{
    const std::string dir = in_scratch("verify");
    REQUIRE(run("construct s1 --m 7 --out " + dir).code == 0);
    const fs::path good = fs::path(dir) / "cert-m7-n57-s1.json";
    CHECK(run("verify " + good.string()).code == 0);

    caplcd::Certificate bad = caplcd::load_certificate(good);
    bad.points[0] = 0;
    const fs::path bad_path = caplcd::write_certificate(bad, dir, "bad");
    const auto r = run("verify " + dir);
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL " + bad_path.string()) != std::string::npos);
    CHECK(r.out.find("nonzero") != std::string::npos);
    CHECK(r.out.find("1/2 certificates pass") != std::string::npos);
}

TEST_CASE("table")
{
    auto r = run("table --m 8");
    CHECK(r.code == 0);
    CHECK(r.out.find("| odd 73-119 | 3 |") != std::string::npos);

    const std::string dir = in_scratch("table");
    r = run("table --m 7 --format json --out " + dir);
    CHECK(r.code == 0);
    CHECK(fs::exists(fs::path(dir) / "d2e-m7.json"));

    r = run("table --m 8 --certs " + in_scratch("empty-certs"));
    CHECK(r.code == 1);
    CHECK(r.err.find("coverage gap at n=") != std::string::npos);

    CHECK(run("table --m 5").code == 2);
    CHECK(run("table --m 8 --format xml").code == 2);
}

TEST_CASE("nonexistence")
{
    auto r = run("nonexistence --m 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("exhaustive=true") != std::string::npos);
    CHECK(run("nonexistence --m 5").code == 0);
    CHECK(run("nonexistence --m 6").code == 2);
    CHECK(run("nonexistence --m 6 --exhaustive-m6 --budget-ms 200").code == 1);
}

TEST_CASE("campaign")
{
    const std::string dir = in_scratch("campaign");
    auto r = run("campaign --m 8 --cap-n 41-43,120 --n 73 --out " + dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("5/5 targets certified") != std::string::npos);
    CHECK(fs::exists(fs::path(dir) / "cert-m8-n120-s1.json"));
    CHECK(run("verify " + dir).code == 0);

    r = run("campaign --m 8 --cap-n 75 --max-restarts 2 --budget-ms 200 --out " + dir);
    CHECK(r.code == 1);
    CHECK(run("campaign --m 8 --cap-n 9-x --out " + dir).code == 2);
}

TEST_CASE("selftest")
{
    CHECK(run("selftest --iterations 30").code == 0);
    CHECK(run("selftest --iterations 0").code == 2);
    const auto r = run("selftest --iterations 30 --inject-gram-fault");
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL gram agreement") != std::string::npos);
}

TEST_CASE("usage errors")
{
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--help").code == 0);
}
