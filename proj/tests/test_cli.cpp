// End-to-end checks of the km-sharp binary: each subcommand is invoked
// through the shell, and stdout / exit codes are compared against known
// values.  The binary path comes in through KMSHARP_CLI_PATH.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "kmsharp-cli-test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args) {
    static int serial = 0;
    const fs::path base = work_dir() / ("run" + std::to_string(serial++));
    const std::string cmd = std::string(KMSHARP_CLI_PATH) + " " + args + " >" +
                            base.string() + ".out 2>" + base.string() + ".err";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
    r.out = slurp(base.string() + ".out");
    r.err = slurp(base.string() + ".err");
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// first non-comment, non-header CSV data line
std::string first_data_line(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    bool past_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!past_header) {
            past_header = true;  // column header
            continue;
        }
        return line;
    }
    return "";
}

}  // namespace

TEST_CASE("cli: missing or unknown subcommand exits 2") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("table --no-such-flag").code == 2);
}

TEST_CASE("cli table: exact CSV values and deterministic reruns") {
    const fs::path a = work_dir() / "table_a.csv";
    const fs::path b = work_dir() / "table_b.csv";
    const std::string args = "table --schedule const:0.5 --n 8 --mode exact --method lp -o ";
    REQUIRE(run(args + a.string()).code == 0);
    REQUIRE(run(args + b.string()).code == 0);
    const std::string ca = slurp(a);
    CHECK(ca == slurp(b));
    CHECK(contains(ca, "m,n,value"));
    CHECK(contains(ca, "\n0,1,1/2\n"));
    CHECK(contains(ca, "\n1,2,3/8\n"));
    CHECK(contains(ca, "\n-1,-1,0\n"));
}

TEST_CASE("cli table: float mode and the c-table") {
    const RunResult rd = run("table --n 6 --mode float");
    REQUIRE(rd.code == 0);
    CHECK(contains(rd.out, "\n1,2,0.375\n"));

    const RunResult rc = run("table --n 6 --which c --mode exact");
    REQUIRE(rc.code == 0);
    CHECK(contains(rc.out, "# which: c"));
    CHECK(contains(rc.out, "\n2,3,5/16\n"));

    CHECK(run("table --n 6 --which q").code == 2);
    CHECK(run("table --schedule const:0.3 --method closed_form").code == 2);
}

TEST_CASE("cli rates: anchor row") {
    const RunResult r = run("rates --alpha 0.5 --n 4");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "n,alpha,kappa,kappa_tilde"));
    CHECK(first_data_line(r.out) == "1,0.5,0.375,0.375");
}

TEST_CASE("cli gamma: single-alpha row, parsed numerically") {
    const RunResult r = run("gamma --alpha 0.5 --nmax 64");
    REQUIRE(r.code == 0);
    const std::string row = first_data_line(r.out);
    std::stringstream ss(row);
    std::string alpha, gamma, argmax, saturated;
    REQUIRE(std::getline(ss, alpha, ','));
    REQUIRE(std::getline(ss, gamma, ','));
    REQUIRE(std::getline(ss, argmax, ','));
    REQUIRE(std::getline(ss, saturated));
    CHECK(alpha == "0.5");
    CHECK(std::fabs(std::stod(gamma) - 0.9757468528646503) < 2e-7);
    CHECK(argmax == "8");
    CHECK(saturated == "false");

    CHECK(run("gamma --alpha 0.5 --alpha-grid 0.4:0.6:0.1").code == 2);
}

TEST_CASE("cli verify: property suites pass and report on stdout") {
    const RunResult r = run("verify --suite metric,monotone,four_point --n 10");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "suite metric"));
    CHECK(contains(r.out, "suite monotone"));
    CHECK(contains(r.out, "suite four_point"));
    CHECK(!contains(r.out, "FAIL"));

    const fs::path report = work_dir() / "verify.json";
    REQUIRE(run("verify --suite oracle,no_crossing --schedule const:0.5 --n 8 -o " +
                report.string())
                .code == 0);
    const auto j = nlohmann::json::parse(slurp(report));
    REQUIRE(j.contains("suites"));
    for (const auto& s : j["suites"]) {
        CHECK(s["pass"].get<bool>());
        CHECK(s["violation_count"].get<long long>() == 0);
    }

    CHECK(run("verify --suite bogus").code == 2);
    CHECK(run("verify --suite appendix_b --schedule const:0.3").code == 2);
}

TEST_CASE("cli tightmap: isometry verdict drives the exit code") {
    const RunResult r = run("tightmap --schedule const:0.5 --n 8 --mode exact");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "isometry holds"));

    const fs::path orbit = work_dir() / "orbit.csv";
    REQUIRE(run("tightmap --n 6 --mode exact -o " + orbit.string()).code == 0);
    const std::string csv = slurp(orbit);
    CHECK(contains(csv, "k,m,n,x_value"));
    CHECK(contains(csv, "\n0,0,1,0\n"));
}

TEST_CASE("cli simulate: JSON shape, exact cross-check, determinism") {
    const std::string args =
        "simulate --state 3,4 --kind C --schedule const:0.5 --samples 40000 --seed 11";
    const RunResult r = run(args);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["state"] == nlohmann::json::array({3, 4}));
    CHECK(j["kind"] == "C");
    CHECK(j["alpha"] == 0.5);
    CHECK(j["samples"] == 40000);
    CHECK(j["generator"] == "splitmix64");
    CHECK(j["exact"] == 0.2734375);  // 35/128
    CHECK(std::fabs(j["z_score"].get<double>()) <= 4.0);

    // key order is part of the interface
    const size_t p_state = r.out.find("\"state\"");
    const size_t p_kind = r.out.find("\"kind\"");
    const size_t p_est = r.out.find("\"estimate\"");
    const size_t p_exact = r.out.find("\"exact\"");
    const size_t p_z = r.out.find("\"z_score\"");
    CHECK(p_state < p_kind);
    CHECK(p_kind < p_est);
    CHECK(p_est < p_exact);
    CHECK(p_exact < p_z);

    CHECK(run(args).out == r.out);  // same seed, same bytes
    const RunResult other = run(
        "simulate --state 3,4 --kind C --schedule const:0.5 --samples 40000 --seed 12");
    REQUIRE(other.code == 0);
    CHECK(other.out != r.out);

    CHECK(run("simulate --state 3,4 --samples 0").code == 2);
    CHECK(run("simulate --state 4,3 --samples 100").code == 2);
    CHECK(run("simulate --state 3,4 --samples 100 --kind E").code == 2);
}

TEST_CASE("cli limit: diagnostics table") {
    const RunResult r = run("limit");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "n,theta,kappa_tilde,gap,gap_bound"));
    CHECK(contains(r.out, "\n100,"));
    CHECK(contains(r.out, "\n100000,"));
}
