#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "cohom/cli.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {
struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int c = cohom::cli::run(args, o, e);
    return {c, o.str(), e.str()};
}

fs::path temp_path(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "cohomlab_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<double>> parse_csv(const std::string& s, std::vector<std::string>& header) {
    std::istringstream in(s);
    std::string line;
    std::getline(in, line);
    header.clear();
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) header.push_back(c);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) row.push_back(std::stod(c));
        rows.push_back(row);
    }
    return rows;
}
}  // namespace

TEST_CASE("classify a constant family-3 job") {
    const auto job = temp_path("hopf.json");
    write(job, R"({"params": {"m": 2, "p": 2, "n": 1, "family": 3},
                   "profile": {"kind": "closed_form", "f": "1", "h": "1", "domain": ["-pi", "pi"]}})");
    const Run r = run({"classify", "--job", job.string()});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["vaisman"] == true);
    CHECK(j["strictly_lck"] == true);
    CHECK(j["kahler"] == false);
    CHECK(j["job"]["params"]["family"] == 3);
    CHECK(j["job"]["grid"]["count"] == 401);
}

TEST_CASE("solve csc-m4 from flags") {
    const Run r = run({"solve", "csc-m4", "--m", "3", "--n", "1", "--p", "3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["k_tilde"].get<double>() == doctest::Approx(1.33839167533677651).epsilon(1e-12));
    CHECK(j["c"].get<double>() > 0.0);
    CHECK(j["boundary"]["pass"] == true);
    CHECK(j["residuals"]["csc_residual"].get<double>() < 1e-6);
    CHECK(j["job"]["params"]["family"] == 4);
}

TEST_CASE("eval writes the tautological CSV") {
    const Run r = run({"eval", "--builtin", "tautological", "--k", "1", "--grid", "0", "5", "101"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find('\r') == std::string::npos);
    std::vector<std::string> header;
    const auto rows = parse_csv(r.out, header);
    CHECK(header == cohom::cli::csv_columns());
    REQUIRE(header.size() == 17);
    REQUIRE(rows.size() == 101);
    const auto col = std::find(header.begin(), header.end(), "scal_ch") - header.begin();
    double e = 0.0;
    for (const auto& row : rows) {
        const double x = row[0];
        e = std::max(e, std::fabs(row[col] - 8.0 * (2 * x * x + 1) / ((x * x + 1) * (x * x + 1))));
    }
    CHECK(e < 1e-8);
    const auto out = temp_path("taut.csv");
    const Run w = run({"eval", "--builtin", "tautological", "--k", "1", "--grid", "0", "5", "101", "--out", out.string()});
    REQUIRE(w.code == 0);
    CHECK(slurp(out) == r.out);
    CHECK(json::parse(w.out)["rows"] == 101);
}

TEST_CASE("exit codes") {
    Run r = run({"eval", "--builtin", "nope"});
    CHECK(r.code == 2);
    const json e = json::parse(r.err);
    CHECK(e["exit_code"] == 2);
    CHECK(e["error"] == "validation");
    CHECK(r.err.find('\n') == r.err.size() - 1);
    CHECK(run({"eval", "--f", "1 + * 2", "--h", "1"}).code == 2);
    CHECK(run({"solve", "csc-m2", "--m", "2", "--n", "1", "--p", "2", "--c", "40"}).code == 3);
    CHECK(run({"classify", "--job", "/nonexistent/job.json"}).code == 4);
    CHECK(run({"eval", "--builtin", "fubini_study", "--out", "/nonexistent/dir/x.csv"}).code == 4);
    const auto bad = temp_path("bad.json");
    write(bad, R"({"params": {"m": 2}, "bogus": 1})");
    CHECK(run({"classify", "--job", bad.string()}).code == 2);
    write(bad, "{ not json");
    CHECK(run({"classify", "--job", bad.string()}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("catalog report") {
    const Run r = run({"catalog", "--max-param", "3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["table"].size() == 6);
    for (const auto& row : j["table"])
        for (const char* k : {"label", "m", "p", "conditions"}) CHECK(row.contains(k));
    bool e6 = false;
    for (const auto& s : j["spaces"])
        if (s["m"] == 17 && s["p"] == 12) e6 = true;
    CHECK(e6);
    CHECK(j["job"]["options"]["max_param"] == 3);
}

TEST_CASE("flags override job fields") {
    const auto job = temp_path("over.json");
    write(job, R"({"command": "solve sce-m2", "params": {"m": 2, "p": 2, "n": 1}})");
    const Run r = run({"solve", "sce-m2", "--job", job.string(), "--m", "3", "--p", "3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["job"]["params"]["m"] == 3);
    CHECK(j["residuals"]["sce_residual"].get<double>() < 1e-6);
    CHECK(run({"classify", "--job", job.string()}).code == 2);
}

TEST_CASE("probe with a negative grid bound") {
    const Run r = run({"probe", "ke-m4", "--a-grid", "0.5", "2", "4", "--E-grid", "-10", "30", "5"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["job"]["options"]["E_grid"][0] == -10.0);
    CHECK(j["min_defect"].get<double>() > 1e-2);
}

TEST_CASE("the installed binary") {
    const auto out = temp_path("bin.txt");
    const std::string cmd = std::string(COHOMLAB_PATH) + " solve csc-m4 --m 3 --n 1 --p 3 > " + out.string() + " 2>/dev/null";
    const int st = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(st));
    CHECK(WEXITSTATUS(st) == 0);
    CHECK(json::parse(slurp(out))["c"].get<double>() > 0.0);
    const std::string bad = std::string(COHOMLAB_PATH) + " solve csc-m4 --m 3 --n 1 --p 3 --family 2 > /dev/null 2>&1";
    const int st2 = std::system(bad.c_str());
    CHECK(WEXITSTATUS(st2) == 2);
}
