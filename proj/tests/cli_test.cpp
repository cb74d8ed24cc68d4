// end-to-end checks for the command line driver; the binary path arrives as
// the first non-flag argument (cmake passes the build location)
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string g_cli;
int g_counter = 0;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    namespace fs = std::filesystem;
    const auto base =
        fs::temp_directory_path() /
        ("malab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(g_counter++));
    const std::string so = base.string() + ".out";
    const std::string se = base.string() + ".err";
    const std::string cmd = g_cli + " " + args + " >" + so + " 2>" + se;
    const int rc = std::system(cmd.c_str());
    RunResult r;
    if (rc != -1 && WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
    r.out = slurp(so);
    r.err = slurp(se);
    fs::remove(so);
    fs::remove(se);
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) out.push_back(cell);
    return out;
}

std::string temp_config(const std::string& body) {
    namespace fs = std::filesystem;
    const auto path =
        fs::temp_directory_path() /
        ("malab_cfg_" + std::to_string(::getpid()) + "_" + std::to_string(g_counter++) +
         ".json");
    std::ofstream(path) << body;
    return path.string();
}

}  // namespace

TEST_CASE("verify writes a residual table and gates on it") {
    auto r = run_cli("verify --theorem 8.1 --theta 0.3 --samples 20");
    CHECK(r.code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 21);
    CHECK(rows[0] == "x0,x1,theta,det,w,raw,scale,normalized");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto cells = split_csv(rows[i]);
        REQUIRE(cells.size() == 8);
        CHECK(std::stod(cells.back()) <= 1e-7);
    }

    // an absurd tolerance flips only the exit code, not the table
    auto strict = run_cli("verify --theorem 8.1 --theta 0.3 --samples 20 --tol 1e-30");
    CHECK(strict.code == 1);
    CHECK(strict.out == r.out);

    auto bad = run_cli("verify --theorem 8.1 --theta 0.6");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("theorem 8.1") != std::string::npos);
    CHECK(bad.err.find("(0, 0.5)") != std::string::npos);
}

TEST_CASE("scan walks the open grid or the fixed-exponent branches") {
    auto r = run_cli(
        "scan --theorem 10.1 --N 4 --theta-min 0.5 --theta-max 0.75 --theta-step 0.01 "
        "--samples 10");
    CHECK(r.code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 25);
    CHECK(rows[0] == "theorem,N,theta,param,points,max_normalized");
    CHECK(split_csv(rows[1])[2] == "0.51000000000000001");
    CHECK(split_csv(rows.back())[2] == "0.73999999999999999");

    auto branches = run_cli("scan --theorem 9.1 --samples 10");
    CHECK(branches.code == 0);
    auto brows = lines_of(branches.out);
    REQUIRE(brows.size() == 3);
    CHECK(split_csv(brows[1])[0] == "9.1-quad");
    CHECK(split_csv(brows[2])[0] == "9.1-high");

    auto bad = run_cli("scan --theorem 11.9");
    CHECK(bad.code == 2);
}

TEST_CASE("inequality emits one row per corpus check") {
    auto r = run_cli("inequality lemma42");
    CHECK(r.code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "check,family,grid,lhs,rhs,ratio");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto cells = split_csv(rows[i]);
        REQUIRE(cells.size() == 6);
        CHECK(cells[0] == "radius-upper");
        const double ratio = std::stod(cells.back());
        CHECK(std::isfinite(ratio));
        CHECK(ratio > 0.0);
        CHECK(ratio < 1.0);
    }

    auto bad = run_cli("inequality frobnicate");
    CHECK(bad.code == 2);
}

TEST_CASE("counterexample power reports a growing quotient and converging mass") {
    auto r = run_cli("counterexample power --levels 4");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["family"] == "power");
    CHECK(j["beta"].get<double>() == doctest::Approx(1.1));
    CHECK(j["monotone"].get<bool>());
    CHECK(j["mass_converging"].get<bool>());
    auto sups = j["gradient_quotient"]["sups"].get<std::vector<double>>();
    REQUIRE(sups.size() == 4);
    for (std::size_t i = 1; i < sups.size(); ++i) CHECK(sups[i] > sups[i - 1]);
}

TEST_CASE("solve-alpha reports the root and its round trip") {
    auto r = run_cli("solve-alpha full --theta 0.6 --N 3");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    auto alpha = j["alpha"].get<std::vector<double>>();
    REQUIRE(alpha.size() == 3);
    for (double a : alpha) CHECK(a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["theta_roundtrip"].get<double>() ==
          doctest::Approx(0.6).epsilon(1e-10));
    CHECK(j["final_residual"].get<double>() <= 1e-10);
    CHECK_FALSE(j["method"].get<std::string>().empty());

    auto bad = run_cli("solve-alpha full --theta 0.8 --N 3");
    CHECK(bad.code == 2);
}

TEST_CASE("measure answers match the dilation powers and obey config overrides") {
    auto dbl = run_cli("measure doubling --family quadratic --N 3 --sigma 0.5");
    CHECK(dbl.code == 0);
    auto rows = lines_of(dbl.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "family,op,param,value");
    CHECK(std::stod(split_csv(rows[1])[3]) == doctest::Approx(8.0).epsilon(1e-6));

    const std::string cfg =
        temp_config("{\"family\": \"quadratic\", \"N\": 3, \"sigma\": 0.5}");
    auto from_cfg = run_cli("measure doubling --config " + cfg);
    CHECK(from_cfg.code == 0);
    CHECK(from_cfg.out == dbl.out);

    // explicit flags win over the config file
    auto overridden = run_cli("measure doubling --config " + cfg + " --sigma 0.7");
    CHECK(overridden.code == 0);
    auto orow = split_csv(lines_of(overridden.out)[1]);
    CHECK(std::stod(orow[3]) ==
          doctest::Approx(std::pow(0.7, -3.0)).epsilon(1e-6));
    std::filesystem::remove(cfg);

    auto hlv = run_cli("measure halving --family quadratic --N 2 --z 0.5");
    CHECK(hlv.code == 0);
    auto hrow = split_csv(lines_of(hlv.out)[1]);
    CHECK(std::stod(hrow[3]) == doctest::Approx(0.25).epsilon(1e-12));

    auto john = run_cli("measure john --family power:4 --N 2 --t 1");
    CHECK(john.code == 0);
    auto jj = nlohmann::json::parse(john.out);
    CHECK(jj["rho"].get<double>() >= 1.0);
    CHECK(std::isfinite(jj["rho"].get<double>()));
    CHECK(jj["center"].get<std::vector<double>>().size() == 2);
}

TEST_CASE("identical runs are byte identical regardless of worker count") {
    auto a = run_cli("inequality lemma42 --workers 1");
    auto b = run_cli("inequality lemma42 --workers 3");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(a.out == b.out);

    auto v1 = run_cli("verify --theorem 8.2 --N 3 --theta 0.225 --samples 40 --workers 1");
    auto v3 = run_cli("verify --theorem 8.2 --N 3 --theta 0.225 --samples 40 --workers 3");
    CHECK(v1.code == 0);
    CHECK(v1.out == v3.out);
}

TEST_CASE("bad invocations exit with the usage code") {
    CHECK(run_cli("frobnicate all").code == 2);
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("measure doubling --family nope").code == 2);
    CHECK(run_cli("verify --theorem 8.1 --N notanumber").code == 2);
    CHECK(run_cli("measure warble").code == 2);
}

int main(int argc, char** argv) {
    std::vector<char*> pass;
    pass.push_back(argv[0]);
    for (int i = 1; i < argc; ++i) {
        if (g_cli.empty() && argv[i][0] != '-')
            g_cli = argv[i];
        else
            pass.push_back(argv[i]);
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: cli_test <driver binary> [test options]\n");
        return 2;
    }
    doctest::Context ctx(static_cast<int>(pass.size()), pass.data());
    return ctx.run();
}
