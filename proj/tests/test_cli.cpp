#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

// Process-level checks of the command line tool. The binary path comes from
// the build system.
#ifndef GDOI_CLI_PATH
#error "GDOI_CLI_PATH must be defined"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "gdoi_cli_tests";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const std::string cmd =
        std::string(GDOI_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "gdoi_cli_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSpecJ23 = R"({"blocks":[{"re":3,"im":0,"size":2}]})";
const char* kSpecDiag = R"({"blocks":[{"re":1,"im":0,"size":1},{"re":-2,"im":0,"size":1}]})";
const char* kEnsemble =
    R"({"block_sizes":[2,1,1],"eigenvalues":{"kind":"uniform_disk","r_outer":1.0},)"
    R"("basis":{"kind":"random","cond_cap":1.0},"pair_separation":0.1})";

}  // namespace

TEST_CASE("synth writes the expected files deterministically") {
    const auto spec = write_file("spec.json", kSpecJ23);
    const fs::path dir = fs::temp_directory_path() / "gdoi_cli_tests";
    const auto r1 = run_cli("synth --spec " + spec.string() + " --out " + (dir / "a").string());
    REQUIRE(r1.exit_code == 0);
    const auto matrix = nlohmann::json::parse(slurp(dir / "a" / "matrix.json"));
    CHECK(matrix["n"] == 2);
    CHECK(matrix["entries"][0][0][0] == 3.0);
    CHECK(matrix["entries"][0][1][0] == 1.0);
    CHECK(matrix["entries"][1][0][0] == 0.0);

    // Identical inputs (including the output path) give byte-identical
    // reports and files.
    const auto r2 = run_cli("synth --spec " + spec.string() + " --out " + (dir / "a").string());
    REQUIRE(r2.exit_code == 0);
    CHECK(r1.stdout_text == r2.stdout_text);
    const auto r3 = run_cli("synth --spec " + spec.string() + " --out " + (dir / "b").string());
    REQUIRE(r3.exit_code == 0);
    CHECK(slurp(dir / "a" / "matrix.json") == slurp(dir / "b" / "matrix.json"));
    CHECK(slurp(dir / "a" / "decomposition.json") == slurp(dir / "b" / "decomposition.json"));
}

TEST_CASE("synth exit codes") {
    const auto bad = write_file("bad.json", "{\"blocks\": 3}");
    const fs::path dir = fs::temp_directory_path() / "gdoi_cli_tests";
    CHECK(run_cli("synth --spec " + bad.string() + " --out " + (dir / "x").string()).exit_code ==
          2);

    // A conditioning cap below 1 cannot be met by any basis.
    const auto spec = write_file("spec2.json", kSpecDiag);
    CHECK(run_cli("synth --spec " + spec.string() + " --basis random --cond-cap 0.5 --out " +
                  (dir / "y").string())
              .exit_code == 3);
}

TEST_CASE("eval computes a matrix function through decomposition") {
    const auto spec = write_file("spec.json", kSpecJ23);
    const fs::path dir = fs::temp_directory_path() / "gdoi_cli_tests";
    REQUIRE(run_cli("synth --spec " + spec.string() + " --out " + (dir / "m").string())
                .exit_code == 0);
    const auto r = run_cli("eval --func power:2 --matrix " + (dir / "m" / "matrix.json").string());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["result"]["entries"][0][0][0] == doctest::Approx(9.0));
    CHECK(j["result"]["entries"][0][1][0] == doctest::Approx(6.0));
}

TEST_CASE("eval reports ambiguous clustering as a numerical failure") {
    const auto close = write_file(
        "close.json",
        R"({"n":2,"entries":[[[1,0],[0,0]],[[0,0],[1.000003,0]]]})");
    CHECK(run_cli("eval --func identity --matrix " + close.string() + " --group-tol 1e-6")
              .exit_code == 3);
}

TEST_CASE("eval computes a double operator integral from matrices") {
    const fs::path dir = fs::temp_directory_path() / "gdoi_cli_tests";
    write_file("x1.json", R"({"n":2,"entries":[[[0,0],[1,0]],[[0,0],[0,0]]]})");
    write_file("x2.json", R"({"n":2,"entries":[[[2,0],[0,0]],[[0,0],[2.2,0]]]})");
    write_file("yy.json", R"({"n":2,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]})");
    const auto r = run_cli("eval --beta poly2:[[0,0],[0,1]] --matrix " +
                           (dir / "x1.json").string() + " --matrix2 " +
                           (dir / "x2.json").string() + " --y " + (dir / "yy.json").string());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    // X1 = J2(0) against X2 = diag(2, 2.2): only the z1-derivative term
    // survives and N1 P2 picks out the second eigenvalue, so T = 2.2 N1.
    CHECK(j["result"]["entries"][0][1][0].get<double>() == doctest::Approx(2.2).epsilon(1e-9));
    CHECK(j["result"]["entries"][0][0][0].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("verify subcommand") {
    CHECK(run_cli("verify --suite unknown").exit_code == 2);
    const auto ok = run_cli("verify --suite perturbation --count 15 --seed 7");
    CHECK(ok.exit_code == 0);
    const auto j = nlohmann::json::parse(ok.stdout_text);
    CHECK(j["pass"] == true);
    CHECK(j["count"] == 15);
    CHECK(j["max_residual"].get<double>() <= 1e-8);

    // An impossible tolerance exercises the failure exit path.
    CHECK(run_cli("verify --suite perturbation --count 5 --seed 7 --tol 1e-30").exit_code == 1);
}

TEST_CASE("verify reports are byte-identical under one seed and write to --out") {
    const auto r1 = run_cli("verify --suite telescope --count 8 --seed 3");
    const auto r2 = run_cli("verify --suite telescope --count 8 --seed 3");
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.stdout_text == r2.stdout_text);

    const fs::path dir = fs::temp_directory_path() / "gdoi_cli_tests";
    const auto r3 = run_cli("verify --suite telescope --count 8 --seed 3 --out " +
                            (dir / "verify.json").string());
    REQUIRE(r3.exit_code == 0);
    CHECK(slurp(dir / "verify.json") == r1.stdout_text);
}

TEST_CASE("bounds subcommand") {
    const auto s1 = write_file("b1.json", kSpecJ23);
    const auto s2 = write_file("b2.json", kSpecDiag);
    const auto r = run_cli("bounds --func poly:[0,1,0.5] --spec1 " + s1.string() + " --spec2 " +
                           s2.string());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["lipschitz_upper"]["satisfied"] == true);
    CHECK(j["lipschitz_lower"]["satisfied"] == true);
    CHECK(j["lipschitz_upper"]["bound"].get<double>() >=
          j["lipschitz_upper"]["actual"].get<double>() - 1e-10);
}

TEST_CASE("tail subcommand produces byte-identical reports under one seed") {
    const auto ens = write_file("ens.json", kEnsemble);
    const auto r1 =
        run_cli("tail --ensemble " + ens.string() + " --func power:2 --trials 400 --seed 42 "
                "--format csv");
    const auto r2 =
        run_cli("tail --ensemble " + ens.string() + " --func power:2 --trials 400 --seed 42 "
                "--format csv");
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.stdout_text == r2.stdout_text);
    CHECK(r1.stdout_text.rfind("delta,empirical_freq,markov_bound,margin\n", 0) == 0);

    const auto rj = run_cli("tail --ensemble " + ens.string() +
                            " --func identity --trials 300 --seed 5 --format json");
    REQUIRE(rj.exit_code == 0);
    const auto j = nlohmann::json::parse(rj.stdout_text);
    CHECK(j["all_satisfied"] == true);
    CHECK(j["b_terms"]["b1"] == doctest::Approx(1.0));

    CHECK(run_cli("tail --ensemble missing.json --func identity").exit_code == 2);
}
