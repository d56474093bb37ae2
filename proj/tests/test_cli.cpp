#include <doctest.h>

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fragile_bandits/io.hpp>

namespace fs = std::filesystem;
using fragile_bandits::Json;
using fragile_bandits::load_json;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fb_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string operator/(const std::string& s) const { return (path / s).string(); }
};

}  // namespace

TEST_CASE("gen sphere writes a valid instance with provenance") {
    TempDir dir;
    REQUIRE(run("gen sphere --d 3 --n 16 --seed 7 --out " + (dir / "g")) == 0);
    Json j = load_json(dir / "g/instance.json");
    CHECK(j["d"] == 3);
    CHECK(j["actions"].size() == 16);
    CHECK(j["provenance"]["generator"] == "sphere");
    CHECK(j["provenance"]["seed"] == 7);
    CHECK(j["provenance"]["config"]["n"] == 16);
}

TEST_CASE("gen rejects unknown families with exit 2") {
    CHECK(run("gen warp --d 3") == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("gen hard embeds the calibrated slope") {
    TempDir dir;
    REQUIRE(run("gen hard --d 30 --n 20 --lambda 0.5 --seed 11 --out " + (dir / "h")) == 0);
    Json j = load_json(dir / "h/instance.json");
    CHECK(j["beta"].get<double>() > 2.0);
    CHECK(j["provenance"]["config"]["beta_calibrated"] == j["beta"]);
    // infeasible packing request fails loudly
    CHECK(run("gen hard --d 5 --n 20 --lambda 0.5 --seed 11 --out " + (dir / "h2")) == 2);
}

TEST_CASE("gen nonmonotone_pair writes both instances") {
    TempDir dir;
    REQUIRE(run("gen nonmonotone_pair --n 8 --out " + (dir / "p")) == 0);
    CHECK(load_json(dir / "p/instance.easy.json")["actions"].size() == 16);
    CHECK(load_json(dir / "p/instance.hard.json")["actions"].size() == 8);
}

TEST_CASE("simulate is byte-identical when re-run from its embedded config") {
    TempDir dir;
    REQUIRE(run("gen sphere --d 2 --n 8 --seed 3 --out " + (dir / "g")) == 0);
    std::string inst = dir / "g/instance.json";
    REQUIRE(run("simulate --instance " + inst +
                " --horizon 60 --runs 3 --info-ratio-every 10 --seed 5 --out " +
                (dir / "a")) == 0);
    REQUIRE(run("simulate --config " + (dir / "a/summary.json") + " --out " + (dir / "b")) ==
            0);
    CHECK(slurp(dir.path / "a/trajectory.csv") == slurp(dir.path / "b/trajectory.csv"));
    CHECK(slurp(dir.path / "a/summary.json") == slurp(dir.path / "b/summary.json"));
    CHECK(slurp(dir.path / "a/info_ratio.csv") == slurp(dir.path / "b/info_ratio.csv"));
}

TEST_CASE("simulate emits info-ratio rows on the requested schedule") {
    TempDir dir;
    REQUIRE(run("gen sphere --d 2 --n 4 --seed 2 --out " + (dir / "g")) == 0);
    REQUIRE(run("simulate --instance " + (dir / "g/instance.json") +
                " --horizon 30 --runs 1 --info-ratio-every 10 --out " + (dir / "s")) == 0);
    std::ifstream in(dir / "s/info_ratio.csv");
    std::string line;
    std::getline(in, line);  // comment
    std::getline(in, line);  // header
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        size_t c1 = line.find(',');
        size_t c2 = line.find(',', c1 + 1);
        int t = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(t % 10 == 0);
    }
    CHECK(rows == 3);
}

TEST_CASE("simulate rejects a structurally invalid instance") {
    TempDir dir;
    Json j;
    j["d"] = 2;
    j["beta"] = 1.0;
    j["actions"] = {{2.0, 0.0}, {0.0, 1.0}};  // outside the unit ball
    j["parameters"] = {{0.9, 0.0}, {0.0, 0.9}};
    j["prior"] = "uniform";
    j["optimal_map"] = {0, 1};
    fragile_bandits::save_json(dir / "bad.json", j);
    CHECK(run("simulate --instance " + (dir / "bad.json") + " --out " + (dir / "s")) == 2);
    CHECK(run("simulate --instance " + (dir / "missing.json") + " --out " + (dir / "s")) ==
          2);
}

TEST_CASE("fragility reports the exact clique on a cone instance") {
    TempDir dir;
    REQUIRE(run("gen cone_iota0 --n 10 --out " + (dir / "g")) == 0);
    REQUIRE(run("fragility --instance " + (dir / "g/instance.json") + " --out " +
                (dir / "f")) == 0);
    Json j = load_json(dir / "f/fragility.json");
    CHECK(j["eta"] == 10);
    CHECK(j["exact"] == true);
    CHECK(j["witness"].size() == 10);
    CHECK(j["graph_edges"] == 45);
}

TEST_CASE("constants: empty grid still yields the header") {
    TempDir dir;
    REQUIRE(run("constants --beta 2 --lambda-min 0.9 --lambda-max 0.1 --out " +
                (dir / "c")) == 0);
    std::string text = slurp(dir.path / "c/constants.csv");
    CHECK(text.find("beta,lambda,z_star,w_mid,chi,xi,point_one_lambda\n") !=
          std::string::npos);
    std::istringstream in(text);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 2);  // comment + header only
}

TEST_CASE("bounds prints the three formulas") {
    TempDir dir;
    REQUIRE(run("bounds --d 2 --T 1000 --lambda 1 --eta 2 --beta 1 --delta 1 "
                "--gamma-bar 100 --format json --out " +
                (dir / "b")) == 0);
    Json j = load_json(dir / "b/bounds.json");
    CHECK(j["thm1"].get<double>() == doctest::Approx(4798.9568572767785));
    CHECK(j["thm2"].get<double>() == doctest::Approx(3393.3749364020923));
    CHECK(j["prop5"].get<double>() == doctest::Approx(2325.598385528938));
    CHECK(run("bounds --lambda 0 --out " + (dir / "b2")) == 2);
}

TEST_CASE("check exits 0 on green suites and 2 on a missing config") {
    TempDir dir;
    REQUIRE(run("check --suite capacity --capacity-attempts 1500 --out " + (dir / "k")) ==
            0);
    Json j = load_json(dir / "k/check_report.json");
    CHECK(j["green"] == true);
    CHECK(j["suites"].size() == 1);
    CHECK(run("check --config " + (dir / "nope.json") + " --out " + (dir / "k2")) == 2);
}

TEST_CASE("check re-run from its embedded config is byte-identical") {
    TempDir dir;
    REQUIRE(run("check --suite lemmas --cases 150 --seed 9 --out " + (dir / "a")) == 0);
    REQUIRE(run("check --config " + (dir / "a/check_report.json") + " --out " + (dir / "b")) ==
            0);
    CHECK(slurp(dir.path / "a/check_report.json") == slurp(dir.path / "b/check_report.json"));
}
