#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("beliefcoop_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

int run(const std::string& args, const fs::path& out) {
    const std::string cmd = std::string(BELIEFCOOP_CLI_PATH) + " " + args + " --out '" + out.string() + "' >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) row.push_back(field);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

bool same_tree(const fs::path& a, const fs::path& b) {
    std::size_t count = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const fs::path other = b / fs::relative(entry.path(), a);
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) return false;
        ++count;
    }
    return count > 0;
}

}  // namespace

TEST_CASE("common at the three-equilibrium belief") {
    Scratch s;
    REQUIRE(run("common --b 3 --m 50 --ell-bar 8 --pi 0.05", s.dir) == 0);
    auto rows = read_csv(s.dir / "common.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"pi", "regime", "ell_low", "ell_high", "ell_corner"});
    CHECK(rows[1][1] == "triple");
    // Roots of l^2 - 10 l + 8 * 48 * 0.05 / 0.95 = 0 on uniform[0, 8].
    const double k = 8.0 * 48.0 * 0.05 / 0.95;
    CHECK(std::stod(rows[1][2]) == doctest::Approx(5.0 - std::sqrt(25.0 - k)).epsilon(1e-10));
    CHECK(std::stod(rows[1][3]) == doctest::Approx(5.0 + std::sqrt(25.0 - k)).epsilon(1e-10));
    CHECK(std::stod(rows[1][4]) == 8.0);
    CHECK(fs::exists(s.dir / "common.manifest.json"));
}

TEST_CASE("common at zero belief") {
    Scratch s;
    REQUIRE(run("common --b 2 --m 8 --pi 0", s.dir) == 0);
    auto rows = read_csv(s.dir / "common.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][1] == "unique-interior");
    CHECK(rows[1][2] == "0");
    CHECK(rows[1][3].empty());
    CHECK(rows[1][4].empty());
}

TEST_CASE("common grid is nondecreasing up to (b-1)/m") {
    Scratch s;
    REQUIRE(run("common --b 2 --m 8 --pi-grid 200", s.dir) == 0);
    auto rows = read_csv(s.dir / "common.csv");
    REQUIRE(rows.size() == 201);
    double prev = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double pi = std::stod(rows[i][0]);
        if (pi > 1.0 / 8.0) break;
        const double low = std::stod(rows[i][2]);
        CHECK(low >= prev);
        prev = low;
    }
}

TEST_CASE("select keeps one equilibrium per row") {
    Scratch s;
    REQUIRE(run("common --b 3 --m 50 --ell-bar 8 --pi 0.05 --select highest", s.dir) == 0);
    auto rows = read_csv(s.dir / "common.csv");
    CHECK(rows[1][2].empty());
    CHECK(rows[1][3].empty());
    CHECK(rows[1][4] == "8");
}

TEST_CASE("CSV headers of every command") {
    Scratch s;
    REQUIRE(run("diverse --grid-n 201", s.dir) == 0);
    CHECK(read_csv(s.dir / "diverse.csv")[0] == std::vector<std::string>{"ell", "pi_star_d"});
    auto summary = nlohmann::json::parse(slurp(s.dir / "diverse.json"));
    for (const char* key : {"alpha", "beta", "iterations", "residual", "contraction_gamma", "p_coop"}) {
        CHECK(summary.contains(key));
    }
    CHECK(summary["contraction_gamma"].get<double>() == doctest::Approx(7.0 / 64.0));

    REQUIRE(run("compare --b 3 --m 20", s.dir) == 0);
    CHECK(read_csv(s.dir / "compare.csv")[0] == std::vector<std::string>{"pi", "ell_star_c", "ell_star_d", "diff"});
    auto cmp = nlohmann::json::parse(slurp(s.dir / "compare.json"));
    CHECK(cmp["pi_dagger"].get<double>() == doctest::Approx(0.095474).epsilon(1e-4));
    CHECK(cmp["d_pi_dagger_db"].get<double>() > 0.0);
    CHECK(cmp["d_pi_dagger_dm"].get<double>() < 0.0);

    REQUIRE(run("exante --b 3 --m 20", s.dir) == 0);
    auto ex = read_csv(s.dir / "exante.csv");
    REQUIRE(ex.size() == 3);
    CHECK(std::stod(ex[1][3]) == doctest::Approx(std::stod(ex[2][3])).epsilon(1e-8));
    CHECK(std::stod(ex[1][4]) == doctest::Approx(std::stod(ex[2][4])).epsilon(1e-8));

    REQUIRE(run("exante --b-range 2,6 --m-range 2,60 --cells 4", s.dir) == 0);
    auto grid = read_csv(s.dir / "exante.csv");
    CHECK(grid[0] == std::vector<std::string>{"b", "m", "p_c", "p_d", "diverse_wins"});
    CHECK(grid.size() == 17);

    REQUIRE(run("asymmetric --pi1 0.02 --pi2 0.06", s.dir) == 0);
    auto asym = read_csv(s.dir / "asymmetric.csv");
    CHECK(asym[0] == std::vector<std::string>{"pi1", "pi2", "ell1_hat", "ell2_hat", "d_ell1_d_pi2"});
    REQUIRE(asym.size() == 2);
    CHECK(std::stod(asym[1][4]) < 0.0);

    REQUIRE(run("group --n 1 --pi-grid 11", s.dir) == 0);
    auto grp = read_csv(s.dir / "group.csv");
    CHECK(grp[0] == std::vector<std::string>{"n", "pi", "ell_n_common", "ell_n_diverse"});
    CHECK(grp.size() == 12);

    REQUIRE(run("simulate --n-samples 20000 --seed 7", s.dir) == 0);
    auto rep = nlohmann::json::parse(slurp(s.dir / "simulate.json"));
    CHECK(rep["n_samples"].get<int>() == 20000);
    CHECK(std::abs(rep["coop_rate_strategic"].get<double>() - rep["analytic_prediction"].get<double>()) <=
          3.0 * rep["half_width"].get<double>());
}

TEST_CASE("exit codes") {
    Scratch s;
    CHECK(run("common --b 0.5 --m 8", s.dir) == 2);
    CHECK(run("common --b 3 --m 1", s.dir) == 2);
    CHECK(run("common --no-such-flag", s.dir) == 2);
    CHECK(run("group --variant sideways", s.dir) == 2);
    CHECK(run("diverse --max-iter 1", s.dir) == 3);
    std::ofstream(s.dir / "blocker") << "x";
    CHECK(run("common --pi 0.01", s.dir / "blocker") == 4);
}

TEST_CASE("output directory from the environment") {
    Scratch s;
    const fs::path env_dir = s.dir / "from_env";
    const std::string cmd = "BELIEFCOOP_OUT_DIR='" + env_dir.string() + "' " + BELIEFCOOP_CLI_PATH +
                            " common --pi 0.01 >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(env_dir / "common.csv"));
}

TEST_CASE("replaying a manifest reproduces every byte") {
    Scratch s;
    REQUIRE(run("simulate --scenario diverse --b 2 --m 8 --n-samples 5000 --seed 11", s.dir / "a") == 0);
    REQUIRE(run("replay --manifest '" + (s.dir / "a" / "simulate.manifest.json").string() + "'", s.dir / "b") == 0);
    CHECK(same_tree(s.dir / "a", s.dir / "b"));

    REQUIRE(run("reproduce-all --n-samples 2000", s.dir / "all") == 0);
    REQUIRE(run("replay --manifest '" + (s.dir / "all" / "reproduce-all.manifest.json").string() + "'",
                s.dir / "again") == 0);
    CHECK(same_tree(s.dir / "all", s.dir / "again"));
    CHECK(fs::exists(s.dir / "all" / "exante_region" / "exante.csv"));
}
