#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using speccode::cli::json;
using speccode::cli::RunOptions;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "speccode_cli_test" / name;
    fs::remove_all(p);
    return p;
}

int run(const std::string& command, const std::string& config, const fs::path& out, std::optional<std::uint64_t> seed = 7) {
    std::ostringstream err;
    return speccode::cli::run({command, json::parse(config), out, seed}, err);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream s(line);
        std::string cell;
        while (std::getline(s, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

const char* kThreeQubit = R"({"kind": "stabilizer", "n": 3, "generators": ["ZZI", "IZZ"]})";

} // namespace

TEST_CASE("code command reports the three-qubit code") {
    const fs::path out = scratch("code");
    REQUIRE(run("code", kThreeQubit, out) == 0);
    const json r = read_json(out / "report.json");
    CHECK(r["ker_dim"] == 2);
    CHECK(r["distance"] == 1.0);
    CHECK(r["spectrum"]["levels"] == json::array({0.0, 2.0, 4.0}));
    CHECK(r["spectrum"]["multiplicities"] == json::array({2, 4, 2}));
    CHECK(r["seed"] == 7);
    CHECK(slurp(out / "spectrum.csv") == "level,multiplicity\n0,2\n2,4\n4,2\n");
}

TEST_CASE("code command on the other kinds") {
    const fs::path out = scratch("kinds");
    REQUIRE(run("code", R"({"kind": "classical", "n": 7, "generators": ["1101000", "0110100", "0011010", "0001101"]})", out / "h") == 0);
    CHECK(read_json(out / "h" / "report.json")["distance"] == 3.0);
    REQUIRE(run("code", R"({"kind": "gkp", "M": 8})", out / "g") == 0);
    CHECK(read_json(out / "g" / "report.json")["distance"] == 1.0);
    REQUIRE(run("code", R"({"kind": "toric", "Lx": 2, "Ly": 2, "tol": {"scalar": 1e-8}})", out / "t") == 0);
    CHECK(read_json(out / "t" / "report.json")["ker_dim"] == 4);
}

TEST_CASE("config errors exit with 2") {
    const fs::path out = scratch("bad");
    CHECK(run("code", R"({"kind": "gkp", "M": 8, "extra": 1})", out) == 2);
    CHECK(run("code", R"({"kind": "gkp"})", out) == 2);
    CHECK(run("code", R"({"kind": "gkp", "M": "eight"})", out) == 2);
    CHECK(run("code", R"({"kind": "surface"})", out) == 2);
    CHECK(run("code", R"({"kind": "gkp", "M": 8, "tol": {"loose": 1}})", out) == 2);
    CHECK(run("code", R"([1, 2])", out) == 2);
    CHECK(run("threshold", R"({"code": {"kind": "stabilizer", "generators": ["ZZI", "IZZ"]},
                               "noise": {"kind": "linear", "errors": ["XII"]}, "theta": [0.01]})", out) == 2);
    CHECK(run("threshold", R"({"code": {"kind": "stabilizer", "generators": ["ZZI", "IZZ"]},
                               "noise": {"kind": "linear", "errors": ["XI"]}, "theta": [0.01, 0.02, 0.03, 0.04]})", out) == 2);
    CHECK(run("bt", R"({"p": [8, 16]})", out) == 2);
    CHECK(run("bt", R"({"p": [8, 16, 32], "f": "w"})", out) == 2);
    CHECK(run("distance", R"({"group": {"kind": "bit_vectors", "n": 3}, "weight": "manhattan"})", out) == 2);
}

TEST_CASE("constructor rejections exit with 3") {
    const fs::path out = scratch("domain");
    CHECK(run("code", R"({"kind": "gkp", "M": 5})", out) == 3);
    CHECK(run("code", R"({"kind": "stabilizer", "generators": ["XI", "ZI"]})", out) == 3);
    CHECK(run("code", R"({"kind": "classical", "generators": ["110", "011", "101"]})", out) == 3);
    CHECK(run("threshold", R"({"code": {"kind": "stabilizer", "generators": ["ZZI", "IZZ"]},
                               "noise": {"kind": "linear", "errors": ["XII"]}, "theta": [0.01, 0.02, 0.03, 0.04],
                               "decoder": "petz_expectation"})", out) == 3);
}

TEST_CASE("threshold command") {
    const fs::path out = scratch("threshold");
    REQUIRE(run("threshold", R"({"code": {"kind": "stabilizer", "generators": ["ZZI", "IZZ"]},
                                 "noise": {"kind": "linear", "errors": ["XII", "IXI", "IIX"]},
                                 "theta": [0.01, 0.02, 0.05, 0.1], "decoder": "petz"})", out) == 0);
    const auto rows = read_csv(out / "sweep.csv");
    CHECK(rows.front() == std::vector<std::string>{"theta", "T", "T_expansion", "P_leak", "Fe"});
    CHECK(rows.size() == 5);
    const json fit = read_json(out / "fit.json");
    CHECK(fit["k"].get<double>() <= 1e-3);
    CHECK(fit["expansion"]["certified"] == true);

    const fs::path poor = scratch("threshold_poor");
    REQUIRE(run("threshold", R"({"code": {"kind": "stabilizer", "generators": ["ZZI", "IZZ"]},
                                 "noise": {"kind": "linear", "errors": ["XII"]},
                                 "theta": [0.001, 0.002, 0.005, 0.01], "decoder": "poor"})", poor) == 0);
    const json pf = read_json(poor / "fit.json");
    CHECK(pf["k"].get<double>() == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(pf["expansion"]["vanishing"] == true);
}

TEST_CASE("fluctuation command: gap column is 2 + lambda") {
    const fs::path out = scratch("fluctuation");
    REQUIRE(run("fluctuation", R"({"code": {"kind": "stabilizer", "generators": ["ZZI", "IZZ"]}, "error": "XII",
                                   "theta": 0.01, "lambda": [0, 1, 2, 4]})", out) == 0);
    const auto rows = read_csv(out / "sweep.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"lambda", "gap", "comm_norm", "bound", "bound_sq_times_theta", "leak_literal"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) == doctest::Approx(2.0 + std::stod(rows[i][0])));
}

TEST_CASE("bt command: delta1 roughly halves per doubling") {
    const fs::path out = scratch("bt");
    REQUIRE(run("bt", R"({"p": [8, 16, 32], "f": "z", "g": "z"})", out) == 0);
    const auto rows = read_csv(out / "defects.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"p", "delta1", "delta2", "delta3", "delta4", "kl_defect"});
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double ratio = std::stod(rows[i][1]) / std::stod(rows[i - 1][1]);
        CHECK(ratio >= 0.4);
        CHECK(ratio <= 0.65);
    }
}

TEST_CASE("distance command on the Hamming cube") {
    const fs::path out = scratch("distance");
    REQUIRE(run("distance", R"({"group": {"kind": "bit_vectors", "n": 3}, "method": "both", "iterations": 600})", out) == 0);
    const auto rows = read_csv(out / "distances.csv");
    REQUIRE(rows.size() == 29);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][3]) == std::stod(rows[i][2]));
        CHECK(std::stod(rows[i][4]) == doctest::Approx(std::stod(rows[i][2])).epsilon(1e-4));
    }
    CHECK(run("distance", R"({"group": {"kind": "torus", "M": 8}, "method": "general"})", scratch("big")) == 3);
}

TEST_CASE("same seed gives byte-identical CSV") {
    const std::string cfg = R"({"group": {"kind": "torus", "M": 3}, "method": "both", "iterations": 300})";
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(run("distance", cfg, a, 11) == 0);
    REQUIRE(run("distance", cfg, b, 11) == 0);
    CHECK(slurp(a / "distances.csv") == slurp(b / "distances.csv"));
    CHECK_FALSE(slurp(a / "distances.csv").empty());
}
