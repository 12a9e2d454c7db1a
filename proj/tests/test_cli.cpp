#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* b = std::getenv("SPIN_ENT_BIN");
    REQUIRE(b != nullptr);
    return b;
}

int run(const std::string& args) {
    int rc = std::system((bin() + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / "spin_ent_cli_test";
    fs::create_directories(d);
    return d;
}

void write(const fs::path& p, const std::string& s) {
    std::ofstream f(p);
    f << s;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("sweep writes the documented CSV") {
    fs::path d = scratch();
    write(d / "sweep.json", R"({
        "lattice": {"kind": "chain", "length": 8},
        "model": {"delta_y": 0.25, "delta_z": 1.0},
        "grid": {"start": 1.0, "stop": 2.2, "step": 0.1},
        "output": {"dir": ")" + (d / "out").string() + R"("}
    })");
    REQUIRE(run("sweep --config " + (d / "sweep.json").string()) == 0);

    std::string csv = slurp(d / "out" / "rows.csv");
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    REQUIRE(header ==
            "h,energy,gap,mz,mx_lr,tau1_sym,tau1_broken,tau2,ratio,ckw,xi,"
            "C1_r1,C2_r1,C_r1,C1_r2,C2_r2,C_r2,C1_r3,C2_r3,C_r3,C1_r4,C2_r4,C_r4");
    int rows = 0;
    for (std::string line; std::getline(is, line);)
        if (!line.empty()) ++rows;
    REQUIRE(rows == 13);

    REQUIRE(!fs::exists(d / "out" / "sweep.svg"));  // emit_plots off
    REQUIRE(fs::exists(d / "out" / "report.json"));
}

TEST_CASE("sweep can emit a plot") {
    fs::path d = scratch();
    write(d / "plot.json", R"({
        "lattice": {"kind": "chain", "length": 8},
        "model": {"delta_y": 0.25, "delta_z": 1.0},
        "grid": {"start": 1.0, "stop": 2.0, "step": 0.25},
        "output": {"dir": ")" + (d / "plot_out").string() + R"(", "emit_plots": true}
    })");
    REQUIRE(run("sweep --config " + (d / "plot.json").string()) == 0);
    std::string svg = slurp(d / "plot_out" / "sweep.svg");
    REQUIRE(svg.find("<svg") != std::string::npos);
    REQUIRE(svg.find("polyline") != std::string::npos);
}

TEST_CASE("config errors exit with code 2") {
    fs::path d = scratch();
    write(d / "bad_step.json", R"({
        "lattice": {"kind": "chain", "length": 8},
        "grid": {"start": 1.0, "stop": 2.0, "step": 0.0}
    })");
    REQUIRE(run("sweep --config " + (d / "bad_step.json").string()) == 2);

    write(d / "bad_json.json", "{ not json");
    REQUIRE(run("sweep --config " + (d / "bad_json.json").string()) == 2);
    REQUIRE(run("sweep --config " + (d / "missing.json").string()) == 2);
    REQUIRE(run("sweep") == 2);  // no --config
}

TEST_CASE("factorize certifies the chain and refuses a bad bracket") {
    fs::path d = scratch();
    write(d / "fact.json", R"({
        "lattice": {"kind": "chain", "length": 8},
        "model": {"delta_y": 0.25, "delta_z": 1.0},
        "bracket": [1.4, 1.75],
        "output": {"dir": ")" + (d / "fact_out").string() + R"("}
    })");
    REQUIRE(run("factorize --config " + (d / "fact.json").string()) == 0);
    std::string rep = slurp(d / "fact_out" / "report.json");
    REQUIRE(rep.find("\"certified\": true") != std::string::npos);
    REQUIRE(rep.find("1.58113") != std::string::npos);
    REQUIRE(rep.find("overlap_with_ansatz") != std::string::npos);

    write(d / "fact_off.json", R"({
        "lattice": {"kind": "chain", "length": 8},
        "model": {"delta_y": 0.25, "delta_z": 1.0},
        "bracket": [2.2, 2.8],
        "output": {"dir": ")" + (d / "fact_off_out").string() + R"("}
    })");
    REQUIRE(run("factorize --config " + (d / "fact_off.json").string()) == 0);
    rep = slurp(d / "fact_off_out" / "report.json");
    REQUIRE(rep.find("\"certified\": false") != std::string::npos);
}

TEST_CASE("ladder factorize omits the overlap field") {
    fs::path d = scratch();
    write(d / "lad.json", R"({
        "lattice": {"kind": "ladder", "length": 4},
        "model": {"delta_y": 0.0, "delta_z": 1.0},
        "bracket": [1.5, 3.0],
        "output": {"dir": ")" + (d / "lad_out").string() + R"("}
    })");
    REQUIRE(run("factorize --config " + (d / "lad.json").string()) == 0);
    std::string rep = slurp(d / "lad_out" / "report.json");
    REQUIRE(rep.find("\"certified\": true") != std::string::npos);
    REQUIRE(rep.find("overlap_with_ansatz") == std::string::npos);
}

TEST_CASE("critical reports the dip or flags the boundary") {
    fs::path d = scratch();
    // L = 10 on this window has a monotone ratio: boundary minimum, exit 4
    write(d / "crit10.json", R"({
        "lattice": {"kind": "chain", "length": 10},
        "model": {"delta_y": 0.25, "delta_z": 1.0},
        "grid": {"start": 1.62, "stop": 2.2, "step": 0.04},
        "output": {"dir": ")" + (d / "crit10_out").string() + R"("}
    })");
    REQUIRE(run("critical --config " + (d / "crit10.json").string()) == 4);
    REQUIRE(slurp(d / "crit10_out" / "report.json").find("\"inconclusive\": true") !=
            std::string::npos);

    // L = 12 has an interior minimum
    write(d / "crit12.json", R"({
        "lattice": {"kind": "chain", "length": 12},
        "model": {"delta_y": 0.25, "delta_z": 1.0},
        "grid": {"start": 1.62, "stop": 2.2, "step": 0.04},
        "output": {"dir": ")" + (d / "crit12_out").string() + R"("}
    })");
    REQUIRE(run("critical --config " + (d / "crit12.json").string()) == 0);
    std::string rep = slurp(d / "crit12_out" / "report.json");
    REQUIRE(rep.find("\"inconclusive\": false") != std::string::npos);
    REQUIRE(rep.find("h_c_estimate") != std::string::npos);
    REQUIRE(rep.find("magnetization_inflection") != std::string::npos);
}

TEST_CASE("oracle-check passes on the solvable line and rejects delta_z != 0") {
    fs::path d = scratch();
    write(d / "oracle.json", R"({
        "lattice": {"kind": "chain", "length": 10},
        "model": {"delta_y": 0.5, "delta_z": 0.0},
        "grid": {"values": [0.2, 0.6, 1.0, 1.4]},
        "output": {"dir": ")" + (d / "oracle_out").string() + R"("}
    })");
    REQUIRE(run("oracle-check --config " + (d / "oracle.json").string()) == 0);
    REQUIRE(slurp(d / "oracle_out" / "report.json").find("\"all_pass\": true") !=
            std::string::npos);

    write(d / "oracle_bad.json", R"({
        "lattice": {"kind": "chain", "length": 10},
        "model": {"delta_y": 0.5, "delta_z": 1.0},
        "grid": {"values": [0.5]}
    })");
    REQUIRE(run("oracle-check --config " + (d / "oracle_bad.json").string()) == 2);
}

TEST_CASE("reruns are byte-identical") {
    fs::path d = scratch();
    for (const char* out : {"det_a", "det_b"}) {
        write(d / "det.json", R"({
            "lattice": {"kind": "chain", "length": 8},
            "model": {"delta_y": 0.25, "delta_z": 1.0},
            "grid": {"start": 0.4, "stop": 2.4, "step": 0.25},
            "solver": {"seed": 4242},
            "output": {"dir": ")" + (d / out).string() + R"("}
        })");
        REQUIRE(run("sweep --config " + (d / "det.json").string()) == 0);
    }
    REQUIRE(slurp(d / "det_a" / "rows.csv") == slurp(d / "det_b" / "rows.csv"));
    REQUIRE(!slurp(d / "det_a" / "rows.csv").empty());
}

TEST_CASE("flag overrides reach the solver") {
    fs::path d = scratch();
    write(d / "ov.json", R"({
        "lattice": {"kind": "chain", "length": 8},
        "model": {"delta_y": 0.25, "delta_z": 1.0},
        "grid": {"values": [1.0]}
    })");
    REQUIRE(run("sweep --config " + (d / "ov.json").string() + " --out " +
                (d / "ov_out").string() + " --seed 99 --tol 1e-10") == 0);
    std::string rep = slurp(d / "ov_out" / "report.json");
    REQUIRE(rep.find("\"seed\": 99") != std::string::npos);
    REQUIRE(rep.find("1e-10") != std::string::npos);
}
