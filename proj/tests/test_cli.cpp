// End-to-end checks of the command-line tool: round trip from simulation to
// certification, bitwise reproducibility per seed, and the documented exit
// codes. The binary path arrives as argv[1].
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pixelent/basis_design.hpp"
#include "pixelent/certify.hpp"
#include "pixelent/io.hpp"
#include "pixelent/state.hpp"

namespace fs = std::filesystem;
using namespace pixelent;

namespace {

std::string g_cli;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pixelent_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_config(const fs::path& file, const std::string& extra = "") {
    std::ofstream out(file);
    out << "[jtma]\n"
           "sigma_s = 1.0\n"
           "sigma_p = 0.02\n"
           "sigma_c = 1e6\n"
           "[layout]\n"
           "d = 5\n"
           "enclosing_radius = 0.55\n"
           "gap_fraction = 0.1\n"
           "[quadrature]\n"
           "check_convergence = false\n"
           "[simulate]\n"
           "total_pairs = 1e6\n"
           "seed = 11\n"
           "bases = wf:0,wf:1\n"
        << extra;
}

}  // namespace

TEST_CASE("simulate -> certify round trip recovers the forward fidelity") {
    TempDir tmp;
    write_config(tmp.path / "sim.cfg");
    REQUIRE(run("simulate --config " + (tmp.path / "sim.cfg").string() +
                " --output-dir " + (tmp.path / "run").string()) == 0);
    REQUIRE(run("certify --manifest " + (tmp.path / "run/manifest.json").string() +
                " --output-dir " + (tmp.path / "cert").string() +
                " --resamples 300 --seed 4") == 0);

    const CertificationReport report =
        read_report_json(tmp.path / "cert/report.json");
    CHECK(report.d == 5);
    CHECK(report.method == "two-wf");

    // rebuild the forward model the config describes and compare
    JtmaParams p;
    p.sigma_s = 1.0;
    p.sigma_p = 0.02;
    p.sigma_c = 1e6;
    QuadratureSpec q;
    q.check_convergence = false;
    const PixelLayout layout = optimize_radii(
        pack_pixels(5, 0.55, 0.1 * pack_pixels(5, 0.55, 0.0).radii.front()), p, q,
        0.01);
    const double truth =
        pure_state_from_amplitudes(amplitude_matrix(layout, p, q).matrix)
            .fidelity_to_max_entangled();
    CHECK(std::abs(report.fidelity.value - truth) <=
          std::max(3.0 * report.fidelity_sigma, 1e-4));
    CHECK(report.d_ent == 5);
    CHECK(fs::exists(tmp.path / "cert/heatmap_wf0.svg"));
    CHECK(fs::exists(tmp.path / "cert/heatmap_wf1.svg"));
    CHECK(run("report --input " + (tmp.path / "cert/report.json").string()) == 0);
}

TEST_CASE("outputs are reproducible bitwise per seed") {
    TempDir tmp;
    write_config(tmp.path / "sim.cfg");
    REQUIRE(run("simulate --config " + (tmp.path / "sim.cfg").string() +
                " --output-dir " + (tmp.path / "a").string()) == 0);
    REQUIRE(run("simulate --config " + (tmp.path / "sim.cfg").string() +
                " --output-dir " + (tmp.path / "b").string()) == 0);
    for (const char* name :
         {"manifest.json", "layout.json", "counts_wf0.csv", "counts_wf1.csv"})
        CHECK(slurp(tmp.path / "a" / name) == slurp(tmp.path / "b" / name));

    REQUIRE(run("simulate --config " + (tmp.path / "sim.cfg").string() +
                " --seed 99 --output-dir " + (tmp.path / "c").string()) == 0);
    CHECK(slurp(tmp.path / "a/counts_wf0.csv") !=
          slurp(tmp.path / "c/counts_wf0.csv"));
}

TEST_CASE("all-MUB simulation certifies with the exact method") {
    TempDir tmp;
    write_config(tmp.path / "sim.cfg", "");
    REQUIRE(run("simulate --config " + (tmp.path / "sim.cfg").string() +
                " --bases all --output-dir " + (tmp.path / "run").string()) == 0);
    REQUIRE(run("certify --manifest " + (tmp.path / "run/manifest.json").string() +
                " --output-dir " + (tmp.path / "cert").string() +
                " --resamples 200") == 0);
    const CertificationReport report =
        read_report_json(tmp.path / "cert/report.json");
    CHECK(report.method == "all-mub-exact");
    CHECK(report.fidelity.kind == FidelityResult::Kind::exact);
    CHECK(report.d_ent == 5);
}

TEST_CASE("insufficient coverage and zero flux are data errors") {
    TempDir tmp;
    write_config(tmp.path / "one.cfg", "");
    REQUIRE(run("simulate --config " + (tmp.path / "one.cfg").string() +
                " --bases wf:0 --output-dir " + (tmp.path / "one").string()) == 0);
    CHECK(run("certify --manifest " + (tmp.path / "one/manifest.json").string() +
              " --output-dir " + (tmp.path / "cert1").string()) == 3);

    // zero flux: simulate succeeds with all-zero matrices, certify refuses
    write_config(tmp.path / "zero.cfg", "");
    std::ofstream(tmp.path / "zero.cfg", std::ios::app) << "total_pairs = 0\n";
    REQUIRE(run("simulate --config " + (tmp.path / "zero.cfg").string() +
                " --output-dir " + (tmp.path / "zero").string()) == 0);
    CHECK(slurp(tmp.path / "zero/counts_wf0.csv").find_first_not_of("0,\n") ==
          std::string::npos);
    CHECK(run("certify --manifest " + (tmp.path / "zero/manifest.json").string() +
              " --output-dir " + (tmp.path / "cert2").string()) == 3);

    // d = 0 in the config is rejected
    std::ofstream(tmp.path / "d0.cfg") << "[layout]\nd = 0\nenclosing_radius = 1\n";
    CHECK(run("design --config " + (tmp.path / "d0.cfg").string() +
              " --output-dir " + (tmp.path / "d0").string()) == 3);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("bogus-subcommand") == 2);
    CHECK(run("certify") == 2);  // missing required --manifest
    CHECK(run("") == 2);
}

TEST_CASE("infeasible design exits with 3") {
    TempDir tmp;
    std::ofstream(tmp.path / "bad.cfg") << "[layout]\n"
                                           "d = 7\n"
                                           "enclosing_radius = 1.0\n"
                                           "min_gap = 5.0\n";
    CHECK(run("design --config " + (tmp.path / "bad.cfg").string() +
              " --output-dir " + (tmp.path / "out").string()) == 3);
}

TEST_CASE("beam table runs for all presets") {
    CHECK(run("beam --preset pump") == 0);
    CHECK(run("beam --preset crystal-to-slm") == 0);
    CHECK(run("beam --preset ift") == 0);
    CHECK(run("beam --preset nonsense") == 2);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-pixelent-binary>\n");
        return 1;
    }
    g_cli = argv[1];
    doctest::Context context;
    context.applyCommandLine(argc - 1, argv + 1);
    return context.run();
}
