// Command-line front end: design pixel bases, simulate coincidence
// experiments, certify entanglement from count files, and check beam
// geometry. Exit codes: 0 success, 2 usage, 3 data/validation,
// 4 numerical non-convergence.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pixelent/basis_design.hpp"
#include "pixelent/certify.hpp"
#include "pixelent/io.hpp"
#include "pixelent/layout.hpp"
#include "pixelent/mub.hpp"
#include "pixelent/optics.hpp"
#include "pixelent/state.hpp"

namespace fs = std::filesystem;
using namespace pixelent;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct NonConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

JtmaParams jtma_from_config(const Config& cfg) {
    JtmaParams p;
    p.sigma_s = cfg.get_double("jtma", "sigma_s");
    p.sigma_p = cfg.get_double("jtma", "sigma_p");
    p.sigma_c = cfg.get_double_or("jtma", "sigma_c", 1e6 * p.sigma_s);
    p.sinc_prefactor = cfg.get_double_or("jtma", "sinc_prefactor", 1.0);
    p.validate();
    return p;
}

QuadratureSpec quadrature_from_config(const Config& cfg) {
    QuadratureSpec q;
    q.radial_nodes = cfg.get_int_or("quadrature", "radial_nodes", q.radial_nodes);
    q.angular_nodes = cfg.get_int_or("quadrature", "angular_nodes", q.angular_nodes);
    q.box_nodes = cfg.get_int_or("quadrature", "box_nodes", q.box_nodes);
    q.box_coverage = cfg.get_double_or("quadrature", "box_coverage", q.box_coverage);
    q.check_convergence =
        cfg.get_bool_or("quadrature", "check_convergence", q.check_convergence);
    q.convergence_tol =
        cfg.get_double_or("quadrature", "convergence_tol", q.convergence_tol);
    q.validate();
    return q;
}

// Layout per config: packed from [layout], optionally rate-equalized
// against [jtma]. gap_fraction is resolved against the gapless uniform
// radius, min_gap (absolute) takes precedence when both are set.
PixelLayout layout_from_config(const Config& cfg, bool allow_optimize) {
    if (cfg.has("layout", "file"))
        return read_layout_json(cfg.get("layout", "file"));

    const int d = cfg.get_int_or("layout", "d", 0);
    if (d <= 0) throw std::runtime_error("config: [layout] d must be set and positive");
    const double radius = cfg.get_double("layout", "enclosing_radius");
    double min_gap = 0.0;
    if (cfg.has("layout", "min_gap")) {
        min_gap = cfg.get_double("layout", "min_gap");
    } else {
        const double frac = cfg.get_double_or("layout", "gap_fraction", 0.1);
        min_gap = frac * pack_pixels(d, radius, 0.0).radii.front();
    }
    PixelLayout layout = pack_pixels(d, radius, min_gap);

    if (allow_optimize && cfg.get_bool_or("layout", "optimize", true) &&
        cfg.has("jtma", "sigma_s")) {
        QuadratureSpec q = quadrature_from_config(cfg);
        q.check_convergence = false;
        layout = optimize_radii(layout, jtma_from_config(cfg), q,
                                cfg.get_double_or("layout", "tol", 0.01));
    }
    return layout;
}

std::vector<BasisSpec> parse_bases_list(const std::string& text, int d) {
    std::vector<BasisSpec> specs;
    if (text == "all") {
        specs.push_back(BasisSpec::standard_basis());
        for (int k = 0; k < d; ++k) specs.push_back(BasisSpec::wf(k));
        return specs;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        specs.push_back(parse_basis_spec(item));
    }
    if (specs.empty()) throw std::runtime_error("empty basis list '" + text + "'");
    return specs;
}

std::string file_label(const BasisSpec& spec) {
    return spec.is_wf() ? "wf" + std::to_string(spec.k) : "standard";
}

// ---------------------------------------------------------------------------

// "standard:<m>" or "wf:<k>:<j>" -> the projective state for one hologram.
Eigen::VectorXcd hologram_state(const std::string& text, int d) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() == 2 && parts[0] == "standard") {
        const int m = std::stoi(parts[1]);
        if (m < 0 || m >= d) throw std::runtime_error("hologram: mode out of range");
        Eigen::VectorXcd state = Eigen::VectorXcd::Zero(d);
        state[m] = 1.0;
        return state;
    }
    if (parts.size() == 3 && parts[0] == "wf")
        return wf_vector({d, std::stoi(parts[1])}, std::stoi(parts[2]));
    throw std::runtime_error("hologram spec must be standard:<m> or wf:<k>:<j>, got '" +
                             text + "'");
}

int cmd_design(const std::string& config_path, const fs::path& out_dir,
               const std::vector<std::string>& holograms, int raster,
               double grating_period) {
    const Config cfg = Config::parse_file(config_path);
    const PixelLayout layout = layout_from_config(cfg, true);
    fs::create_directories(out_dir);
    write_layout_json(out_dir / "layout.json", layout);
    write_layout_svg(out_dir / "layout.svg", layout);
    for (const std::string& spec : holograms) {
        const PhaseMask mask = render_hologram(layout, hologram_state(spec, layout.d),
                                               raster, raster, grating_period);
        std::string name = spec;
        std::replace(name.begin(), name.end(), ':', '_');
        write_phase_mask_pgm(out_dir / ("hologram_" + name + ".pgm"), mask);
    }
    std::cout << "wrote " << (out_dir / "layout.json").string() << " (d = "
              << layout.d << ", " << layout.ring_groups().size() << " rings)\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<std::string> bases_override) {
    const Config cfg = Config::parse_file(config_path);
    const JtmaParams params = jtma_from_config(cfg);
    const QuadratureSpec quad = quadrature_from_config(cfg);
    const PixelLayout layout = layout_from_config(cfg, true);

    const std::uint64_t seed =
        seed_override.value_or(cfg.get_u64_or("simulate", "seed", 1));
    const double total_pairs = cfg.get_double_or("simulate", "total_pairs", 1e6);
    const double noise = cfg.get_double_or("simulate", "noise", 0.0);
    const std::string bases_text =
        bases_override.value_or(cfg.get_or("simulate", "bases", "wf:0,wf:1"));
    const std::vector<BasisSpec> bases = parse_bases_list(bases_text, layout.d);

    const AmplitudeMatrixResult amp = amplitude_matrix(layout, params, quad);
    if (!amp.converged)
        throw NonConverged("amplitude matrix did not converge (rel change " +
                           std::to_string(amp.max_rel_change) +
                           "); raise [quadrature] nodes");
    const TwoQuditState state =
        apply_isotropic_noise(pure_state_from_amplitudes(amp.matrix), noise);

    fs::create_directories(out_dir);
    write_layout_json(out_dir / "layout.json", layout);

    Manifest manifest;
    manifest.d = layout.d;
    manifest.seed = seed;
    manifest.layout_file = "layout.json";
    manifest.jtma = params;
    std::uint64_t setting_seed = seed;
    for (const BasisSpec& b : bases) {
        const BasisSpec basis_a = b;
        const BasisSpec basis_b = b.is_wf() ? BasisSpec::wf(b.k, true)
                                            : BasisSpec::standard_basis(true);
        const Eigen::MatrixXd probs = outcome_probabilities(state, basis_a, basis_b);
        const CountMatrix counts =
            simulate_counts(probs, total_pairs, setting_seed++, basis_a, basis_b);
        const std::string file = "counts_" + file_label(b) + ".csv";
        write_count_csv(out_dir / file, counts.counts);
        manifest.entries.push_back({basis_a, basis_b, file, {}});
    }
    write_manifest(out_dir / "manifest.json", manifest);
    std::cout << "wrote " << (out_dir / "manifest.json").string() << " ("
              << manifest.entries.size() << " settings, seed " << seed << ")\n";
    return 0;
}

int cmd_certify(const std::string& manifest_path, const fs::path& out_dir,
                int resamples, std::uint64_t seed,
                std::optional<std::string> bases_filter, bool transpose_eof) {
    const Manifest manifest = read_manifest(manifest_path);
    std::vector<CountMatrix> counts = load_manifest_counts(manifest_path, manifest);

    CertificationOptions options;
    options.n_resamples = resamples;
    options.seed = seed;
    options.transpose_eof_marginal = transpose_eof;
    if (bases_filter) {
        const std::vector<BasisSpec> wanted =
            parse_bases_list(*bases_filter, manifest.d);
        std::vector<CountMatrix> filtered;
        for (const CountMatrix& c : counts)
            for (const BasisSpec& w : wanted)
                if (c.basis_a.kind == w.kind && (!w.is_wf() || c.basis_a.k == w.k)) {
                    filtered.push_back(c);
                    break;
                }
        counts = std::move(filtered);
        std::vector<int> wf_ks;
        for (const BasisSpec& w : wanted)
            if (w.is_wf()) wf_ks.push_back(w.k);
        if (wf_ks.size() == 2) options.wf_pair = {wf_ks[0], wf_ks[1]};
    }

    const CertificationReport report = certify_counts(counts, options);

    fs::create_directories(out_dir);
    write_report_json(out_dir / "report.json", report);
    for (const CountMatrix& c : counts) {
        const std::string name = "heatmap_" + file_label(c.basis_a) + ".svg";
        write_heatmap_svg(out_dir / name, counts_to_probs(c),
                          to_string(c.basis_a) + " / " + to_string(c.basis_b) +
                              (c.basis_b.conjugate ? "*" : ""));
    }
    const std::string text = format_report(report);
    std::ofstream(out_dir / "report.txt") << text;
    std::cout << text;
    return 0;
}

int cmd_beam(const std::string& preset, const std::string& config_path) {
    GaussianBeam beam;
    std::vector<OpticalElement> elements;
    std::vector<std::string> labels;
    if (!preset.empty()) {
        if (preset == "pump") {
            beam = {950.0, 0.0, 405.0};
            elements = {ThinLens{250.0}, FreeSpace{300.0}, ThinLens{50.0}};
            labels = {"lens f=250mm", "free 300mm", "lens f=50mm"};
        } else if (preset == "crystal-to-slm") {
            beam = {188.0, 0.0, 810.0};
            elements = {FreeSpace{250.0}, ThinLens{250.0}, FreeSpace{250.0}};
            labels = {"free 250mm", "lens f=250mm", "free 250mm"};
        } else if (preset == "ift") {
            beam = {1117.0, 0.0, 810.0};
            elements = {ThinLens{150.0}, FreeSpace{650.0}, ThinLens{500.0}};
            labels = {"lens f=150mm", "free 650mm", "lens f=500mm"};
        } else {
            throw CLI::ValidationError("unknown preset '" + preset +
                                       "' (pump, crystal-to-slm, ift)");
        }
    } else {
        const Config cfg = Config::parse_file(config_path);
        beam.waist_um = cfg.get_double("beam", "waist_um");
        beam.wavelength_nm = cfg.get_double("beam", "wavelength_nm");
        beam.waist_position_mm = cfg.get_double_or("beam", "waist_position_mm", 0.0);
        std::stringstream ss(cfg.get("beam", "elements"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("beam elements must be lens:<f_mm> or free:<d_mm>");
            const std::string kind = item.substr(0, colon);
            const double value = std::stod(item.substr(colon + 1));
            if (kind == "lens")
                elements.push_back(ThinLens{value});
            else if (kind == "free")
                elements.push_back(FreeSpace{value});
            else
                throw std::runtime_error("unknown beam element '" + kind + "'");
            labels.push_back(item);
        }
    }

    const auto table = propagation_table(beam, elements);
    std::printf("%-18s %14s %20s\n", "element", "waist [um]", "waist position [mm]");
    std::printf("%-18s %14.2f %20.2f\n", "(input)", beam.waist_um,
                beam.waist_position_mm);
    for (std::size_t i = 0; i < table.size(); ++i)
        std::printf("%-18s %14.2f %20.2f\n", labels[i].c_str(), table[i].waist_um,
                    table[i].waist_position_mm);
    return 0;
}

int cmd_report(const std::string& report_path) {
    std::cout << format_report(read_report_json(report_path));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-dimensional pixel-entanglement simulation and certification"};
    app.require_subcommand(1);

    std::string config_path, manifest_path, report_path, preset, out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> bases;
    int resamples = 1000;
    std::uint64_t certify_seed = 1;
    bool transpose_eof = false;

    std::vector<std::string> holograms;
    int raster = 512;
    double grating_period = 16.0;
    auto* design = app.add_subcommand("design", "pack and equalize a pixel layout");
    design->add_option("--config", config_path, "config file")->required();
    design->add_option("--output-dir", out_dir, "output directory");
    design->add_option("--hologram", holograms,
                       "render a mask, standard:<m> or wf:<k>:<j> (repeatable)");
    design->add_option("--raster", raster, "hologram raster size in pixels");
    design->add_option("--grating-period", grating_period,
                       "grating period in raster pixels (>= 4)");

    auto* simulate =
        app.add_subcommand("simulate", "generate synthetic coincidence counts");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--output-dir", out_dir, "output directory");
    simulate->add_option("--seed", seed_override, "override [simulate] seed");
    simulate->add_option("--bases", bases,
                         "override basis list, e.g. wf:0,wf:1 or all");

    auto* certify =
        app.add_subcommand("certify", "certify entanglement from a manifest");
    certify->add_option("--manifest", manifest_path, "manifest JSON")->required();
    certify->add_option("--output-dir", out_dir, "output directory");
    certify->add_option("--resamples", resamples, "bootstrap resamples")
        ->check(CLI::PositiveNumber);
    certify->add_option("--seed", certify_seed, "bootstrap seed");
    certify->add_option("--bases", bases, "restrict to these bases");
    certify->add_flag("--transpose-eof", transpose_eof,
                      "condition the EoF entropies on the other arm");

    auto* beam = app.add_subcommand("beam", "Gaussian-beam propagation table");
    beam->add_option("--preset", preset, "pump | crystal-to-slm | ift");
    beam->add_option("--config", config_path, "config with a [beam] section");

    auto* report = app.add_subcommand("report", "pretty-print a saved report");
    report->add_option("--input", report_path, "report JSON")->required();

    try {
        app.parse(argc, argv);
        if (design->parsed())
            return cmd_design(config_path, out_dir, holograms, raster, grating_period);
        if (simulate->parsed())
            return cmd_simulate(config_path, out_dir, seed_override, bases);
        if (certify->parsed())
            return cmd_certify(manifest_path, out_dir, resamples, certify_seed, bases,
                               transpose_eof);
        if (beam->parsed()) {
            if (preset.empty() && config_path.empty())
                throw CLI::ValidationError("beam needs --preset or --config");
            return cmd_beam(preset, config_path);
        }
        if (report->parsed()) return cmd_report(report_path);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const NonConverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
