#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pixelent/basis_design.hpp"
#include "pixelent/layout.hpp"
#include "pixelent/optics.hpp"
#include "pixelent/state.hpp"

// File formats of the toolkit. Count matrices are plain CSV (d rows of d
// comma-separated integers) so lab data drops in directly; the manifest and
// layout files are JSON; configs are flat key=value sections.

namespace pixelent {

// ---------------------------------------------------------------------------
// Count CSV

void write_count_csv(const std::filesystem::path& path, const CountsMatrix& counts);
CountsMatrix read_count_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Manifest

struct ManifestEntry {
    BasisSpec basis_a;
    BasisSpec basis_b;
    std::filesystem::path counts_file;  // relative to the manifest
    std::optional<double> acquisition_time_s;
};

struct Manifest {
    int d = 0;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> layout_file;
    std::optional<JtmaParams> jtma;  // simulated provenance
    std::vector<ManifestEntry> entries;
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

/// Loads every referenced count file (paths resolved against the manifest's
/// directory) and checks d-consistency. Throws on missing or malformed data.
std::vector<CountMatrix> load_manifest_counts(const std::filesystem::path& path,
                                              const Manifest& manifest);

// ---------------------------------------------------------------------------
// Layout JSON

void write_layout_json(const std::filesystem::path& path, const PixelLayout& layout);
PixelLayout read_layout_json(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Config: "[section]" headers over key=value lines, '#' comments.

class Config {
public:
    static Config parse_file(const std::filesystem::path& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    int get_int_or(const std::string& section, const std::string& key,
                   int fallback) const;
    std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                             std::uint64_t fallback) const;
    bool get_bool_or(const std::string& section, const std::string& key,
                     bool fallback) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// ---------------------------------------------------------------------------
// Graphics

/// Normalized heatmap (per-matrix maximum -> full scale) as standalone SVG.
void write_heatmap_svg(const std::filesystem::path& path,
                       const Eigen::MatrixXd& values, const std::string& title);

/// Layout overlay: aperture circle plus every pixel disc.
void write_layout_svg(const std::filesystem::path& path, const PixelLayout& layout);

/// 8-bit grayscale PGM; phase mapped linearly to [0, 255], OFF pixels 0.
void write_phase_mask_pgm(const std::filesystem::path& path, const PhaseMask& mask);

}  // namespace pixelent
