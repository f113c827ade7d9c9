#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pixelent/state.hpp"
#include "pixelent/stats.hpp"
#include "pixelent/witness.hpp"

// Certification driver: picks the right witness for whatever basis settings
// a dataset provides (complete MUB set -> exact fidelity, two WF bases ->
// two-MUB bound, standard + WF -> exchange-optimized bound), attaches
// Poisson-bootstrap uncertainties, and packages the result.

namespace pixelent {

struct CertificationOptions {
    int n_resamples = 1000;
    std::uint64_t seed = 1;
    bool transpose_eof_marginal = false;
    // Preferred WF pair for the two-MUB witness; default: first valid pair.
    std::optional<std::pair<int, int>> wf_pair;
};

struct CertificationReport {
    int d = 0;
    std::string method;  // "all-mub-exact", "two-wf", "standard-wf"
    FidelityResult fidelity;
    double fidelity_sigma = 0.0;
    int d_ent = 1;
    int d_ent_low = 1;   // at fidelity - sigma
    int d_ent_high = 1;  // at fidelity + sigma
    double eof_ebits = 0.0;
    double eof_raw = 0.0;
    double eof_sigma = 0.0;
    std::vector<BasisSpec> eof_bases;
    int n_resamples = 0;
    std::uint64_t seed = 0;
};

/// Certifies from coincidence counts. Throws std::invalid_argument when the
/// settings cannot support any witness (fewer than two usable MUBs,
/// inconsistent d, or WF arm-B data not declared conjugated).
CertificationReport certify_counts(const std::vector<CountMatrix>& counts,
                                   const CertificationOptions& options);

void write_report_json(const std::filesystem::path& path,
                       const CertificationReport& report);
CertificationReport read_report_json(const std::filesystem::path& path);

/// Human-readable rendering of the report.
std::string format_report(const CertificationReport& report);

}  // namespace pixelent
