#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pixelent/layout.hpp"
#include "pixelent/optics.hpp"

// Tailoring of the macro-pixel standard basis: per-ring radius equalization
// of the diagonal coincidence rates against the JTMA, and rendering of
// blazed-grating phase masks for arbitrary pixel-superposition states.

namespace pixelent {

/// Shrinks inner-ring radii by bisection until every diagonal rate
/// |A[m][m]|^2 matches the outer-ring rate within `tol` (relative). The
/// outer ring keeps its packed radius. Pixels in one ring share a radius.
/// Throws std::runtime_error on infeasible equalization or non-convergence.
PixelLayout optimize_radii(const PixelLayout& layout, const JtmaParams& p,
                           const QuadratureSpec& q, double tol);

/// Diagonal rates |A[m][m]|^2 for each pixel.
std::vector<double> diagonal_rates(const PixelLayout& layout,
                                   const JtmaParams& p,
                                   const QuadratureSpec& q);

/// Rectangular phase-mask raster. Entries are grating phases in [0, 2pi)
/// where a pixel is switched on; `off` marks background and zero-coefficient
/// pixels (no grating displayed).
struct PhaseMask {
    int width = 0;
    int height = 0;
    std::vector<double> phase;  // row-major, valid where on[i]
    std::vector<std::uint8_t> on;

    double& phase_at(int x, int y) { return phase[static_cast<std::size_t>(y) * width + x]; }
    bool is_on(int x, int y) const { return on[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Renders the hologram projecting onto `state` (one coefficient per pixel):
/// inside pixel m with |state[m]| > 0, a horizontal blazed grating whose
/// phase is shifted by arg(state[m]); everywhere else OFF. The raster spans
/// the enclosing circle's bounding square. Requires >= 4 raster samples per
/// grating period.
PhaseMask render_hologram(const PixelLayout& layout,
                          const Eigen::VectorXcd& state, int width, int height,
                          double grating_period_px);

}  // namespace pixelent
