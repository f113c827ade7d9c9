#include "pixelent/basis_design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pixelent {

namespace {

double rate_for_radius(PixelLayout& layout, int pixel, double radius,
                       const JtmaParams& p, const QuadratureSpec& q) {
    layout.radii[pixel] = radius;
    return std::norm(amplitude_entry(layout, pixel, pixel, p, q));
}

}  // namespace

std::vector<double> diagonal_rates(const PixelLayout& layout,
                                   const JtmaParams& p,
                                   const QuadratureSpec& q) {
    std::vector<double> rates(layout.d);
    for (int m = 0; m < layout.d; ++m)
        rates[m] = std::norm(amplitude_entry(layout, m, m, p, q));
    return rates;
}

PixelLayout optimize_radii(const PixelLayout& layout, const JtmaParams& p,
                           const QuadratureSpec& q, double tol) {
    layout.validate();
    p.validate();
    if (tol <= 0.0) throw std::invalid_argument("optimize_radii: tol must be positive");
    if (layout.d == 1) return layout;

    // Equalization never needs the convergence-doubling pass per step.
    QuadratureSpec fast = q;
    fast.check_convergence = false;

    PixelLayout result = layout;
    const auto groups = result.ring_groups();
    const std::vector<int>& outer = groups.back();

    // Target: the outer ring keeps the maximum (packed) radius.
    const double target =
        std::norm(amplitude_entry(result, outer.front(), outer.front(), p, fast));
    if (target <= 0.0)
        throw std::runtime_error("optimize_radii: outer-ring rate vanishes");

    const double rate_tol = 0.25 * tol;
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        const int rep = groups[g].front();
        const double r_max = result.radii[rep];
        PixelLayout probe = result;
        const double rate_full = rate_for_radius(probe, rep, r_max, p, fast);
        if (std::abs(rate_full - target) <= rate_tol * target) continue;
        if (rate_full < target)
            throw std::runtime_error(
                "optimize_radii: ring " + std::to_string(g) +
                " cannot reach the outer-ring rate even at maximum radius");

        // Rate grows monotonically with radius (non-negative integrand), so
        // bisection on [0, r_max] is unconditionally convergent.
        double lo = 0.0, hi = r_max, r = r_max;
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            r = 0.5 * (lo + hi);
            const double rate = rate_for_radius(probe, rep, r, p, fast);
            if (std::abs(rate - target) <= rate_tol * target) {
                converged = true;
                break;
            }
            (rate > target ? hi : lo) = r;
            if (hi - lo < 1e-14 * r_max) break;
        }
        if (!converged)
            throw std::runtime_error("optimize_radii: bisection did not converge for ring " +
                                     std::to_string(g));
        for (int idx : groups[g]) result.radii[idx] = r;
    }

    result.validate();
    const std::vector<double> rates = diagonal_rates(result, p, fast);
    const double mx = *std::max_element(rates.begin(), rates.end());
    const double mn = *std::min_element(rates.begin(), rates.end());
    if (mx > (1.0 + tol) * mn)
        throw std::runtime_error("optimize_radii: equalization missed tolerance, ratio " +
                                 std::to_string(mx / mn));
    return result;
}

PhaseMask render_hologram(const PixelLayout& layout,
                          const Eigen::VectorXcd& state, int width, int height,
                          double grating_period_px) {
    layout.validate();
    if (state.size() != layout.d)
        throw std::invalid_argument("render_hologram: state length != d");
    if (std::abs(state.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("render_hologram: state must be normalized");
    if (width < 2 || height < 2)
        throw std::invalid_argument("render_hologram: raster too small");
    if (grating_period_px < 4.0)
        throw std::invalid_argument(
            "render_hologram: need >= 4 raster samples per grating period");

    PhaseMask mask;
    mask.width = width;
    mask.height = height;
    mask.phase.assign(static_cast<std::size_t>(width) * height, 0.0);
    mask.on.assign(static_cast<std::size_t>(width) * height, 0);

    const double two_pi = 2.0 * std::numbers::pi;
    // Raster covers the bounding square of the enclosing circle.
    const double span = 2.0 * layout.enclosing_radius;
    const double sx = span / width, sy = span / height;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Vec2 k{-layout.enclosing_radius + (x + 0.5) * sx,
                         layout.enclosing_radius - (y + 0.5) * sy};
            for (int m = 0; m < layout.d; ++m) {
                const Vec2 delta = k - layout.centers[m];
                if (delta.norm_sq() > layout.radii[m] * layout.radii[m]) continue;
                if (std::abs(state[m]) < 1e-15) break;  // switched off
                const double shift = std::arg(state[m]);
                double phi = std::fmod(two_pi * x / grating_period_px + shift, two_pi);
                if (phi < 0.0) phi += two_pi;
                mask.phase_at(x, y) = phi;
                mask.on[static_cast<std::size_t>(y) * width + x] = 1;
                break;
            }
        }
    }
    return mask;
}

}  // namespace pixelent
