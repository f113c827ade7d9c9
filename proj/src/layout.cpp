#include "pixelent/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pixelent {

double Vec2::norm() const { return std::sqrt(norm_sq()); }

void PixelLayout::validate(double slack) const {
    if (d <= 0 || centers.size() != static_cast<std::size_t>(d) ||
        radii.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("PixelLayout: inconsistent sizes");
    for (int i = 0; i < d; ++i) {
        if (radii[i] <= 0.0)
            throw std::invalid_argument("PixelLayout: non-positive radius");
        if (centers[i].norm() + radii[i] > enclosing_radius + slack)
            throw std::invalid_argument("PixelLayout: pixel " + std::to_string(i) +
                                        " escapes the enclosing circle");
        for (int j = i + 1; j < d; ++j) {
            const double dist = (centers[i] - centers[j]).norm();
            if (dist + slack < radii[i] + radii[j])
                throw std::invalid_argument("PixelLayout: pixels " +
                                            std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
        }
    }
}

std::vector<std::vector<int>> PixelLayout::ring_groups() const {
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return centers[a].norm_sq() < centers[b].norm_sq();
    });
    std::vector<std::vector<int>> groups;
    const double tol = 1e-9 * std::max(enclosing_radius, 1.0);
    for (int idx : order) {
        const double rho = centers[idx].norm();
        if (groups.empty() ||
            std::abs(centers[groups.back().front()].norm() - rho) > tol)
            groups.push_back({});
        groups.back().push_back(idx);
    }
    return groups;
}

std::vector<int> PixelLayout::outer_ring() const { return ring_groups().back(); }

bool is_centered_hexagonal(int d) {
    for (int j = 0; 3 * j * (j + 1) + 1 <= d; ++j)
        if (3 * j * (j + 1) + 1 == d) return true;
    return false;
}

namespace {

// Hexagonal-lattice points by ring, nearest-neighbor distance 1.
std::vector<Vec2> hex_lattice_points(int rings) {
    std::vector<Vec2> pts{{0.0, 0.0}};
    for (int ring = 1; ring <= rings; ++ring) {
        // Walk the hexagon of side `ring`: 6 corner-to-corner edges.
        Vec2 pos{static_cast<double>(ring), 0.0};
        for (int side = 0; side < 6; ++side) {
            const double ang = (static_cast<double>(side) + 2.0) *
                               std::numbers::pi / 3.0;
            const Vec2 step{std::cos(ang), std::sin(ang)};
            for (int s = 0; s < ring; ++s) {
                pts.push_back(pos);
                pos = pos + step;
            }
        }
    }
    return pts;
}

PixelLayout pack_hexagonal(int d, double enclosing_radius, double min_gap) {
    int rings = 0;
    while (3 * rings * (rings + 1) + 1 < d) ++rings;
    // Lattice constant a = 2r + gap; outermost center sits at rings*a.
    const double r =
        (enclosing_radius - rings * min_gap) / (2.0 * rings + 1.0);
    if (r <= 0.0)
        throw std::invalid_argument("pack_pixels: gap too large for aperture");
    const double a = 2.0 * r + min_gap;

    PixelLayout layout;
    layout.d = d;
    layout.enclosing_radius = enclosing_radius;
    layout.radii.assign(d, r);
    for (const Vec2& p : hex_lattice_points(rings)) layout.centers.push_back(p * a);
    layout.validate();
    return layout;
}

// Tiny deterministic RNG for the relaxation jitter only.
struct SplitMix64 {
    std::uint64_t state;
    double next_unit() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

// One relaxation pass at fixed pixel radius r; returns the worst remaining
// violation (0 means feasible).
double relax(std::vector<Vec2>& centers, double r, double gap, double aperture,
             int iterations) {
    const int n = static_cast<int>(centers.size());
    const double min_dist = 2.0 * r + gap;
    const double reach = aperture - r;
    for (int it = 0; it < iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                Vec2 sep = centers[j] - centers[i];
                double dist = sep.norm();
                if (dist >= min_dist) continue;
                if (dist < 1e-12) {  // coincident: split along a fixed axis
                    sep = {1.0, 0.0};
                    dist = 1.0;
                }
                const Vec2 push = sep * ((min_dist - dist) * 0.5 / dist);
                centers[i] = centers[i] - push;
                centers[j] = centers[j] + push;
            }
            const double rho = centers[i].norm();
            if (rho > reach) centers[i] = centers[i] * (reach / rho);
        }
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, centers[i].norm() - reach);
        for (int j = i + 1; j < n; ++j)
            worst = std::max(worst, min_dist - (centers[i] - centers[j]).norm());
    }
    return worst;
}

PixelLayout pack_relaxation(int d, double enclosing_radius, double min_gap) {
    // Sunflower seed positions plus seeded jitter to break symmetry.
    SplitMix64 rng{0x5DEECE66DULL + static_cast<std::uint64_t>(d)};
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec2> seed(d);
    for (int i = 0; i < d; ++i) {
        const double rho =
            0.85 * enclosing_radius * std::sqrt((i + 0.5) / d);
        const double ang = golden * i;
        seed[i] = {rho * std::cos(ang) + 1e-3 * enclosing_radius * (rng.next_unit() - 0.5),
                   rho * std::sin(ang) + 1e-3 * enclosing_radius * (rng.next_unit() - 0.5)};
    }

    const int relax_iterations = 600;
    double lo = 0.0, hi = enclosing_radius / std::sqrt(static_cast<double>(d));
    std::vector<Vec2> best;
    double best_r = 0.0;
    for (int step = 0; step < 40; ++step) {
        const double r = 0.5 * (lo + hi);
        std::vector<Vec2> trial = seed;
        const double violation =
            relax(trial, r, min_gap, enclosing_radius, relax_iterations);
        if (violation <= 1e-9 * enclosing_radius) {
            best = trial;
            best_r = r;
            lo = r;
        } else {
            hi = r;
        }
    }
    if (best.empty())
        throw std::invalid_argument(
            "pack_pixels: no feasible packing found for d=" + std::to_string(d));

    PixelLayout layout;
    layout.d = d;
    layout.enclosing_radius = enclosing_radius;
    layout.centers = std::move(best);
    // Shave the tangency slack so validate() holds exactly.
    layout.radii.assign(d, best_r * (1.0 - 1e-9));
    layout.validate();
    return layout;
}

}  // namespace

PixelLayout pack_pixels(int d, double enclosing_radius, double min_gap) {
    if (d < 1) throw std::invalid_argument("pack_pixels: d must be >= 1");
    if (enclosing_radius <= 0.0)
        throw std::invalid_argument("pack_pixels: enclosing radius must be positive");
    if (min_gap < 0.0)
        throw std::invalid_argument("pack_pixels: min_gap must be >= 0");
    if (d == 1) {
        PixelLayout layout;
        layout.d = 1;
        layout.enclosing_radius = enclosing_radius;
        layout.centers = {{0.0, 0.0}};
        layout.radii = {enclosing_radius};
        return layout;
    }
    return is_centered_hexagonal(d) ? pack_hexagonal(d, enclosing_radius, min_gap)
                                    : pack_relaxation(d, enclosing_radius, min_gap);
}

}  // namespace pixelent
