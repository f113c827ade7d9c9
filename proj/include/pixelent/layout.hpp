#pragma once

#include <cstdint>
#include <vector>

// Macro-pixel geometry in the transverse-momentum plane: d non-overlapping
// circular pixels inside an enclosing aperture. Centered-hexagonal dimensions
// (1, 7, 19, 37, ...) get exact concentric ring layouts; everything else goes
// through a deterministic repulsion relaxation with a fixed seed.

namespace pixelent {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const;
};

struct PixelLayout {
    int d = 0;
    std::vector<Vec2> centers;
    std::vector<double> radii;
    double enclosing_radius = 0.0;

    /// Throws std::invalid_argument on overlap, escape from the aperture, or
    /// inconsistent sizes. `slack` absorbs exact tangency from packing.
    void validate(double slack = 1e-9) const;

    /// Pixel indices grouped by distance from the origin (ties within 1e-9
    /// relative). Groups are ordered inside-out; radius equalization treats
    /// each group as one ring.
    std::vector<std::vector<int>> ring_groups() const;

    /// Indices of the outermost ring (largest center distance).
    std::vector<int> outer_ring() const;
};

/// True for centered-hexagonal counts 1, 7, 19, 37, ... (= 3J(J+1)+1).
bool is_centered_hexagonal(int d);

/// Packs d equal circles inside `enclosing_radius` with edge-to-edge
/// separation >= min_gap. Deterministic. Throws if infeasible.
PixelLayout pack_pixels(int d, double enclosing_radius, double min_gap);

}  // namespace pixelent
