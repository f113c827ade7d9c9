#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "pixelent/layout.hpp"
#include "pixelent/numtheory.hpp"

// Physical model of the biphoton state and its measurement: ABCD Gaussian
// beam propagation for setup design, the joint transverse momentum amplitude
// (JTMA), collection envelopes, and coincidence probabilities by numerical
// quadrature. The pixel-basis amplitude matrix produced here feeds all
// downstream simulation.

namespace pixelent {

// ---------------------------------------------------------------------------
// Gaussian beams

struct GaussianBeam {
    double waist_um = 0.0;
    double waist_position_mm = 0.0;  // relative to the current plane, >0 downstream
    double wavelength_nm = 0.0;

    double rayleigh_range_mm() const;
};

struct FreeSpace {
    double distance_mm = 0.0;
};
struct ThinLens {
    double focal_mm = 0.0;
};
using OpticalElement = std::variant<FreeSpace, ThinLens>;

/// Complex-beam-parameter transform q' = (Aq + B)/(Cq + D) composed over the
/// element sequence. Throws std::invalid_argument on bad elements and
/// std::runtime_error when the output waist degenerates (collimated limit).
GaussianBeam propagate(const GaussianBeam& beam,
                       const std::vector<OpticalElement>& elements);

/// propagate() applied cumulatively: the beam state after each element.
std::vector<GaussianBeam> propagation_table(
    const GaussianBeam& beam, const std::vector<OpticalElement>& elements);

// ---------------------------------------------------------------------------
// JTMA

struct TransverseMomentum {
    double kx = 0.0;
    double ky = 0.0;
};

struct JtmaParams {
    double sigma_p = 0.0;  // pump bandwidth, minor axis
    double sigma_s = 0.0;  // crystal bandwidth, major axis
    double sigma_c = 0.0;  // collection bandwidth
    // Multiplier on the sinc argument |ks-ki|^2/sigma_s^2. The model uses 1;
    // some SPDC conventions put a 1/4 here.
    double sinc_prefactor = 1.0;

    void validate() const;
};

/// exp(-|ks+ki|^2 / (2 sigma_p^2)) * sinc(prefactor |ks-ki|^2 / sigma_s^2),
/// with sinc(x) = sin(x)/x, sinc(0) = 1.
double jtma_amplitude(TransverseMomentum ks, TransverseMomentum ki,
                      const JtmaParams& p);

/// jtma_amplitude times the two single-mode collection Gaussians.
double collected_jtma(TransverseMomentum ks, TransverseMomentum ki,
                      const JtmaParams& p);

// ---------------------------------------------------------------------------
// Holograms and quadrature

/// Complex transmission function over the momentum plane, |value| <= 1.
/// Pixel-type masks additionally carry their support as weighted disjoint
/// discs, which lets the quadrature integrate each disc in polar coordinates
/// instead of hunting for small indicators inside the global box.
struct Hologram {
    using Fn = std::function<Complex(TransverseMomentum)>;

    struct SupportDisc {
        Vec2 center;
        double radius = 0.0;
        Complex coeff;
    };

    Fn evaluate;
    std::vector<SupportDisc> support;  // empty: support unknown, use the box

    Hologram() = default;
    Hologram(Fn f) : evaluate(std::move(f)) {}  // general hologram
    Complex operator()(TransverseMomentum k) const { return evaluate(k); }
};

/// Indicator of pixel m. With mirrored = true the disc sits at -center:
/// the idler-arm convention, pairing each signal pixel with the
/// anti-correlated momentum region.
Hologram pixel_indicator(const PixelLayout& layout, int m, bool mirrored);

/// Sum of pixel indicators weighted by `coeffs` (one per pixel).
Hologram superposition_hologram(const PixelLayout& layout,
                                const Eigen::VectorXcd& coeffs, bool mirrored);

struct QuadratureSpec {
    int box_nodes = 32;        // Gauss-Legendre nodes per axis, 4D box path
    double box_coverage = 5.0; // box half-width in units of sigma_s
    int radial_nodes = 24;     // per-disc fast path
    int angular_nodes = 32;
    bool check_convergence = true;
    double convergence_tol = 0.01;

    void validate() const;
};

struct CoincidenceResult {
    double probability = 0.0;
    bool converged = true;
    double rel_change = 0.0;  // meaningful when check_convergence was on
};

/// |int d2ks d2ki phi_s(ks) phi_i(ki) G(ks, ki)|^2. Holograms with known
/// disc support are integrated disc-pair by disc-pair in polar coordinates;
/// general holograms go through tensor-product Gauss-Legendre over the
/// truncated box (accurate for smooth masks).
CoincidenceResult coincidence_probability(const Hologram& phi_s,
                                          const Hologram& phi_i,
                                          const JtmaParams& p,
                                          const QuadratureSpec& q);

struct AmplitudeMatrixResult {
    Eigen::MatrixXcd matrix;
    bool converged = true;
    double max_rel_change = 0.0;
};

/// A[m][n] = int_{disc m} d2ks int_{mirrored disc n} d2ki G(ks, ki), via
/// polar Gauss-Legendre over each disc. Any product-hologram coincidence
/// probability over pixel superpositions equals |sum phi_s(m) phi_i(n) A[m][n]|^2.
AmplitudeMatrixResult amplitude_matrix(const PixelLayout& layout,
                                       const JtmaParams& p,
                                       const QuadratureSpec& q);

/// Single entry of the amplitude matrix (the radius-equalization inner loop
/// only needs diagonals).
Complex amplitude_entry(const PixelLayout& layout, int m, int n,
                        const JtmaParams& p, const QuadratureSpec& q);

/// Nodes/weights of n-point Gauss-Legendre quadrature on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace pixelent
