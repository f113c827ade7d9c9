#include "pixelent/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pixelent {

namespace {

constexpr double kUmPerMm = 1e3;
constexpr double kNmPerMm = 1e6;

struct Abcd {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

Abcd element_matrix(const OpticalElement& el) {
    if (const auto* fs = std::get_if<FreeSpace>(&el)) {
        if (fs->distance_mm < 0.0)
            throw std::invalid_argument("propagate: negative free-space distance");
        return {1.0, fs->distance_mm, 0.0, 1.0};
    }
    const auto& lens = std::get<ThinLens>(el);
    if (lens.focal_mm == 0.0)
        throw std::invalid_argument("propagate: zero focal length");
    return {1.0, 0.0, -1.0 / lens.focal_mm, 1.0};
}

GaussianBeam beam_from_q(Complex q, double wavelength_nm) {
    const double rayleigh_mm = q.imag();
    if (!(rayleigh_mm > 0.0))
        throw std::runtime_error("propagate: degenerate output beam (waist at infinity)");
    const double lambda_mm = wavelength_nm / kNmPerMm;
    GaussianBeam out;
    out.wavelength_nm = wavelength_nm;
    out.waist_um = std::sqrt(rayleigh_mm * lambda_mm / std::numbers::pi) * kUmPerMm;
    out.waist_position_mm = -q.real();
    return out;
}

Complex beam_to_q(const GaussianBeam& beam) {
    if (beam.waist_um <= 0.0 || beam.wavelength_nm <= 0.0)
        throw std::invalid_argument("propagate: waist and wavelength must be positive");
    return {-beam.waist_position_mm, beam.rayleigh_range_mm()};
}

}  // namespace

double GaussianBeam::rayleigh_range_mm() const {
    const double w0_mm = waist_um / kUmPerMm;
    return std::numbers::pi * w0_mm * w0_mm / (wavelength_nm / kNmPerMm);
}

GaussianBeam propagate(const GaussianBeam& beam,
                       const std::vector<OpticalElement>& elements) {
    Complex q = beam_to_q(beam);
    for (const auto& el : elements) {
        const Abcd m = element_matrix(el);
        const Complex denom = m.c * q + m.d;
        if (std::abs(denom) < 1e-300)
            throw std::runtime_error("propagate: degenerate ABCD transform");
        q = (m.a * q + m.b) / denom;
    }
    return beam_from_q(q, beam.wavelength_nm);
}

std::vector<GaussianBeam> propagation_table(
    const GaussianBeam& beam, const std::vector<OpticalElement>& elements) {
    std::vector<GaussianBeam> states;
    states.reserve(elements.size());
    Complex q = beam_to_q(beam);
    for (const auto& el : elements) {
        const Abcd m = element_matrix(el);
        const Complex denom = m.c * q + m.d;
        if (std::abs(denom) < 1e-300)
            throw std::runtime_error("propagate: degenerate ABCD transform");
        q = (m.a * q + m.b) / denom;
        states.push_back(beam_from_q(q, beam.wavelength_nm));
    }
    return states;
}

// ---------------------------------------------------------------------------

void JtmaParams::validate() const {
    if (sigma_p <= 0.0 || sigma_s <= 0.0 || sigma_c <= 0.0)
        throw std::invalid_argument("JtmaParams: all bandwidths must be positive");
    if (sigma_p >= sigma_s)
        throw std::invalid_argument(
            "JtmaParams: sigma_p must be below sigma_s (minor vs major axis)");
    if (sinc_prefactor <= 0.0)
        throw std::invalid_argument("JtmaParams: sinc prefactor must be positive");
}

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

double jtma_amplitude(TransverseMomentum ks, TransverseMomentum ki,
                      const JtmaParams& p) {
    const double sum_sq = (ks.kx + ki.kx) * (ks.kx + ki.kx) +
                          (ks.ky + ki.ky) * (ks.ky + ki.ky);
    const double diff_sq = (ks.kx - ki.kx) * (ks.kx - ki.kx) +
                           (ks.ky - ki.ky) * (ks.ky - ki.ky);
    return std::exp(-0.5 * sum_sq / (p.sigma_p * p.sigma_p)) *
           sinc(p.sinc_prefactor * diff_sq / (p.sigma_s * p.sigma_s));
}

double collected_jtma(TransverseMomentum ks, TransverseMomentum ki,
                      const JtmaParams& p) {
    const double ks_sq = ks.kx * ks.kx + ks.ky * ks.ky;
    const double ki_sq = ki.kx * ki.kx + ki.ky * ki.ky;
    return std::exp(-0.5 * (ks_sq + ki_sq) / (p.sigma_c * p.sigma_c)) *
           jtma_amplitude(ks, ki, p);
}

// ---------------------------------------------------------------------------

Hologram pixel_indicator(const PixelLayout& layout, int m, bool mirrored) {
    if (m < 0 || m >= layout.d)
        throw std::invalid_argument("pixel_indicator: index out of range");
    const Vec2 c = mirrored ? -layout.centers[m] : layout.centers[m];
    const double r = layout.radii[m];
    Hologram h{[c, r_sq = r * r](TransverseMomentum k) -> Complex {
        const double dx = k.kx - c.x, dy = k.ky - c.y;
        return dx * dx + dy * dy <= r_sq ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    }};
    h.support.push_back({c, r, {1.0, 0.0}});
    return h;
}

Hologram superposition_hologram(const PixelLayout& layout,
                                const Eigen::VectorXcd& coeffs, bool mirrored) {
    if (coeffs.size() != layout.d)
        throw std::invalid_argument("superposition_hologram: coefficient count");
    std::vector<Hologram::SupportDisc> discs;
    discs.reserve(layout.d);
    for (int m = 0; m < layout.d; ++m)
        discs.push_back({mirrored ? -layout.centers[m] : layout.centers[m],
                         layout.radii[m], coeffs[m]});
    Hologram h{[discs](TransverseMomentum k) -> Complex {
        for (const auto& d : discs) {  // pixels are disjoint
            const double dx = k.kx - d.center.x, dy = k.ky - d.center.y;
            if (dx * dx + dy * dy <= d.radius * d.radius) return d.coeff;
        }
        return {0.0, 0.0};
    }};
    h.support = std::move(discs);
    return h;
}

void QuadratureSpec::validate() const {
    if (box_nodes < 8)
        throw std::invalid_argument("QuadratureSpec: need >= 8 nodes per axis");
    if (box_coverage < 5.0)
        throw std::invalid_argument("QuadratureSpec: box must cover >= 5 sigma_s");
    if (radial_nodes < 8 || angular_nodes < 8)
        throw std::invalid_argument("QuadratureSpec: need >= 8 disc nodes per axis");
    if (convergence_tol <= 0.0)
        throw std::invalid_argument("QuadratureSpec: convergence tol must be positive");
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    // Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = mid - half * nodes[i];
        weights[i] *= half;
    }
}

namespace {

// Weighted sample points covering one disc (polar Gauss-Legendre in r,
// uniform in theta; uniform angular weights are spectrally accurate for the
// periodic direction).
struct DiscQuadrature {
    std::vector<TransverseMomentum> points;
    std::vector<double> weights;
};

DiscQuadrature disc_quadrature(Vec2 center, double radius, int n_r, int n_theta) {
    std::vector<double> r_nodes, r_weights;
    gauss_legendre(n_r, 0.0, radius, r_nodes, r_weights);
    DiscQuadrature q;
    q.points.reserve(static_cast<std::size_t>(n_r) * n_theta);
    q.weights.reserve(q.points.capacity());
    const double w_theta = 2.0 * std::numbers::pi / n_theta;
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const double ang = w_theta * j;
            q.points.push_back({center.x + r_nodes[i] * std::cos(ang),
                                center.y + r_nodes[i] * std::sin(ang)});
            q.weights.push_back(r_weights[i] * r_nodes[i] * w_theta);
        }
    }
    return q;
}

Complex disc_pair_integral(Vec2 cs, double rs, Vec2 ci, double ri,
                           const JtmaParams& p, int n_r, int n_theta) {
    DiscQuadrature qs = disc_quadrature(cs, rs, n_r, n_theta);
    DiscQuadrature qi = disc_quadrature(ci, ri, n_r, n_theta);
    // Fold each arm's collection Gaussian into its quadrature weights; the
    // inner loop then only evaluates the joint factor.
    const double inv_2cc = 0.5 / (p.sigma_c * p.sigma_c);
    for (std::size_t a = 0; a < qs.points.size(); ++a)
        qs.weights[a] *= std::exp(-(qs.points[a].kx * qs.points[a].kx +
                                    qs.points[a].ky * qs.points[a].ky) *
                                  inv_2cc);
    for (std::size_t b = 0; b < qi.points.size(); ++b)
        qi.weights[b] *= std::exp(-(qi.points[b].kx * qi.points[b].kx +
                                    qi.points[b].ky * qi.points[b].ky) *
                                  inv_2cc);
    const double inv_2pp = 0.5 / (p.sigma_p * p.sigma_p);
    const double sinc_scale = p.sinc_prefactor / (p.sigma_s * p.sigma_s);
    double sum = 0.0;
    for (std::size_t a = 0; a < qs.points.size(); ++a) {
        const TransverseMomentum ks = qs.points[a];
        double inner = 0.0;
        for (std::size_t b = 0; b < qi.points.size(); ++b) {
            const TransverseMomentum ki = qi.points[b];
            const double sum_sq = (ks.kx + ki.kx) * (ks.kx + ki.kx) +
                                  (ks.ky + ki.ky) * (ks.ky + ki.ky);
            const double diff_sq = (ks.kx - ki.kx) * (ks.kx - ki.kx) +
                                   (ks.ky - ki.ky) * (ks.ky - ki.ky);
            inner += qi.weights[b] * std::exp(-sum_sq * inv_2pp) *
                     sinc(diff_sq * sinc_scale);
        }
        sum += qs.weights[a] * inner;
    }
    return {sum, 0.0};
}

Complex box_integral(const Hologram& phi_s, const Hologram& phi_i,
                     const JtmaParams& p, int n, double half_width) {
    std::vector<double> nodes, weights;
    gauss_legendre(n, -half_width, half_width, nodes, weights);
    // Tabulate the idler-plane factor once; the 4D sum then factorizes into
    // an outer signal-plane loop over a precomputed idler grid.
    Complex total{0.0, 0.0};
    std::vector<Complex> phi_i_grid(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            phi_i_grid[static_cast<std::size_t>(a) * n + b] =
                phi_i({nodes[a], nodes[b]}) * (weights[a] * weights[b]);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const TransverseMomentum ks{nodes[a], nodes[b]};
            const Complex fs = phi_s(ks) * (weights[a] * weights[b]);
            if (fs == Complex{0.0, 0.0}) continue;
            Complex inner{0.0, 0.0};
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e) {
                    const Complex fi = phi_i_grid[static_cast<std::size_t>(c) * n + e];
                    if (fi == Complex{0.0, 0.0}) continue;
                    inner += fi * collected_jtma(ks, {nodes[c], nodes[e]}, p);
                }
            total += fs * inner;
        }
    }
    return total;
}

}  // namespace

namespace {

// Amplitude for disc-support holograms: sum of weighted disc-pair integrals.
Complex disc_support_amplitude(const Hologram& phi_s, const Hologram& phi_i,
                               const JtmaParams& p, int n_r, int n_theta) {
    Complex amp{0.0, 0.0};
    for (const auto& ds : phi_s.support) {
        if (ds.coeff == Complex{0.0, 0.0}) continue;
        for (const auto& di : phi_i.support) {
            if (di.coeff == Complex{0.0, 0.0}) continue;
            amp += ds.coeff * di.coeff *
                   disc_pair_integral(ds.center, ds.radius, di.center, di.radius,
                                      p, n_r, n_theta);
        }
    }
    return amp;
}

}  // namespace

CoincidenceResult coincidence_probability(const Hologram& phi_s,
                                          const Hologram& phi_i,
                                          const JtmaParams& p,
                                          const QuadratureSpec& q) {
    p.validate();
    q.validate();
    const bool disc_path = !phi_s.support.empty() && !phi_i.support.empty();
    const auto amplitude = [&](int refine) -> Complex {
        if (disc_path)
            return disc_support_amplitude(phi_s, phi_i, p, refine * q.radial_nodes,
                                          refine * q.angular_nodes);
        return box_integral(phi_s, phi_i, p, refine * q.box_nodes,
                            q.box_coverage * p.sigma_s);
    };
    CoincidenceResult result;
    result.probability = std::norm(amplitude(1));
    if (q.check_convergence) {
        const double p2 = std::norm(amplitude(2));
        const double scale = std::max({result.probability, p2, 1e-300});
        result.rel_change = std::abs(p2 - result.probability) / scale;
        result.converged = result.rel_change <= q.convergence_tol;
        result.probability = p2;  // keep the finer estimate
    }
    return result;
}

Complex amplitude_entry(const PixelLayout& layout, int m, int n,
                        const JtmaParams& p, const QuadratureSpec& q) {
    return disc_pair_integral(layout.centers[m], layout.radii[m],
                              -layout.centers[n], layout.radii[n], p,
                              q.radial_nodes, q.angular_nodes);
}

AmplitudeMatrixResult amplitude_matrix(const PixelLayout& layout,
                                       const JtmaParams& p,
                                       const QuadratureSpec& q) {
    p.validate();
    q.validate();
    layout.validate();  // rejects overlapping pixels
    const int d = layout.d;
    AmplitudeMatrixResult result;
    result.matrix.resize(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            result.matrix(m, n) = amplitude_entry(layout, m, n, p, q);
    if (q.check_convergence) {
        QuadratureSpec fine = q;
        fine.radial_nodes *= 2;
        fine.angular_nodes *= 2;
        const double scale = result.matrix.cwiseAbs().maxCoeff();
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                const Complex refined = amplitude_entry(layout, m, n, p, fine);
                const double change =
                    std::abs(refined - result.matrix(m, n)) /
                    std::max(std::abs(refined), scale * 1e-6);
                result.max_rel_change = std::max(result.max_rel_change, change);
                result.matrix(m, n) = refined;
            }
        result.converged = result.max_rel_change <= q.convergence_tol;
    }
    return result;
}

}  // namespace pixelent
