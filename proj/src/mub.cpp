#include "pixelent/mub.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pixelent {

std::string to_string(const BasisSpec& spec) {
    return spec.is_wf() ? "wf:" + std::to_string(spec.k) : "standard";
}

BasisSpec parse_basis_spec(const std::string& text) {
    if (text == "standard") return BasisSpec::standard_basis();
    if (text.rfind("wf:", 0) == 0) {
        std::size_t pos = 0;
        const int k = std::stoi(text.substr(3), &pos);
        if (pos == text.size() - 3 && k >= 0) return BasisSpec::wf(k);
    }
    throw std::invalid_argument("basis spec must be 'standard' or 'wf:<k>', got '" +
                                text + "'");
}

Eigen::VectorXcd wf_vector(const WfBasis& basis, int j, bool conjugate) {
    const std::int64_t d = basis.d;
    if (d < 2) throw std::invalid_argument("wf_vector: d must be >= 2");
    if (basis.k < 0 || basis.k >= d)
        throw std::invalid_argument("wf_vector: basis index k out of range");
    if (j < 0 || j >= d)
        throw std::invalid_argument("wf_vector: element index j out of range");

    Eigen::VectorXcd v(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::int64_t m = 0; m < d; ++m) {
        const std::int64_t exponent = mod_floor(j * m + basis.k * (m * m % d), d);
        const Complex w = root_of_unity(exponent, d);
        v[m] = norm * (conjugate ? std::conj(w) : w);
    }
    return v;
}

Eigen::MatrixXcd basis_matrix(const BasisSpec& spec, int d) {
    if (!spec.is_wf()) {
        // Conjugation is a no-op on the real standard basis.
        return Eigen::MatrixXcd::Identity(d, d);
    }
    Eigen::MatrixXcd mat(d, d);
    for (int j = 0; j < d; ++j)
        mat.col(j) = wf_vector({d, spec.k}, j, spec.conjugate);
    return mat;
}

double gamma_tilde(int m, int n, int mp, int np, int d) {
    return mod_floor(static_cast<std::int64_t>(m) - mp - n + np, d) == 0
               ? 1.0 / d
               : 0.0;
}

Complex coeff_c_standard(int m, int n, int mp, int np, int k, int d) {
    const std::int64_t dd = d;
    const std::int64_t linear = mod_floor(static_cast<std::int64_t>(m) - mp - n + np, dd);
    const std::int64_t quad = mod_floor(
        static_cast<std::int64_t>(m) * m - static_cast<std::int64_t>(mp) * mp -
            static_cast<std::int64_t>(n) * n + static_cast<std::int64_t>(np) * np,
        dd);
    Complex sum{0.0, 0.0};
    for (std::int64_t j = 0; j < dd; ++j)
        sum += root_of_unity(j * linear + k * quad, dd);
    return sum;
}

Complex coeff_c_two_wf(int m, int n, int mp, int np, int k, int kp, int d) {
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("coeff_c_two_wf: d must be odd");
    if (!wf_pair_unbiased(k, kp, d))
        throw std::invalid_argument(
            "coeff_c_two_wf: requires gcd(k' - k, d) = 1 (and k != k')");
    const std::int64_t dd = d;
    const std::int64_t psi = psi_coefficient(mod_floor(kp - k, dd), dd);
    const std::int64_t quad = mod_floor(
        static_cast<std::int64_t>(mp) * mp - static_cast<std::int64_t>(m) * m -
            static_cast<std::int64_t>(np) * np + static_cast<std::int64_t>(n) * n,
        dd);
    const std::int64_t linear = mod_floor(static_cast<std::int64_t>(m) - mp - n + np, dd);
    // sum_j omega^(2*psi*linear*j) is d when linear = 0 (2*psi invertible), else 0.
    if (linear != 0) return {0.0, 0.0};
    return static_cast<double>(d) * root_of_unity(psi * quad, dd);
}

bool verify_mutually_unbiased(const Eigen::MatrixXcd& a,
                              const Eigen::MatrixXcd& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw std::invalid_argument("verify_mutually_unbiased: dimension mismatch");
    const auto d = a.cols();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    if (((a.adjoint() * a) - id).cwiseAbs().maxCoeff() > tol) return false;
    if (((b.adjoint() * b) - id).cwiseAbs().maxCoeff() > tol) return false;
    const double expected = 1.0 / std::sqrt(static_cast<double>(d));
    const Eigen::MatrixXd overlaps = (a.adjoint() * b).cwiseAbs();
    return (overlaps.array() - expected).abs().maxCoeff() <= tol;
}

bool wf_pair_unbiased(int k, int kp, int d) {
    const std::int64_t diff = mod_floor(static_cast<std::int64_t>(kp) - k, d);
    return diff != 0 && std::gcd(diff, static_cast<std::int64_t>(d)) == 1;
}

}  // namespace pixelent
