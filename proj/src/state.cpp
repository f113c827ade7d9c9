#include "pixelent/state.hpp"

#include <cmath>
#include <stdexcept>

#include "pixelent/rng.hpp"

namespace pixelent {

void CountMatrix::validate() const {
    if (d <= 0 || counts.rows() != d || counts.cols() != d)
        throw std::invalid_argument("CountMatrix: size mismatch");
    if ((counts.array() < 0).any())
        throw std::invalid_argument("CountMatrix: negative counts");
}

TargetState TargetState::maximally_entangled(int d) {
    TargetState t;
    t.d = d;
    t.schmidt = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    return t;
}

void TargetState::validate() const {
    if (d <= 0 || schmidt.size() != d)
        throw std::invalid_argument("TargetState: size mismatch");
    if ((schmidt.array() < 0).any())
        throw std::invalid_argument("TargetState: negative Schmidt coefficient");
    for (int i = 1; i < d; ++i)
        if (schmidt[i] > schmidt[i - 1] + 1e-12)
            throw std::invalid_argument("TargetState: coefficients must descend");
    if (std::abs(schmidt.squaredNorm() - 1.0) > 1e-9)
        throw std::invalid_argument("TargetState: squared coefficients must sum to 1");
}

TwoQuditState TwoQuditState::pure(int d, Eigen::VectorXcd coefficients) {
    if (d <= 0 || coefficients.size() != static_cast<Eigen::Index>(d) * d)
        throw std::invalid_argument("TwoQuditState::pure: need a d^2 vector");
    const double norm = coefficients.norm();
    if (norm < 1e-300)
        throw std::invalid_argument("TwoQuditState::pure: zero state vector");
    TwoQuditState s;
    s.d_ = d;
    s.pure_ = coefficients / norm;
    return s;
}

TwoQuditState TwoQuditState::mixed(int d, Eigen::MatrixXcd density) {
    const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
    if (d <= 0 || density.rows() != dim || density.cols() != dim)
        throw std::invalid_argument("TwoQuditState::mixed: need a d^2 x d^2 matrix");
    if ((density - density.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("TwoQuditState::mixed: not Hermitian");
    if (std::abs(density.trace().real() - 1.0) > 1e-10 ||
        std::abs(density.trace().imag()) > 1e-10)
        throw std::invalid_argument("TwoQuditState::mixed: trace != 1");
    TwoQuditState s;
    s.d_ = d;
    s.density_ = std::move(density);
    return s;
}

const Eigen::VectorXcd& TwoQuditState::pure_coefficients() const {
    if (pure_.size() == 0)
        throw std::logic_error("TwoQuditState: no pure representation");
    return pure_;
}

Eigen::MatrixXcd TwoQuditState::to_density() const {
    if (density_.size() != 0) return density_;
    if (d_ > 31)
        throw std::logic_error(
            "TwoQuditState: dense density operator limited to d <= 31");
    const Eigen::Index dim = static_cast<Eigen::Index>(d_) * d_;
    Eigen::MatrixXcd rho = (1.0 - noise_) * (pure_ * pure_.adjoint());
    rho += (noise_ / static_cast<double>(dim)) *
           Eigen::MatrixXcd::Identity(dim, dim);
    return rho;
}

double TwoQuditState::fidelity_to_max_entangled() const {
    const double dd = static_cast<double>(d_) * d_;
    if (density_.size() != 0) {
        Complex acc{0.0, 0.0};
        for (int m = 0; m < d_; ++m)
            for (int n = 0; n < d_; ++n)
                acc += density_(static_cast<Eigen::Index>(m) * d_ + m,
                                static_cast<Eigen::Index>(n) * d_ + n);
        return acc.real() / d_;
    }
    Complex overlap{0.0, 0.0};
    for (int m = 0; m < d_; ++m)
        overlap += pure_[static_cast<Eigen::Index>(m) * d_ + m];
    const double pure_fid = std::norm(overlap) / d_;
    return (1.0 - noise_) * pure_fid + noise_ / dd;
}

TwoQuditState pure_state_from_amplitudes(const Eigen::MatrixXcd& amplitudes) {
    if (amplitudes.rows() != amplitudes.cols() || amplitudes.rows() == 0)
        throw std::invalid_argument("pure_state_from_amplitudes: square matrix required");
    const int d = static_cast<int>(amplitudes.rows());
    Eigen::VectorXcd coeff(static_cast<Eigen::Index>(d) * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            coeff[static_cast<Eigen::Index>(m) * d + n] = amplitudes(m, n);
    return TwoQuditState::pure(d, std::move(coeff));
}

TwoQuditState apply_isotropic_noise(const TwoQuditState& s, double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("apply_isotropic_noise: p outside [0, 1]");
    TwoQuditState out = s;
    if (s.density_.size() != 0) {
        const Eigen::Index dim = s.density_.rows();
        out.density_ = (1.0 - p) * s.density_;
        out.density_ += (p / static_cast<double>(dim)) *
                        Eigen::MatrixXcd::Identity(dim, dim);
        return out;
    }
    // (1-p)[(1-q)|psi><psi| + q I] + p I stays in the pure + noise family.
    out.noise_ = 1.0 - (1.0 - p) * (1.0 - s.noise_);
    return out;
}

Eigen::MatrixXd outcome_probabilities(const TwoQuditState& s,
                                      const BasisSpec& basis_a,
                                      const BasisSpec& basis_b) {
    const int d = s.d_;
    const Eigen::MatrixXcd va = basis_matrix(basis_a, d);
    const Eigen::MatrixXcd vb = basis_matrix(basis_b, d);
    Eigen::MatrixXd probs(d, d);

    if (s.density_.size() == 0) {
        // <a_i b_j | psi> = a_i^dagger Psi conj(b_j) with Psi the d x d
        // coefficient matrix.
        Eigen::MatrixXcd psi(d, d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                psi(m, n) = s.pure_[static_cast<Eigen::Index>(m) * d + n];
        const Eigen::MatrixXcd overlap = va.adjoint() * psi * vb.conjugate();
        const double dd = static_cast<double>(d) * d;
        probs = (1.0 - s.noise_) * overlap.cwiseAbs2().array() + s.noise_ / dd;
        return probs;
    }

    // diag(U^dagger rho U) with U = va (x) vb, assembled column-blockwise.
    const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
    Eigen::MatrixXcd u(dim, dim);
    for (int m = 0; m < d; ++m)
        for (int i = 0; i < d; ++i)
            u.block(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(i) * d,
                    d, d) = va(m, i) * vb;
    const Eigen::MatrixXcd transformed = u.adjoint() * (s.density_ * u);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            probs(i, j) = transformed(static_cast<Eigen::Index>(i) * d + j,
                                      static_cast<Eigen::Index>(i) * d + j)
                              .real();
    return probs;
}

CountMatrix simulate_counts(const Eigen::MatrixXd& probs, double total_pairs,
                            std::uint64_t seed, const BasisSpec& basis_a,
                            const BasisSpec& basis_b) {
    if (probs.rows() != probs.cols())
        throw std::invalid_argument("simulate_counts: square matrix required");
    if ((probs.array() < -1e-12).any())
        throw std::invalid_argument("simulate_counts: negative probabilities");
    if (total_pairs < 0.0)
        throw std::invalid_argument("simulate_counts: negative pair count");
    const int d = static_cast<int>(probs.rows());
    CountMatrix cm;
    cm.d = d;
    cm.basis_a = basis_a;
    cm.basis_b = basis_b;
    cm.counts.resize(d, d);
    Pcg32 rng(seed);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            cm.counts(i, j) =
                poisson_sample(rng, total_pairs * std::max(probs(i, j), 0.0));
    return cm;
}

Eigen::MatrixXd counts_to_probs(const CountMatrix& c) {
    c.validate();
    const std::int64_t total = c.total();
    if (total <= 0)
        throw std::invalid_argument("counts_to_probs: all-zero count matrix");
    return c.counts.cast<double>() / static_cast<double>(total);
}

}  // namespace pixelent
