#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "pixelent/mub.hpp"

// The effective two-qudit state and its measurement statistics: amplitude
// matrix -> state, isotropic noise, basis-pair outcome probability matrices,
// count normalization, and synthetic Poisson count matrices.

namespace pixelent {

using CountsMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// d x d coincidence counts for one basis-pair setting.
struct CountMatrix {
    int d = 0;
    BasisSpec basis_a;
    BasisSpec basis_b;  // carries the arm-B conjugation flag
    CountsMatrix counts;
    std::optional<double> acquisition_time_s;

    void validate() const;
    std::int64_t total() const { return counts.sum(); }
};

/// Target state sum_n lambda_n |nn> with descending Schmidt coefficients.
struct TargetState {
    int d = 0;
    Eigen::VectorXd schmidt;  // descending, sum of squares = 1

    static TargetState maximally_entangled(int d);
    void validate() const;
};

/// Two-qudit state, either a pure d^2-vector mixed isotropically with weight
/// `noise` (closed-form probabilities, any d) or a dense d^2 x d^2 density
/// matrix (kept for d <= 31; larger d would need gigabytes).
class TwoQuditState {
public:
    static TwoQuditState pure(int d, Eigen::VectorXcd coefficients);
    static TwoQuditState mixed(int d, Eigen::MatrixXcd density);

    int dim() const { return d_; }
    bool is_pure() const { return density_.size() == 0 && noise_ == 0.0; }
    double isotropic_noise() const { return noise_; }

    /// Coefficient vector of the pure component (throws for dense states).
    const Eigen::VectorXcd& pure_coefficients() const;

    /// Dense density operator; available for any representation with d <= 31.
    Eigen::MatrixXcd to_density() const;

    /// Fidelity <phi+|rho|phi+> to the maximally entangled state.
    double fidelity_to_max_entangled() const;

    friend TwoQuditState apply_isotropic_noise(const TwoQuditState& s, double p);
    friend Eigen::MatrixXd outcome_probabilities(const TwoQuditState& s,
                                                 const BasisSpec& basis_a,
                                                 const BasisSpec& basis_b);

private:
    TwoQuditState() = default;
    int d_ = 0;
    Eigen::VectorXcd pure_;     // length d^2 when set
    double noise_ = 0.0;        // isotropic admixture on top of pure_
    Eigen::MatrixXcd density_;  // d^2 x d^2 when set
};

/// Normalizes the collected amplitude matrix into pure-state coefficients
/// c_mn = A[m][n] / ||A||_F. Throws on a zero matrix.
TwoQuditState pure_state_from_amplitudes(const Eigen::MatrixXcd& amplitudes);

/// rho' = (1 - p) rho + p I/d^2.
TwoQuditState apply_isotropic_noise(const TwoQuditState& s, double p);

/// Entry (i, j) = <a_i b_j| rho |a_i b_j> for the basis pair; sums to 1.
Eigen::MatrixXd outcome_probabilities(const TwoQuditState& s,
                                      const BasisSpec& basis_a,
                                      const BasisSpec& basis_b);

/// counts[i][j] ~ Poisson(total_pairs * probs[i][j]), deterministic per seed.
CountMatrix simulate_counts(const Eigen::MatrixXd& probs, double total_pairs,
                            std::uint64_t seed, const BasisSpec& basis_a,
                            const BasisSpec& basis_b);

/// Normalized probabilities N_ij / sum N; throws on all-zero counts.
Eigen::MatrixXd counts_to_probs(const CountMatrix& c);

}  // namespace pixelent
