#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pixelent/mub.hpp"
#include "pixelent/state.hpp"

// Certification mathematics: fidelity decomposition in a WF basis, the
// two-MUB lower bound, the standard+WF bounds (both basis designations), the
// exact fidelity from a complete MUB set, Schmidt-number thresholds, and the
// entanglement-of-formation bound from conditional entropies.

namespace pixelent {

struct FidelityResult {
    enum class Kind { exact, lower_bound };
    double value = 0.0;  // lower bounds may be negative for noisy data
    Kind kind = Kind::lower_bound;
    std::vector<BasisSpec> bases_used;
};

/// F1 = (1/d) * trace of one basis-pair probability matrix.
double f1(const Eigen::MatrixXd& probs);

/// Fidelity lower bound from two WF bases k and k' with gcd(k'-k, d) = 1:
/// basis k supplies the 1/d-weighted diagonal and the cross terms, basis k'
/// its plain diagonal sum. The cross sum runs over the O(d^3) quadruples
/// with (m - m' - n + n') = 0 mod d; n' is eliminated in closed form.
FidelityResult fidelity_lower_bound_two_wf(const Eigen::MatrixXd& probs_k,
                                           const Eigen::MatrixXd& probs_kp,
                                           int k, int kp, int d);

/// Fidelity lower bound from the standard basis plus WF basis k. Both basis
/// designations (which matrix supplies diagonal vs cross terms) are valid
/// bounds; the larger one is returned.
FidelityResult fidelity_lower_bound_standard_wf(const Eigen::MatrixXd& probs_std,
                                                const Eigen::MatrixXd& probs_k,
                                                int k, int d);

/// Exact fidelity from the standard basis plus all d WF bases of an odd
/// prime dimension:
///   F = (1/d) tr(P_std) + (sum_k tr(P_k) - 1) / d.
/// Summing the basis-k cross coefficients over all k kills every cross term
/// for prime d, which makes the bound tight.
FidelityResult fidelity_exact_all_mubs(
    const Eigen::MatrixXd& probs_std,
    const std::vector<Eigen::MatrixXd>& probs_wf, int d);

/// B_r: the maximal fidelity to `target` reachable by Schmidt-number-r
/// states, i.e. the sum of the r largest squared Schmidt coefficients.
double schmidt_threshold(const TargetState& target, int r);

/// Largest r + 1 with F > B_r, clamped to [1, d]. Strict inequality: when
/// F * d is an exact integer only r itself is certified.
int certify_dimension(double fidelity, const TargetState& target);

struct EofBound {
    double value = 0.0;  // clamped at 0
    double raw = 0.0;
};

/// Entanglement-of-formation bound log2(d) - H(A1|B1) - H(A2|B2) from two
/// MUB probability matrices, H(A|B) = H(joint) - H(first-index marginal).
/// `transpose_marginal` switches to the second-index marginal instead.
EofBound eof_bound(const Eigen::MatrixXd& probs_1, const Eigen::MatrixXd& probs_2,
                   int d, bool transpose_marginal = false);

}  // namespace pixelent
