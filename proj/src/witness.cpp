#include "pixelent/witness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pixelent {

namespace {

void check_probability_matrix(const Eigen::MatrixXd& probs, int d,
                              const char* who) {
    if (probs.rows() != d || probs.cols() != d)
        throw std::invalid_argument(std::string(who) + ": expected a " +
                                    std::to_string(d) + "x" + std::to_string(d) +
                                    " matrix");
    if ((probs.array() < -1e-9).any())
        throw std::invalid_argument(std::string(who) + ": negative probabilities");
    if (std::abs(probs.sum() - 1.0) > 1e-6)
        throw std::invalid_argument(std::string(who) +
                                    ": probabilities must sum to 1");
}

// Cross-term penalty of the fidelity bounds: the quadruple sum restricted to
// (m - m' - n + n') = 0 mod d, with gamma_tilde = 1/d on every surviving
// term. Fixing (m, n, m') determines n', so the scan is O(d^3) instead of
// the naive O(d^4).
double cross_term_sum(const Eigen::MatrixXd& probs, int d) {
    double sum = 0.0;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            if (n == m) continue;
            const double p_mn = probs(m, n);
            if (p_mn <= 0.0) continue;
            const double sqrt_mn = std::sqrt(p_mn);
            for (int mp = 0; mp < d; ++mp) {
                if (mp == m) continue;
                const int np = (n + mp - m + d) % d;
                // n' != n and n' != m' follow from m' != m and n != m.
                const double p = probs(mp, np);
                if (p > 0.0) sum += sqrt_mn * std::sqrt(p);
            }
        }
    }
    return sum / d;
}

// Shared bound shape: `probs_designated` supplies the 1/d-weighted diagonal
// and the cross terms; `probs_unbiased` its plain diagonal sum.
double bound_value(const Eigen::MatrixXd& probs_designated,
                   const Eigen::MatrixXd& probs_unbiased, int d) {
    return probs_designated.trace() / d + probs_unbiased.trace() - 1.0 / d -
           cross_term_sum(probs_designated, d);
}

double shannon_entropy_bits(const Eigen::ArrayXXd& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double v = p(i);
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

bool is_odd_prime(int d) {
    if (d < 3 || d % 2 == 0) return false;
    for (int f = 3; f * f <= d; f += 2)
        if (d % f == 0) return false;
    return true;
}

}  // namespace

double f1(const Eigen::MatrixXd& probs) {
    if (probs.rows() != probs.cols() || probs.rows() == 0)
        throw std::invalid_argument("f1: square matrix required");
    return probs.trace() / static_cast<double>(probs.rows());
}

FidelityResult fidelity_lower_bound_two_wf(const Eigen::MatrixXd& probs_k,
                                           const Eigen::MatrixXd& probs_kp,
                                           int k, int kp, int d) {
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("fidelity_lower_bound_two_wf: d must be odd");
    if (!wf_pair_unbiased(k, kp, d))
        throw std::invalid_argument(
            "fidelity_lower_bound_two_wf: bases k=" + std::to_string(k) +
            ", k'=" + std::to_string(kp) + " are not mutually unbiased in d=" +
            std::to_string(d));
    check_probability_matrix(probs_k, d, "fidelity_lower_bound_two_wf");
    check_probability_matrix(probs_kp, d, "fidelity_lower_bound_two_wf");

    FidelityResult result;
    result.value = bound_value(probs_k, probs_kp, d);
    result.kind = FidelityResult::Kind::lower_bound;
    result.bases_used = {BasisSpec::wf(k), BasisSpec::wf(kp)};
    return result;
}

FidelityResult fidelity_lower_bound_standard_wf(const Eigen::MatrixXd& probs_std,
                                                const Eigen::MatrixXd& probs_k,
                                                int k, int d) {
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("fidelity_lower_bound_standard_wf: d must be odd");
    if (k < 0 || k >= d)
        throw std::invalid_argument("fidelity_lower_bound_standard_wf: bad k");
    check_probability_matrix(probs_std, d, "fidelity_lower_bound_standard_wf");
    check_probability_matrix(probs_k, d, "fidelity_lower_bound_standard_wf");

    const double direct = bound_value(probs_std, probs_k, d);
    const double exchanged = bound_value(probs_k, probs_std, d);
    FidelityResult result;
    result.value = std::max(direct, exchanged);
    result.kind = FidelityResult::Kind::lower_bound;
    result.bases_used = {BasisSpec::standard_basis(), BasisSpec::wf(k)};
    return result;
}

FidelityResult fidelity_exact_all_mubs(
    const Eigen::MatrixXd& probs_std,
    const std::vector<Eigen::MatrixXd>& probs_wf, int d) {
    if (!is_odd_prime(d))
        throw std::invalid_argument(
            "fidelity_exact_all_mubs: d must be an odd prime");
    if (probs_wf.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument(
            "fidelity_exact_all_mubs: need all " + std::to_string(d) +
            " WF bases, got " + std::to_string(probs_wf.size()));
    check_probability_matrix(probs_std, d, "fidelity_exact_all_mubs");
    double wf_diag = 0.0;
    for (const auto& probs : probs_wf) {
        check_probability_matrix(probs, d, "fidelity_exact_all_mubs");
        wf_diag += probs.trace();
    }

    FidelityResult result;
    result.value = probs_std.trace() / d + (wf_diag - 1.0) / d;
    result.kind = FidelityResult::Kind::exact;
    result.bases_used.push_back(BasisSpec::standard_basis());
    for (int k = 0; k < d; ++k) result.bases_used.push_back(BasisSpec::wf(k));
    return result;
}

double schmidt_threshold(const TargetState& target, int r) {
    target.validate();
    if (r < 0 || r > target.d)
        throw std::invalid_argument("schmidt_threshold: r outside [0, d]");
    double sum = 0.0;
    for (int i = 0; i < r; ++i) sum += target.schmidt[i] * target.schmidt[i];
    return sum;
}

int certify_dimension(double fidelity, const TargetState& target) {
    target.validate();
    // Strict inequality with a margin that absorbs threshold rounding: a
    // boundary fidelity (F*d integer for the maximally entangled target)
    // certifies only r, never r+1.
    constexpr double boundary = 1e-12;
    int best = 0;
    double partial = 0.0;  // B_r accumulated incrementally
    for (int r = 0; r <= target.d; ++r) {
        if (fidelity > partial + boundary) best = r;
        if (r < target.d) partial += target.schmidt[r] * target.schmidt[r];
    }
    const int d_ent = best + 1;
    return std::min(std::max(d_ent, 1), target.d);
}

EofBound eof_bound(const Eigen::MatrixXd& probs_1, const Eigen::MatrixXd& probs_2,
                   int d, bool transpose_marginal) {
    check_probability_matrix(probs_1, d, "eof_bound");
    check_probability_matrix(probs_2, d, "eof_bound");

    const auto conditional = [&](const Eigen::MatrixXd& probs) {
        const Eigen::ArrayXXd joint = probs.array().max(0.0);
        Eigen::ArrayXd marginal;
        if (transpose_marginal)
            marginal = joint.colwise().sum().transpose();
        else
            marginal = joint.rowwise().sum();
        return shannon_entropy_bits(joint) - shannon_entropy_bits(marginal);
    };

    EofBound bound;
    bound.raw = std::log2(static_cast<double>(d)) - conditional(probs_1) -
                conditional(probs_2);
    bound.value = std::max(0.0, bound.raw);
    return bound;
}

}  // namespace pixelent
