#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "pixelent/numtheory.hpp"

// Wootters-Fields mutually unbiased bases and the coefficients gamma_tilde
// and c that control the witness cross-term bound. Basis vector m-components
// are (1/sqrt(d)) * omega^(j*m + k*m^2) with omega the principal d-th root of
// unity; all exponents are reduced mod d in integer arithmetic before any
// trigonometry, so large d stay exact.

namespace pixelent {

/// Label (d, k) of one Wootters-Fields basis, k in [0, d).
struct WfBasis {
    int d = 0;
    int k = 0;
};

/// A measurement basis for one arm: the pixel (standard) basis or a WF basis,
/// optionally conjugated componentwise (the idler-arm |j~*> convention).
struct BasisSpec {
    enum class Kind { standard, wootters_fields };
    Kind kind = Kind::standard;
    int k = 0;
    bool conjugate = false;

    static BasisSpec standard_basis(bool conjugate = false) {
        return {Kind::standard, 0, conjugate};
    }
    static BasisSpec wf(int k, bool conjugate = false) {
        return {Kind::wootters_fields, k, conjugate};
    }
    bool is_wf() const { return kind == Kind::wootters_fields; }
    bool operator==(const BasisSpec&) const = default;
};

/// "standard" or "wf:<k>"; the conjugation flag travels separately.
std::string to_string(const BasisSpec& spec);
/// Parses the to_string format. Throws std::invalid_argument on bad input.
BasisSpec parse_basis_spec(const std::string& text);

/// The j-th vector of a WF basis; conjugate = true gives |j~*>.
/// Throws if j is out of range or the basis label is invalid.
Eigen::VectorXcd wf_vector(const WfBasis& basis, int j, bool conjugate = false);

/// All d basis vectors as matrix columns. The standard basis is the identity.
Eigen::MatrixXcd basis_matrix(const BasisSpec& spec, int d);

/// Cross-term coefficient: 1/d when (m - mp - n + np) = 0 (mod d), else 0.
double gamma_tilde(int m, int n, int mp, int np, int d);

/// c_{m n m' n'} = sum_j omega^(j(m-m'-n+n') + k(m^2-m'^2-n^2+n'^2)),
/// by direct summation over j.
Complex coeff_c_standard(int m, int n, int mp, int np, int k, int d);

/// Two-WF-basis coefficient c^(k,k') in closed form,
/// omega^(psi(k'-k)(m'^2-m^2-n'^2+n^2)) * sum_j omega^(psi(k'-k)*2j(m-m'-n+n')).
/// Requires odd d and gcd(k'-k, d) = 1 (throws otherwise, including k = k').
Complex coeff_c_two_wf(int m, int n, int mp, int np, int k, int kp, int d);

/// True iff A and B (columns = vectors) are each orthonormal within tol and
/// every cross overlap has modulus 1/sqrt(d) within tol.
bool verify_mutually_unbiased(const Eigen::MatrixXcd& a,
                              const Eigen::MatrixXcd& b, double tol);

/// gcd(k' - k, d) = 1, the condition under which two WF bases are mutually
/// unbiased (automatic for prime d and k != k'; the constraint that matters
/// for composite odd d such as 51).
bool wf_pair_unbiased(int k, int kp, int d);

}  // namespace pixelent
