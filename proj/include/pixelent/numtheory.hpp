#pragma once

#include <complex>
#include <cstdint>

// Exact integer and complex-valued number theory behind the Wootters-Fields
// bases and the witness cross-term coefficients: Jacobi symbols, the
// quarter-inverse psi(a), and quadratic Gauss sums in direct-sum and closed
// form. Dimensions are machine integers (bounded well below overflow); all
// root-of-unity exponents are reduced modulo the dimension before touching
// floating point.

namespace pixelent {

using Complex = std::complex<double>;

/// exp(2*pi*i * num / den), with num reduced mod den in integer arithmetic.
Complex root_of_unity(std::int64_t num, std::int64_t den);

/// Jacobi symbol (a/n) for odd n >= 1. Zero iff gcd(a, n) > 1.
/// Throws std::invalid_argument for even or non-positive n.
int jacobi(std::int64_t a, std::int64_t n);

/// eps_d of the quadratic Gauss sum: 1 if d = 1 mod 4, i if d = 3 mod 4.
/// Throws for even d.
Complex eps_d(std::int64_t d);

/// The unique psi in [0, c) with 4*psi*a = 1 (mod c), for odd c and
/// gcd(a, c) = 1. Throws if no inverse exists.
std::int64_t psi_coefficient(std::int64_t a, std::int64_t c);

/// g(a:d) = sum_{i=0}^{d-1} exp(2*pi*i*a*i^2/d) by direct summation. Odd d.
Complex gauss_sum_direct(std::int64_t a, std::int64_t d);

/// Closed form (a/d) * eps_d * sqrt(d). Requires gcd(a, d) = 1; for
/// gcd(a, d) > 1 the closed form degenerates and only the direct sum is
/// meaningful, so this throws.
Complex gauss_sum_closed(std::int64_t a, std::int64_t d);

/// G(a,b,c) = sum_n exp(2*pi*i*(a*n^2 + b*n)/c) in closed form,
/// eps_c * sqrt(c) * (a/c) * exp(-2*pi*i*psi(a)*b^2/c).
/// Requires odd c and gcd(a, c) = 1.
Complex generalized_gauss_sum(std::int64_t a, std::int64_t b, std::int64_t c);

/// Direct-summation counterpart of generalized_gauss_sum; no coprimality
/// requirement.
Complex generalized_gauss_sum_direct(std::int64_t a, std::int64_t b,
                                     std::int64_t c);

/// Nonnegative remainder of a mod m (m > 0).
std::int64_t mod_floor(std::int64_t a, std::int64_t m);

}  // namespace pixelent
