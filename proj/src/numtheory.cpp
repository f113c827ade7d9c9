#include "pixelent/numtheory.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace pixelent {

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

Complex root_of_unity(std::int64_t num, std::int64_t den) {
    const double arg =
        2.0 * std::numbers::pi * static_cast<double>(mod_floor(num, den)) /
        static_cast<double>(den);
    return {std::cos(arg), std::sin(arg)};
}

int jacobi(std::int64_t a, std::int64_t n) {
    if (n <= 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi: n must be odd and positive, got " +
                                    std::to_string(n));
    a = mod_floor(a, n);
    int sign = 1;
    // Quadratic-reciprocity iteration on (a/n), exact integers throughout.
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::int64_t r = n % 8;
            if (r == 3 || r == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

Complex eps_d(std::int64_t d) {
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("eps_d: d must be odd and positive");
    return d % 4 == 1 ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
}

namespace {

// Extended Euclid; returns gcd and the Bezout coefficient of a mod m.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m, std::int64_t& gcd_out) {
    std::int64_t old_r = mod_floor(a, m), r = m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(s, old_s - q * s);
    }
    gcd_out = old_r;
    return mod_floor(old_s, m);
}

}  // namespace

std::int64_t psi_coefficient(std::int64_t a, std::int64_t c) {
    if (c <= 0 || c % 2 == 0)
        throw std::invalid_argument("psi_coefficient: c must be odd and positive");
    std::int64_t g = 0;
    const std::int64_t inv = mod_inverse(mod_floor(4 * a, c), c, g);
    if (g != 1)
        throw std::invalid_argument(
            "psi_coefficient: gcd(a, c) != 1, no inverse of 4a mod c");
    return inv;
}

Complex gauss_sum_direct(std::int64_t a, std::int64_t d) {
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("gauss_sum_direct: d must be odd and positive");
    a = mod_floor(a, d);
    Complex sum{0.0, 0.0};
    for (std::int64_t i = 0; i < d; ++i)
        sum += root_of_unity(a * i % d * i, d);
    return sum;
}

Complex gauss_sum_closed(std::int64_t a, std::int64_t d) {
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("gauss_sum_closed: d must be odd and positive");
    if (std::gcd(mod_floor(a, d), d) != 1)
        throw std::invalid_argument(
            "gauss_sum_closed: gcd(a, d) != 1; use gauss_sum_direct");
    return static_cast<double>(jacobi(a, d)) * eps_d(d) *
           std::sqrt(static_cast<double>(d));
}

Complex generalized_gauss_sum(std::int64_t a, std::int64_t b, std::int64_t c) {
    if (c <= 0 || c % 2 == 0)
        throw std::invalid_argument(
            "generalized_gauss_sum: c must be odd and positive");
    if (std::gcd(mod_floor(a, c), c) != 1)
        throw std::invalid_argument("generalized_gauss_sum: gcd(a, c) != 1");
    const std::int64_t psi = psi_coefficient(a, c);
    b = mod_floor(b, c);
    const std::int64_t phase = mod_floor(-psi * (b * b % c), c);
    return eps_d(c) * std::sqrt(static_cast<double>(c)) *
           static_cast<double>(jacobi(a, c)) * root_of_unity(phase, c);
}

Complex generalized_gauss_sum_direct(std::int64_t a, std::int64_t b,
                                     std::int64_t c) {
    if (c <= 0 || c % 2 == 0)
        throw std::invalid_argument(
            "generalized_gauss_sum_direct: c must be odd and positive");
    a = mod_floor(a, c);
    b = mod_floor(b, c);
    Complex sum{0.0, 0.0};
    for (std::int64_t n = 0; n < c; ++n)
        sum += root_of_unity((a * n % c * n + b * n) % c, c);
    return sum;
}

}  // namespace pixelent
