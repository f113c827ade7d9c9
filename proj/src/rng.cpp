#include "pixelent/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pixelent {

namespace {

// Inversion by sequential search; fine up to mean ~ 30.
std::int64_t poisson_inversion(Pcg32& rng, double mean) {
    const double target = rng.next_double();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    while (cdf < target) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (p < 1e-300 && cdf < target) break;  // tail exhausted numerically
    }
    return k;
}

double log_factorial(std::int64_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// Transformed rejection with squeeze (Hoermann's PTRD), valid for mean >= 10.
std::int64_t poisson_ptrd(Pcg32& rng, double mean) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    while (true) {
        double u;
        double v = rng.next_double();
        if (v <= 0.86 * v_r) {
            u = v / v_r - 0.43;
            return static_cast<std::int64_t>(
                std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + mean + 0.445));
        }
        if (v >= v_r) {
            u = rng.next_double() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0.0 ? -0.5 : 0.5) - u;
            v = rng.next_double() * v_r;
        }
        const double us = 0.5 - std::abs(u);
        if (us < 0.013 && v > us) continue;
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);
        constexpr double log_sqrt_2pi = 0.91893853320467274178;
        if (k >= 10.0) {
            if (std::log(v * smu) <= (k + 0.5) * std::log(mean / k) - mean -
                                         log_sqrt_2pi + k -
                                         (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k)
                return static_cast<std::int64_t>(k);
        } else if (k >= 0.0) {
            if (std::log(v) <=
                k * std::log(mean) - mean - log_factorial(static_cast<std::int64_t>(k)))
                return static_cast<std::int64_t>(k);
        }
    }
}

}  // namespace

std::int64_t poisson_sample(Pcg32& rng, double mean) {
    if (mean < 0.0 || !std::isfinite(mean))
        throw std::invalid_argument("poisson_sample: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 30.0) return poisson_inversion(rng, mean);
    return poisson_ptrd(rng, mean);
}

}  // namespace pixelent
