#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pixelent/state.hpp"

// Poisson Monte-Carlo error propagation: every observed count is replaced by
// an independent Poisson(N) draw, the estimator is recomputed per resample,
// and the sample mean / standard deviation are reported.

namespace pixelent {

struct BootstrapResult {
    double mean = 0.0;
    double std = 0.0;
    int n_resamples = 0;
    std::uint64_t seed = 0;
};

/// Scalar estimator over a set of count matrices (one per basis setting).
using CountEstimator = std::function<double(const std::vector<CountMatrix>&)>;

/// Parametric Poisson bootstrap. Per-resample RNG streams are derived from
/// (seed, resample index), so parallel and serial evaluation agree bitwise.
/// Estimator failures are rethrown with the resample index attached.
BootstrapResult poisson_bootstrap(const std::vector<CountMatrix>& counts,
                                  const CountEstimator& estimator,
                                  int n_resamples, std::uint64_t seed);

}  // namespace pixelent
