#include "pixelent/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pixelent/rng.hpp"

namespace pixelent {

BootstrapResult poisson_bootstrap(const std::vector<CountMatrix>& counts,
                                  const CountEstimator& estimator,
                                  int n_resamples, std::uint64_t seed) {
    if (n_resamples < 2)
        throw std::invalid_argument("poisson_bootstrap: need >= 2 resamples");
    if (counts.empty())
        throw std::invalid_argument("poisson_bootstrap: no count matrices");
    for (const auto& c : counts) c.validate();

    std::vector<double> values(n_resamples);
    std::vector<CountMatrix> resampled = counts;
    for (int r = 0; r < n_resamples; ++r) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(r) + 1);
        for (std::size_t s = 0; s < counts.size(); ++s) {
            const auto& src = counts[s].counts;
            auto& dst = resampled[s].counts;
            for (Eigen::Index i = 0; i < src.rows(); ++i)
                for (Eigen::Index j = 0; j < src.cols(); ++j)
                    dst(i, j) = poisson_sample(rng, static_cast<double>(src(i, j)));
        }
        try {
            values[r] = estimator(resampled);
        } catch (const std::exception& e) {
            throw std::runtime_error("poisson_bootstrap: estimator failed on resample " +
                                     std::to_string(r) + ": " + e.what());
        }
    }

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n_resamples;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (n_resamples - 1);

    BootstrapResult result;
    result.mean = mean;
    result.std = std::sqrt(var);
    result.n_resamples = n_resamples;
    result.seed = seed;
    return result;
}

}  // namespace pixelent
