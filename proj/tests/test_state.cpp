#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pixelent/basis_design.hpp"
#include "pixelent/rng.hpp"
#include "pixelent/state.hpp"

using namespace pixelent;

namespace {

TwoQuditState max_entangled(int d) {
    return pure_state_from_amplitudes(Eigen::MatrixXcd::Identity(d, d) /
                                      std::sqrt(static_cast<double>(d)));
}

}  // namespace

TEST_CASE("pure state from amplitude matrix") {
    const TwoQuditState phi = max_entangled(5);
    CHECK(phi.is_pure());
    CHECK(phi.fidelity_to_max_entangled() == doctest::Approx(1.0).epsilon(1e-12));

    // diagonal amplitudes map to Schmidt coefficients
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    const TwoQuditState s = pure_state_from_amplitudes(a);
    const double norm = std::sqrt(9.0 + 4.0 + 1.0);
    CHECK(std::abs(s.pure_coefficients()[0] - 3.0 / norm) <= 1e-12);
    CHECK(std::abs(s.pure_coefficients()[4] - 2.0 / norm) <= 1e-12);
    CHECK(std::abs(s.pure_coefficients()[8] - 1.0 / norm) <= 1e-12);

    CHECK_THROWS_AS(pure_state_from_amplitudes(Eigen::MatrixXcd::Zero(3, 3)),
                    std::invalid_argument);
}

TEST_CASE("end-to-end d = 7 amplitude matrix is near maximally entangled") {
    JtmaParams p;
    p.sigma_s = 1.0;
    p.sigma_p = 0.02;
    p.sigma_c = 1e6;
    QuadratureSpec q;
    q.check_convergence = false;
    const PixelLayout packed =
        pack_pixels(7, 0.55, 0.1 * pack_pixels(7, 0.55, 0.0).radii[0]);
    const PixelLayout lay = optimize_radii(packed, p, q, 0.01);
    const auto res = amplitude_matrix(lay, p, q);
    const TwoQuditState s = pure_state_from_amplitudes(res.matrix);
    // observed 0.999995 on the frozen preset; 0.9999 leaves quadrature slack
    CHECK(s.fidelity_to_max_entangled() >= 0.9999);
}

TEST_CASE("isotropic noise") {
    const TwoQuditState phi = max_entangled(4);
    const TwoQuditState same = apply_isotropic_noise(phi, 0.0);
    CHECK(same.fidelity_to_max_entangled() == doctest::Approx(1.0).epsilon(1e-12));

    const TwoQuditState mixed = apply_isotropic_noise(phi, 1.0);
    const Eigen::MatrixXd probs =
        outcome_probabilities(mixed, BasisSpec::standard_basis(),
                              BasisSpec::standard_basis(true));
    CHECK((probs.array() - 1.0 / 16.0).abs().maxCoeff() <= 1e-12);

    // F' = (1-p) F + p/d^2, and noise composes multiplicatively
    for (double p : {0.1, 0.37}) {
        const TwoQuditState noisy = apply_isotropic_noise(phi, p);
        CHECK(noisy.fidelity_to_max_entangled() ==
              doctest::Approx((1.0 - p) * 1.0 + p / 16.0).epsilon(1e-12));
    }
    const TwoQuditState twice =
        apply_isotropic_noise(apply_isotropic_noise(phi, 0.2), 0.25);
    CHECK(twice.isotropic_noise() == doctest::Approx(1.0 - 0.8 * 0.75));

    CHECK_THROWS_AS(apply_isotropic_noise(phi, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(apply_isotropic_noise(phi, 1.1), std::invalid_argument);
}

TEST_CASE("dense density representation agrees with the closed form") {
    const int d = 5;
    // an arbitrary pure state, not maximally entangled
    Eigen::MatrixXcd a(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            a(m, n) = Complex{std::sin(0.3 * (m + 1) * (n + 2)),
                              std::cos(1.1 * m - 0.7 * n)};
    const TwoQuditState closed =
        apply_isotropic_noise(pure_state_from_amplitudes(a), 0.15);
    const TwoQuditState dense = TwoQuditState::mixed(d, closed.to_density());

    for (const BasisSpec& ba :
         {BasisSpec::standard_basis(), BasisSpec::wf(0), BasisSpec::wf(3)}) {
        for (bool conj : {true, false}) {
            const BasisSpec bb = ba.is_wf() ? BasisSpec::wf(ba.k, conj)
                                            : BasisSpec::standard_basis(conj);
            const Eigen::MatrixXd p1 = outcome_probabilities(closed, ba, bb);
            const Eigen::MatrixXd p2 = outcome_probabilities(dense, ba, bb);
            CHECK((p1 - p2).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK(p1.sum() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK(dense.fidelity_to_max_entangled() ==
          doctest::Approx(closed.fidelity_to_max_entangled()).epsilon(1e-10));

    // noise keeps the operator positive with unit trace
    const Eigen::MatrixXcd rho = closed.to_density();
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eigs(rho);
    CHECK(eigs.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("U (x) U* invariance: WF-diagonal correlations for the target state") {
    for (int d : {3, 5, 7, 11, 13, 17, 19}) {
        const TwoQuditState phi = max_entangled(d);
        for (int k = 0; k < d; ++k) {
            const Eigen::MatrixXd probs =
                outcome_probabilities(phi, BasisSpec::wf(k), BasisSpec::wf(k, true));
            CHECK((probs - Eigen::MatrixXd::Identity(d, d) / d).cwiseAbs().maxCoeff() <=
                  1e-9);
        }
    }
}

TEST_CASE("conjugation flag matters") {
    const int d = 5, k = 1;
    const Eigen::MatrixXd probs = outcome_probabilities(
        max_entangled(d), BasisSpec::wf(k), BasisSpec::wf(k, false));
    double off_diag = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) off_diag = std::max(off_diag, probs(i, j));
    CHECK(off_diag > 0.01);
    CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("invalid density operators are rejected") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
    rho(0, 1) = Complex{0.1, 0.0};  // not Hermitian
    CHECK_THROWS_AS(TwoQuditState::mixed(2, rho), std::invalid_argument);
    CHECK_THROWS_AS(
        TwoQuditState::mixed(2, Eigen::MatrixXcd::Identity(4, 4)),  // trace 4
        std::invalid_argument);
    CHECK_THROWS_AS(TwoQuditState::mixed(3, Eigen::MatrixXcd::Identity(4, 4) / 4.0),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST_CASE("simulated counts: zero flux and determinism") {
    Eigen::MatrixXd probs(2, 2);
    probs << 0.4, 0.1, 0.2, 0.3;
    const CountMatrix zero = simulate_counts(probs, 0.0, 7, BasisSpec::wf(0),
                                             BasisSpec::wf(0, true));
    CHECK(zero.total() == 0);

    const CountMatrix a =
        simulate_counts(probs, 1e5, 42, BasisSpec::wf(0), BasisSpec::wf(0, true));
    const CountMatrix b =
        simulate_counts(probs, 1e5, 42, BasisSpec::wf(0), BasisSpec::wf(0, true));
    CHECK((a.counts - b.counts).cwiseAbs().maxCoeff() == 0);
    const CountMatrix c =
        simulate_counts(probs, 1e5, 43, BasisSpec::wf(0), BasisSpec::wf(0, true));
    CHECK((a.counts - c.counts).cwiseAbs().maxCoeff() > 0);

    Eigen::MatrixXd negative(1, 1);
    negative << -0.5;
    CHECK_THROWS_AS(simulate_counts(negative, 10, 1, BasisSpec::standard_basis(),
                                    BasisSpec::standard_basis(true)),
                    std::invalid_argument);
}

TEST_CASE("simulated counts have the right expectation") {
    Eigen::MatrixXd probs(2, 2);
    probs << 0.4, 0.1, 0.2, 0.3;
    const double total_pairs = 1000.0;
    const int n_seeds = 10000;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(2, 2);
    for (int s = 0; s < n_seeds; ++s)
        mean += simulate_counts(probs, total_pairs, 1000 + s, BasisSpec::wf(0),
                                BasisSpec::wf(0, true))
                    .counts.cast<double>();
    mean /= (n_seeds * total_pairs);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double sigma =
                std::sqrt(probs(i, j) / (total_pairs * n_seeds));
            CHECK(std::abs(mean(i, j) - probs(i, j)) <= 3.0 * sigma);
        }
}

TEST_CASE("counts normalization") {
    CountMatrix uniform;
    uniform.d = 3;
    uniform.counts = CountsMatrix::Constant(3, 3, 11);
    CHECK((counts_to_probs(uniform).array() - 1.0 / 9.0).abs().maxCoeff() <= 1e-12);

    CountMatrix diag;
    diag.d = 4;
    diag.counts = CountsMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) diag.counts(i, i) = 250;
    const Eigen::MatrixXd p = counts_to_probs(diag);
    CHECK((p - Eigen::MatrixXd::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() <= 1e-12);

    CountMatrix synthetic;
    synthetic.d = 2;
    synthetic.counts.resize(2, 2);
    synthetic.counts << 3, 1, 1, 3;
    const Eigen::MatrixXd sp = counts_to_probs(synthetic);
    CHECK(sp(0, 0) == doctest::Approx(0.375));
    CHECK(sp(0, 1) == doctest::Approx(0.125));

    CountMatrix empty;
    empty.d = 2;
    empty.counts = CountsMatrix::Zero(2, 2);
    CHECK_THROWS_AS(counts_to_probs(empty), std::invalid_argument);
}

TEST_CASE("law of large numbers round trip") {
    const TwoQuditState noisy = apply_isotropic_noise(max_entangled(3), 0.2);
    const Eigen::MatrixXd probs = outcome_probabilities(
        noisy, BasisSpec::wf(1), BasisSpec::wf(1, true));
    const CountMatrix counts =
        simulate_counts(probs, 1e6, 25, BasisSpec::wf(1), BasisSpec::wf(1, true));
    const Eigen::MatrixXd back = counts_to_probs(counts);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (probs(i, j) >= 0.01)
                CHECK(std::abs(back(i, j) - probs(i, j)) / probs(i, j) <= 0.01);
}

TEST_CASE("poisson sampler moments") {
    for (double mean : {0.5, 5.0, 50.0, 500.0}) {
        Pcg32 rng(2024);
        const int n = 20000;
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = static_cast<double>(poisson_sample(rng, mean));
            acc += v;
            acc2 += v * v;
        }
        const double sample_mean = acc / n;
        const double sample_var = acc2 / n - sample_mean * sample_mean;
        CHECK(std::abs(sample_mean - mean) <= 5.0 * std::sqrt(mean / n));
        CHECK(sample_var == doctest::Approx(mean).epsilon(0.1));
    }
    Pcg32 rng(1);
    CHECK(poisson_sample(rng, 0.0) == 0);
    CHECK_THROWS_AS(poisson_sample(rng, -1.0), std::invalid_argument);
}
