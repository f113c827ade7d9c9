#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pixelent/rng.hpp"
#include "pixelent/state.hpp"
#include "pixelent/witness.hpp"

using namespace pixelent;

namespace {

double gaussian(Pcg32& rng) {
    const double u = std::max(rng.next_double(), 1e-300);
    const double v = rng.next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

// Random density operator from the Ginibre ensemble, optionally biased
// towards the maximally entangled state so the sweep also visits the
// near-target region where the bounds are tight.
Eigen::MatrixXcd random_density(int d, Pcg32& rng, double target_weight = 0.0) {
    const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = Complex{gaussian(rng), gaussian(rng)};
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    if (target_weight > 0.0) {
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(dim);
        for (int m = 0; m < d; ++m)
            phi[static_cast<Eigen::Index>(m) * d + m] =
                1.0 / std::sqrt(static_cast<double>(d));
        rho = (1.0 - target_weight) * rho + target_weight * (phi * phi.adjoint());
    }
    return rho;
}

// Brute-force fidelity Tr(|phi+><phi+| rho) straight from the definition.
double fidelity_oracle(const Eigen::MatrixXcd& rho, int d) {
    Complex acc{0.0, 0.0};
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            acc += rho(static_cast<Eigen::Index>(m) * d + m,
                       static_cast<Eigen::Index>(n) * d + n);
    return acc.real() / d;
}

// Naive O(d^4) evaluation of the two-basis bound, quadruple constraints and
// gamma_tilde spelled out term by term.
double two_wf_bound_oracle(const Eigen::MatrixXd& probs_k,
                           const Eigen::MatrixXd& probs_kp, int d) {
    double cross = 0.0;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int mp = 0; mp < d; ++mp)
                for (int np = 0; np < d; ++np) {
                    if (m == mp || m == n || n == np || np == mp) continue;
                    cross += gamma_tilde(m, n, mp, np, d) *
                             std::sqrt(probs_k(mp, np) * probs_k(m, n));
                }
    return probs_k.trace() / d + probs_kp.trace() - 1.0 / d - cross;
}

Eigen::MatrixXd wf_probs(const TwoQuditState& s, int k) {
    return outcome_probabilities(s, BasisSpec::wf(k), BasisSpec::wf(k, true));
}

Eigen::MatrixXd ideal_probs(int d) {
    return Eigen::MatrixXd::Identity(d, d) / d;
}

}  // namespace

TEST_CASE("f1") {
    CHECK(f1(ideal_probs(5)) == doctest::Approx(1.0 / 5.0));
    CHECK(f1(Eigen::MatrixXd::Constant(5, 5, 1.0 / 25.0)) ==
          doctest::Approx(1.0 / 25.0));
    CHECK(f1(ideal_probs(19)) == doctest::Approx(1.0 / 19.0));
}

TEST_CASE("two-WF bound on ideal and maximally mixed data") {
    const int d = 5;
    const FidelityResult ideal =
        fidelity_lower_bound_two_wf(ideal_probs(d), ideal_probs(d), 0, 1, d);
    CHECK(ideal.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ideal.kind == FidelityResult::Kind::lower_bound);

    const Eigen::MatrixXd mixed = Eigen::MatrixXd::Constant(d, d, 1.0 / (d * d));
    const FidelityResult fr = fidelity_lower_bound_two_wf(mixed, mixed, 0, 1, d);
    CHECK(fr.value == doctest::Approx(two_wf_bound_oracle(mixed, mixed, d)).epsilon(1e-12));
    // analytic count: d (d-1)^2 surviving quadruples, each gamma/d^2
    CHECK(fr.value == doctest::Approx((2.0 - d) / d).epsilon(1e-12));
}

TEST_CASE("two-WF bound equals the naive quadruple evaluation on random data") {
    Pcg32 rng(11);
    for (int d : {3, 5, 7}) {
        for (int rep = 0; rep < 10; ++rep) {
            const TwoQuditState s =
                TwoQuditState::mixed(d, random_density(d, rng, 0.3 * (rep % 3)));
            const Eigen::MatrixXd p0 = wf_probs(s, 0);
            const Eigen::MatrixXd p1 = wf_probs(s, 1);
            const FidelityResult fr = fidelity_lower_bound_two_wf(p0, p1, 0, 1, d);
            CHECK(fr.value ==
                  doctest::Approx(two_wf_bound_oracle(p0, p1, d)).epsilon(1e-12));
        }
    }
}

TEST_CASE("witness soundness: bound never exceeds the true fidelity") {
    Pcg32 rng(2077);
    for (int d : {3, 5, 7}) {
        for (int rep = 0; rep < 100; ++rep) {
            const Eigen::MatrixXcd rho =
                random_density(d, rng, rep % 4 == 0 ? 0.6 : 0.0);
            const TwoQuditState s = TwoQuditState::mixed(d, rho);
            const double truth = fidelity_oracle(rho, d);
            std::vector<Eigen::MatrixXd> probs;
            for (int k = 0; k < d; ++k) probs.push_back(wf_probs(s, k));
            for (int k = 0; k < d; ++k)
                for (int kp = 0; kp < d; ++kp) {
                    if (!wf_pair_unbiased(k, kp, d)) continue;
                    const double bound =
                        fidelity_lower_bound_two_wf(probs[k], probs[kp], k, kp, d).value;
                    CHECK(bound <= truth + 1e-10);
                }
        }
    }
}

TEST_CASE("standard+WF bound: ideal, separable, and soundness") {
    const int d = 5;
    CHECK(fidelity_lower_bound_standard_wf(ideal_probs(d), ideal_probs(d), 0, d).value ==
          doctest::Approx(1.0).epsilon(1e-12));

    // separable |00><00|: standard-basis probabilities concentrate at (0,0),
    // WF probabilities are uniform
    Eigen::MatrixXd p_std = Eigen::MatrixXd::Zero(d, d);
    p_std(0, 0) = 1.0;
    const Eigen::MatrixXd p_wf = Eigen::MatrixXd::Constant(d, d, 1.0 / (d * d));
    const double sep_bound =
        fidelity_lower_bound_standard_wf(p_std, p_wf, 0, d).value;
    CHECK(sep_bound <= 1.0 / d + 1e-12);
    CHECK(certify_dimension(sep_bound, TargetState::maximally_entangled(d)) == 1);

    Pcg32 rng(5);
    for (int rep = 0; rep < 60; ++rep) {
        const Eigen::MatrixXcd rho = random_density(d, rng, rep % 3 == 0 ? 0.5 : 0.0);
        const TwoQuditState s = TwoQuditState::mixed(d, rho);
        const Eigen::MatrixXd probs_std = outcome_probabilities(
            s, BasisSpec::standard_basis(), BasisSpec::standard_basis(true));
        for (int k = 0; k < d; ++k)
            CHECK(fidelity_lower_bound_standard_wf(probs_std, wf_probs(s, k), k, d)
                      .value <= fidelity_oracle(rho, d) + 1e-10);
    }
}

TEST_CASE("exact fidelity from the complete MUB set (derived-formula gate)") {
    for (int d : {3, 5}) {
        // ideal data
        std::vector<Eigen::MatrixXd> ideal(d, ideal_probs(d));
        CHECK(fidelity_exact_all_mubs(ideal_probs(d), ideal, d).value ==
              doctest::Approx(1.0).epsilon(1e-12));

        Pcg32 rng(31 + d);
        for (int rep = 0; rep < 200; ++rep) {
            const Eigen::MatrixXcd rho = random_density(d, rng, rep % 5 == 0 ? 0.4 : 0.0);
            const TwoQuditState s = TwoQuditState::mixed(d, rho);
            const Eigen::MatrixXd probs_std = outcome_probabilities(
                s, BasisSpec::standard_basis(), BasisSpec::standard_basis(true));
            std::vector<Eigen::MatrixXd> probs;
            for (int k = 0; k < d; ++k) probs.push_back(wf_probs(s, k));
            const FidelityResult fr = fidelity_exact_all_mubs(probs_std, probs, d);
            CHECK(fr.kind == FidelityResult::Kind::exact);
            CHECK(std::abs(fr.value - fidelity_oracle(rho, d)) <= 1e-10);
        }
    }

    // maximally mixed: F = 1/d^2
    const int d = 5;
    const Eigen::MatrixXd mixed = Eigen::MatrixXd::Constant(d, d, 1.0 / (d * d));
    std::vector<Eigen::MatrixXd> all(d, mixed);
    CHECK(fidelity_exact_all_mubs(mixed, all, d).value ==
          doctest::Approx(1.0 / (d * d)).epsilon(1e-12));

    CHECK_THROWS_AS(fidelity_exact_all_mubs(mixed, {mixed, mixed}, d),
                    std::invalid_argument);
    CHECK_THROWS_AS(fidelity_exact_all_mubs(mixed, all, 9), std::invalid_argument);
}

TEST_CASE("every lower bound stays below the exact fidelity on the same data") {
    const int d = 5;
    Pcg32 rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        const TwoQuditState s = TwoQuditState::mixed(d, random_density(d, rng));
        const Eigen::MatrixXd probs_std = outcome_probabilities(
            s, BasisSpec::standard_basis(), BasisSpec::standard_basis(true));
        std::vector<Eigen::MatrixXd> probs;
        for (int k = 0; k < d; ++k) probs.push_back(wf_probs(s, k));
        const double exact = fidelity_exact_all_mubs(probs_std, probs, d).value;
        CHECK(fidelity_lower_bound_two_wf(probs[0], probs[1], 0, 1, d).value <=
              exact + 1e-10);
        CHECK(fidelity_lower_bound_standard_wf(probs_std, probs[0], 0, d).value <=
              exact + 1e-10);
    }
}

TEST_CASE("schmidt thresholds") {
    const TargetState max19 = TargetState::maximally_entangled(19);
    for (int r = 0; r <= 19; ++r)
        CHECK(schmidt_threshold(max19, r) == doctest::Approx(r / 19.0).epsilon(1e-12));
    CHECK(schmidt_threshold(TargetState::maximally_entangled(7), 7) ==
          doctest::Approx(1.0));
    CHECK(schmidt_threshold(TargetState::maximally_entangled(97), 54) ==
          doctest::Approx(54.0 / 97.0).epsilon(1e-4 / 0.5567));

    // non-uniform target
    TargetState t;
    t.d = 3;
    t.schmidt.resize(3);
    t.schmidt << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
    CHECK(schmidt_threshold(t, 1) == doctest::Approx(0.5));
    CHECK(schmidt_threshold(t, 2) == doctest::Approx(0.8));
    CHECK_THROWS_AS(schmidt_threshold(t, 4), std::invalid_argument);
}

TEST_CASE("certified dimensionality reproduces the published arithmetic") {
    const std::vector<std::pair<double, int>> all_mub_rows{
        {0.982, 3}, {0.975, 5}, {0.964, 7}, {0.939, 11},
        {0.941, 13}, {0.943, 17}, {0.944, 19}};
    const std::vector<int> all_mub_dent{3, 5, 7, 11, 13, 17, 18};
    for (std::size_t i = 0; i < all_mub_rows.size(); ++i)
        CHECK(certify_dimension(all_mub_rows[i].first,
                                TargetState::maximally_entangled(
                                    all_mub_rows[i].second)) == all_mub_dent[i]);

    const std::vector<std::tuple<double, int, int>> two_mub_rows{
        {0.93, 19, 18}, {0.92, 23, 22}, {0.90, 29, 27}, {0.92, 31, 29},
        {0.84, 37, 32}, {0.73, 51, 38}, {0.56, 97, 55}};
    for (const auto& [f, d, dent] : two_mub_rows)
        CHECK(certify_dimension(f, TargetState::maximally_entangled(d)) == dent);

    for (int d : {3, 7, 19})
        CHECK(certify_dimension(1.0, TargetState::maximally_entangled(d)) == d);

    // boundary: F * d an exact integer certifies only r
    CHECK(certify_dimension(0.4, TargetState::maximally_entangled(5)) == 2);
    // very noisy data floors at 1
    CHECK(certify_dimension(-0.6, TargetState::maximally_entangled(5)) == 1);
}

// ---------------------------------------------------------------------------

TEST_CASE("eof bound: ideal, mixed, and the isotropic fixture") {
    const int d = 7;
    const EofBound ideal = eof_bound(ideal_probs(d), ideal_probs(d), d);
    CHECK(ideal.value == doctest::Approx(std::log2(7.0)).epsilon(1e-12));

    const Eigen::MatrixXd mixed = Eigen::MatrixXd::Constant(d, d, 1.0 / (d * d));
    const EofBound worst = eof_bound(mixed, mixed, d);
    CHECK(worst.value == 0.0);
    CHECK(worst.raw == doctest::Approx(-std::log2(7.0)).epsilon(1e-12));

    // isotropic noise p = 0.1: closed-form probabilities (1-p)/d + p/d^2 on
    // the diagonal, p/d^2 off it; expected value from a direct entropy
    // evaluation independent of eof_bound's internals
    const double p = 0.1;
    const double q_diag = (1.0 - p) / d + p / (d * d);
    const double q_off = p / (d * d);
    const double h_joint = -d * q_diag * std::log2(q_diag) -
                           d * (d - 1.0) * q_off * std::log2(q_off);
    const double h_marginal = std::log2(static_cast<double>(d));
    const double expected = h_marginal - 2.0 * (h_joint - h_marginal);

    Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(d, d, q_off);
    for (int i = 0; i < d; ++i) probs(i, i) = q_diag;
    CHECK(eof_bound(probs, probs, d).value == doctest::Approx(expected).epsilon(1e-9));

    // and the same matrices produced by the state pipeline
    const TwoQuditState noisy = apply_isotropic_noise(
        pure_state_from_amplitudes(Eigen::MatrixXcd::Identity(d, d) /
                                   std::sqrt(static_cast<double>(d))),
        p);
    CHECK(eof_bound(wf_probs(noisy, 0), wf_probs(noisy, 1), d).value ==
          doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("eof bound never exceeds log2(d)") {
    const int d = 5;
    Pcg32 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const TwoQuditState s =
            TwoQuditState::mixed(d, random_density(d, rng, rep % 2 ? 0.7 : 0.0));
        const EofBound b = eof_bound(wf_probs(s, 0), wf_probs(s, 1), d);
        CHECK(b.value <= std::log2(5.0) + 1e-12);
        CHECK(b.value >= 0.0);
    }
}

TEST_CASE("eof bound marginal convention") {
    // asymmetric joint distribution: conditioning side matters
    const int d = 2;
    Eigen::MatrixXd probs(2, 2);
    probs << 0.5, 0.25, 0.0, 0.25;
    const auto entropy = [](std::initializer_list<double> ps) {
        double h = 0.0;
        for (double v : ps)
            if (v > 0.0) h -= v * std::log2(v);
        return h;
    };
    const double h_joint = entropy({0.5, 0.25, 0.25});
    const double h_rows = entropy({0.75, 0.25});
    const double h_cols = entropy({0.5, 0.5});
    const double expect_rows = 1.0 - 2.0 * (h_joint - h_rows);
    const double expect_cols = 1.0 - 2.0 * (h_joint - h_cols);
    CHECK(eof_bound(probs, probs, d, false).raw ==
          doctest::Approx(expect_rows).epsilon(1e-12));
    CHECK(eof_bound(probs, probs, d, true).raw ==
          doctest::Approx(expect_cols).epsilon(1e-12));
}

TEST_CASE("bounds degrade affinely under isotropic noise") {
    const int d = 7;
    const TwoQuditState phi = pure_state_from_amplitudes(
        Eigen::MatrixXcd::Identity(d, d) / std::sqrt(static_cast<double>(d)));
    std::vector<double> noise{0.0, 0.25, 0.5, 1.0};
    std::vector<double> bounds;
    for (double p : noise) {
        const TwoQuditState s = apply_isotropic_noise(phi, p);
        bounds.push_back(
            fidelity_lower_bound_two_wf(wf_probs(s, 0), wf_probs(s, 1), 0, 1, d).value);
    }
    const double slope = (bounds[1] - bounds[0]) / (noise[1] - noise[0]);
    CHECK(slope < 0.0);
    for (std::size_t i = 0; i < noise.size(); ++i)
        CHECK(bounds[i] ==
              doctest::Approx(bounds[0] + slope * noise[i]).epsilon(1e-9));
}

TEST_CASE("input validation") {
    const int d = 5;
    CHECK_THROWS_AS(fidelity_lower_bound_two_wf(ideal_probs(d), ideal_probs(d), 1, 1, d),
                    std::invalid_argument);
    CHECK_THROWS_AS(fidelity_lower_bound_two_wf(ideal_probs(d), ideal_probs(d), 0, 3, 9),
                    std::invalid_argument);
    Eigen::MatrixXd unnormalized = Eigen::MatrixXd::Constant(d, d, 1.0);
    CHECK_THROWS_AS(fidelity_lower_bound_two_wf(unnormalized, ideal_probs(d), 0, 1, d),
                    std::invalid_argument);
    CHECK_THROWS_AS(eof_bound(unnormalized, ideal_probs(d), d), std::invalid_argument);
}
