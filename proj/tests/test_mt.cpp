#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle2x2.hpp"
#include "urlab/mt.hpp"
#include "urlab/uncertainty.hpp"

using namespace urlab;
using namespace urlab::mt;

namespace {

State two_level(Complex c0, Complex c1) {
    Vector v(2);
    v << c0, c1;
    return State::normalized(v);
}

State direction_theta(double theta) {
    return two_level(1.0, std::polar(1.0, theta));
}

std::vector<double> decade_grid() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}; }

} // namespace

TEST_CASE("ehrenfest check: conserved observable gives zero on both routes") {
    Rng rng(3);
    const Operator h = random_hermitian(4, rng);
    const EhrenfestCheck chk = ehrenfest_check(h, h, random_state(4, rng));
    CHECK(chk.rhs <= 1e-12 * h.frobenius_norm() * h.frobenius_norm());
    CHECK(chk.lhs <= 1e-10 * h.frobenius_norm() * h.frobenius_norm());
}

TEST_CASE("ehrenfest check on the pauli fixture equals sqrt(2)") {
    // [sigma_x, sigma_z] = -2i sigma_y and <sigma_y> = sin(pi/4)
    const State phi = two_level(1.0, std::polar(1.0, M_PI / 4));
    const EhrenfestCheck chk = ehrenfest_check(pauli_x(), pauli_z(), phi);
    CHECK(chk.rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(chk.lhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(chk.residual <= 1e-6 * pauli_x().frobenius_norm() * pauli_z().frobenius_norm());
}

TEST_CASE("ehrenfest check vanishes on eigenvectors of H") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Operator h = random_hermitian(dim, rng);
        const Spectrum spec = eigendecompose(h);
        const double scale = a.frobenius_norm() * h.frobenius_norm();
        for (Index k = 0; k < dim; ++k) {
            const EhrenfestCheck chk =
                ehrenfest_check(a, h, spec, spec.eigenvector(k));
            CHECK(chk.rhs <= 1e-10 * scale);
            CHECK(chk.lhs <= 1e-10 * scale);
        }
    }
}

TEST_CASE("ehrenfest residual stays small on random triples") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Operator h = random_hermitian(dim, rng);
        const Spectrum spec = eigendecompose(h);
        const EhrenfestCheck chk =
            ehrenfest_check(a, h, spec, random_state(dim, rng));
        CHECK(chk.residual <= 1e-6 * a.frobenius_norm() * h.frobenius_norm());
    }
}

TEST_CASE("tau is undefined on eigenvectors of H and of A") {
    // eigenvector of H: delta_E = 0 and the commutator expectation vanishes
    const MTReport on_h =
        tau_characteristic(pauli_x(), pauli_z(), basis_state(2, 0));
    CHECK(on_h.tau_status == TauStatus::UndefinedZeroOverZero);
    CHECK(on_h.delta_e <= 1e-12);
    CHECK_FALSE(on_h.tau.has_value());
    CHECK_FALSE(on_h.mt_product.has_value());

    // eigenvector of A: delta_A = 0, same verdict
    const MTReport on_a =
        tau_characteristic(pauli_x(), pauli_z(), two_level(1.0, 1.0));
    CHECK(on_a.tau_status == TauStatus::UndefinedZeroOverZero);
    CHECK(on_a.delta_a <= 1e-12);
    CHECK_FALSE(on_a.tau.has_value());
}

TEST_CASE("tau on the pauli fixture saturates the bound") {
    const State phi = two_level(1.0, std::polar(1.0, M_PI / 4));
    const MTReport rep = tau_characteristic(pauli_x(), pauli_z(), phi);
    REQUIRE(rep.tau_status == TauStatus::Defined);
    CHECK(rep.delta_a == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(rep.commutator_expectation) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(*rep.tau == doctest::Approx(0.5));
    CHECK(rep.delta_e == doctest::Approx(1.0));
    CHECK(*rep.mt_product == doctest::Approx(0.5));

    // hbar enters symbolically: halving it halves tau and the bound
    const MTReport scaled = tau_characteristic(pauli_x(), pauli_z(), phi, 0.5);
    REQUIRE(scaled.tau_status == TauStatus::Defined);
    CHECK(*scaled.tau == doctest::Approx(0.25));
    CHECK(*scaled.mt_product == doctest::Approx(0.25));
}

TEST_CASE("guarded MT bound holds whenever tau is defined") {
    Rng rng(11);
    const double hbar = 1.0;
    for (int trial = 0; trial < 500; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Operator h = random_hermitian(dim, rng);
        const MTReport rep = tau_characteristic(a, h, random_state(dim, rng), hbar);
        if (rep.tau_status == TauStatus::UndefinedZeroOverZero)
            continue;
        CHECK(rep.tau_status == TauStatus::Defined);
        CHECK(*rep.mt_product >= 0.5 * hbar - 1e-9 * hbar);
    }
}

TEST_CASE("the pre-division inequality holds for every state") {
    // delta_A * delta_E >= (hbar/2) |d<A>/dt| needs no division and is
    // asserted even on eigenvectors, where it reads 0 >= 0.
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Operator h = random_hermitian(dim, rng);
        const State phi = (trial % 3 == 0)
                              ? eigendecompose(h).eigenvector(trial % dim)
                              : random_state(dim, rng);
        const MTReport rep = tau_characteristic(a, h, phi);
        const double slack = 1e-9 * a.frobenius_norm() * h.frobenius_norm();
        CHECK(rep.delta_a * rep.delta_e + slack >=
              0.5 * rep.ehrenfest_derivative);
    }
}

TEST_CASE("eigenvectors of H null the energy spread and the commutator") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Operator h = random_hermitian(dim, rng);
        const Spectrum spec = eigendecompose(h);
        const double scale = a.frobenius_norm() * h.frobenius_norm();
        for (Index k = 0; k < dim; ++k) {
            const mt::MTReport rep =
                tau_characteristic(a, h, spec.eigenvector(k));
            CHECK(rep.delta_e <= 1e-10 * h.frobenius_norm());
            CHECK(std::abs(rep.commutator_expectation) <= 1e-10 * scale);
            // the undefined verdict pairs a vanishing commutator expectation
            // with a vanishing deviation
            CHECK(rep.tau_status == TauStatus::UndefinedZeroOverZero);
            CHECK((rep.delta_a <= 1e-10 * a.frobenius_norm() ||
                   rep.delta_e <= 1e-10 * h.frobenius_norm()));
        }
    }
}

TEST_CASE("eta family members follow the closed-form normalization") {
    const State anchor = basis_state(2, 0);
    const State dir = direction_theta(M_PI / 2); // (1, i)/sqrt(2)
    const PerturbationFamily family = build_family(
        FamilyKind::Eta, pauli_x(), pauli_z(), anchor, dir, {0.1});
    REQUIRE(family.samples.size() == 1);
    const double eta = 0.1;
    const double n = 1.0 / std::sqrt(1.0 + std::sqrt(2.0) * eta + eta * eta);
    const Vector& amp = family.samples[0].member.amplitudes();
    CHECK(std::abs(amp(0) - n * (1.0 + eta / std::sqrt(2.0))) <= 1e-14);
    CHECK(std::abs(amp(1) - n * Complex(0.0, eta / std::sqrt(2.0))) <= 1e-14);
}

TEST_CASE("family distance shrinks toward the anchor like eta") {
    const State anchor = basis_state(2, 0);
    const State dir = direction_theta(M_PI / 2);
    const PerturbationFamily family = build_family(
        FamilyKind::Eta, pauli_x(), pauli_z(), anchor, dir, decade_grid());
    double previous = 2.0;
    for (const FamilySample& s : family.samples) {
        CHECK(s.distance_to_anchor < previous);
        CHECK(s.distance_to_anchor <= std::sqrt(2.0) * s.parameter * 1.01);
        previous = s.distance_to_anchor;
    }
}

TEST_CASE("family construction rejects bad inputs") {
    const State anchor = basis_state(2, 0);
    const State dir = direction_theta(M_PI / 2);
    CHECK_THROWS_AS(build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                                 dir, {}),
                    Error);
    CHECK_THROWS_AS(build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                                 dir, {0.1, 0.2}),
                    Error);
    CHECK_THROWS_AS(build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                                 dir, {0.1, 0.0}),
                    Error);
    // direction that is an eigenvector of A
    CHECK_THROWS_AS(build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                                 two_level(1.0, 1.0), {0.1, 0.01}),
                    Error);
    // anchor that is not an eigenvector of H
    CHECK_THROWS_AS(build_family(FamilyKind::Eta, pauli_x(), pauli_z(),
                                 two_level(1.0, 0.5), dir, {0.1, 0.01}),
                    Error);
}

TEST_CASE("tau diverges like 1/eta toward an eigenvector of H") {
    const State anchor = basis_state(2, 0);
    for (double theta : {M_PI / 2, M_PI / 6}) {
        const PerturbationFamily family =
            build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                         direction_theta(theta), decade_grid());
        const TauLimitScan scan = tau_limit_scan(family);
        CHECK(scan.slope >= -1.05);
        CHECK(scan.slope <= -0.95);
        CHECK(scan.diverges);
    }
    // small-eta model: tau ~ 1/(2 sqrt(2) eta) for theta = pi/2
    const PerturbationFamily family =
        build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                     direction_theta(M_PI / 2), decade_grid());
    const FamilySample& finest = family.samples.back();
    CHECK(*finest.tau == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0) * 1e-5))
                             .epsilon(1e-3));
}

TEST_CASE("tau limit scan needs enough defined samples and an eta family") {
    const State anchor = basis_state(2, 0);
    const PerturbationFamily three = build_family(
        FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
        direction_theta(M_PI / 2), {1e-1, 1e-2, 1e-3});
    CHECK_THROWS_AS(tau_limit_scan(three), Error);

    const PerturbationFamily lambda_family = build_family(
        FamilyKind::Lambda, pauli_x(), pauli_z(), two_level(1.0, 1.0),
        direction_theta(M_PI / 2), decade_grid());
    CHECK_THROWS_AS(tau_limit_scan(lambda_family), Error);
}

TEST_CASE("the full fraction converges while tau blows up") {
    const State anchor = basis_state(2, 0);
    const PerturbationFamily family =
        build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                     direction_theta(M_PI / 2), decade_grid());
    const FamilySample& mid = family.samples[2]; // eta = 1e-3
    const FamilySample& fine = family.samples[4]; // eta = 1e-5
    CHECK(std::abs(*mid.full_fraction - *fine.full_fraction) <=
          0.05 * std::abs(*fine.full_fraction));
    CHECK(*fine.tau > 50.0 * *mid.tau);
}

TEST_CASE("c_psi depends on the approach direction") {
    const State anchor = basis_state(2, 0);
    // theta = pi/2: delta_A -> 1, delta_H ~ sqrt(2) eta, |<[A,H]>| ~ 2 sqrt(2) eta
    const PerturbationFamily f_pi2 =
        build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                     direction_theta(M_PI / 2), decade_grid());
    const Extrapolation c_pi2 = c_psi_scan(f_pi2);
    CHECK(c_pi2.value == doctest::Approx(0.5).epsilon(1e-6));

    // theta = pi/6: the 1/(2 |sin theta|) factor doubles the limit
    const PerturbationFamily f_pi6 =
        build_family(FamilyKind::Eta, pauli_x(), pauli_z(), anchor,
                     direction_theta(M_PI / 6), decade_grid());
    const Extrapolation c_pi6 = c_psi_scan(f_pi6);
    CHECK(c_pi6.value == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(std::abs(c_pi2.value - c_pi6.value) >= 0.45);
}

TEST_CASE("lambda limits are finite, direction-dependent and match brute force") {
    const State anchor = two_level(1.0, 1.0); // eigenvector of sigma_x
    const PerturbationFamily f_pi2 =
        build_family(FamilyKind::Lambda, pauli_x(), pauli_z(), anchor,
                     direction_theta(M_PI / 2), decade_grid());
    const PerturbationFamily f_pi6 =
        build_family(FamilyKind::Lambda, pauli_x(), pauli_z(), anchor,
                     direction_theta(M_PI / 6), decade_grid());

    const Extrapolation l_pi2 = tau_lambda_limit_scan(f_pi2);
    const Extrapolation l_pi6 = tau_lambda_limit_scan(f_pi6);

    // brute-force oracle at lambda = 1e-6, built from raw 2x2 arithmetic
    for (auto [theta, limit] : {std::pair{M_PI / 2, l_pi2.value},
                                std::pair{M_PI / 6, l_pi6.value}}) {
        const double lambda = 1e-6;
        const oracle::C phase = std::polar(1.0, theta);
        oracle::Vec2 member{(1.0 + lambda) / std::sqrt(2.0),
                            (1.0 + lambda * phase) / std::sqrt(2.0)};
        double norm = std::sqrt(std::norm(member[0]) + std::norm(member[1]));
        member[0] /= norm;
        member[1] /= norm;
        const double delta_a = oracle::std_dev_norm(oracle::sigma_x, member);
        const oracle::C comm = oracle::bra_op_ket(
            member, oracle::commutator(oracle::sigma_x, oracle::sigma_z), member);
        const double tau_brute = delta_a / std::abs(comm);
        CHECK(limit == doctest::Approx(tau_brute).epsilon(1e-4));
    }

    // closed forms from the small-lambda expansion: 1/(2 cos(theta/2))
    CHECK(l_pi2.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(l_pi6.value ==
          doctest::Approx(1.0 / (2.0 * std::cos(M_PI / 12.0))).epsilon(1e-6));

    const LambdaNonUniqueness pair = tau_lambda_nonuniqueness(f_pi2, f_pi6);
    CHECK(pair.distinct);
    CHECK(pair.difference >
          10.0 * (pair.first.error_estimate + pair.second.error_estimate));
}
