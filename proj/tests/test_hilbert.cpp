#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "urlab/hilbert.hpp"

using namespace urlab;

namespace {

const Complex kI(0.0, 1.0);

double max_entry_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("make_hermitian keeps Hermitian inputs untouched") {
    Matrix id = Matrix::Identity(3, 3);
    CHECK(max_entry_diff(make_hermitian(id).matrix(), id) == 0.0);

    Matrix m(2, 2);
    m << Complex(0, 0), Complex(1, 1), Complex(1, -1), Complex(2, 0);
    CHECK(max_entry_diff(make_hermitian(m).matrix(), m) == 0.0);
}

TEST_CASE("make_hermitian rejects plainly non-Hermitian input") {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(make_hermitian(m), Error);
    try {
        make_hermitian(m);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotNearlyHermitian);
    }
}

TEST_CASE("make_hermitian rejects non-square and non-finite input") {
    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(make_hermitian(rect), Error);

    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_hermitian(bad), Error);
}

TEST_CASE("pauli builders and basis states") {
    const State e0 = basis_state(2, 0);
    const State e1 = basis_state(2, 1);

    // sigma_z |0> = +|0>
    Vector z0 = pauli_z().matrix() * e0.amplitudes();
    CHECK((z0 - e0.amplitudes()).norm() == 0.0);

    CHECK(expectation(pauli_z(), e0) == doctest::Approx(1.0));
    CHECK(expectation(pauli_x(), e0) == doctest::Approx(0.0));
    CHECK(matrix_element(pauli_x().matrix(), e0, e1) == Complex(1.0, 0.0));

    CHECK_THROWS_AS(basis_state(2, 2), Error);
    CHECK_THROWS_AS(basis_state(2, -1), Error);
}

TEST_CASE("commutator of pauli_x and pauli_y is 2i pauli_z") {
    // Direct 2x2 oracle: multiply the constant matrices by hand.
    const Matrix sx = pauli_x().matrix();
    const Matrix sy = pauli_y().matrix();
    Matrix byhand(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Complex acc(0, 0);
            for (int k = 0; k < 2; ++k)
                acc += sx(i, k) * sy(k, j) - sy(i, k) * sx(k, j);
            byhand(i, j) = acc;
        }
    const Matrix comm = commutator(pauli_x(), pauli_y());
    CHECK(max_entry_diff(comm, byhand) == 0.0);
    CHECK(max_entry_diff(comm, Matrix(2.0 * kI * pauli_z().matrix())) == 0.0);
}

TEST_CASE("self-commutator and commutator with identity vanish") {
    Rng rng(11);
    const Operator a = random_hermitian(5, rng);
    CHECK(commutator(a, a).cwiseAbs().maxCoeff() == 0.0);
    const Operator id(Matrix(Matrix::Identity(5, 5)));
    CHECK(commutator(a, id).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(commutator(a, pauli_x()), Error);
}

TEST_CASE("commutator is anti-Hermitian for random pairs") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Operator b = random_hermitian(dim, rng);
        const Matrix c = commutator(a, b);
        const double scale = a.frobenius_norm() * b.frobenius_norm();
        CHECK((c + c.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("truncated oscillator matches the ladder construction") {
    const OscillatorPair osc2 = truncated_oscillator(2);
    Matrix x2(2, 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    x2 << 0, inv_sqrt2, inv_sqrt2, 0;
    CHECK(max_entry_diff(osc2.position.matrix(), x2) <= 1e-15);

    for (Index dim : {2, 3, 8, 16}) {
        const OscillatorPair osc = truncated_oscillator(dim);
        const Matrix comm =
            osc.position.matrix() * osc.momentum.matrix() -
            osc.momentum.matrix() * osc.position.matrix();
        CHECK(std::abs(comm(0, 0) - kI) <= 1e-14);
        CHECK(std::abs(comm(dim - 1, dim - 1) -
                       kI * static_cast<double>(1 - dim)) <= 1e-13);
        // [X,P] - iI is zero except the corner entry -i*dim
        CHECK(osc.commutator_corner_deviation ==
              doctest::Approx(static_cast<double>(dim)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(truncated_oscillator(1), Error);
}

TEST_CASE("eigendecompose diagonal and pauli_x closed forms") {
    const Spectrum sz = eigendecompose(pauli_z());
    CHECK(sz.eigenvalue(0) == doctest::Approx(-1.0));
    CHECK(sz.eigenvalue(1) == doctest::Approx(1.0));
    // eigenvectors match the basis states up to a phase
    CHECK(std::abs(inner(sz.eigenvector(0), basis_state(2, 1))) ==
          doctest::Approx(1.0));
    CHECK(std::abs(inner(sz.eigenvector(1), basis_state(2, 0))) ==
          doctest::Approx(1.0));

    const Spectrum sx = eigendecompose(pauli_x());
    CHECK(sx.eigenvalue(0) == doctest::Approx(-1.0));
    CHECK(sx.eigenvalue(1) == doctest::Approx(1.0));
    Vector minus(2), plus(2);
    minus << 1, -1;
    plus << 1, 1;
    CHECK(std::abs(inner(sx.eigenvector(0), State::normalized(minus))) ==
          doctest::Approx(1.0));
    CHECK(std::abs(inner(sx.eigenvector(1), State::normalized(plus))) ==
          doctest::Approx(1.0));
}

TEST_CASE("spectrum invariants hold on random Hermitian matrices") {
    Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Spectrum spec = eigendecompose(a);
        const SpectrumResiduals res = spectrum_residuals(a, spec);
        CHECK(res.eigenpair <= 1e-10 * a.frobenius_norm());
        CHECK(res.orthonormality <= 1e-10);
        for (Index k = 1; k < dim; ++k)
            CHECK(spec.eigenvalue(k) >= spec.eigenvalue(k - 1));
    }
}

TEST_CASE("eigenvalues agree with an independent dense solver") {
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator a = random_hermitian(dim, rng);
        const Spectrum spec = eigendecompose(a);
        Eigen::SelfAdjointEigenSolver<Matrix> reference(a.matrix());
        for (Index k = 0; k < dim; ++k)
            CHECK(spec.eigenvalue(k) ==
                  doctest::Approx(reference.eigenvalues()(k))
                      .epsilon(1e-11)
                      .scale(std::max(1.0, a.frobenius_norm())));
    }
}

TEST_CASE("spectral reconstruction rebuilds the operator") {
    Rng rng(43);
    for (Index dim = 2; dim <= 8; ++dim) {
        const Operator a = random_hermitian(dim, rng);
        const Spectrum spec = eigendecompose(a);
        Matrix rebuilt = Matrix::Zero(dim, dim);
        for (Index k = 0; k < dim; ++k) {
            const Vector v = spec.basis().col(k);
            rebuilt += spec.eigenvalue(k) * v * v.adjoint();
        }
        CHECK(max_entry_diff(rebuilt, a.matrix()) <= 1e-10 * a.frobenius_norm());
    }
}

TEST_CASE("degenerate eigenvalue clusters stay orthonormal") {
    // conjugate diag(2, 2, 2, -1, -1, 5) by a random unitary and decompose
    Rng rng(89);
    const Index dim = 6;
    Eigen::VectorXd values(dim);
    values << 2, 2, 2, -1, -1, 5;
    const Spectrum mixer = eigendecompose(random_hermitian(dim, rng));
    const Matrix u = mixer.basis();
    const Operator a(Matrix(u * values.asDiagonal() * u.adjoint()));

    const Spectrum spec = eigendecompose(a);
    const SpectrumResiduals res = spectrum_residuals(a, spec);
    CHECK(res.eigenpair <= 1e-10 * a.frobenius_norm());
    CHECK(res.orthonormality <= 1e-10);
    Eigen::VectorXd expected(dim);
    expected << -1, -1, 2, 2, 2, 5;
    for (Index k = 0; k < dim; ++k)
        CHECK(spec.eigenvalue(k) == doctest::Approx(expected(k)).epsilon(1e-12));
}

TEST_CASE("already diagonal input converges without rotations") {
    const Operator id(Matrix(Matrix::Identity(4, 4)));
    const Spectrum spec = eigendecompose(id);
    for (Index k = 0; k < 4; ++k)
        CHECK(spec.eigenvalue(k) == 1.0);
    CHECK(spectrum_residuals(id, spec).orthonormality == 0.0);
}

TEST_CASE("evolve at zero time is the identity") {
    Rng rng(47);
    const Operator h = random_hermitian(4, rng);
    const State phi = random_state(4, rng);
    CHECK(distance(evolve(h, phi, 0.0), phi) <= 1e-14);
}

TEST_CASE("eigenstate evolution is a pure phase") {
    const State e0 = basis_state(2, 0);
    const double t = 0.83;
    const State out = evolve(pauli_z(), e0, t);
    CHECK(std::abs(out.amplitudes()(0) - std::polar(1.0, -t)) <= 1e-14);
    CHECK(std::abs(out.amplitudes()(1)) <= 1e-14);
    CHECK(std::abs(std::abs(inner(e0, out)) - 1.0) <= 1e-13);
}

TEST_CASE("two-level overlap follows cos t") {
    const State e0 = basis_state(2, 0);
    for (double t : {0.1, 0.5, 1.3, 2.9}) {
        const State out = evolve(pauli_x(), e0, t);
        CHECK(inner(e0, out).real() == doctest::Approx(std::cos(t)).epsilon(1e-12));
    }
}

TEST_CASE("evolution stays unitary and composes over time") {
    Rng rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const Index dim = 2 + trial % 7;
        const Operator h = random_hermitian(dim, rng);
        const Spectrum spec = eigendecompose(h);
        const State phi = random_state(dim, rng);
        const double s = -10.0 + 20.0 * rng.uniform();
        const double t = -10.0 + 20.0 * rng.uniform();
        const State once = evolve(spec, phi, s + t);
        const State twice = evolve(spec, evolve(spec, phi, s), t);
        CHECK(std::abs(evolve(spec, phi, t).amplitudes().norm() - 1.0) <= 1e-10);
        CHECK(distance(once, twice) <= 1e-9);
    }
}

TEST_CASE("seeded generators are reproducible") {
    const Operator a1 = random_hermitian(5, 99);
    const Operator a2 = random_hermitian(5, 99);
    CHECK(max_entry_diff(a1.matrix(), a2.matrix()) == 0.0);

    const State s1 = random_state(4, 7);
    const State s2 = random_state(4, 7);
    CHECK((s1.amplitudes() - s2.amplitudes()).norm() == 0.0);
    CHECK(std::abs(s1.amplitudes().norm() - 1.0) <= 1e-12);
}

TEST_CASE("state constructor enforces normalization") {
    Vector v(2);
    v << 0.5, 0.5;
    CHECK_THROWS_AS(State{v}, Error);
    CHECK_NOTHROW(State::normalized(v));
    Vector zero = Vector::Zero(3);
    CHECK_THROWS_AS(State::normalized(zero), Error);
}
