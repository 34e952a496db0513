// hilbert.hpp
// Dense complex linear algebra for finite-dimensional quantum mechanics:
// Hermitian operators, normalized states, spectral decomposition (cyclic
// Jacobi), unitary time evolution and the canonical operator builders.

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "urlab/errors.hpp"

namespace urlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12; // per entry, absolute
inline constexpr double kNormTol = 1e-12;

// Hermitian matrix on an n-dimensional complex Hilbert space.
class Operator {
public:
    explicit Operator(Matrix mat);

    const Matrix& matrix() const { return mat_; }
    Index dim() const { return mat_.rows(); }
    double frobenius_norm() const { return fnorm_; }

private:
    Matrix mat_;
    double fnorm_;
};

// Normalized complex n-vector.
class State {
public:
    explicit State(Vector amplitudes);

    // Normalizes the input before constructing; rejects the zero vector.
    static State normalized(Vector amplitudes);

    const Vector& amplitudes() const { return amp_; }
    Index dim() const { return amp_.size(); }

private:
    State() = default;
    Vector amp_;
};

Complex inner(const State& a, const State& b); // <a|b>
double distance(const State& a, const State& b);

// Eigenvalues (ascending) plus the unitary matrix of eigenvector columns.
class Spectrum {
public:
    Spectrum(Eigen::VectorXd eigenvalues, Matrix basis);

    Index dim() const { return eigenvalues_.size(); }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    double eigenvalue(Index k) const { return eigenvalues_(k); }
    const Matrix& basis() const { return basis_; }
    State eigenvector(Index k) const;

private:
    Eigen::VectorXd eigenvalues_;
    Matrix basis_;
};

// Largest residuals of the Spectrum invariants against the operator it
// claims to decompose. Used by eigendecompose itself and by tests.
struct SpectrumResiduals {
    double eigenpair; // max_k ||A v_k - lambda_k v_k||
    double orthonormality; // max_jk |<v_j|v_k> - delta_jk|
};
SpectrumResiduals spectrum_residuals(const Operator& a, const Spectrum& spec);

// (raw + raw^dagger)/2. Rejects inputs the symmetrization moves by more
// than 1e-8 per entry: the caller most likely passed the wrong matrix.
Operator make_hermitian(const Matrix& raw);

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
State basis_state(Index dim, Index k);

// Finite ladder-operator truncation of the position/momentum pair
// (hbar = m = omega = 1). [X,P] = i*I except for the bottom-right corner
// entry i*(1-dim); commutator_corner_deviation reports max |[X,P] - i*I|.
struct OscillatorPair {
    Operator position;
    Operator momentum;
    double commutator_corner_deviation;
};
OscillatorPair truncated_oscillator(Index dim);

Matrix commutator(const Operator& a, const Operator& b); // AB - BA, anti-Hermitian

double expectation(const Operator& f, const State& phi); // <phi|F|phi>
Complex matrix_element(const Matrix& m, const State& phi, const State& psi); // <phi|M|psi>

// Full spectrum via cyclic Jacobi rotations; sweeps until the largest
// off-diagonal magnitude is <= 1e-14 * ||A||_F or 100 sweeps (NoConvergence).
Spectrum eigendecompose(const Operator& a);

// exp(-i t H / hbar) |phi> through the spectral decomposition of H.
State evolve(const Spectrum& h, const State& phi, double t, double hbar = 1.0);
State evolve(const Operator& h, const State& phi, double t, double hbar = 1.0);

// Deterministic Gaussian source: mt19937_64 driving a Box-Muller transform.
// The engine output is fixed by the standard and the transform is ours, so
// streams are reproducible independent of the standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static const char* algorithm() { return "mt19937_64+box-muller"; }

    double uniform(); // [0, 1)
    double gaussian(); // N(0, 1)
    Complex complex_gaussian(); // CN(0, 1): re, im ~ N(0, 1/2)

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

Operator random_hermitian(Index dim, Rng& rng);
Operator random_hermitian(Index dim, std::uint64_t seed);
State random_state(Index dim, Rng& rng);
State random_state(Index dim, std::uint64_t seed);

} // namespace urlab
