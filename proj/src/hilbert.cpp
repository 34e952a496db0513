#include "urlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace urlab {

namespace {

void require_finite(const Matrix& m) {
    if (!m.allFinite())
        throw Error(ErrorCode::NonFiniteEntry, "matrix contains NaN or Inf");
}

void require_square(const Matrix& m) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << "matrix is " << m.rows() << "x" << m.cols();
        throw Error(ErrorCode::NonSquare, os.str());
    }
}

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": " << a << " vs " << b;
        throw Error(ErrorCode::DimMismatch, os.str());
    }
}

double max_abs_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

Operator::Operator(Matrix mat) : mat_(std::move(mat)) {
    require_square(mat_);
    require_finite(mat_);
    if (mat_.rows() < 1)
        throw Error(ErrorCode::InvalidParam, "operator dimension must be positive");
    const double herm = max_abs_entry(mat_ - mat_.adjoint());
    if (herm > kHermitianTol) {
        std::ostringstream os;
        os << "largest |entry - conj(transposed entry)| = " << herm;
        throw Error(ErrorCode::NotNearlyHermitian, os.str());
    }
    fnorm_ = mat_.norm();
}

State::State(Vector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1)
        throw Error(ErrorCode::InvalidParam, "state dimension must be positive");
    if (!amp_.allFinite())
        throw Error(ErrorCode::NonFiniteEntry, "state contains NaN or Inf");
    const double n = amp_.norm();
    if (std::abs(n - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "state norm is " << n;
        throw Error(ErrorCode::InvalidParam, os.str());
    }
}

State State::normalized(Vector amplitudes) {
    if (amplitudes.size() < 1)
        throw Error(ErrorCode::InvalidParam, "state dimension must be positive");
    if (!amplitudes.allFinite())
        throw Error(ErrorCode::NonFiniteEntry, "state contains NaN or Inf");
    const double n = amplitudes.norm();
    if (n <= 0.0)
        throw Error(ErrorCode::InvalidParam, "cannot normalize the zero vector");
    State s;
    s.amp_ = amplitudes / n;
    return s;
}

Complex inner(const State& a, const State& b) {
    require_same_dim(a.dim(), b.dim(), "state dims");
    return a.amplitudes().dot(b.amplitudes());
}

double distance(const State& a, const State& b) {
    require_same_dim(a.dim(), b.dim(), "state dims");
    return (a.amplitudes() - b.amplitudes()).norm();
}

Spectrum::Spectrum(Eigen::VectorXd eigenvalues, Matrix basis)
    : eigenvalues_(std::move(eigenvalues)), basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() != eigenvalues_.size())
        throw Error(ErrorCode::DimMismatch, "spectrum eigenvalue/basis shape mismatch");
}

State Spectrum::eigenvector(Index k) const {
    if (k < 0 || k >= dim())
        throw Error(ErrorCode::IndexOutOfRange, "eigenvector index");
    return State::normalized(basis_.col(k));
}

SpectrumResiduals spectrum_residuals(const Operator& a, const Spectrum& spec) {
    require_same_dim(a.dim(), spec.dim(), "operator vs spectrum");
    double eig = 0.0;
    for (Index k = 0; k < spec.dim(); ++k) {
        const Vector v = spec.basis().col(k);
        eig = std::max(eig, (a.matrix() * v - spec.eigenvalue(k) * v).norm());
    }
    const Matrix gram = spec.basis().adjoint() * spec.basis();
    const double orth = max_abs_entry(gram - Matrix::Identity(spec.dim(), spec.dim()));
    return {eig, orth};
}

Operator make_hermitian(const Matrix& raw) {
    require_square(raw);
    require_finite(raw);
    const Matrix sym = 0.5 * (raw + raw.adjoint());
    const double moved = max_abs_entry(sym - raw);
    if (moved > 1e-8) {
        std::ostringstream os;
        os << "symmetrization changes an entry by " << moved
           << "; input does not look Hermitian";
        throw Error(ErrorCode::NotNearlyHermitian, os.str());
    }
    return Operator(sym);
}

Operator pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return Operator(m);
}

Operator pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return Operator(m);
}

Operator pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return Operator(m);
}

State basis_state(Index dim, Index k) {
    if (dim < 1)
        throw Error(ErrorCode::InvalidParam, "basis_state dimension must be positive");
    if (k < 0 || k >= dim)
        throw Error(ErrorCode::IndexOutOfRange, "basis_state index");
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return State(std::move(v));
}

OscillatorPair truncated_oscillator(Index dim) {
    if (dim < 2)
        throw Error(ErrorCode::DimTooSmall, "truncated oscillator needs dim >= 2");
    Matrix lower = Matrix::Zero(dim, dim); // annihilation operator
    for (Index n = 1; n < dim; ++n)
        lower(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Matrix raise = lower.adjoint();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Operator x(Matrix((lower + raise) * inv_sqrt2));
    Operator p(Matrix(Complex(0, 1) * (raise - lower) * inv_sqrt2));
    const Matrix comm = x.matrix() * p.matrix() - p.matrix() * x.matrix();
    const Matrix ideal = Complex(0, 1) * Matrix::Identity(dim, dim);
    const double corner = max_abs_entry(comm - ideal);
    return {std::move(x), std::move(p), corner};
}

Matrix commutator(const Operator& a, const Operator& b) {
    require_same_dim(a.dim(), b.dim(), "commutator operands");
    Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    const double scale = std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
    const double drift = max_abs_entry(c + c.adjoint());
    if (drift > 1e-12 * scale)
        throw Error(ErrorCode::AssertionFailure, "commutator lost anti-Hermiticity");
    return c;
}

double expectation(const Operator& f, const State& phi) {
    require_same_dim(f.dim(), phi.dim(), "expectation");
    const Complex val = phi.amplitudes().dot(f.matrix() * phi.amplitudes());
    const double tol = kHermitianTol * std::max(1.0, f.frobenius_norm());
    if (std::abs(val.imag()) > tol) {
        std::ostringstream os;
        os << "imaginary part " << val.imag() << " exceeds " << tol;
        throw Error(ErrorCode::NonHermitianExpectation, os.str());
    }
    return val.real();
}

Complex matrix_element(const Matrix& m, const State& phi, const State& psi) {
    require_square(m);
    require_same_dim(m.rows(), phi.dim(), "matrix_element bra");
    require_same_dim(m.rows(), psi.dim(), "matrix_element ket");
    return phi.amplitudes().dot(m * psi.amplitudes());
}

namespace {

// One unitary plane rotation U in the (p,q) plane annihilating m(p,q),
// with U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] written into the
// full-size update of m <- U^dagger m U and v <- v U.
void jacobi_rotate(Matrix& m, Matrix& v, Index p, Index q) {
    const Index n = m.rows();
    const Complex apq = m(p, q);
    const double r = std::abs(apq);
    const Complex phase = apq / r; // e^{i phi}
    const double app = m(p, p).real();
    const double aqq = m(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    double t;
    if (std::abs(tau) > 1e15)
        t = 1.0 / (2.0 * tau);
    else
        t = std::copysign(1.0, tau) / (std::abs(tau) + std::hypot(1.0, tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Complex sp = s * std::conj(phase); // s e^{-i phi}
    const Complex cp = c * std::conj(phase); // c e^{-i phi}

    for (Index k = 0; k < n; ++k) { // columns: m <- m U
        const Complex mkp = m(k, p);
        const Complex mkq = m(k, q);
        m(k, p) = c * mkp - sp * mkq;
        m(k, q) = s * mkp + cp * mkq;
    }
    for (Index k = 0; k < n; ++k) { // rows: m <- U^dagger m
        const Complex mpk = m(p, k);
        const Complex mqk = m(q, k);
        m(p, k) = c * mpk - std::conj(sp) * mqk;
        m(q, k) = s * mpk + std::conj(cp) * mqk;
    }
    m(p, q) = 0.0;
    m(q, p) = 0.0;
    m(p, p) = m(p, p).real();
    m(q, q) = m(q, q).real();

    for (Index k = 0; k < n; ++k) { // accumulate eigenvectors: v <- v U
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp - sp * vkq;
        v(k, q) = s * vkp + cp * vkq;
    }
}

double max_off_diagonal(const Matrix& m) {
    double w = 0.0;
    for (Index p = 0; p + 1 < m.rows(); ++p)
        for (Index q = p + 1; q < m.cols(); ++q)
            w = std::max(w, std::abs(m(p, q)));
    return w;
}

} // namespace

Spectrum eigendecompose(const Operator& a) {
    const Index n = a.dim();
    const double stop = 1e-14 * a.frobenius_norm();
    constexpr int kMaxSweeps = 100;

    Matrix m = a.matrix();
    Matrix v = Matrix::Identity(n, n);

    int sweep = 0;
    while (max_off_diagonal(m) > stop) {
        if (++sweep > kMaxSweeps) {
            std::ostringstream os;
            os << "cyclic Jacobi did not converge in " << kMaxSweeps
               << " sweeps; off-diagonal residual " << max_off_diagonal(m)
               << " vs target " << stop;
            throw Error(ErrorCode::NoConvergence, os.str());
        }
        for (Index p = 0; p + 1 < n; ++p)
            for (Index q = p + 1; q < n; ++q)
                if (std::abs(m(p, q)) > 0.01 * stop)
                    jacobi_rotate(m, v, p, q);
    }

    Eigen::VectorXd eigenvalues(n);
    for (Index k = 0; k < n; ++k)
        eigenvalues(k) = m(k, k).real();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index i, Index j) { return eigenvalues(i) < eigenvalues(j); });

    Eigen::VectorXd sorted_values(n);
    Matrix sorted_basis(n, n);
    for (Index k = 0; k < n; ++k) {
        sorted_values(k) = eigenvalues(order[static_cast<std::size_t>(k)]);
        sorted_basis.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    }

    Spectrum spec(std::move(sorted_values), std::move(sorted_basis));
    const SpectrumResiduals res = spectrum_residuals(a, spec);
    const double tol = 1e-10 * std::max(1.0, a.frobenius_norm());
    if (res.eigenpair > tol || res.orthonormality > 1e-10)
        throw Error(ErrorCode::AssertionFailure, "spectrum invariants violated after Jacobi");
    return spec;
}

State evolve(const Spectrum& h, const State& phi, double t, double hbar) {
    require_same_dim(h.dim(), phi.dim(), "evolve");
    if (!(hbar > 0.0))
        throw Error(ErrorCode::InvalidParam, "hbar must be positive");
    Vector coeff = h.basis().adjoint() * phi.amplitudes();
    for (Index k = 0; k < h.dim(); ++k)
        coeff(k) *= std::polar(1.0, -t * h.eigenvalue(k) / hbar);
    Vector out = h.basis() * coeff;
    const double drift = std::abs(out.norm() - 1.0);
    if (drift >= 1e-10)
        throw Error(ErrorCode::AssertionFailure, "evolution norm drift above 1e-10");
    if (drift > 1e-13)
        out /= out.norm();
    return State::normalized(std::move(out));
}

State evolve(const Operator& h, const State& phi, double t, double hbar) {
    return evolve(eigendecompose(h), phi, t, hbar);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Complex Rng::complex_gaussian() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re * inv_sqrt2, im * inv_sqrt2);
}

Operator random_hermitian(Index dim, Rng& rng) {
    if (dim < 1)
        throw Error(ErrorCode::InvalidParam, "dimension must be positive");
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j)
            g(i, j) = rng.complex_gaussian();
    return Operator(Matrix(0.5 * (g + g.adjoint())));
}

Operator random_hermitian(Index dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_hermitian(dim, rng);
}

State random_state(Index dim, Rng& rng) {
    if (dim < 1)
        throw Error(ErrorCode::InvalidParam, "dimension must be positive");
    Vector v(dim);
    for (Index i = 0; i < dim; ++i)
        v(i) = rng.complex_gaussian();
    return State::normalized(std::move(v));
}

State random_state(Index dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_state(dim, rng);
}

} // namespace urlab
