#include "urlab/uncertainty.hpp"

#include <cmath>
#include <sstream>

namespace urlab::uncertainty {

namespace {

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": " << a << " vs " << b;
        throw Error(ErrorCode::DimMismatch, os.str());
    }
}

} // namespace

Vector deviation(const Operator& f, const State& phi) {
    require_same_dim(f.dim(), phi.dim(), "deviation");
    const double mean = expectation(f, phi);
    return f.matrix() * phi.amplitudes() - mean * phi.amplitudes();
}

double std_dev(const Operator& f, const State& phi) {
    require_same_dim(f.dim(), phi.dim(), "std_dev");
    const double norm_form = deviation(f, phi).norm();
    const double mean = expectation(f, phi);
    const double second_moment = (f.matrix() * phi.amplitudes()).squaredNorm();
    const double moment_form_sq = second_moment - mean * mean;
    const double scale_sq = std::max(1.0, f.frobenius_norm() * f.frobenius_norm());
    if (std::abs(norm_form * norm_form - moment_form_sq) > 1e-10 * scale_sq)
        throw Error(ErrorCode::AssertionFailure,
                    "standard-deviation formulas disagree beyond tolerance");
    return norm_form;
}

double robertson_bound(const Operator& a, const Operator& b, const State& phi) {
    require_same_dim(a.dim(), b.dim(), "robertson_bound operators");
    return 0.5 * std::abs(matrix_element(commutator(a, b), phi, phi));
}

SchrodingerBound schrodinger_bound(const Operator& a, const Operator& b,
                                   const State& phi) {
    require_same_dim(a.dim(), b.dim(), "schrodinger_bound operators");
    require_same_dim(a.dim(), phi.dim(), "schrodinger_bound state");
    const Complex cross = (a.matrix() * phi.amplitudes())
                              .dot(b.matrix() * phi.amplitudes()); // <phi|AB|phi>
    const double covariance =
        cross.real() - expectation(a, phi) * expectation(b, phi);
    const Complex comm = matrix_element(commutator(a, b), phi, phi);
    const double comm_term = std::norm(0.5 * comm);
    return {covariance * covariance + comm_term, covariance, comm_term};
}

double cross_term_identity(const Operator& a, const Operator& b, const State& phi) {
    require_same_dim(a.dim(), b.dim(), "cross_term_identity operators");
    require_same_dim(a.dim(), phi.dim(), "cross_term_identity state");
    const Vector da = deviation(a, phi);
    const Vector db = deviation(b, phi);
    const Complex cross = da.dot(db); // <phi|dA dB|phi>
    const double direct = std::norm(cross);

    const Matrix comm = commutator(a, b);
    const double anticomm_mean = 2.0 * cross.real(); // <{dA,dB}>
    const double decomposed = 0.25 * anticomm_mean * anticomm_mean +
                              0.25 * std::norm(matrix_element(comm, phi, phi));

    // [dA, dB] = [A, B]: the shifts by <A>, <B> drop out of the commutator.
    const Index n = a.dim();
    const Matrix da_mat = a.matrix() - expectation(a, phi) * Matrix::Identity(n, n);
    const Matrix db_mat = b.matrix() - expectation(b, phi) * Matrix::Identity(n, n);
    const Matrix shifted_comm = da_mat * db_mat - db_mat * da_mat;
    const double scale = std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
    if ((shifted_comm - comm).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorCode::AssertionFailure,
                    "[dA, dB] differs from [A, B] beyond tolerance");

    return std::abs(direct - decomposed);
}

UncertaintyReport verify(const Operator& a, const Operator& b, const State& phi) {
    require_same_dim(a.dim(), b.dim(), "verify operators");
    require_same_dim(a.dim(), phi.dim(), "verify state");

    UncertaintyReport rep;
    rep.scale = a.frobenius_norm() * b.frobenius_norm();

    const Vector da = deviation(a, phi);
    const Vector db = deviation(b, phi);
    rep.delta_a = std_dev(a, phi);
    rep.delta_b = std_dev(b, phi);
    rep.product = rep.delta_a * rep.delta_b;
    rep.product_squared = rep.product * rep.product;
    rep.schwarz_rhs = std::norm(da.dot(db));

    rep.commutator_expectation = matrix_element(commutator(a, b), phi, phi);
    rep.robertson_bound = 0.5 * std::abs(rep.commutator_expectation);
    rep.robertson_bound_squared = rep.robertson_bound * rep.robertson_bound;

    const Complex cross = (a.matrix() * phi.amplitudes())
                              .dot(b.matrix() * phi.amplitudes()); // <phi|AB|phi>
    rep.covariance_term = cross.real() - expectation(a, phi) * expectation(b, phi);
    rep.schrodinger_bound_squared =
        rep.covariance_term * rep.covariance_term + rep.robertson_bound_squared;
    rep.schrodinger_bound = std::sqrt(rep.schrodinger_bound_squared);

    rep.eigenvector_of_a = da.norm() <= 1e-10 * a.frobenius_norm();
    rep.eigenvector_of_b = db.norm() <= 1e-10 * b.frobenius_norm();
    rep.zero_bound = rep.robertson_bound <= 1e-10 * rep.scale &&
                     rep.schrodinger_bound <= 1e-10 * rep.scale;
    rep.real_cross_moment = std::abs(rep.commutator_expectation) <= 1e-12 * rep.scale;
    if (rep.real_cross_moment && std::abs(cross.imag()) > 1e-10 * rep.scale)
        throw Error(ErrorCode::AssertionFailure,
                    "<AB> has an imaginary part although <[A,B]> vanishes");
    return rep;
}

ZeroBoundScan zero_bound_scan(const Operator& a, const Operator& b) {
    require_same_dim(a.dim(), b.dim(), "zero_bound_scan");
    const Index n = a.dim();
    const Spectrum spec_a = eigendecompose(a);
    const Spectrum spec_b = eigendecompose(b);

    ZeroBoundScan scan;
    Matrix stacked(n, 2 * n);
    for (Index k = 0; k < n; ++k) {
        State v = spec_a.eigenvector(k);
        UncertaintyReport rep = verify(a, b, v);
        if (!rep.zero_bound)
            throw Error(ErrorCode::AssertionFailure,
                        "eigenvector of A without a zero lower bound");
        stacked.col(k) = v.amplitudes();
        scan.entries.push_back({'A', k, spec_a.eigenvalue(k), std::move(v), rep});
    }
    for (Index k = 0; k < n; ++k) {
        State v = spec_b.eigenvector(k);
        UncertaintyReport rep = verify(a, b, v);
        if (!rep.zero_bound)
            throw Error(ErrorCode::AssertionFailure,
                        "eigenvector of B without a zero lower bound");
        stacked.col(n + k) = v.amplitudes();
        scan.entries.push_back({'B', k, spec_b.eigenvalue(k), std::move(v), rep});
    }
    scan.span_rank = Eigen::ColPivHouseholderQR<Matrix>(stacked).rank();
    return scan;
}

} // namespace urlab::uncertainty
