#include "urlab/mt.hpp"

#include <cmath>
#include <sstream>

#include "urlab/uncertainty.hpp"

namespace urlab::mt {

namespace {

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": " << a << " vs " << b;
        throw Error(ErrorCode::DimMismatch, os.str());
    }
}

void require_hbar(double hbar) {
    if (!(hbar > 0.0))
        throw Error(ErrorCode::InvalidParam, "hbar must be positive");
}

} // namespace

const char* to_string(TauStatus status) noexcept {
    switch (status) {
    case TauStatus::Defined: return "Defined";
    case TauStatus::UndefinedZeroOverZero: return "UndefinedZeroOverZero";
    case TauStatus::BoundViolated: return "BoundViolated";
    }
    return "Unknown";
}

EhrenfestCheck ehrenfest_check(const Operator& a, const Operator& h,
                               const Spectrum& h_spec, const State& phi,
                               double hbar) {
    require_same_dim(a.dim(), h.dim(), "ehrenfest operators");
    require_same_dim(a.dim(), phi.dim(), "ehrenfest state");
    require_hbar(hbar);

    const double scale = a.frobenius_norm() * h.frobenius_norm();
    const double rhs =
        std::abs(matrix_element(commutator(a, h), phi, phi)) / hbar;

    double lhs = 0.0;
    if (h.frobenius_norm() > 0.0) {
        const double step = 1e-4 * hbar / h.frobenius_norm();
        auto derivative = [&](double s) {
            const double plus = expectation(a, evolve(h_spec, phi, s, hbar));
            const double minus = expectation(a, evolve(h_spec, phi, -s, hbar));
            return (plus - minus) / (2.0 * s);
        };
        const double coarse = derivative(step);
        const double fine = derivative(0.5 * step);
        lhs = std::abs((4.0 * fine - coarse) / 3.0);
    }

    const double residual = std::abs(lhs - rhs);
    if (residual > 1e-6 * scale / hbar)
        throw Error(ErrorCode::AssertionFailure,
                    "finite-difference derivative disagrees with the commutator route");
    return {lhs, rhs, residual};
}

EhrenfestCheck ehrenfest_check(const Operator& a, const Operator& h,
                               const State& phi, double hbar) {
    return ehrenfest_check(a, h, eigendecompose(h), phi, hbar);
}

MTReport tau_characteristic(const Operator& a, const Operator& h,
                            const State& phi, double hbar) {
    require_same_dim(a.dim(), h.dim(), "tau operators");
    require_same_dim(a.dim(), phi.dim(), "tau state");
    require_hbar(hbar);

    MTReport rep;
    rep.delta_a = uncertainty::std_dev(a, phi);
    rep.delta_e = uncertainty::std_dev(h, phi);
    rep.commutator_expectation = matrix_element(commutator(a, h), phi, phi);
    const double comm_abs = std::abs(rep.commutator_expectation);
    rep.ehrenfest_derivative = comm_abs / hbar;

    const double guard = kTauGuard * a.frobenius_norm() * h.frobenius_norm();
    if (comm_abs <= guard) {
        rep.tau_status = TauStatus::UndefinedZeroOverZero;
        return rep; // no division happens on this branch
    }
    rep.tau = hbar * rep.delta_a / comm_abs;
    rep.mt_product = *rep.tau * rep.delta_e;
    rep.tau_status = (*rep.mt_product >= 0.5 * hbar - 1e-9 * hbar)
                         ? TauStatus::Defined
                         : TauStatus::BoundViolated;
    return rep;
}

PerturbationFamily build_family(FamilyKind kind, const Operator& a,
                                const Operator& h, const State& anchor,
                                const State& direction, std::vector<double> grid,
                                double hbar) {
    require_same_dim(a.dim(), h.dim(), "family operators");
    require_same_dim(a.dim(), anchor.dim(), "family anchor");
    require_same_dim(a.dim(), direction.dim(), "family direction");
    require_hbar(hbar);
    if (grid.empty())
        throw Error(ErrorCode::EmptyGrid, "perturbation grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0))
            throw Error(ErrorCode::InvalidParam, "grid values must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1]))
            throw Error(ErrorCode::InvalidParam, "grid must be strictly descending");
    }

    const Operator& anchored = (kind == FamilyKind::Eta) ? h : a;
    if (uncertainty::deviation(anchored, anchor).norm() >
        1e-10 * anchored.frobenius_norm())
        throw Error(ErrorCode::InvalidParam,
                    kind == FamilyKind::Eta
                        ? "eta anchor must be an eigenvector of H"
                        : "lambda anchor must be an eigenvector of A");
    if (uncertainty::deviation(a, direction).norm() <= 1e-6 * a.frobenius_norm() ||
        uncertainty::deviation(h, direction).norm() <= 1e-6 * h.frobenius_norm())
        throw Error(ErrorCode::DirectionIsEigenvector,
                    "direction must not be an eigenvector of A or of H");

    const Matrix comm = commutator(a, h);
    const double guard = kTauGuard * a.frobenius_norm() * h.frobenius_norm();
    const double overlap = inner(anchor, direction).real();

    PerturbationFamily family{kind, anchor, direction, std::move(grid), {}, hbar};
    family.samples.reserve(family.grid.size());
    double previous_distance = 0.0;
    for (std::size_t i = 0; i < family.grid.size(); ++i) {
        const double g = family.grid[i];
        const double norm_sq = 1.0 + 2.0 * g * overlap + g * g;
        const Vector raw =
            anchor.amplitudes() + g * direction.amplitudes();
        State member(Vector(raw / std::sqrt(norm_sq)));

        const double delta_a = uncertainty::std_dev(a, member);
        const double delta_h = uncertainty::std_dev(h, member);
        const double comm_abs = std::abs(matrix_element(comm, member, member));
        std::optional<double> tau;
        std::optional<double> fraction;
        if (comm_abs > guard) {
            tau = hbar * delta_a / comm_abs;
            fraction = delta_a * delta_h * hbar / comm_abs;
        }
        const double dist = distance(anchor, member);
        FamilySample sample{g,   std::move(member), delta_a, delta_h,
                            comm_abs, tau,          fraction, dist};

        if (i > 0 && !(sample.distance_to_anchor < previous_distance))
            throw Error(ErrorCode::AssertionFailure,
                        "member distance to anchor is not strictly decreasing");
        previous_distance = sample.distance_to_anchor;
        family.samples.push_back(std::move(sample));
    }
    return family;
}

namespace {

std::vector<const FamilySample*> defined_samples(const PerturbationFamily& family) {
    std::vector<const FamilySample*> out;
    for (const FamilySample& s : family.samples)
        if (s.tau.has_value())
            out.push_back(&s);
    if (out.size() < 4)
        throw Error(ErrorCode::TooFewDefinedSamples,
                    "need at least 4 grid points with a defined tau");
    return out;
}

} // namespace

TauLimitScan tau_limit_scan(const PerturbationFamily& family) {
    if (family.kind != FamilyKind::Eta)
        throw Error(ErrorCode::InvalidParam, "tau_limit_scan expects an eta family");
    std::vector<double> log_eta;
    std::vector<double> log_tau;
    for (const FamilySample* s : defined_samples(family)) {
        log_eta.push_back(std::log(s->parameter));
        log_tau.push_back(std::log(*s->tau));
    }
    const double slope = least_squares_line(log_eta, log_tau).slope;
    return {slope, slope <= -0.9};
}

Extrapolation c_psi_scan(const PerturbationFamily& family) {
    if (family.kind != FamilyKind::Eta)
        throw Error(ErrorCode::InvalidParam, "c_psi_scan expects an eta family");
    std::vector<double> params;
    std::vector<double> fractions;
    for (const FamilySample* s : defined_samples(family)) {
        params.push_back(s->parameter);
        fractions.push_back(*s->full_fraction);
    }
    return richardson_extrapolate(params, fractions);
}

Extrapolation tau_lambda_limit_scan(const PerturbationFamily& family) {
    if (family.kind != FamilyKind::Lambda)
        throw Error(ErrorCode::InvalidParam,
                    "tau_lambda_limit_scan expects a lambda family");
    std::vector<double> params;
    std::vector<double> taus;
    for (const FamilySample* s : defined_samples(family)) {
        params.push_back(s->parameter);
        taus.push_back(*s->tau);
    }
    return richardson_extrapolate(params, taus);
}

LambdaNonUniqueness tau_lambda_nonuniqueness(const PerturbationFamily& first,
                                             const PerturbationFamily& second) {
    LambdaNonUniqueness out;
    out.first = tau_lambda_limit_scan(first);
    out.second = tau_lambda_limit_scan(second);
    out.difference = std::abs(out.first.value - out.second.value);
    out.distinct = out.difference >
                   10.0 * (out.first.error_estimate + out.second.error_estimate);
    if (!out.distinct)
        throw Error(ErrorCode::AssertionFailure,
                    "lambda limits coincide; pick two genuinely different directions");
    return out;
}

} // namespace urlab::mt
