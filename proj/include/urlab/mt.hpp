// mt.hpp
// Characteristic-time machinery: the equation-of-motion check, the guarded
// characteristic time tau_A (never divides when the commutator expectation
// vanishes -- the zero-over-zero case stays a status, not a number), and
// perturbed-eigenvector families probing the limits toward eigenvectors.

#pragma once

#include <optional>
#include <vector>

#include "urlab/hilbert.hpp"
#include "urlab/numerics.hpp"

namespace urlab::mt {

// Denominator guard, relative to ||A||_F * ||H||_F. Division by the
// commutator expectation is never performed below it.
inline constexpr double kTauGuard = 1e-12;

enum class TauStatus { Defined, UndefinedZeroOverZero, BoundViolated };
const char* to_string(TauStatus status) noexcept;

struct MTReport {
    double delta_a = 0.0;
    double delta_e = 0.0; // standard deviation of H
    Complex commutator_expectation{0.0, 0.0}; // <[A,H]>
    double ehrenfest_derivative = 0.0; // |d<A>/dt| = |<[A,H]>|/hbar
    TauStatus tau_status = TauStatus::UndefinedZeroOverZero;
    std::optional<double> tau;
    std::optional<double> mt_product; // tau * delta_e
};

struct EhrenfestCheck {
    double lhs; // |d<A>/dt| at t = 0 by central differences of the evolution
    double rhs; // |<[A,H]>|/hbar
    double residual;
};

// Central finite differences with one Richardson halving, step
// 1e-4 * hbar / ||H||_F; the residual against the commutator route is
// asserted below 1e-6 * ||A||_F * ||H||_F / hbar.
EhrenfestCheck ehrenfest_check(const Operator& a, const Operator& h,
                               const Spectrum& h_spec, const State& phi,
                               double hbar = 1.0);
EhrenfestCheck ehrenfest_check(const Operator& a, const Operator& h,
                               const State& phi, double hbar = 1.0);

MTReport tau_characteristic(const Operator& a, const Operator& h,
                            const State& phi, double hbar = 1.0);

enum class FamilyKind {
    Eta, // anchor is an eigenvector of H
    Lambda, // anchor is an eigenvector of A
};

struct FamilySample {
    double parameter;
    State member;
    double delta_a;
    double delta_h;
    double comm_abs; // |<[A,H]>|
    std::optional<double> tau; // guarded
    std::optional<double> full_fraction; // delta_a * delta_h / (comm_abs / hbar)
    double distance_to_anchor;
};

struct PerturbationFamily {
    FamilyKind kind;
    State anchor;
    State direction;
    std::vector<double> grid; // strictly descending, positive
    std::vector<FamilySample> samples;
    double hbar;
};

// Members are normalize(anchor + g * direction) with the closed-form
// normalization (1 + 2 g Re<anchor|direction> + g^2)^(-1/2). The direction
// must not be an eigenvector of A or of H (rejection threshold 1e-6
// relative); the grid walks the member monotonically toward the anchor.
PerturbationFamily build_family(FamilyKind kind, const Operator& a,
                                const Operator& h, const State& anchor,
                                const State& direction, std::vector<double> grid,
                                double hbar = 1.0);

struct TauLimitScan {
    double slope; // least-squares slope of log tau vs log eta
    bool diverges; // slope <= -0.9
};
TauLimitScan tau_limit_scan(const PerturbationFamily& family);

// Richardson extrapolation of the full fraction to eta -> 0.
Extrapolation c_psi_scan(const PerturbationFamily& family);

// Richardson extrapolation of tau to lambda -> 0 (finite limit).
Extrapolation tau_lambda_limit_scan(const PerturbationFamily& family);

struct LambdaNonUniqueness {
    Extrapolation first;
    Extrapolation second;
    double difference;
    bool distinct; // difference > 10 * (err1 + err2)
};

// Paired run: two lambda families around the same anchor whose limits must
// differ -- the limit depends on the approach direction.
LambdaNonUniqueness tau_lambda_nonuniqueness(const PerturbationFamily& first,
                                             const PerturbationFamily& second);

} // namespace urlab::mt
