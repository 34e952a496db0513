// zeno.hpp
// Repeated projective measurement of a pure state: survival amplitudes and
// probabilities, the short-time expansion and its validity condition, and
// the convergence scan of the survival probability toward 1.

#pragma once

#include <vector>

#include "urlab/hilbert.hpp"

namespace urlab::zeno {

// Operational cutoff for "much smaller than 1" in the short-time condition.
inline constexpr double kConditionCutoff = 0.01;

struct ZenoSchedule {
    double t0 = 0.0;
    std::vector<double> instants; // strictly increasing, all > t0
};

struct ZenoRunResult {
    double probability; // product of per-step survival probabilities
    std::vector<Complex> per_step_amplitudes;
    double delta_h; // standard deviation of H in the initial state
    double condition_parameter; // (dt/hbar)^2 delta_h^2 at the largest gap
    double heisenberg_product; // dt * delta_h at the largest gap
};

// <psi| exp(-i t H / hbar) |psi>; modulus never above 1 (+1e-12 slack).
Complex survival_amplitude(const Spectrum& h, const State& psi, double t,
                           double hbar = 1.0);
Complex survival_amplitude(const Operator& h, const State& psi, double t,
                           double hbar = 1.0);

ZenoRunResult survival_probability(const Operator& h, const State& psi,
                                   const ZenoSchedule& schedule,
                                   double hbar = 1.0);

// n measurements separated by total_t / n.
ZenoRunResult equal_interval_probability(const Operator& h, const State& psi,
                                         double total_t, long n,
                                         double hbar = 1.0);

struct ShortTimeCheck {
    double exact; // |a(dt)|^2
    double expansion; // 1 - (dt/hbar)^2 delta_h^2
    double residual;
};
ShortTimeCheck short_time_check(const Operator& h, const State& psi, double dt,
                                double hbar = 1.0);

struct ShortTimeScalingRow {
    double dt;
    double residual;
    double factor; // residual(previous dt) / residual(this dt); 0 on first row
    bool at_roundoff_floor; // residual below 1e-13: factor no longer meaningful
};
std::vector<ShortTimeScalingRow> short_time_scaling(const Operator& h,
                                                    const State& psi, double dt0,
                                                    int halvings,
                                                    double hbar = 1.0);

struct ZenoCondition {
    double parameter; // (dt/hbar)^2 delta_h^2
    bool satisfied; // parameter <= cutoff
    double heisenberg_product; // dt * delta_h
    bool heisenberg_conflict; // satisfied while dt * delta_h < hbar/2
};
ZenoCondition zeno_condition(const Operator& h, const State& psi, double dt,
                             double hbar = 1.0,
                             double cutoff = kConditionCutoff);

struct ConvergenceRow {
    long n;
    double probability;
    double one_minus_p;
    double n_times_one_minus_p;
    double condition_parameter;
    bool condition_satisfied;
};

struct ConvergenceScan {
    std::vector<ConvergenceRow> rows;
    double fitted_c; // 1 - P_n <= C/n over the largest decade of n
};

// Rows for each n; asserts the C/n decay law over the largest decade and
// monotone approach of P_n to 1 once the short-time condition holds.
ConvergenceScan convergence_scan(const Operator& h, const State& psi,
                                 double total_t, const std::vector<long>& n_list,
                                 double hbar = 1.0,
                                 double cutoff = kConditionCutoff);

} // namespace urlab::zeno
