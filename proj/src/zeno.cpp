#include "urlab/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "urlab/uncertainty.hpp"

namespace urlab::zeno {

namespace {

void require_hbar(double hbar) {
    if (!(hbar > 0.0))
        throw Error(ErrorCode::InvalidParam, "hbar must be positive");
}

Complex amplitude_from_weights(const Spectrum& h, const Vector& coeff, double t,
                               double hbar) {
    Complex a(0.0, 0.0);
    for (Index k = 0; k < h.dim(); ++k)
        a += std::norm(coeff(k)) * std::polar(1.0, -t * h.eigenvalue(k) / hbar);
    if (std::abs(a) > 1.0 + 1e-12)
        throw Error(ErrorCode::AssertionFailure, "survival amplitude above unit modulus");
    if (std::abs(a) > 1.0)
        a /= std::abs(a); // pin roundoff excess back onto the feasible set
    return a;
}

} // namespace

Complex survival_amplitude(const Spectrum& h, const State& psi, double t,
                           double hbar) {
    if (h.dim() != psi.dim())
        throw Error(ErrorCode::DimMismatch, "survival_amplitude");
    require_hbar(hbar);
    const Vector coeff = h.basis().adjoint() * psi.amplitudes();
    return amplitude_from_weights(h, coeff, t, hbar);
}

Complex survival_amplitude(const Operator& h, const State& psi, double t,
                           double hbar) {
    return survival_amplitude(eigendecompose(h), psi, t, hbar);
}

ZenoRunResult survival_probability(const Operator& h, const State& psi,
                                   const ZenoSchedule& schedule, double hbar) {
    if (h.dim() != psi.dim())
        throw Error(ErrorCode::DimMismatch, "survival_probability");
    require_hbar(hbar);
    if (schedule.instants.empty())
        throw Error(ErrorCode::InvalidSchedule, "schedule has no instants");
    double previous = schedule.t0;
    for (double t : schedule.instants) {
        if (!(t > previous))
            throw Error(ErrorCode::InvalidSchedule,
                        "instants must be strictly increasing and later than t0");
        previous = t;
    }

    const Spectrum spec = eigendecompose(h);
    const Vector coeff = spec.basis().adjoint() * psi.amplitudes();

    ZenoRunResult result;
    result.delta_h = uncertainty::std_dev(h, psi);
    result.probability = 1.0;
    double max_gap = 0.0;
    previous = schedule.t0;
    for (double t : schedule.instants) {
        const double gap = t - previous;
        const Complex a = amplitude_from_weights(spec, coeff, gap, hbar);
        result.per_step_amplitudes.push_back(a);
        result.probability *= std::norm(a);
        max_gap = std::max(max_gap, gap);
        previous = t;
    }
    result.condition_parameter =
        (max_gap / hbar) * (max_gap / hbar) * result.delta_h * result.delta_h;
    result.heisenberg_product = max_gap * result.delta_h;
    return result;
}

ZenoRunResult equal_interval_probability(const Operator& h, const State& psi,
                                         double total_t, long n, double hbar) {
    if (h.dim() != psi.dim())
        throw Error(ErrorCode::DimMismatch, "equal_interval_probability");
    require_hbar(hbar);
    if (n < 1)
        throw Error(ErrorCode::InvalidParam, "need at least one measurement");
    if (!(total_t > 0.0))
        throw Error(ErrorCode::InvalidParam, "total time must be positive");

    const double dt = total_t / static_cast<double>(n);
    const Complex a = survival_amplitude(h, psi, dt, hbar);

    ZenoRunResult result;
    result.per_step_amplitudes.assign(static_cast<std::size_t>(n), a);
    result.probability = std::pow(std::norm(a), static_cast<double>(n));
    result.delta_h = uncertainty::std_dev(h, psi);
    result.condition_parameter =
        (dt / hbar) * (dt / hbar) * result.delta_h * result.delta_h;
    result.heisenberg_product = dt * result.delta_h;
    return result;
}

ShortTimeCheck short_time_check(const Operator& h, const State& psi, double dt,
                                double hbar) {
    if (h.dim() != psi.dim())
        throw Error(ErrorCode::DimMismatch, "short_time_check");
    require_hbar(hbar);
    if (!(dt > 0.0))
        throw Error(ErrorCode::InvalidParam, "dt must be positive");
    const double exact = std::norm(survival_amplitude(h, psi, dt, hbar));
    const double delta_h = uncertainty::std_dev(h, psi);
    const double expansion = 1.0 - (dt / hbar) * (dt / hbar) * delta_h * delta_h;
    return {exact, expansion, std::abs(exact - expansion)};
}

std::vector<ShortTimeScalingRow> short_time_scaling(const Operator& h,
                                                    const State& psi, double dt0,
                                                    int halvings, double hbar) {
    if (halvings < 1)
        throw Error(ErrorCode::InvalidParam, "need at least one halving");
    const Spectrum spec = eigendecompose(h);
    const double delta_h = uncertainty::std_dev(h, psi);

    std::vector<ShortTimeScalingRow> rows;
    double dt = dt0;
    double previous_residual = 0.0;
    for (int k = 0; k <= halvings; ++k) {
        const double exact = std::norm(survival_amplitude(spec, psi, dt, hbar));
        const double expansion =
            1.0 - (dt / hbar) * (dt / hbar) * delta_h * delta_h;
        const double residual = std::abs(exact - expansion);
        ShortTimeScalingRow row;
        row.dt = dt;
        row.residual = residual;
        row.factor = (k == 0 || residual == 0.0) ? 0.0 : previous_residual / residual;
        row.at_roundoff_floor = residual < 1e-13;
        rows.push_back(row);
        previous_residual = residual;
        dt *= 0.5;
    }
    return rows;
}

ZenoCondition zeno_condition(const Operator& h, const State& psi, double dt,
                             double hbar, double cutoff) {
    if (h.dim() != psi.dim())
        throw Error(ErrorCode::DimMismatch, "zeno_condition");
    require_hbar(hbar);
    if (!(dt > 0.0))
        throw Error(ErrorCode::InvalidParam, "dt must be positive");
    const double delta_h = uncertainty::std_dev(h, psi);
    ZenoCondition cond;
    cond.parameter = (dt / hbar) * (dt / hbar) * delta_h * delta_h;
    cond.satisfied = cond.parameter <= cutoff;
    cond.heisenberg_product = dt * delta_h;
    cond.heisenberg_conflict =
        cond.satisfied && cond.heisenberg_product < 0.5 * hbar;
    return cond;
}

ConvergenceScan convergence_scan(const Operator& h, const State& psi,
                                 double total_t, const std::vector<long>& n_list,
                                 double hbar, double cutoff) {
    if (h.dim() != psi.dim())
        throw Error(ErrorCode::DimMismatch, "convergence_scan");
    require_hbar(hbar);
    if (!(total_t > 0.0))
        throw Error(ErrorCode::InvalidParam, "total time must be positive");
    if (n_list.empty())
        throw Error(ErrorCode::InvalidParam, "n_list is empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1)
            throw Error(ErrorCode::InvalidParam, "n values must be positive");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw Error(ErrorCode::InvalidParam, "n_list must be strictly increasing");
    }

    const Spectrum spec = eigendecompose(h);
    const double delta_h = uncertainty::std_dev(h, psi);

    ConvergenceScan scan;
    for (long n : n_list) {
        const double dt = total_t / static_cast<double>(n);
        const Complex a = survival_amplitude(spec, psi, dt, hbar);
        ConvergenceRow row;
        row.n = n;
        row.probability = std::pow(std::norm(a), static_cast<double>(n));
        row.one_minus_p = 1.0 - row.probability;
        row.n_times_one_minus_p = static_cast<double>(n) * row.one_minus_p;
        row.condition_parameter = (dt / hbar) * (dt / hbar) * delta_h * delta_h;
        row.condition_satisfied = row.condition_parameter <= cutoff;
        scan.rows.push_back(row);
    }

    // Fit 1 - P = C/n over the largest decade of n and check the decay law.
    const double n_max = static_cast<double>(n_list.back());
    double num = 0.0;
    double den = 0.0;
    for (const ConvergenceRow& row : scan.rows) {
        if (static_cast<double>(row.n) * 10.0 < n_max)
            continue;
        const double inv_n = 1.0 / static_cast<double>(row.n);
        num += row.one_minus_p * inv_n;
        den += inv_n * inv_n;
    }
    scan.fitted_c = (den > 0.0) ? num / den : 0.0;
    for (const ConvergenceRow& row : scan.rows) {
        if (static_cast<double>(row.n) * 10.0 < n_max)
            continue;
        if (row.one_minus_p >
            1.1 * scan.fitted_c / static_cast<double>(row.n) + 1e-12)
            throw Error(ErrorCode::AssertionFailure,
                        "survival probability violates the C/n decay law");
    }
    for (std::size_t i = 1; i < scan.rows.size(); ++i) {
        if (scan.rows[i - 1].condition_satisfied && scan.rows[i].condition_satisfied &&
            scan.rows[i].probability < scan.rows[i - 1].probability - 1e-12)
            throw Error(ErrorCode::AssertionFailure,
                        "survival probability is not monotone in n under the "
                        "short-time condition");
    }
    return scan;
}

} // namespace urlab::zeno
