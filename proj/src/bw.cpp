#include "urlab/bw.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace urlab::bw {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(double e0, double gamma0, double e_min) {
    if (!std::isfinite(e0) || !std::isfinite(gamma0) || !std::isfinite(e_min))
        throw Error(ErrorCode::InvalidParam, "Breit-Wigner parameters must be finite");
    if (!(gamma0 > 0.0))
        throw Error(ErrorCode::InvalidParam, "width gamma0 must be positive");
}

double closed_form_norm(double e0, double gamma0, double e_min) {
    return kPi / (kPi / 2.0 + std::atan(2.0 * (e0 - e_min) / gamma0));
}

} // namespace

BWParams BWParams::make(double e0, double gamma0, double e_min) {
    validate(e0, gamma0, e_min);
    return {e0, gamma0, e_min, closed_form_norm(e0, gamma0, e_min)};
}

double bw_density(const BWParams& params, double e) {
    validate(params.e0, params.gamma0, params.e_min);
    if (e < params.e_min)
        return 0.0;
    const double half_width = 0.5 * params.gamma0;
    const double shifted = e - params.e0;
    return params.norm_constant / (2.0 * kPi) * params.gamma0 /
           (shifted * shifted + half_width * half_width);
}

double normalization(double e0, double gamma0, double e_min) {
    validate(e0, gamma0, e_min);
    const double n = closed_form_norm(e0, gamma0, e_min);

    // Independent route: integrate the density itself (no substitution, no
    // arctan) up to a large cutoff and append the analytic tail.
    const BWParams params{e0, gamma0, e_min, n};
    const double cutoff = e_min + 1e6 * gamma0;
    const QuadratureResult head = integrate_adaptive(
        [&](double e) { return bw_density(params, e); }, e_min, cutoff, 1e-10);
    const double tail =
        n / kPi * (kPi / 2.0 - std::atan(2.0 * (cutoff - e0) / gamma0));
    if (std::abs(head.value + tail - 1.0) > 1e-8)
        throw Error(ErrorCode::AssertionFailure,
                    "closed-form normalization disagrees with quadrature");
    return n;
}

double truncated_moment(const BWParams& params, int k, double lambda) {
    validate(params.e0, params.gamma0, params.e_min);
    if (k < 0 || k > 2)
        throw Error(ErrorCode::InvalidParam, "moment order must be 0, 1 or 2");
    if (!(lambda > params.e_min))
        throw Error(ErrorCode::InvalidParam, "cutoff must lie above the threshold");

    // u = (E - e0)/(gamma0/2) flattens the peak to unit width.
    const double half_width = 0.5 * params.gamma0;
    const double u_min = (params.e_min - params.e0) / half_width;
    const double u_max = (lambda - params.e0) / half_width;
    const double prefactor = params.norm_constant / kPi;
    auto integrand = [&](double u) {
        const double e = params.e0 + half_width * u;
        double ek = 1.0;
        for (int j = 0; j < k; ++j)
            ek *= e;
        return prefactor * ek / (1.0 + u * u);
    };
    return integrate_adaptive(integrand, u_min, u_max, 1e-9).value;
}

DivergenceReport divergence_scan(const BWParams& params,
                                 const std::vector<double>& lambda_schedule) {
    validate(params.e0, params.gamma0, params.e_min);
    if (lambda_schedule.size() < 6)
        throw Error(ErrorCode::ScheduleTooShort,
                    "cutoff schedule needs at least 6 points");
    for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
        if (!(lambda_schedule[i] > params.e_min))
            throw Error(ErrorCode::InvalidParam, "cutoffs must lie above the threshold");
        if (i > 0 &&
            std::abs(lambda_schedule[i] / lambda_schedule[i - 1] - 2.0) > 1e-9)
            throw Error(ErrorCode::InvalidParam, "schedule must double at every step");
    }

    DivergenceReport report;
    for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
        DivergenceRow row{};
        row.lambda = lambda_schedule[i];
        row.moment_k0 = truncated_moment(params, 0, row.lambda);
        row.moment_k1 = truncated_moment(params, 1, row.lambda);
        row.moment_k2 = truncated_moment(params, 2, row.lambda);
        if (i > 0) {
            const DivergenceRow& prev = report.rows[i - 1];
            row.increment_k0 = row.moment_k0 - prev.moment_k0;
            row.increment_k1 = row.moment_k1 - prev.moment_k1;
            row.increment_k2 = row.moment_k2 - prev.moment_k2;
            if (i > 1) {
                if (prev.increment_k0 != 0.0)
                    row.ratio_k0 = row.increment_k0 / prev.increment_k0;
                if (prev.increment_k1 != 0.0)
                    row.ratio_k1 = row.increment_k1 / prev.increment_k1;
                if (prev.increment_k2 != 0.0)
                    row.ratio_k2 = row.increment_k2 / prev.increment_k2;
            }
        }
        report.rows.push_back(row);
    }

    const DivergenceRow& last = report.rows.back();
    report.k1_increment_limit = last.increment_k1;
    report.k1_fitted_coefficient = last.increment_k1 / std::numbers::ln2;
    report.k1_expected_coefficient =
        params.norm_constant * params.gamma0 / (2.0 * kPi);
    report.k2_ratio_limit = last.ratio_k2;
    report.k0_limit_estimate = last.moment_k0 + last.increment_k0;
    report.k1_diverges = last.ratio_k1 >= 0.9;
    report.k2_diverges = last.ratio_k2 >= 1.9;
    report.k0_converges = last.ratio_k0 > 0.0 && last.ratio_k0 < 0.9;
    report.delta_h_undefined = report.k1_diverges && report.k2_diverges;
    report.conclusion = report.delta_h_undefined
                            ? "delta_H undefined: first and second moments grow "
                              "without bound as the cutoff doubles"
                            : "moments converged; delta_H is defined";
    return report;
}

} // namespace urlab::bw
