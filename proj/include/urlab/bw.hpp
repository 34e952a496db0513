// bw.hpp
// Breit-Wigner energy density with a lower threshold: closed-form
// normalization, truncated moments under a cutoff, and the cutoff-doubling
// scan exposing the divergence of the first and second moments.

#pragma once

#include <string>
#include <vector>

#include "urlab/numerics.hpp"

namespace urlab::bw {

struct BWParams {
    double e0; // peak energy
    double gamma0; // width, > 0
    double e_min; // threshold
    double norm_constant; // N, fixed by the unit-integral condition

    // Computes N = pi / (pi/2 + arctan(2(e0 - e_min)/gamma0)).
    static BWParams make(double e0, double gamma0, double e_min);
};

// Closed-form N, cross-checked against adaptive quadrature of the density
// over [e_min, e_min + 1e6 * gamma0] plus the analytic tail (1 +- 1e-8).
double normalization(double e0, double gamma0, double e_min);

// (N/2pi) * gamma0 / ((e - e0)^2 + (gamma0/2)^2) above the threshold, 0 below.
double bw_density(const BWParams& params, double e);

// Integral of E^k * density over [e_min, lambda], k in {0, 1, 2}, by adaptive
// quadrature in the substituted variable u = (E - e0)/(gamma0/2).
double truncated_moment(const BWParams& params, int k, double lambda);

struct DivergenceRow {
    double lambda;
    double moment_k0;
    double moment_k1;
    double moment_k2;
    double increment_k0; // moment(lambda) - moment(lambda/2); 0 on first row
    double increment_k1;
    double increment_k2;
    double ratio_k0; // increment / previous increment; 0 while undefined
    double ratio_k1;
    double ratio_k2;
};

struct DivergenceReport {
    std::vector<DivergenceRow> rows;
    double k1_increment_limit; // last k=1 increment
    double k1_fitted_coefficient; // increment / ln 2
    double k1_expected_coefficient; // N * gamma0 / (2 pi)
    double k2_ratio_limit; // last k=2 increment ratio
    double k0_limit_estimate; // last mass + last increment
    bool k1_diverges; // increments fail to decay: ratio >= 0.9
    bool k2_diverges; // ratio >= 1.9
    bool k0_converges;
    bool delta_h_undefined;
    std::string conclusion;
};

// The schedule must hold >= 6 cutoffs, each double the previous one.
DivergenceReport divergence_scan(const BWParams& params,
                                 const std::vector<double>& lambda_schedule);

} // namespace urlab::bw
