// numerics.hpp
// Small numerical utilities shared by the analysis modules: adaptive
// Gauss-Kronrod quadrature, Richardson extrapolation on geometric grids,
// and a least-squares line fit.

#pragma once

#include <functional>
#include <vector>

#include "urlab/errors.hpp"

namespace urlab {

struct QuadratureResult {
    double value;
    double error_estimate;
    int evaluations;
};

// Adaptive 15-point Gauss-Kronrod rule: repeatedly bisects the interval
// carrying the largest local error until the summed estimate drops below
// max(abs_tol, rel_tol * |value|). Throws QuadratureNoConvergence when the
// interval budget is exhausted first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol,
                                    double abs_tol = 0.0,
                                    int max_intervals = 20000);

struct Extrapolation {
    double value;
    double error_estimate;
};

// Richardson extrapolation of samples f(h_k) to h -> 0 on a strictly
// descending geometric grid h_k = h_0 * r^{-k}, assuming a power-series
// error model in h.
Extrapolation richardson_extrapolate(const std::vector<double>& params,
                                     const std::vector<double>& values);

struct LineFit {
    double slope;
    double intercept;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace urlab
