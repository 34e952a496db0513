#include "urlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace urlab {

namespace {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the even-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    const double fc = f(center);
    double res_gauss = fc * kWg[3];
    double res_kronrod = fc * kWgk[7];
    double res_abs = std::abs(res_kronrod);
    double fv1[7];
    double fv2[7];
    for (int j = 0; j < 3; ++j) {
        const int k = 2 * j + 1; // Gauss points sit on the odd Kronrod nodes
        const double absc = half * kXgk[k];
        fv1[k] = f(center - absc);
        fv2[k] = f(center + absc);
        const double fsum = fv1[k] + fv2[k];
        res_gauss += kWg[j] * fsum;
        res_kronrod += kWgk[k] * fsum;
        res_abs += kWgk[k] * (std::abs(fv1[k]) + std::abs(fv2[k]));
    }
    for (int j = 0; j < 4; ++j) {
        const int k = 2 * j;
        const double absc = half * kXgk[k];
        fv1[k] = f(center - absc);
        fv2[k] = f(center + absc);
        const double fsum = fv1[k] + fv2[k];
        res_kronrod += kWgk[k] * fsum;
        res_abs += kWgk[k] * (std::abs(fv1[k]) + std::abs(fv2[k]));
    }

    const double mean = 0.5 * res_kronrod;
    double res_asc = kWgk[7] * std::abs(fc - mean);
    for (int k = 0; k < 7; ++k)
        res_asc += kWgk[k] * (std::abs(fv1[k] - mean) + std::abs(fv2[k] - mean));

    const double value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    double err = std::abs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    const double epmach = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (res_abs > uflow / (50.0 * epmach))
        err = std::max(epmach * 50.0 * res_abs, err);
    return {value, err};
}

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

struct PanelWorse {
    bool operator()(const Panel& lhs, const Panel& rhs) const {
        return lhs.error < rhs.error;
    }
};

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol,
                                    double abs_tol, int max_intervals) {
    if (!(rel_tol > 0.0) && !(abs_tol > 0.0))
        throw Error(ErrorCode::InvalidParam, "quadrature needs a positive tolerance");
    if (a == b)
        return {0.0, 0.0, 0};
    if (a > b) {
        QuadratureResult flipped = integrate_adaptive(f, b, a, rel_tol, abs_tol,
                                                      max_intervals);
        flipped.value = -flipped.value;
        return flipped;
    }

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
    PanelEstimate first = gk15(f, a, b);
    queue.push({a, b, first.value, first.error});
    double total = first.value;
    double total_err = first.error;
    int evaluations = 15;
    int intervals = 1;

    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (intervals >= max_intervals) {
            std::ostringstream os;
            os << "error estimate " << total_err << " after " << intervals
               << " intervals";
            throw Error(ErrorCode::QuadratureNoConvergence, os.str());
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw Error(ErrorCode::QuadratureNoConvergence,
                        "interval collapsed below machine resolution");
        const PanelEstimate left = gk15(f, worst.a, mid);
        const PanelEstimate right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.value, left.error});
        queue.push({mid, worst.b, right.value, right.error});
        evaluations += 30;
        ++intervals;
    }
    return {total, total_err, evaluations};
}

Extrapolation richardson_extrapolate(const std::vector<double>& params,
                                     const std::vector<double>& values) {
    if (params.size() != values.size())
        throw Error(ErrorCode::InvalidParam, "parameter/value size mismatch");
    const std::size_t n = params.size();
    if (n < 2)
        throw Error(ErrorCode::TooFewDefinedSamples,
                    "Richardson extrapolation needs at least 2 samples");
    for (std::size_t k = 0; k < n; ++k)
        if (!(params[k] > 0.0))
            throw Error(ErrorCode::InvalidParam, "grid parameters must be positive");
    const double ratio = params[0] / params[1];
    if (!(ratio > 1.0))
        throw Error(ErrorCode::InvalidParam, "grid must be strictly descending");
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double r = params[k] / params[k + 1];
        if (std::abs(r - ratio) > 1e-6 * ratio)
            throw Error(ErrorCode::InvalidParam, "grid must be geometric");
    }

    std::vector<std::vector<double>> table(n);
    for (std::size_t k = 0; k < n; ++k) {
        table[k].resize(k + 1);
        table[k][0] = values[k];
        double rj = 1.0;
        for (std::size_t j = 1; j <= k; ++j) {
            rj *= ratio;
            table[k][j] = table[k][j - 1] +
                          (table[k][j - 1] - table[k - 1][j - 1]) / (rj - 1.0);
        }
    }
    const double value = table[n - 1][n - 1];
    const double err = std::abs(value - table[n - 1][n - 2]) +
                       4.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    return {value, err};
}

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorCode::InvalidParam, "line fit needs >= 2 matched samples");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw Error(ErrorCode::InvalidParam, "degenerate abscissae in line fit");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

} // namespace urlab
