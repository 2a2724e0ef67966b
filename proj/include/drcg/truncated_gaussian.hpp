// Copyright 2026 The drcg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRCG_TRUNCATED_GAUSSIAN_HPP
#define DRCG_TRUNCATED_GAUSSIAN_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "drcg/errors.hpp"
#include "drcg/game.hpp"

namespace drcg {

inline double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    static const double inv_sqrt2 = 0.7071067811865475244008444;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

/// Inverse standard normal CDF. Rational approximation (Acklam, relative
/// error < 1.15e-9) polished by one Newton step on normal_cdf, which lands
/// near machine precision over the usable range.
inline double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw input_error("normal quantile argument must lie strictly in (0,1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    static const double u_low = 0.02425;

    double x;
    if (u < u_low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - u_low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double err = normal_cdf(x) - u;
    const double dens = normal_pdf(x);
    if (dens > 0.0) x -= err / dens;
    return x;
}

/// Gaussian N(mean, variance) conditioned on [lo, hi]. The one-dimensional
/// uncertainty model used by the reference experiments.
struct truncated_gaussian {
    double mean;
    double variance;
    double lo;
    double hi;

    truncated_gaussian(double mean_, double variance_, double lo_, double hi_)
        : mean(mean_), variance(variance_), lo(lo_), hi(hi_) {
        if (!(variance > 0.0)) throw config_error("variance must be positive");
        if (!(lo < hi)) throw config_error("truncation interval must satisfy lo < hi");
        if (!(mass() >= 1e-12))
            throw config_error("degenerate truncation: interval [" + std::to_string(lo) +
                               "," + std::to_string(hi) + "] carries mass below 1e-12");
    }

    double sigma() const { return std::sqrt(variance); }
    double alpha() const { return (lo - mean) / sigma(); }
    double beta() const { return (hi - mean) / sigma(); }
    double mass() const { return normal_cdf(beta()) - normal_cdf(alpha()); }

    double pdf(double x) const {
        if (x < lo || x > hi) return 0.0;
        return normal_pdf((x - mean) / sigma()) / (sigma() * mass());
    }

    double cdf(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return (normal_cdf((x - mean) / sigma()) - normal_cdf(alpha())) / mass();
    }

    /// Inverse CDF: x = mean + sigma * PhiInv(Phi(alpha) + u * mass).
    double quantile(double u) const {
        double t = normal_cdf(alpha()) + u * mass();
        t = std::clamp(t, 1e-300, 1.0 - 1e-16);
        const double x = mean + sigma() * normal_quantile(t);
        return std::clamp(x, lo, hi);
    }

    double truncated_mean() const {
        return mean + sigma() * (normal_pdf(alpha()) - normal_pdf(beta())) / mass();
    }
};

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    if (depth <= 0) throw numeric_error("quadrature did not converge to tolerance");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace detail

/// E_P[u(xi)] under the truncated Gaussian. Single affine piece: closed-form
/// truncated-normal mean. Several pieces: adaptive Simpson quadrature of
/// u(x) * density over [lo, hi] to absolute tolerance 1e-8.
inline double true_mean_value(const truncated_gaussian& dist,
                              const piecewise_affine_value& u) {
    if (u.dim() != 1)
        throw input_error("true-distribution means are implemented for dimension 1 only");
    if (u.is_affine()) {
        const auto& pc = u.pieces().front();
        return pc.a[0] * dist.truncated_mean() + pc.b;
    }
    return detail::integrate([&](double x) { return u(x) * dist.pdf(x); }, dist.lo,
                             dist.hi, 1e-8);
}

} // namespace drcg

#endif // DRCG_TRUNCATED_GAUSSIAN_HPP
