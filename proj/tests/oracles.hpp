// Test-only oracles. Everything here stays independent of the implementation
// path it checks: the transport LP uses only the generic simplex, the Monte
// Carlo sampler uses rejection (not the inverse CDF), and the bisection solver
// touches nothing but the normal CDF.
#ifndef DRCG_TESTS_ORACLES_HPP
#define DRCG_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "drcg/empirical.hpp"
#include "drcg/norms.hpp"
#include "drcg/simplex.hpp"
#include "drcg/truncated_gaussian.hpp"

namespace oracles {

/// Exact order-1 transport cost between two small discrete distributions by
/// solving the plan LP: min sum pi_ij * cost_ij with both marginals fixed.
inline double transport_lp_distance(const drcg::discrete_distribution& d1,
                                    const drcg::discrete_distribution& d2,
                                    drcg::norm_tag ground) {
    const int n1 = static_cast<int>(d1.atoms.size());
    const int n2 = static_cast<int>(d2.atoms.size());
    const double inf = std::numeric_limits<double>::infinity();
    drcg::linear_program lp;
    lp.sense = drcg::lp_sense::minimize;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            std::vector<double> diff(d1.atoms[i].size());
            for (std::size_t c = 0; c < diff.size(); ++c)
                diff[c] = d1.atoms[i][c] - d2.atoms[j][c];
            lp.add_variable(0.0, inf, drcg::norm_of(diff, ground));
        }
    for (int i = 0; i < n1; ++i) {
        std::vector<double> row(static_cast<std::size_t>(n1) * n2, 0.0);
        for (int j = 0; j < n2; ++j) row[static_cast<std::size_t>(i) * n2 + j] = 1.0;
        lp.add_row(std::move(row), drcg::relation::eq, d1.weights[i]);
    }
    for (int j = 0; j < n2; ++j) {
        std::vector<double> row(static_cast<std::size_t>(n1) * n2, 0.0);
        for (int i = 0; i < n1; ++i) row[static_cast<std::size_t>(i) * n2 + j] = 1.0;
        lp.add_row(std::move(row), drcg::relation::eq, d2.weights[j]);
    }
    const auto rep = drcg::solve_lp(lp);
    if (rep.status != drcg::lp_status::optimal)
        throw std::runtime_error("transport oracle LP did not solve");
    return rep.value;
}

/// Root of f on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0.0 && fm <= 0.0) || (flo >= 0.0 && fm >= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Monte Carlo mean of g(xi) under the truncated Gaussian, sampled by
/// rejection from the untruncated normal.
inline double mc_mean(const drcg::truncated_gaussian& dist,
                      const std::function<double(double)>& g, long n,
                      std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal(dist.mean, dist.sigma());
    double acc = 0.0;
    long got = 0;
    while (got < n) {
        const double x = normal(eng);
        if (x < dist.lo || x > dist.hi) continue;
        acc += g(x);
        ++got;
    }
    return acc / static_cast<double>(n);
}

} // namespace oracles

#endif // DRCG_TESTS_ORACLES_HPP
