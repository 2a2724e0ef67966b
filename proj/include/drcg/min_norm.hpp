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

#ifndef DRCG_MIN_NORM_HPP
#define DRCG_MIN_NORM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "drcg/errors.hpp"
#include "drcg/simplex.hpp"

namespace drcg {

/// Polyhedron {x : eq_rows.x = eq_rhs, ge_rows.x >= ge_rhs}.
struct polyhedron {
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> ge_rows;
    std::vector<double> ge_rhs;

    int n_vars() const {
        if (!eq_rows.empty()) return static_cast<int>(eq_rows.front().size());
        if (!ge_rows.empty()) return static_cast<int>(ge_rows.front().size());
        return 0;
    }

    void add_eq(std::vector<double> row, double b) {
        eq_rows.push_back(std::move(row));
        eq_rhs.push_back(b);
    }
    void add_ge(std::vector<double> row, double b) {
        ge_rows.push_back(std::move(row));
        ge_rhs.push_back(b);
    }
    void add_le(std::vector<double> row, double b) {
        for (double& v : row) v = -v;
        add_ge(std::move(row), -b);
    }
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Thin QR of the transpose of the active rows: C^T = Q R with Q (n x r)
// orthonormal columns, R (r x r) upper triangular. Modified Gram-Schmidt with
// one reorthogonalization pass.
struct qr_t {
    std::vector<std::vector<double>> q; // r columns of length n
    std::vector<std::vector<double>> r; // r x r upper
    double cond_est = 1.0;
    bool rank_deficient = false;
};

inline qr_t qr_of_rows(const std::vector<const std::vector<double>*>& rows, int n) {
    const int r = static_cast<int>(rows.size());
    qr_t f;
    f.q.assign(r, std::vector<double>(n, 0.0));
    f.r.assign(r, std::vector<double>(r, 0.0));
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < r; ++j) {
        std::vector<double>& v = f.q[j];
        std::copy(rows[j]->begin(), rows[j]->end(), v.begin());
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                const double proj = dot(f.q[i], v);
                f.r[i][j] += proj;
                for (int k = 0; k < n; ++k) v[k] -= proj * f.q[i][k];
            }
        }
        double nrm = std::sqrt(dot(v, v));
        f.r[j][j] = nrm;
        dmax = std::max(dmax, nrm);
        dmin = std::min(dmin, nrm);
        if (nrm <= 1e-12 * std::max(1.0, dmax)) {
            f.rank_deficient = true;
            return f;
        }
        for (int k = 0; k < n; ++k) v[k] /= nrm;
    }
    f.cond_est = (dmin > 0.0) ? dmax / dmin : std::numeric_limits<double>::infinity();
    return f;
}

// min ||x||^2 s.t. C x = d. Solution x = C^+ d via the QR of C^T; multipliers
// solve C^T mu = x, i.e. R mu = w with w from the forward substitution.
struct eqp_solution {
    std::vector<double> x;
    std::vector<double> mu;
};

inline eqp_solution solve_eqp(const std::vector<const std::vector<double>*>& rows,
                              const std::vector<double>& d, int n) {
    eqp_solution sol;
    const int r = static_cast<int>(rows.size());
    if (r == 0) {
        sol.x.assign(n, 0.0);
        return sol;
    }
    qr_t f = qr_of_rows(rows, n);
    if (f.rank_deficient || f.cond_est > 1e12)
        throw numeric_error("ill-conditioned active set (condition estimate " +
                            std::to_string(f.cond_est) + ")");
    // forward solve R^T w = d
    std::vector<double> w(r, 0.0);
    for (int i = 0; i < r; ++i) {
        double s = d[i];
        for (int k = 0; k < i; ++k) s -= f.r[k][i] * w[k];
        w[i] = s / f.r[i][i];
    }
    sol.x.assign(n, 0.0);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < n; ++k) sol.x[k] += w[i] * f.q[i][k];
    // backward solve R mu = w
    sol.mu.assign(r, 0.0);
    for (int i = r - 1; i >= 0; --i) {
        double s = w[i];
        for (int k = i + 1; k < r; ++k) s -= f.r[i][k] * sol.mu[k];
        sol.mu[i] = s / f.r[i][i];
    }
    return sol;
}

} // namespace detail

/// A feasible point of the polyhedron (a vertex from the phase-1 LP), or
/// nothing when the region is empty.
inline std::optional<std::vector<double>> find_feasible_point(
    const polyhedron& poly, const solver_options& opt = {}) {
    const int n = poly.n_vars();
    if (n == 0) throw input_error("polyhedron has no variables");
    linear_program lp;
    lp.sense = lp_sense::minimize;
    lp.objective.assign(n, 0.0);
    lp.lower.assign(n, -std::numeric_limits<double>::infinity());
    lp.upper.assign(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < poly.eq_rows.size(); ++i)
        lp.add_row(poly.eq_rows[i], relation::eq, poly.eq_rhs[i]);
    for (std::size_t i = 0; i < poly.ge_rows.size(); ++i)
        lp.add_row(poly.ge_rows[i], relation::ge, poly.ge_rhs[i]);
    const solve_report rep = solve_lp(lp, opt);
    if (rep.status == lp_status::infeasible) return std::nullopt;
    if (rep.status != lp_status::optimal)
        throw numeric_error("feasibility LP neither optimal nor infeasible");
    return rep.x;
}

/// Weighted minimum-norm point: the unique minimizer of sum_j w_j x_j^2 over
/// the polyhedron (w_j > 0). Primal active-set iteration: project onto the
/// current working set, walk until a constraint blocks, add it; at a
/// stationary point drop the most negative multiplier. Strict convexity and
/// the finite number of working sets give termination.
inline std::vector<double> min_norm_point_weighted(const polyhedron& poly,
                                                   const std::vector<double>& weights,
                                                   const solver_options& opt = {}) {
    const int n = poly.n_vars();
    if (static_cast<int>(weights.size()) != n)
        throw input_error("weight vector length mismatch");
    for (double w : weights)
        if (!(w > 0.0)) throw input_error("weights must be positive");

    auto feas = find_feasible_point(poly, opt);
    if (!feas) throw empty_region_error("polyhedron is empty");

    // Metric substitution x~ = sqrt(w) x turns the objective into ||x~||^2.
    std::vector<double> scale(n), inv_scale(n);
    for (int i = 0; i < n; ++i) {
        scale[i] = std::sqrt(weights[i]);
        inv_scale[i] = 1.0 / scale[i];
    }
    auto scaled_row = [&](const std::vector<double>& row) {
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = row[i] * inv_scale[i];
        return out;
    };
    std::vector<std::vector<double>> eq_s, ge_s;
    eq_s.reserve(poly.eq_rows.size());
    ge_s.reserve(poly.ge_rows.size());
    for (const auto& r : poly.eq_rows) eq_s.push_back(scaled_row(r));
    for (const auto& r : poly.ge_rows) ge_s.push_back(scaled_row(r));

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = (*feas)[i] * scale[i];

    const int n_eq = static_cast<int>(eq_s.size());
    const int n_ge = static_cast<int>(ge_s.size());
    std::vector<int> working; // indices into ge_s
    const double tol = opt.feas_tol;

    const int max_iter = 100 * (n + n_eq + n_ge) + 1000;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<const std::vector<double>*> rows;
        std::vector<double> rhs;
        for (int i = 0; i < n_eq; ++i) {
            rows.push_back(&eq_s[i]);
            rhs.push_back(poly.eq_rhs[i]);
        }
        for (int wi : working) {
            rows.push_back(&ge_s[wi]);
            rhs.push_back(poly.ge_rhs[wi]);
        }
        const auto sol = detail::solve_eqp(rows, rhs, n);

        std::vector<double> step(n);
        double step_norm = 0.0;
        for (int i = 0; i < n; ++i) {
            step[i] = sol.x[i] - x[i];
            step_norm = std::max(step_norm, std::abs(step[i]));
        }

        if (step_norm <= 1e-11 * (1.0 + std::sqrt(detail::dot(x, x)))) {
            // Stationary on the working set; check inequality multipliers.
            int drop = -1;
            double most_negative = -1e-10;
            for (std::size_t k = 0; k < working.size(); ++k) {
                const double mu = sol.mu[n_eq + k];
                if (mu < most_negative) {
                    most_negative = mu;
                    drop = static_cast<int>(k);
                }
            }
            if (drop < 0) {
                for (int i = 0; i < n; ++i) x[i] = sol.x[i] * inv_scale[i];
                return x;
            }
            working.erase(working.begin() + drop);
            continue;
        }

        // Longest step toward the projection that stays feasible.
        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < n_ge; ++i) {
            bool in_working = false;
            for (int wi : working)
                if (wi == i) { in_working = true; break; }
            if (in_working) continue;
            const double slope = detail::dot(ge_s[i], step);
            if (slope >= -tol) continue;
            const double slack = detail::dot(ge_s[i], x) - poly.ge_rhs[i];
            const double a = slack <= 0.0 ? 0.0 : slack / (-slope);
            if (a < alpha - 1e-14) {
                alpha = a;
                blocking = i;
            }
        }
        for (int i = 0; i < n; ++i) x[i] += alpha * step[i];
        if (blocking >= 0) working.push_back(blocking);
    }
    throw numeric_error("active-set projection exceeded its iteration budget");
}

/// Unique Euclidean-norm minimizer over the polyhedron.
inline std::vector<double> min_norm_point(const polyhedron& poly,
                                          const solver_options& opt = {}) {
    return min_norm_point_weighted(poly, std::vector<double>(poly.n_vars(), 1.0), opt);
}

} // namespace drcg

#endif // DRCG_MIN_NORM_HPP
