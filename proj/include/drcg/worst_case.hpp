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

#ifndef DRCG_WORST_CASE_HPP
#define DRCG_WORST_CASE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "drcg/empirical.hpp"
#include "drcg/errors.hpp"
#include "drcg/game.hpp"
#include "drcg/norms.hpp"
#include "drcg/simplex.hpp"

namespace drcg {

/// sigma_box(v) = sup_{xi in box} v.xi, coordinatewise: hi_j v_j for v_j >= 0,
/// lo_j v_j otherwise.
inline double support_function(const box_support& box, std::span<const double> v) {
    if (static_cast<int>(v.size()) != box.dim())
        throw input_error("support-function argument dimension mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        s += v[j] >= 0.0 ? box.hi[j] * v[j] : box.lo[j] * v[j];
    return s;
}

/// Conjugate of f = -(a.xi + b): equals b exactly at y = -a and +infinity
/// elsewhere. The infinity branch is what forces the equality z = v - a in
/// the dual program.
inline double conjugate_neg_affine(const affine_piece& piece, std::span<const double> y,
                                   double tol = 1e-12) {
    if (y.size() != piece.a.size())
        throw input_error("conjugate argument dimension mismatch");
    for (std::size_t j = 0; j < y.size(); ++j)
        if (std::abs(y[j] + piece.a[j]) > tol)
            return std::numeric_limits<double>::infinity();
    return piece.b;
}

enum class wc_engine { dual_lp, closed_form, oracle };

inline const char* wc_engine_name(wc_engine e) {
    switch (e) {
        case wc_engine::dual_lp: return "dual";
        case wc_engine::closed_form: return "closed";
        case wc_engine::oracle: return "oracle";
    }
    return "?";
}

inline wc_engine parse_wc_engine(const std::string& s) {
    if (s == "dual" || s == "dual_lp") return wc_engine::dual_lp;
    if (s == "closed" || s == "closed_form") return wc_engine::closed_form;
    if (s == "oracle") return wc_engine::oracle;
    throw input_error("unknown engine '" + s + "' (expected dual|closed|oracle)");
}

/// Feasible point of the dual program certifying the worst-case value:
///   ||z_km||_* <= lambda,
///   b_m + sigma_box(v_km) - z_km . xi_k <= ell_k        (z_km = v_km - a_m),
///   value = lambda * eps + mean(ell).
struct dual_certificate {
    double lambda = 0.0;
    std::vector<double> ell;                          // one per atom
    std::vector<std::vector<std::vector<double>>> v;  // [atom][piece][coord]
    std::vector<std::vector<std::vector<double>>> z;  // z[k][m] = v[k][m] - a_m

    double objective(double eps) const {
        double mean_ell = 0.0;
        for (double l : ell) mean_ell += l;
        mean_ell /= static_cast<double>(ell.size());
        return lambda * eps + mean_ell;
    }
};

struct worst_case_result {
    double value = 0.0;
    std::optional<dual_certificate> certificate; // dual_lp and closed_form carry one
    wc_engine engine = wc_engine::dual_lp;
};

/// Verify a certificate against its defining inequalities and, when a value
/// is supplied, against the claimed optimum.
inline bool check_certificate(const dual_certificate& cert, const piecewise_affine_value& u,
                              const empirical_distribution& emp, double eps,
                              const box_support& box, norm_tag ground,
                              std::optional<double> claimed_value = std::nullopt,
                              double tol = 1e-8) {
    const int k_count = emp.count();
    const int m_count = static_cast<int>(u.pieces().size());
    if (cert.lambda < -tol) return false;
    if (static_cast<int>(cert.ell.size()) != k_count) return false;
    for (int k = 0; k < k_count; ++k) {
        for (int m = 0; m < m_count; ++m) {
            const auto& vkm = cert.v[k][m];
            const auto& zkm = cert.z[k][m];
            for (std::size_t j = 0; j < vkm.size(); ++j)
                if (std::abs(zkm[j] - (vkm[j] - u.pieces()[m].a[j])) > tol) return false;
            if (dual_norm_of(zkm, ground) > cert.lambda + tol) return false;
            double lhs = u.pieces()[m].b + support_function(box, vkm);
            const auto& xi = emp.samples()[k];
            for (std::size_t j = 0; j < zkm.size(); ++j) lhs -= zkm[j] * xi[j];
            if (lhs > cert.ell[k] + tol) return false;
        }
    }
    if (claimed_value && std::abs(cert.objective(eps) - *claimed_value) > tol) return false;
    return true;
}

namespace detail {

inline void validate_wc_inputs(const piecewise_affine_value& u,
                               const empirical_distribution& emp, double eps,
                               const box_support& box) {
    if (u.dim() != box.dim() || emp.dim() != box.dim())
        throw input_error("value function, samples and support disagree on dimension");
    if (eps < 0.0) throw input_error("Wasserstein radius must be nonnegative");
    for (const auto& s : emp.samples())
        if (!box.contains(s, 1e-9))
            throw input_error("sample atom outside the declared support box");
}

} // namespace detail

/// Dual finite LP for W = sup over the ball of E_Q[u]:
///
///   min  lambda*eps + (1/K) sum_k ell_k
///   s.t. b_m + sigma_box(v_km) - (v_km - a_m).xi_k <= ell_k   for all k, m
///        || v_km - a_m ||_* <= lambda                         for all k, m
///
/// The conjugate of each negated affine piece pins z_km = v_km - a_m, so z is
/// eliminated up front. sigma_box is linearized by sign-splitting v into
/// nonnegative parts (exact at the optimum since the split is minimized over).
/// Dual-norm cones: max-norm and 1-norm rows are exact; the Euclidean cone is
/// exact at p = 1 and outer-approximated by 16 tangent half-planes at p = 2.
inline worst_case_result worst_case_dual_lp(const piecewise_affine_value& u,
                                            const empirical_distribution& emp, double eps,
                                            const box_support& box, norm_tag ground,
                                            const solver_options& opt = {},
                                            std::ostream* lp_dump = nullptr) {
    detail::validate_wc_inputs(u, emp, eps, box);
    const int p = box.dim();
    const int K = emp.count();
    const int M = static_cast<int>(u.pieces().size());
    if (ground == norm_tag::euclidean && p > 2)
        throw unsupported_error("Euclidean dual cone is implemented for p <= 2 only");

    const double inf = std::numeric_limits<double>::infinity();
    linear_program lp;
    lp.sense = lp_sense::minimize;
    const int col_lambda = lp.add_variable(0.0, inf, eps);
    std::vector<int> col_ell(K);
    for (int k = 0; k < K; ++k)
        col_ell[k] = lp.add_variable(-inf, inf, 1.0 / static_cast<double>(K));
    auto col_vp = [&](int k, int m, int j) {
        return 1 + K + 2 * ((k * M + m) * p + j);
    };
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            for (int j = 0; j < p; ++j) {
                lp.add_variable(0.0, inf, 0.0); // v+
                lp.add_variable(0.0, inf, 0.0); // v-
            }
    // dual 1-norm needs |z_j| epigraph variables
    const bool needs_abs = (ground == norm_tag::max && p > 1);
    std::vector<int> col_t;
    if (needs_abs) {
        col_t.resize(static_cast<std::size_t>(K) * M * p);
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m)
                for (int j = 0; j < p; ++j)
                    col_t[(static_cast<std::size_t>(k) * M + m) * p + j] =
                        lp.add_variable(0.0, inf, 0.0);
    }

    const int n = lp.n_vars();
    for (int k = 0; k < K; ++k) {
        const auto& xi = emp.samples()[k];
        for (int m = 0; m < M; ++m) {
            const auto& piece = u.pieces()[m];
            // b_m + sigma(v) - (v - a_m).xi <= ell_k
            std::vector<double> row(n, 0.0);
            double axi = 0.0;
            for (int j = 0; j < p; ++j) {
                row[col_vp(k, m, j)] = box.hi[j] - xi[j];
                row[col_vp(k, m, j) + 1] = xi[j] - box.lo[j];
                axi += piece.a[j] * xi[j];
            }
            row[col_ell[k]] = -1.0;
            lp.add_row(std::move(row), relation::le, -piece.b - axi);

            // dual-norm cone on z = v - a_m
            if (p == 1 || ground == norm_tag::one) {
                for (int j = 0; j < p; ++j) {
                    std::vector<double> r1(n, 0.0), r2(n, 0.0);
                    r1[col_vp(k, m, j)] = 1.0;
                    r1[col_vp(k, m, j) + 1] = -1.0;
                    r1[col_lambda] = -1.0;
                    lp.add_row(std::move(r1), relation::le, piece.a[j]);
                    r2[col_vp(k, m, j)] = -1.0;
                    r2[col_vp(k, m, j) + 1] = 1.0;
                    r2[col_lambda] = -1.0;
                    lp.add_row(std::move(r2), relation::le, -piece.a[j]);
                }
            } else if (ground == norm_tag::max) {
                std::vector<double> sum_row(n, 0.0);
                for (int j = 0; j < p; ++j) {
                    const int tc = col_t[(static_cast<std::size_t>(k) * M + m) * p + j];
                    std::vector<double> r1(n, 0.0), r2(n, 0.0);
                    r1[col_vp(k, m, j)] = 1.0;
                    r1[col_vp(k, m, j) + 1] = -1.0;
                    r1[tc] = -1.0;
                    lp.add_row(std::move(r1), relation::le, piece.a[j]);
                    r2[col_vp(k, m, j)] = -1.0;
                    r2[col_vp(k, m, j) + 1] = 1.0;
                    r2[tc] = -1.0;
                    lp.add_row(std::move(r2), relation::le, -piece.a[j]);
                    sum_row[tc] = 1.0;
                }
                sum_row[col_lambda] = -1.0;
                lp.add_row(std::move(sum_row), relation::le, 0.0);
            } else { // euclidean, p == 2
                constexpr int segments = 16;
                for (int i = 0; i < segments; ++i) {
                    const double th = 2.0 * std::numbers::pi * i / segments;
                    const double cs = std::cos(th), sn = std::sin(th);
                    std::vector<double> r(n, 0.0);
                    r[col_vp(k, m, 0)] = cs;
                    r[col_vp(k, m, 0) + 1] = -cs;
                    r[col_vp(k, m, 1)] = sn;
                    r[col_vp(k, m, 1) + 1] = -sn;
                    r[col_lambda] = -1.0;
                    lp.add_row(std::move(r), relation::le,
                               cs * piece.a[0] + sn * piece.a[1]);
                }
            }
        }
    }

    if (lp_dump) dump_lp(lp, *lp_dump);
    const solve_report rep = solve_lp(lp, opt);
    if (rep.status != lp_status::optimal)
        throw numeric_error("worst-case dual LP is " +
                            std::string(rep.status == lp_status::infeasible ? "infeasible"
                                                                            : "unbounded") +
                            "; inputs violate an internal consistency assumption");

    worst_case_result res;
    res.engine = wc_engine::dual_lp;
    res.value = rep.value;
    dual_certificate cert;
    cert.lambda = rep.x[col_lambda];
    cert.ell.resize(K);
    for (int k = 0; k < K; ++k) cert.ell[k] = rep.x[col_ell[k]];
    cert.v.assign(K, std::vector<std::vector<double>>(M, std::vector<double>(p, 0.0)));
    cert.z = cert.v;
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            for (int j = 0; j < p; ++j) {
                const double vj = rep.x[col_vp(k, m, j)] - rep.x[col_vp(k, m, j) + 1];
                cert.v[k][m][j] = vj;
                cert.z[k][m][j] = vj - u.pieces()[m].a[j];
            }
    res.certificate = std::move(cert);
    return res;
}

/// Fast path for a single affine piece on a 1-D box. The transport cost is
/// linear and the gain rate |a| uniform, so the optimum ships as much mass as
/// the budget allows toward the favorable edge (fractional knapsack):
///   W = mean(u) + |a| * min(eps, mean headroom),
/// headroom per atom being hi - xi_k for a > 0 and xi_k - lo for a < 0.
/// Falls back to the dual LP when the preconditions do not hold.
inline worst_case_result worst_case_closed_form_affine(const piecewise_affine_value& u,
                                                       const empirical_distribution& emp,
                                                       double eps, const box_support& box,
                                                       norm_tag ground,
                                                       const solver_options& opt = {}) {
    if (box.dim() != 1 || !u.is_affine())
        return worst_case_dual_lp(u, emp, eps, box, ground, opt);
    detail::validate_wc_inputs(u, emp, eps, box);

    const double a = u.pieces().front().a[0];
    const double b = u.pieces().front().b;
    const int K = emp.count();

    double mean_u = 0.0, headroom = 0.0;
    for (const auto& s : emp.samples()) {
        mean_u += a * s[0] + b;
        headroom += a > 0.0 ? box.hi[0] - s[0] : s[0] - box.lo[0];
    }
    mean_u /= static_cast<double>(K);
    headroom /= static_cast<double>(K);

    worst_case_result res;
    res.engine = wc_engine::closed_form;
    dual_certificate cert;
    cert.ell.resize(K);
    cert.v.assign(K, std::vector<std::vector<double>>(1, std::vector<double>(1, 0.0)));
    cert.z = cert.v;

    if (a == 0.0) {
        res.value = b;
        cert.lambda = 0.0;
        for (int k = 0; k < K; ++k) {
            cert.ell[k] = b;
            cert.z[k][0][0] = 0.0;
        }
    } else if (eps <= headroom) {
        // budget-limited: lambda = |a|, v = 0, ell_k = u(xi_k)
        res.value = mean_u + std::abs(a) * eps;
        cert.lambda = std::abs(a);
        for (int k = 0; k < K; ++k) {
            cert.ell[k] = a * emp.samples()[k][0] + b;
            cert.z[k][0][0] = -a;
        }
    } else {
        // support-limited: lambda = 0, v = a, ell_k = b + sigma_box(a)
        res.value = mean_u + std::abs(a) * headroom;
        cert.lambda = 0.0;
        const double sigma_a = a > 0.0 ? box.hi[0] * a : box.lo[0] * a;
        for (int k = 0; k < K; ++k) {
            cert.v[k][0][0] = a;
            cert.z[k][0][0] = 0.0;
            cert.ell[k] = b + sigma_a;
        }
    }
    res.certificate = std::move(cert);
    return res;
}

/// Discretized-transport brute force: destinations are a uniform grid over the
/// box plus the exact atom positions; the plan LP
///   max sum π(k,g) u(g)   s.t. sum_g π(k,g) = 1/K,  sum π(k,g) cost(k,g) <= eps
/// is solved exactly by walking each atom's upper concave (cost, value) hull
/// and spending the budget on segments in decreasing gain-rate order (the
/// greedy is exact for one coupling constraint). Converges to the true sup
/// from below as the grid refines.
inline double worst_case_oracle(const piecewise_affine_value& u,
                                const empirical_distribution& emp, double eps,
                                const box_support& box, norm_tag ground,
                                int grid_points) {
    detail::validate_wc_inputs(u, emp, eps, box);
    if (grid_points < 2) throw input_error("oracle grid needs at least 2 points");
    const int p = box.dim();
    if (p > 2) throw unsupported_error("transport oracle covers p <= 2 only");

    std::vector<std::vector<double>> dests;
    if (p == 1) {
        dests.reserve(static_cast<std::size_t>(grid_points) + emp.samples().size());
        for (int g = 0; g < grid_points; ++g) {
            const double t = static_cast<double>(g) / (grid_points - 1);
            dests.push_back({box.lo[0] + t * (box.hi[0] - box.lo[0])});
        }
    } else {
        dests.reserve(static_cast<std::size_t>(grid_points) * grid_points +
                      emp.samples().size());
        for (int g1 = 0; g1 < grid_points; ++g1)
            for (int g2 = 0; g2 < grid_points; ++g2) {
                const double t1 = static_cast<double>(g1) / (grid_points - 1);
                const double t2 = static_cast<double>(g2) / (grid_points - 1);
                dests.push_back({box.lo[0] + t1 * (box.hi[0] - box.lo[0]),
                                 box.lo[1] + t2 * (box.hi[1] - box.lo[1])});
            }
    }
    for (const auto& s : emp.samples()) dests.push_back(s);

    std::vector<double> dest_val(dests.size());
    for (std::size_t g = 0; g < dests.size(); ++g) dest_val[g] = u(dests[g]);

    const int K = emp.count();
    const double mass = 1.0 / static_cast<double>(K);

    struct segment {
        double rate;
        double budget;
        double gain;
    };
    std::vector<segment> segs;

    std::vector<std::pair<double, double>> pts; // (cost, value)
    std::vector<double> diff(p);
    for (int k = 0; k < K; ++k) {
        const auto& xi = emp.samples()[k];
        pts.clear();
        pts.reserve(dests.size());
        for (std::size_t g = 0; g < dests.size(); ++g) {
            for (int j = 0; j < p; ++j) diff[j] = xi[j] - dests[g][j];
            pts.emplace_back(norm_of(diff, ground), dest_val[g]);
        }
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            return a.first < b.first || (a.first == b.first && a.second > b.second);
        });
        // dedupe equal costs keeping the best value
        std::vector<std::pair<double, double>> uniq;
        for (const auto& pt : pts)
            if (uniq.empty() || pt.first > uniq.back().first) uniq.push_back(pt);
        // upper concave hull (slopes strictly decreasing)
        std::vector<std::pair<double, double>> hull;
        for (const auto& pt : uniq) {
            while (hull.size() >= 2) {
                const auto& a = hull[hull.size() - 2];
                const auto& b = hull[hull.size() - 1];
                // slope(a,b) <= slope(b,pt) makes b redundant
                if ((b.second - a.second) * (pt.first - b.first) <=
                    (pt.second - b.second) * (b.first - a.first))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(pt);
        }
        for (std::size_t i = 1; i < hull.size(); ++i) {
            const double dv = hull[i].second - hull[i - 1].second;
            const double dc = hull[i].first - hull[i - 1].first;
            if (dv <= 0.0) break; // slopes only decrease past the peak
            segs.push_back({dv / dc, dc * mass, dv * mass});
        }
    }

    std::sort(segs.begin(), segs.end(), [](const segment& a, const segment& b) {
        return a.rate > b.rate;
    });

    double value = emp.mean_value(u);
    double remaining = eps;
    for (const segment& s : segs) {
        if (remaining <= 0.0) break;
        const double take = std::min(remaining, s.budget);
        value += s.rate * take;
        remaining -= take;
    }
    return value;
}

/// Engine dispatch used by the core builder and the CLI. The closed-form
/// engine silently covers only the single-affine 1-D case and otherwise runs
/// the dual LP, so it is the default.
inline worst_case_result compute_worst_case(wc_engine engine, const piecewise_affine_value& u,
                                            const empirical_distribution& emp, double eps,
                                            const box_support& box, norm_tag ground,
                                            const solver_options& opt = {},
                                            int oracle_grid = 0) {
    switch (engine) {
        case wc_engine::dual_lp:
            return worst_case_dual_lp(u, emp, eps, box, ground, opt);
        case wc_engine::closed_form:
            return worst_case_closed_form_affine(u, emp, eps, box, ground, opt);
        case wc_engine::oracle: {
            if (oracle_grid <= 0) oracle_grid = box.dim() == 1 ? 2001 : 101;
            worst_case_result res;
            res.engine = wc_engine::oracle;
            res.value = worst_case_oracle(u, emp, eps, box, ground, oracle_grid);
            return res;
        }
    }
    throw input_error("invalid worst-case engine");
}

} // namespace drcg

#endif // DRCG_WORST_CASE_HPP
