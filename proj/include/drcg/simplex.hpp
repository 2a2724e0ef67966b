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

#ifndef DRCG_SIMPLEX_HPP
#define DRCG_SIMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "drcg/errors.hpp"

namespace drcg {

enum class relation { le, eq, ge };
enum class lp_sense { minimize, maximize };
enum class lp_status { optimal, infeasible, unbounded };

/// Centralized numeric tolerances for the optimization stack.
struct solver_options {
    double pivot_tol = 1e-10; // tableau entries below this count as zero
    double feas_tol = 1e-9;   // phase-1 acceptance and residual checks
    int bland_after = 10;     // switch to Bland's rule after bland_after*(m+n) pivots
    int iteration_cap = 2'000'000;
};

/// Dense LP in general form: sense c.x over rows (A_i.x rel_i rhs_i) and
/// per-variable bounds with +-infinity allowed.
struct linear_program {
    lp_sense sense = lp_sense::minimize;
    std::vector<double> objective;
    std::vector<std::vector<double>> rows;
    std::vector<relation> relations;
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    int n_vars() const { return static_cast<int>(objective.size()); }
    int n_rows() const { return static_cast<int>(rows.size()); }

    /// Returns the new variable's index.
    int add_variable(double lo, double hi, double cost) {
        objective.push_back(cost);
        lower.push_back(lo);
        upper.push_back(hi);
        for (auto& r : rows) r.push_back(0.0);
        return n_vars() - 1;
    }

    void add_row(std::vector<double> coeffs, relation rel, double b) {
        if (static_cast<int>(coeffs.size()) != n_vars())
            throw input_error("constraint row length does not match variable count");
        rows.push_back(std::move(coeffs));
        relations.push_back(rel);
        rhs.push_back(b);
    }

    void validate() const {
        if (objective.empty()) throw input_error("LP has no variables");
        if (lower.size() != objective.size() || upper.size() != objective.size())
            throw input_error("LP bounds length mismatch");
        for (double c : objective)
            if (!std::isfinite(c)) throw input_error("objective entries must be finite");
        if (rows.size() != relations.size() || rows.size() != rhs.size())
            throw input_error("LP row bookkeeping mismatch");
        for (const auto& r : rows)
            if (r.size() != objective.size()) throw input_error("LP row length mismatch");
    }
};

struct solve_report {
    lp_status status = lp_status::infeasible;
    double value = 0.0;
    std::vector<double> x;
    int iterations = 0;
};

/// Plain-text dump (objective row, then one line per constraint) so instances
/// can be re-checked with external tools.
inline void dump_lp(const linear_program& lp, std::ostream& os) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << (lp.sense == lp_sense::minimize ? "min" : "max");
    for (double c : lp.objective) os << " " << num(c);
    os << "\n";
    for (int i = 0; i < lp.n_rows(); ++i) {
        for (int j = 0; j < lp.n_vars(); ++j) os << (j ? " " : "") << num(lp.rows[i][j]);
        os << (lp.relations[i] == relation::le ? " <= "
                                               : (lp.relations[i] == relation::eq ? " == " : " >= "))
           << num(lp.rhs[i]) << "\n";
    }
    for (int j = 0; j < lp.n_vars(); ++j)
        os << "bound " << num(lp.lower[j]) << " " << num(lp.upper[j]) << "\n";
}

namespace detail {

// How an original variable maps into the nonnegative internal variables.
struct var_map {
    enum kind_t { shift_lo, neg_from_hi, split } kind = shift_lo;
    int col = -1;      // primary internal column
    int col_neg = -1;  // second column of a split free variable
    double offset = 0; // lo for shift_lo, hi for neg_from_hi
};

class simplex_tableau {
public:
    simplex_tableau(const linear_program& lp, const solver_options& opt)
        : opt_(opt), lp_(lp) {
        lp.validate();
        build();
    }

    solve_report run() {
        solve_report rep;
        // Phase 1: minimize the sum of artificials (when any exist).
        if (n_art_ > 0) {
            load_phase1_objective();
            const lp_status st = iterate();
            if (st == lp_status::unbounded)
                throw numeric_error("phase-1 objective unbounded; tableau corrupt");
            if (objective_value() > opt_.feas_tol) {
                rep.status = lp_status::infeasible;
                rep.iterations = iterations_;
                return rep;
            }
            drive_out_artificials();
        }
        for (int j = first_art_; j < n_cols_; ++j) banned_[j] = true;

        load_phase2_objective();
        const lp_status st = iterate();
        rep.iterations = iterations_;
        if (st == lp_status::unbounded) {
            rep.status = lp_status::unbounded;
            return rep;
        }
        rep.status = lp_status::optimal;
        rep.x = recover_solution();
        double v = 0.0;
        for (int j = 0; j < lp_.n_vars(); ++j) v += lp_.objective[j] * rep.x[j];
        rep.value = v;
        return rep;
    }

private:
    const solver_options opt_;
    const linear_program& lp_;

    int n_struct_ = 0;  // internal structural columns (shifted/split + slacks)
    int first_art_ = 0; // first artificial column
    int n_art_ = 0;
    int n_cols_ = 0;
    int m_ = 0;

    std::vector<std::vector<double>> t_; // m rows x (n_cols + 1), rhs last
    std::vector<double> obj_;            // reduced-cost row, length n_cols
    double obj_val_ = 0.0;
    std::vector<int> basis_;
    std::vector<bool> banned_;
    std::vector<double> cost_; // internal phase-2 costs, length n_cols
    std::vector<var_map> map_;
    int iterations_ = 0;

    static bool finite(double v) { return std::isfinite(v); }

    void build() {
        const int n = lp_.n_vars();
        map_.resize(n);
        std::vector<double> icost; // internal structural costs
        // (internal column -> coefficient callback handled inline below)
        const double sgn = lp_.sense == lp_sense::minimize ? 1.0 : -1.0;

        // Variable transformation to y >= 0.
        std::vector<std::pair<int, double>> bound_rows; // (internal col, upper bound on y)
        for (int j = 0; j < n; ++j) {
            const double lo = lp_.lower[j];
            const double hi = lp_.upper[j];
            if (finite(lo)) {
                map_[j] = {var_map::shift_lo, static_cast<int>(icost.size()), -1, lo};
                icost.push_back(sgn * lp_.objective[j]);
                if (finite(hi)) bound_rows.emplace_back(map_[j].col, hi - lo);
            } else if (finite(hi)) {
                map_[j] = {var_map::neg_from_hi, static_cast<int>(icost.size()), -1, hi};
                icost.push_back(-sgn * lp_.objective[j]);
            } else {
                map_[j].kind = var_map::split;
                map_[j].col = static_cast<int>(icost.size());
                icost.push_back(sgn * lp_.objective[j]);
                map_[j].col_neg = static_cast<int>(icost.size());
                icost.push_back(-sgn * lp_.objective[j]);
            }
        }
        const int n_shifted = static_cast<int>(icost.size());

        m_ = lp_.n_rows() + static_cast<int>(bound_rows.size());
        // slack columns: one per le/ge row (none for eq)
        std::vector<int> slack_col(m_, -1);
        std::vector<relation> rel(m_);
        int n_slack = 0;
        for (int i = 0; i < lp_.n_rows(); ++i) {
            rel[i] = lp_.relations[i];
            if (rel[i] != relation::eq) slack_col[i] = n_shifted + n_slack++;
        }
        for (std::size_t bi = 0; bi < bound_rows.size(); ++bi) {
            const int i = lp_.n_rows() + static_cast<int>(bi);
            rel[i] = relation::le;
            slack_col[i] = n_shifted + n_slack++;
        }
        n_struct_ = n_shifted + n_slack;
        first_art_ = n_struct_;

        // Assemble rows over structural columns, transform rhs, add slacks.
        std::vector<std::vector<double>> rows(m_, std::vector<double>(n_struct_, 0.0));
        std::vector<double> b(m_, 0.0);
        for (int i = 0; i < lp_.n_rows(); ++i) {
            double bi = lp_.rhs[i];
            for (int j = 0; j < n; ++j) {
                const double aij = lp_.rows[i][j];
                if (aij == 0.0) continue;
                switch (map_[j].kind) {
                    case var_map::shift_lo:
                        rows[i][map_[j].col] += aij;
                        bi -= aij * map_[j].offset;
                        break;
                    case var_map::neg_from_hi:
                        rows[i][map_[j].col] -= aij;
                        bi -= aij * map_[j].offset;
                        break;
                    case var_map::split:
                        rows[i][map_[j].col] += aij;
                        rows[i][map_[j].col_neg] -= aij;
                        break;
                }
            }
            b[i] = bi;
            if (slack_col[i] >= 0)
                rows[i][slack_col[i]] = (rel[i] == relation::le ? 1.0 : -1.0);
        }
        for (std::size_t bi = 0; bi < bound_rows.size(); ++bi) {
            const int i = lp_.n_rows() + static_cast<int>(bi);
            rows[i][bound_rows[bi].first] = 1.0;
            b[i] = bound_rows[bi].second;
            rows[i][slack_col[i]] = 1.0;
        }

        // Normalize to b >= 0 and pick the starting basis.
        basis_.assign(m_, -1);
        std::vector<int> needs_art;
        for (int i = 0; i < m_; ++i) {
            if (b[i] < 0.0) {
                for (double& v : rows[i]) v = -v;
                b[i] = -b[i];
            }
            if (slack_col[i] >= 0 && rows[i][slack_col[i]] == 1.0)
                basis_[i] = slack_col[i];
            else
                needs_art.push_back(i);
        }
        n_art_ = static_cast<int>(needs_art.size());
        n_cols_ = n_struct_ + n_art_;

        t_.assign(m_, std::vector<double>(n_cols_ + 1, 0.0));
        for (int i = 0; i < m_; ++i) {
            std::copy(rows[i].begin(), rows[i].end(), t_[i].begin());
            t_[i][n_cols_] = b[i];
        }
        for (int a = 0; a < n_art_; ++a) {
            const int i = needs_art[a];
            t_[i][first_art_ + a] = 1.0;
            basis_[i] = first_art_ + a;
        }

        cost_.assign(n_cols_, 0.0);
        std::copy(icost.begin(), icost.end(), cost_.begin());
        banned_.assign(n_cols_, false);
        obj_.assign(n_cols_, 0.0);
    }

    double objective_value() const { return obj_val_; }

    void load_phase1_objective() {
        // min sum of artificials, priced out over the artificial basis.
        std::fill(obj_.begin(), obj_.end(), 0.0);
        for (int j = first_art_; j < n_cols_; ++j) obj_[j] = 1.0;
        obj_val_ = 0.0;
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < first_art_) continue;
            for (int j = 0; j < n_cols_; ++j) obj_[j] -= t_[i][j];
            obj_val_ += t_[i][n_cols_];
        }
    }

    void load_phase2_objective() {
        std::fill(obj_.begin(), obj_.end(), 0.0);
        obj_val_ = 0.0;
        for (int j = 0; j < n_cols_; ++j) obj_[j] = cost_[j];
        for (int i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            for (int j = 0; j < n_cols_; ++j) obj_[j] -= cb * t_[i][j];
            obj_val_ += cb * t_[i][n_cols_];
        }
    }

    int pick_entering(bool bland) const {
        int best = -1;
        double best_val = -opt_.pivot_tol;
        for (int j = 0; j < n_cols_; ++j) {
            if (banned_[j]) continue;
            if (obj_[j] < best_val) {
                if (bland) return j;
                best_val = obj_[j];
                best = j;
            }
        }
        return best;
    }

    int pick_leaving(int col) const {
        int best = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
            const double a = t_[i][col];
            if (a <= opt_.pivot_tol) continue;
            const double ratio = t_[i][n_cols_] / a;
            if (ratio < best_ratio - 1e-12 * (1.0 + std::abs(best_ratio))) {
                best_ratio = ratio;
                best = i;
            } else if (best >= 0 &&
                       ratio <= best_ratio + 1e-12 * (1.0 + std::abs(best_ratio)) &&
                       basis_[i] < basis_[best]) {
                best = i; // lowest basis index among ties keeps Bland's rule valid
            }
        }
        return best;
    }

    void pivot(int row, int col) {
        const double piv = t_[row][col];
        const double inv = 1.0 / piv;
        for (double& v : t_[row]) v *= inv;
        t_[row][col] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = t_[i][col];
            if (std::abs(f) <= opt_.pivot_tol * 1e-6) continue;
            for (int j = 0; j <= n_cols_; ++j) t_[i][j] -= f * t_[row][j];
            t_[i][col] = 0.0;
        }
        const double fo = obj_[col];
        if (fo != 0.0) {
            for (int j = 0; j < n_cols_; ++j) obj_[j] -= fo * t_[row][j];
            obj_val_ += fo * t_[row][n_cols_];
            obj_[col] = 0.0;
        }
        basis_[row] = col;
        ++iterations_;
    }

    lp_status iterate() {
        const int bland_threshold = opt_.bland_after * (m_ + n_cols_);
        int local_iter = 0;
        while (true) {
            if (iterations_ > opt_.iteration_cap)
                throw numeric_error("simplex cycling safeguard exhausted after " +
                                    std::to_string(iterations_) + " pivots");
            const bool bland = local_iter > bland_threshold;
            const int col = pick_entering(bland);
            if (col < 0) return lp_status::optimal;
            const int row = pick_leaving(col);
            if (row < 0) return lp_status::unbounded;
            pivot(row, col);
            ++local_iter;
        }
    }

    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < first_art_) continue;
            int col = -1;
            for (int j = 0; j < first_art_; ++j) {
                if (std::abs(t_[i][j]) > opt_.pivot_tol) {
                    col = j;
                    break;
                }
            }
            // Redundant row: the artificial stays basic at level zero.
            if (col >= 0) pivot(i, col);
        }
    }

    std::vector<double> recover_solution() const {
        std::vector<double> y(n_cols_, 0.0);
        for (int i = 0; i < m_; ++i) y[basis_[i]] = t_[i][n_cols_];
        std::vector<double> x(lp_.n_vars(), 0.0);
        for (int j = 0; j < lp_.n_vars(); ++j) {
            switch (map_[j].kind) {
                case var_map::shift_lo: x[j] = map_[j].offset + y[map_[j].col]; break;
                case var_map::neg_from_hi: x[j] = map_[j].offset - y[map_[j].col]; break;
                case var_map::split: x[j] = y[map_[j].col] - y[map_[j].col_neg]; break;
            }
        }
        return x;
    }
};

} // namespace detail

/// Two-phase dense simplex. Deterministic pivoting: Dantzig with lowest-index
/// tie-break, switching to Bland's rule after bland_after*(m+n) pivots so
/// termination is guaranteed. Never silently wrong: tableau exhaustion raises.
inline solve_report solve_lp(const linear_program& lp, const solver_options& opt = {}) {
    detail::simplex_tableau tab(lp, opt);
    return tab.run();
}

} // namespace drcg

#endif // DRCG_SIMPLEX_HPP
