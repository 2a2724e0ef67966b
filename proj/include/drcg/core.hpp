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

#ifndef DRCG_CORE_HPP
#define DRCG_CORE_HPP

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drcg/ambiguity.hpp"
#include "drcg/coalition.hpp"
#include "drcg/empirical.hpp"
#include "drcg/errors.hpp"
#include "drcg/game.hpp"
#include "drcg/min_norm.hpp"
#include "drcg/sampling.hpp"
#include "drcg/truncated_gaussian.hpp"
#include "drcg/worst_case.hpp"

namespace drcg {

/// {x : sum_i x_i = grand_value, sum_{i in S} x_i >= threshold_S for all S}.
/// Thresholds are worst-case values for the DR core and true expectations for
/// the expected-value core.
struct core_polyhedron {
    int n_agents = 0;
    double grand_value = 0.0;
    std::map<coalition_id, double> thresholds;

    void validate() const {
        const auto coalitions = enumerate_subcoalitions(n_agents);
        if (thresholds.size() != coalitions.size())
            throw config_error("core polyhedron needs one threshold per proper coalition");
        for (coalition_id s : coalitions)
            if (!thresholds.count(s))
                throw config_error("missing threshold for coalition " + coalition_to_string(s));
    }

    polyhedron to_polyhedron() const {
        polyhedron poly;
        poly.add_eq(std::vector<double>(n_agents, 1.0), grand_value);
        for (const auto& [s, t] : thresholds) {
            std::vector<double> row(n_agents, 0.0);
            for (int i : coalition_members(s)) row[i - 1] = 1.0;
            poly.add_ge(std::move(row), t);
        }
        return poly;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["u_N"] = grand_value;
        j["n_agents"] = n_agents;
        nlohmann::json th = nlohmann::json::object();
        for (const auto& [s, t] : thresholds) th[std::to_string(s)] = t;
        j["thresholds"] = std::move(th);
        return j;
    }

    static core_polyhedron from_json(const nlohmann::json& j) {
        core_polyhedron core;
        core.grand_value = j.at("u_N").get<double>();
        core.n_agents = j.at("n_agents").get<int>();
        for (const auto& [key, val] : j.at("thresholds").items())
            core.thresholds[static_cast<coalition_id>(std::stoul(key))] = val.get<double>();
        core.validate();
        return core;
    }
};

/// Payoff per agent, same units as the value functions.
struct allocation {
    std::vector<double> x;

    nlohmann::json to_json() const { return nlohmann::json{{"x", x}}; }
};

struct stability_report {
    bool stable = false;
    double efficiency_gap = 0.0;              // sum x_i - u_N
    std::map<coalition_id, double> slack;     // sum_{i in S} x_i - threshold_S
};

struct containment_report {
    std::map<coalition_id, bool> dominance; // threshold_DR >= threshold_E per coalition
    bool contained = false;
    bool vacuous = false; // DR core empty: containment holds trivially
    double max_violation = 0.0;
};

/// DR core: per-coalition thresholds are worst-case expected values over each
/// coalition's Wasserstein ball, computed independently per coalition (the
/// inner blocks of the allocation program share no variables across
/// coalitions, so the decomposed values equal the monolithic ones).
inline core_polyhedron build_dr_core(const game_spec& game,
                                     const std::map<coalition_id, empirical_distribution>& samples,
                                     const ambiguity_config& config,
                                     wc_engine engine = wc_engine::closed_form,
                                     const solver_options& opt = {}) {
    core_polyhedron core;
    core.n_agents = game.n_agents();
    core.grand_value = game.grand_value();
    for (coalition_id s : enumerate_subcoalitions(game)) {
        auto it = samples.find(s);
        if (it == samples.end())
            throw config_error("missing samples for coalition " + coalition_to_string(s));
        const double eps = config.resolve_radius(s, it->second.count());
        core.thresholds[s] =
            compute_worst_case(engine, game.value(s), it->second, eps, game.support(),
                               config.ground, opt)
                .value;
    }
    return core;
}

/// Expected-value core: thresholds are exact expectations under the true
/// 1-D model.
inline core_polyhedron build_expected_core(const game_spec& game,
                                           const truncated_gaussian& dist) {
    core_polyhedron core;
    core.n_agents = game.n_agents();
    core.grand_value = game.grand_value();
    for (coalition_id s : enumerate_subcoalitions(game))
        core.thresholds[s] = true_mean_value(dist, game.value(s));
    return core;
}

/// Minimum-norm allocation in the core polyhedron. Emptiness is an error, not
/// a fallback: the stability theory assumes a nonempty DR core.
inline allocation find_allocation(const core_polyhedron& core,
                                  const solver_options& opt = {}) {
    core.validate();
    try {
        return allocation{min_norm_point(core.to_polyhedron(), opt)};
    } catch (const empty_region_error&) {
        throw empty_core_error("empty DR core: no allocation satisfies all coalition bounds");
    }
}

/// Efficiency plus per-coalition slacks for a candidate allocation.
inline stability_report check_allocation(const core_polyhedron& core, const allocation& x,
                                         double tol = 1e-8) {
    if (static_cast<int>(x.x.size()) != core.n_agents)
        throw input_error("allocation length does not match agent count");
    stability_report rep;
    double total = 0.0;
    for (double v : x.x) total += v;
    rep.efficiency_gap = total - core.grand_value;
    rep.stable = std::abs(rep.efficiency_gap) <= tol;
    for (const auto& [s, t] : core.thresholds) {
        double sum = 0.0;
        for (int i : coalition_members(s)) sum += x.x[i - 1];
        const double slack = sum - t;
        rep.slack[s] = slack;
        if (slack < -tol) rep.stable = false;
    }
    return rep;
}

/// Does the expected-value core contain the DR core? Dominance flags record
/// the sufficient condition threshold_DR >= threshold_E per coalition; exact
/// containment maximizes each expected-core facet violation over the DR core
/// by LP. An empty DR core is contained vacuously.
inline containment_report check_containment(const core_polyhedron& dr,
                                            const core_polyhedron& expected,
                                            const solver_options& opt = {},
                                            double tol = 1e-8) {
    if (dr.n_agents != expected.n_agents)
        throw input_error("cores disagree on agent count");
    if (std::abs(dr.grand_value - expected.grand_value) > tol)
        throw input_error("cores disagree on the grand-coalition value");
    containment_report rep;
    for (const auto& [s, t] : dr.thresholds)
        rep.dominance[s] = t >= expected.thresholds.at(s);

    const polyhedron dr_poly = dr.to_polyhedron();
    if (!find_feasible_point(dr_poly, opt)) {
        rep.contained = true;
        rep.vacuous = true;
        return rep;
    }

    const double inf = std::numeric_limits<double>::infinity();
    double worst = -inf;
    for (const auto& [s, te] : expected.thresholds) {
        linear_program lp;
        lp.sense = lp_sense::minimize; // min sum_{i in S} x_i over the DR core
        lp.objective.assign(dr.n_agents, 0.0);
        for (int i : coalition_members(s)) lp.objective[i - 1] = 1.0;
        lp.lower.assign(dr.n_agents, -inf);
        lp.upper.assign(dr.n_agents, inf);
        for (std::size_t r = 0; r < dr_poly.eq_rows.size(); ++r)
            lp.add_row(dr_poly.eq_rows[r], relation::eq, dr_poly.eq_rhs[r]);
        for (std::size_t r = 0; r < dr_poly.ge_rows.size(); ++r)
            lp.add_row(dr_poly.ge_rows[r], relation::ge, dr_poly.ge_rhs[r]);
        const solve_report res = solve_lp(lp, opt);
        if (res.status != lp_status::optimal)
            throw numeric_error("facet LP failed on coalition " + coalition_to_string(s));
        worst = std::max(worst, te - res.value);
    }
    rep.max_violation = std::max(0.0, worst);
    rep.contained = worst <= tol;
    return rep;
}

/// Cross-validation path: one program over the allocation AND every
/// coalition's dual block, instead of per-coalition worst-case solves. The
/// auxiliary variables enter the objective with a tiny weight (aux_reg) so the
/// metric projection machinery applies unchanged; the allocation error this
/// introduces is O(aux_reg).
inline allocation find_allocation_monolithic(
    const game_spec& game, const std::map<coalition_id, empirical_distribution>& samples,
    const ambiguity_config& config, double aux_reg = 1e-8,
    const solver_options& opt = {}) {
    if (config.ground != norm_tag::one && game.support().dim() != 1)
        throw unsupported_error("monolithic assembly covers the 1-norm (or 1-D) case");

    const int n = game.n_agents();
    const int p = game.support().dim();
    const auto coalitions = enumerate_subcoalitions(game);

    // layout: x_1..x_N, then per coalition: lambda, ell_k, (v+ v-) per (k,m,j)
    int total = n;
    struct block {
        coalition_id s = 0;
        int lambda = 0, ell0 = 0, v0 = 0, K = 0, M = 0;
        double eps = 0.0;
    };
    std::vector<block> blocks;
    for (coalition_id s : coalitions) {
        auto it = samples.find(s);
        if (it == samples.end())
            throw config_error("missing samples for coalition " + coalition_to_string(s));
        block blk;
        blk.s = s;
        blk.K = it->second.count();
        blk.M = static_cast<int>(game.value(s).pieces().size());
        blk.eps = config.resolve_radius(s, blk.K);
        blk.lambda = total;
        blk.ell0 = total + 1;
        blk.v0 = total + 1 + blk.K;
        total = blk.v0 + 2 * blk.K * blk.M * p;
        blocks.push_back(blk);
    }

    polyhedron poly;
    auto row0 = [&] { return std::vector<double>(total, 0.0); };
    {
        auto eff = row0();
        for (int i = 0; i < n; ++i) eff[i] = 1.0;
        poly.add_eq(std::move(eff), game.grand_value());
    }
    for (const block& blk : blocks) {
        const auto& emp = samples.at(blk.s);
        const auto& u = game.value(blk.s);
        const auto& box = game.support();
        auto vp = [&](int k, int m, int j) { return blk.v0 + 2 * ((k * blk.M + m) * p + j); };

        // sum_{i in S} x_i - lambda*eps - (1/K) sum ell >= 0
        auto budget = row0();
        for (int i : coalition_members(blk.s)) budget[i - 1] = 1.0;
        budget[blk.lambda] = -blk.eps;
        for (int k = 0; k < blk.K; ++k) budget[blk.ell0 + k] = -1.0 / blk.K;
        poly.add_ge(std::move(budget), 0.0);

        for (int k = 0; k < blk.K; ++k) {
            const auto& xi = emp.samples()[k];
            for (int m = 0; m < blk.M; ++m) {
                const auto& piece = u.pieces()[m];
                auto row = row0();
                double axi = 0.0;
                for (int j = 0; j < p; ++j) {
                    row[vp(k, m, j)] = box.hi[j] - xi[j];
                    row[vp(k, m, j) + 1] = xi[j] - box.lo[j];
                    axi += piece.a[j] * xi[j];
                }
                row[blk.ell0 + k] = -1.0;
                poly.add_le(std::move(row), -piece.b - axi);
                for (int j = 0; j < p; ++j) {
                    auto r1 = row0();
                    r1[vp(k, m, j)] = 1.0;
                    r1[vp(k, m, j) + 1] = -1.0;
                    r1[blk.lambda] = -1.0;
                    poly.add_le(std::move(r1), piece.a[j]);
                    auto r2 = row0();
                    r2[vp(k, m, j)] = -1.0;
                    r2[vp(k, m, j) + 1] = 1.0;
                    r2[blk.lambda] = -1.0;
                    poly.add_le(std::move(r2), -piece.a[j]);
                }
            }
        }
        // sign constraints
        {
            auto r = row0();
            r[blk.lambda] = 1.0;
            poly.add_ge(std::move(r), 0.0);
        }
        for (int k = 0; k < blk.K; ++k)
            for (int m = 0; m < blk.M; ++m)
                for (int j = 0; j < p; ++j) {
                    auto r1 = row0();
                    r1[vp(k, m, j)] = 1.0;
                    poly.add_ge(std::move(r1), 0.0);
                    auto r2 = row0();
                    r2[vp(k, m, j) + 1] = 1.0;
                    poly.add_ge(std::move(r2), 0.0);
                }
    }

    std::vector<double> weights(total, aux_reg);
    for (int i = 0; i < n; ++i) weights[i] = 1.0;
    try {
        const auto w = min_norm_point_weighted(poly, weights, opt);
        return allocation{std::vector<double>(w.begin(), w.begin() + n)};
    } catch (const empty_region_error&) {
        throw empty_core_error("empty DR core: no allocation satisfies all coalition bounds");
    }
}

} // namespace drcg

#endif // DRCG_CORE_HPP
