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

#ifndef DRCG_AMBIGUITY_HPP
#define DRCG_AMBIGUITY_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drcg/coalition.hpp"
#include "drcg/empirical.hpp"
#include "drcg/errors.hpp"
#include "drcg/game.hpp"
#include "drcg/norms.hpp"

namespace drcg {

/// Concentration constants of the finite-sample radius/confidence bound.
/// a and A describe the light tail of the true distribution (A is recorded
/// for documentation; no computation consumes it). c and q are user-supplied
/// configuration: the bound only asserts they exist as functions of (a, A, p),
/// so reports must always print the constants used.
struct tail_params {
    double a = 2.0;
    double A = 1.0;
    double c = 1.0;
    double q = 1.0;
    int p = 1;
    /// Opt-in replacement for the small-radius exponent at p = 2, where the
    /// stock bound is not valid. Entirely user-owned; nothing ships a value.
    std::optional<double> p2_exponent_override;

    void validate() const {
        if (!(a > 1.0)) throw config_error("tail exponent a must exceed 1");
        if (!(c > 0.0)) throw config_error("constant c must be positive");
        if (!(q > 0.0)) throw config_error("constant q must be positive");
        if (p < 1) throw config_error("support dimension p must be >= 1");
    }

    double small_radius_exponent() const {
        if (p == 2) {
            if (p2_exponent_override) return *p2_exponent_override;
            throw unsupported_error(
                "the finite-sample radius/confidence bound is not valid at support "
                "dimension p = 2; pass an explicit exponent override to proceed");
        }
        return static_cast<double>(std::max(p, 2));
    }
};

/// Per-coalition ball size: exactly one of radius / confidence.
struct ambiguity_entry {
    std::optional<double> radius;
    std::optional<double> confidence;

    static ambiguity_entry from_radius(double eps) {
        if (!(eps > 0.0)) throw config_error("Wasserstein radius must be positive");
        ambiguity_entry e;
        e.radius = eps;
        return e;
    }
    static ambiguity_entry from_confidence(double beta) {
        if (!(beta > 0.0 && beta < 1.0))
            throw config_error("confidence parameter must lie in (0,1)");
        ambiguity_entry e;
        e.confidence = beta;
        return e;
    }
};

/// beta(eps, K): c exp(-q K eps^max(p,2)) for eps <= 1, c exp(-q K eps^a) for
/// eps > 1. Values >= 1 mean "no guarantee" and are returned verbatim; callers
/// flag them instead of clamping.
inline double beta_from_radius(double eps, long k, const tail_params& t) {
    t.validate();
    if (!(eps > 0.0)) throw input_error("radius must be positive");
    if (k < 1) throw input_error("sample count must be >= 1");
    const double expo = eps <= 1.0 ? t.small_radius_exponent() : t.a;
    return t.c * std::exp(-t.q * static_cast<double>(k) * std::pow(eps, expo));
}

/// Piecewise inversion of beta_from_radius:
///   eps = (ln(c/beta)/(qK))^(1/max(p,2)) when K >= ln(c/beta)/q,
///   eps = (ln(c/beta)/(qK))^(1/a)        otherwise.
/// Round-trips with beta_from_radius on the matching branch.
inline double radius_from_beta(double beta, long k, const tail_params& t) {
    t.validate();
    if (k < 1) throw input_error("sample count must be >= 1");
    if (!(beta > 0.0) || beta >= t.c)
        throw input_error("confidence parameter must lie in (0, c)");
    const double threshold = std::log(t.c / beta) / t.q;
    const double ratio = threshold / static_cast<double>(k);
    const double expo =
        static_cast<double>(k) >= threshold ? t.small_radius_exponent() : t.a;
    return std::pow(ratio, 1.0 / expo);
}

/// Winning probability that every ball (independent per-coalition samples)
/// captures the truth: product of (1 - beta_S).
inline double aggregate_confidence(const std::vector<double>& betas) {
    double prod = 1.0;
    for (double b : betas) {
        if (!(b > 0.0 && b < 1.0))
            throw input_error("per-coalition confidence outside (0,1)");
        prod *= 1.0 - b;
    }
    return prod;
}

/// Union-bound aggregation for shared (agent-level) samples:
/// sum_S (1 - beta_S) - M + 1 = 1 - sum_S beta_S. May drop to or below zero,
/// in which case the bound is vacuous and reported as-is.
inline double aggregate_confidence_bonferroni(const std::vector<double>& betas) {
    double sum = 0.0;
    for (double b : betas) {
        if (!(b > 0.0 && b < 1.0))
            throw input_error("per-coalition confidence outside (0,1)");
        sum += 1.0 - b;
    }
    return sum - static_cast<double>(betas.size()) + 1.0;
}

/// Exact order-1 distance between two 1-D discrete distributions via the
/// quantile identity: integral of |F1 - F2| over the merged support.
inline double wasserstein_1d(const discrete_distribution& d1,
                             const discrete_distribution& d2) {
    if (d1.dim() != 1 || d2.dim() != 1)
        throw unsupported_error(
            "exact order-1 distance covers dimension 1 only; use the transport "
            "oracle for general dimension");
    struct event {
        double x;
        double w1;
        double w2;
    };
    std::vector<event> ev;
    ev.reserve(d1.atoms.size() + d2.atoms.size());
    for (std::size_t i = 0; i < d1.atoms.size(); ++i)
        ev.push_back({d1.atoms[i][0], d1.weights[i], 0.0});
    for (std::size_t i = 0; i < d2.atoms.size(); ++i)
        ev.push_back({d2.atoms[i][0], 0.0, d2.weights[i]});
    std::sort(ev.begin(), ev.end(), [](const event& a, const event& b) { return a.x < b.x; });

    double dist = 0.0, f1 = 0.0, f2 = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        f1 += ev[i].w1;
        f2 += ev[i].w2;
        if (i + 1 < ev.size()) dist += std::abs(f1 - f2) * (ev[i + 1].x - ev[i].x);
    }
    return dist;
}

/// Ball sizes for every coalition plus the shared tail constants and the
/// ground norm used by the transport cost.
struct ambiguity_config {
    std::map<coalition_id, ambiguity_entry> entries;
    tail_params tail;
    norm_tag ground = norm_tag::one;

    static ambiguity_config uniform_radius(int n_agents, double eps, tail_params t = {},
                                           norm_tag ground = norm_tag::one) {
        ambiguity_config cfg;
        cfg.tail = t;
        cfg.ground = ground;
        for (coalition_id s : enumerate_subcoalitions(n_agents))
            cfg.entries.emplace(s, ambiguity_entry::from_radius(eps));
        return cfg;
    }

    static ambiguity_config uniform_confidence(int n_agents, double beta,
                                               tail_params t = {},
                                               norm_tag ground = norm_tag::one) {
        ambiguity_config cfg;
        cfg.tail = t;
        cfg.ground = ground;
        for (coalition_id s : enumerate_subcoalitions(n_agents))
            cfg.entries.emplace(s, ambiguity_entry::from_confidence(beta));
        return cfg;
    }

    /// Radius for one coalition, inverting the confidence when needed.
    double resolve_radius(coalition_id s, int k_s) const {
        auto it = entries.find(s);
        if (it == entries.end())
            throw config_error("no ambiguity entry for coalition " + coalition_to_string(s));
        const ambiguity_entry& e = it->second;
        if (e.radius && e.confidence)
            throw config_error("coalition " + coalition_to_string(s) +
                               " specifies both radius and confidence");
        if (e.radius) return *e.radius;
        if (e.confidence) return radius_from_beta(*e.confidence, k_s, tail);
        throw config_error("coalition " + coalition_to_string(s) +
                           " specifies neither radius nor confidence");
    }

    /// Confidence for one coalition given its sample count.
    double resolve_beta(coalition_id s, int k_s) const {
        auto it = entries.find(s);
        if (it == entries.end())
            throw config_error("no ambiguity entry for coalition " + coalition_to_string(s));
        const ambiguity_entry& e = it->second;
        if (e.confidence) return *e.confidence;
        if (e.radius) return beta_from_radius(*e.radius, k_s, tail);
        throw config_error("coalition " + coalition_to_string(s) +
                           " specifies neither radius nor confidence");
    }
};

} // namespace drcg

#endif // DRCG_AMBIGUITY_HPP
