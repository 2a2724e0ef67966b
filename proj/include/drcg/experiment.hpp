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

#ifndef DRCG_EXPERIMENT_HPP
#define DRCG_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "drcg/ambiguity.hpp"
#include "drcg/core.hpp"
#include "drcg/errors.hpp"
#include "drcg/game.hpp"
#include "drcg/sampling.hpp"
#include "drcg/truncated_gaussian.hpp"
#include "drcg/worst_case.hpp"

namespace drcg {

enum class sweep_axis { sample_size, radius };

/// One experiment: a game, a true distribution, an axis to sweep and the trial
/// budget per axis point. Worker count never changes output bytes.
struct experiment_config {
    game_spec game;
    truncated_gaussian dist;
    sweep_axis axis = sweep_axis::sample_size;
    std::vector<double> axis_values;
    int trials = 500;
    sampling_mode plan = sampling_mode::shared;
    tail_params tail;
    double fixed_eps = 0.3;            // sample-size sweeps
    int fixed_k = 100;                 // radius sweeps
    std::optional<double> beta;        // when set, eps = radius_from_beta(beta, K_S)
    std::uint64_t master_seed = 42;
    int workers = 1;
    wc_engine engine = wc_engine::closed_form;
    norm_tag ground = norm_tag::one;

    experiment_config(game_spec g, truncated_gaussian d)
        : game(std::move(g)), dist(d) {}

    void validate() const {
        if (trials < 1) throw config_error("trial count must be >= 1");
        if (axis_values.empty()) throw config_error("axis values missing");
        double prev = 0.0;
        for (double v : axis_values) {
            if (!(v > 0.0)) throw config_error("axis values must be positive");
            if (!(v > prev)) throw config_error("axis values must be strictly increasing");
            prev = v;
        }
        if (workers < 1) throw config_error("worker count must be >= 1");
    }
};

struct trial_record {
    double axis = 0.0;
    int trial = 0;
    coalition_id coalition = 0;
    double w = 0.0;        // worst-case value
    double e = 0.0;        // true expected value
    bool dominates = false;
    bool all_dominate = false;
};

/// Per-(axis point, coalition) band over the trials: raw worst-case values and
/// the centered variant w - e, which is sign-interpretable in plots.
struct coalition_band {
    coalition_id coalition = 0;
    double w_min = 0.0, w_max = 0.0, w_mean = 0.0;
    double norm_min = 0.0, norm_max = 0.0, norm_mean = 0.0;
    double width() const { return w_max - w_min; }
};

struct axis_summary {
    double axis = 0.0;
    double confidence = 0.0; // fraction of trials with all-coalition dominance
    std::vector<coalition_band> bands;
};

struct sweep_result {
    std::vector<trial_record> records;   // (axis, trial, coalition) order
    std::vector<axis_summary> summaries; // one per axis point
};

namespace detail {

inline void parallel_trials(int trials, int workers, const std::function<void(int)>& body) {
    if (workers <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&] {
        while (true) {
            const int t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                body(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min(workers, trials);
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline sampling_plan make_plan(sampling_mode mode, int n_agents, int count,
                               std::uint64_t seed) {
    switch (mode) {
        case sampling_mode::shared: return sampling_plan::shared_plan(count, seed);
        case sampling_mode::per_coalition:
            return sampling_plan::per_coalition_uniform(n_agents, count, seed);
        case sampling_mode::per_agent:
            return sampling_plan::per_agent_uniform(n_agents, count, seed);
    }
    throw config_error("invalid sampling mode");
}

inline std::vector<axis_summary> summarize(const std::vector<trial_record>& records,
                                           const std::vector<double>& axis_values,
                                           const std::vector<coalition_id>& coalitions,
                                           int trials) {
    std::vector<axis_summary> out;
    const int nc = static_cast<int>(coalitions.size());
    for (std::size_t ai = 0; ai < axis_values.size(); ++ai) {
        axis_summary sum;
        sum.axis = axis_values[ai];
        int dominated_trials = 0;
        sum.bands.resize(coalitions.size());
        for (int ci = 0; ci < nc; ++ci) {
            coalition_band& band = sum.bands[ci];
            band.coalition = coalitions[ci];
            band.w_min = band.norm_min = std::numeric_limits<double>::infinity();
            band.w_max = band.norm_max = -std::numeric_limits<double>::infinity();
        }
        for (int t = 0; t < trials; ++t) {
            bool all = true;
            for (int ci = 0; ci < nc; ++ci) {
                const trial_record& rec =
                    records[(ai * static_cast<std::size_t>(trials) + t) * nc + ci];
                coalition_band& band = sum.bands[ci];
                band.w_min = std::min(band.w_min, rec.w);
                band.w_max = std::max(band.w_max, rec.w);
                band.w_mean += rec.w;
                const double norm = rec.w - rec.e;
                band.norm_min = std::min(band.norm_min, norm);
                band.norm_max = std::max(band.norm_max, norm);
                band.norm_mean += norm;
                all = all && rec.all_dominate;
            }
            if (all) ++dominated_trials;
        }
        for (auto& band : sum.bands) {
            band.w_mean /= trials;
            band.norm_mean /= trials;
        }
        sum.confidence = static_cast<double>(dominated_trials) / trials;
        out.push_back(std::move(sum));
    }
    return out;
}

} // namespace detail

/// Sweep over the multi-sample size: for each K and each trial draw fresh
/// multi-samples, compute every coalition's worst-case value and compare it to
/// the true expectation. Records land in (axis, trial, coalition) order no
/// matter how many workers run.
inline sweep_result run_sample_size_sweep(const experiment_config& cfg) {
    cfg.validate();
    if (cfg.axis != sweep_axis::sample_size)
        throw config_error("config axis is not sample_size");
    const auto coalitions = enumerate_subcoalitions(cfg.game);
    const int nc = static_cast<int>(coalitions.size());
    std::vector<double> expected(coalitions.size());
    for (int ci = 0; ci < nc; ++ci)
        expected[ci] = true_mean_value(cfg.dist, cfg.game.value(coalitions[ci]));

    sweep_result result;
    result.records.resize(cfg.axis_values.size() * static_cast<std::size_t>(cfg.trials) * nc);

    detail::parallel_trials(cfg.trials, cfg.workers, [&](int t) {
        const std::uint64_t trial_master =
            seeds::stream_seed(cfg.master_seed, seeds::role_trial,
                               static_cast<std::uint64_t>(t));
        for (std::size_t ai = 0; ai < cfg.axis_values.size(); ++ai) {
            const int k = static_cast<int>(cfg.axis_values[ai]);
            const auto plan = detail::make_plan(
                cfg.plan, cfg.game.n_agents(), k,
                seeds::stream_seed(trial_master, seeds::role_axis,
                                   static_cast<std::uint64_t>(ai)));
            const auto samples = build_multisamples(plan, cfg.dist, cfg.game);
            bool all = true;
            std::vector<double> w(coalitions.size());
            for (int ci = 0; ci < nc; ++ci) {
                const coalition_id s = coalitions[ci];
                const auto& emp = samples.at(s);
                const double eps =
                    cfg.beta ? radius_from_beta(*cfg.beta, emp.count(), cfg.tail)
                             : cfg.fixed_eps;
                w[ci] = compute_worst_case(cfg.engine, cfg.game.value(s), emp, eps,
                                           cfg.game.support(), cfg.ground)
                            .value;
                all = all && w[ci] >= expected[ci];
            }
            for (int ci = 0; ci < nc; ++ci) {
                trial_record& rec =
                    result.records[(ai * static_cast<std::size_t>(cfg.trials) + t) * nc + ci];
                rec.axis = cfg.axis_values[ai];
                rec.trial = t;
                rec.coalition = coalitions[ci];
                rec.w = w[ci];
                rec.e = expected[ci];
                rec.dominates = w[ci] >= expected[ci];
                rec.all_dominate = all;
            }
        }
    });
    result.summaries =
        detail::summarize(result.records, cfg.axis_values, coalitions, cfg.trials);
    return result;
}

/// Sweep over the Wasserstein radius at fixed K. Each trial draws one
/// multi-sample and reuses it across the whole radius grid, so per-trial
/// dominance is pointwise monotone in the radius.
inline sweep_result run_radius_sweep(const experiment_config& cfg) {
    cfg.validate();
    if (cfg.axis != sweep_axis::radius) throw config_error("config axis is not radius");
    const auto coalitions = enumerate_subcoalitions(cfg.game);
    const int nc = static_cast<int>(coalitions.size());
    std::vector<double> expected(coalitions.size());
    for (int ci = 0; ci < nc; ++ci)
        expected[ci] = true_mean_value(cfg.dist, cfg.game.value(coalitions[ci]));

    sweep_result result;
    result.records.resize(cfg.axis_values.size() * static_cast<std::size_t>(cfg.trials) * nc);

    detail::parallel_trials(cfg.trials, cfg.workers, [&](int t) {
        const std::uint64_t trial_master =
            seeds::stream_seed(cfg.master_seed, seeds::role_trial,
                               static_cast<std::uint64_t>(t));
        const auto plan = detail::make_plan(
            cfg.plan, cfg.game.n_agents(), cfg.fixed_k,
            seeds::stream_seed(trial_master, seeds::role_axis, 0));
        const auto samples = build_multisamples(plan, cfg.dist, cfg.game);
        for (std::size_t ai = 0; ai < cfg.axis_values.size(); ++ai) {
            const double eps = cfg.axis_values[ai];
            bool all = true;
            std::vector<double> w(coalitions.size());
            for (int ci = 0; ci < nc; ++ci) {
                const coalition_id s = coalitions[ci];
                w[ci] = compute_worst_case(cfg.engine, cfg.game.value(s), samples.at(s),
                                           eps, cfg.game.support(), cfg.ground)
                            .value;
                all = all && w[ci] >= expected[ci];
            }
            for (int ci = 0; ci < nc; ++ci) {
                trial_record& rec =
                    result.records[(ai * static_cast<std::size_t>(cfg.trials) + t) * nc + ci];
                rec.axis = eps;
                rec.trial = t;
                rec.coalition = coalitions[ci];
                rec.w = w[ci];
                rec.e = expected[ci];
                rec.dominates = w[ci] >= expected[ci];
                rec.all_dominate = all;
            }
        }
    });
    result.summaries =
        detail::summarize(result.records, cfg.axis_values, coalitions, cfg.trials);
    return result;
}

struct consistency_row {
    long k = 0;
    double eps = 0.0;
    double beta = 0.0;
    double max_gap = 0.0; // max over coalitions of |W_S - E_P[u_S]|
};

/// Radius schedule study: per K draw one multi-sample, size the radius from
/// the summable confidence schedule beta_K = c / K^2 (or hold it fixed as a
/// negative control) and record the largest worst-case-vs-expectation gap.
inline std::vector<consistency_row> run_consistency_study(
    const experiment_config& cfg, std::optional<double> fixed_radius = std::nullopt) {
    cfg.validate();
    const auto coalitions = enumerate_subcoalitions(cfg.game);
    std::vector<double> expected(coalitions.size());
    for (std::size_t ci = 0; ci < coalitions.size(); ++ci)
        expected[ci] = true_mean_value(cfg.dist, cfg.game.value(coalitions[ci]));

    std::vector<consistency_row> rows;
    for (double kv : cfg.axis_values) {
        const long k = static_cast<long>(kv);
        consistency_row row;
        row.k = k;
        row.beta = cfg.tail.c / (kv * kv);
        row.eps = fixed_radius ? *fixed_radius : radius_from_beta(row.beta, k, cfg.tail);
        const auto plan = detail::make_plan(
            cfg.plan, cfg.game.n_agents(), static_cast<int>(k),
            seeds::stream_seed(cfg.master_seed, seeds::role_trial,
                               static_cast<std::uint64_t>(k)));
        const auto samples = build_multisamples(plan, cfg.dist, cfg.game);
        double gap = 0.0;
        for (std::size_t ci = 0; ci < coalitions.size(); ++ci) {
            const coalition_id s = coalitions[ci];
            const double w = compute_worst_case(cfg.engine, cfg.game.value(s),
                                                samples.at(s), row.eps,
                                                cfg.game.support(), cfg.ground)
                                 .value;
            gap = std::max(gap, std::abs(w - expected[ci]));
        }
        row.max_gap = gap;
        rows.push_back(row);
    }
    return rows;
}

/// 12 significant digits, the CSV-wide float format.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_records_csv(std::ostream& os, const std::vector<trial_record>& records) {
    os << "axis,trial,coalition,W,E,dominates,all_dominate\n";
    for (const auto& r : records)
        os << fmt12(r.axis) << "," << r.trial << "," << r.coalition << "," << fmt12(r.w)
           << "," << fmt12(r.e) << "," << (r.dominates ? 1 : 0) << ","
           << (r.all_dominate ? 1 : 0) << "\n";
}

inline void write_summary_csv(std::ostream& os, const sweep_result& result) {
    os << "axis,coalition,confidence,W_min,W_max,W_mean,Wnorm_min,Wnorm_max,Wnorm_mean,"
          "band_width\n";
    for (const auto& sum : result.summaries)
        for (const auto& band : sum.bands)
            os << fmt12(sum.axis) << "," << band.coalition << "," << fmt12(sum.confidence)
               << "," << fmt12(band.w_min) << "," << fmt12(band.w_max) << ","
               << fmt12(band.w_mean) << "," << fmt12(band.norm_min) << ","
               << fmt12(band.norm_max) << "," << fmt12(band.norm_mean) << ","
               << fmt12(band.width()) << "\n";
}

inline void write_consistency_csv(std::ostream& os, const std::vector<consistency_row>& rows) {
    os << "K,eps,beta,max_gap\n";
    for (const auto& r : rows)
        os << r.k << "," << fmt12(r.eps) << "," << fmt12(r.beta) << ","
           << fmt12(r.max_gap) << "\n";
}

} // namespace drcg

#endif // DRCG_EXPERIMENT_HPP
