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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drcg/drcg.hpp"

namespace {

using nlohmann::json;

struct dist_flags {
    double mu = 1.0;
    double sigma2 = 1.0;
    std::optional<double> lo;
    std::optional<double> hi;

    void attach(CLI::App* cmd) {
        cmd->add_option("--mu", mu, "true-distribution mean");
        cmd->add_option("--sigma2", sigma2, "true-distribution variance");
        cmd->add_option("--dist-lo", lo, "truncation lower end (default: game support)");
        cmd->add_option("--dist-hi", hi, "truncation upper end (default: game support)");
    }

    drcg::truncated_gaussian resolve(const drcg::game_spec& game) const {
        if (game.support().dim() != 1)
            throw drcg::config_error("built-in distribution model needs a 1-D game");
        return drcg::truncated_gaussian(mu, sigma2, lo.value_or(game.support().lo[0]),
                                        hi.value_or(game.support().hi[0]));
    }
};

struct tail_flags {
    double c = 1.0;
    double q = 1.0;
    double a = 2.0;
    double A = 1.0;
    std::optional<double> p2_override;

    void attach(CLI::App* cmd) {
        cmd->add_option("--c", c, "concentration constant c (user configuration)");
        cmd->add_option("--q", q, "concentration rate q (user configuration)");
        cmd->add_option("--a", a, "light-tail exponent a > 1");
        cmd->add_option("--A", A, "exponential moment bound (recorded only)");
        cmd->add_option("--allow-p2-exponent", p2_override,
                        "user-supplied small-radius exponent for p = 2, where the "
                        "stock bound does not apply");
    }

    drcg::tail_params resolve(int p) const {
        drcg::tail_params t;
        t.c = c;
        t.q = q;
        t.a = a;
        t.A = A;
        t.p = p;
        t.p2_exponent_override = p2_override;
        t.validate();
        return t;
    }
};

json constants_json(const drcg::tail_params& t) {
    json j{{"c", t.c}, {"q", t.q}, {"a", t.a}, {"A", t.A}, {"p", t.p}};
    if (t.p2_exponent_override) j["p2_exponent_override"] = *t.p2_exponent_override;
    return j;
}

std::map<drcg::coalition_id, drcg::empirical_distribution> shared_samples_from_csv(
    const std::string& path, const drcg::game_spec& game) {
    const auto emp = drcg::empirical_distribution::load_csv(path);
    if (emp.dim() != game.support().dim())
        throw drcg::input_error("sample file dimension does not match the game support");
    std::map<drcg::coalition_id, drcg::empirical_distribution> out;
    for (drcg::coalition_id s : drcg::enumerate_subcoalitions(game)) out.emplace(s, emp);
    return out;
}

json thresholds_json(const std::map<drcg::coalition_id, double>& m) {
    json j = json::object();
    for (const auto& [s, v] : m) j[std::to_string(s)] = v;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw drcg::config_error("cannot write '" + path.string() + "'");
    out << content;
}

void print_sweep_stdout(const drcg::sweep_result& result, const drcg::tail_params& tail) {
    std::cout << "constants: " << constants_json(tail).dump() << "\n";
    for (const auto& sum : result.summaries) {
        double min_margin = std::numeric_limits<double>::infinity();
        for (const auto& band : sum.bands)
            min_margin = std::min(min_margin, band.norm_min);
        std::cout << "axis=" << drcg::fmt12(sum.axis)
                  << " confidence=" << drcg::fmt12(sum.confidence)
                  << " min(W-E)=" << drcg::fmt12(min_margin) << "\n";
    }
}

int run_allocate(const std::string& game_path, const std::optional<std::string>& samples_path,
                 const std::string& plan_name, int k, std::uint64_t seed,
                 std::optional<double> eps, std::optional<double> beta,
                 const dist_flags& dist, const tail_flags& tail,
                 const std::string& engine_name, const std::string& norm_name_,
                 bool monolithic, const std::optional<std::string>& dump_dir) {
    const auto game = drcg::game_spec::load(game_path);
    if (eps.has_value() == beta.has_value())
        throw drcg::input_error("pass exactly one of --eps / --beta");

    std::map<drcg::coalition_id, drcg::empirical_distribution> samples;
    if (samples_path) {
        samples = shared_samples_from_csv(*samples_path, game);
    } else {
        const auto plan = [&] {
            const auto mode = drcg::parse_sampling_mode(plan_name);
            switch (mode) {
                case drcg::sampling_mode::shared:
                    return drcg::sampling_plan::shared_plan(k, seed);
                case drcg::sampling_mode::per_coalition:
                    return drcg::sampling_plan::per_coalition_uniform(game.n_agents(), k, seed);
                case drcg::sampling_mode::per_agent:
                    return drcg::sampling_plan::per_agent_uniform(game.n_agents(), k, seed);
            }
            throw drcg::config_error("invalid sampling plan");
        }();
        samples = drcg::build_multisamples(plan, dist.resolve(game), game);
    }

    const auto t = tail.resolve(game.support().dim());
    const auto norm = drcg::parse_norm_tag(norm_name_);
    drcg::ambiguity_config config =
        eps ? drcg::ambiguity_config::uniform_radius(game.n_agents(), *eps, t, norm)
            : drcg::ambiguity_config::uniform_confidence(game.n_agents(), *beta, t, norm);
    const auto engine = drcg::parse_wc_engine(engine_name);

    if (dump_dir) {
        std::filesystem::create_directories(*dump_dir);
        for (drcg::coalition_id s : drcg::enumerate_subcoalitions(game)) {
            const auto& emp = samples.at(s);
            std::ofstream os(std::filesystem::path(*dump_dir) /
                             ("lp_coalition_" + std::to_string(s) + ".txt"));
            drcg::worst_case_dual_lp(game.value(s), emp,
                                     config.resolve_radius(s, emp.count()), game.support(),
                                     norm, {}, &os);
        }
    }

    const auto core = drcg::build_dr_core(game, samples, config, engine);
    const auto alloc = monolithic
                           ? drcg::find_allocation_monolithic(game, samples, config)
                           : drcg::find_allocation(core);

    json radii = json::object(), betas = json::object();
    std::vector<double> beta_list;
    bool vacuous = false;
    for (drcg::coalition_id s : drcg::enumerate_subcoalitions(game)) {
        const int k_s = samples.at(s).count();
        radii[std::to_string(s)] = config.resolve_radius(s, k_s);
        const double b = config.resolve_beta(s, k_s);
        betas[std::to_string(s)] = b; // verbatim, even when >= 1 ("no guarantee")
        if (b > 0.0 && b < 1.0) beta_list.push_back(b);
        else vacuous = true;
    }

    json out;
    out["allocation"] = alloc.x;
    out["thresholds"] = thresholds_json(core.thresholds);
    out["radii"] = std::move(radii);
    out["per_coalition_beta"] = std::move(betas);
    out["aggregate_confidence"] = vacuous ? 0.0 : drcg::aggregate_confidence(beta_list);
    out["vacuous"] = vacuous;
    out["constants"] = constants_json(t);
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributionally robust payoff allocation for stochastic coalitional games"};
    app.require_subcommand(1);

    // ---- allocate ----
    auto* allocate = app.add_subcommand("allocate", "compute a DR-core allocation");
    std::string game_path, plan_name = "shared", engine_name = "closed", norm_name_ = "one";
    std::optional<std::string> samples_path, dump_dir;
    std::optional<double> eps, beta;
    int k = 100;
    std::uint64_t seed = 42;
    bool monolithic = false;
    dist_flags alloc_dist;
    tail_flags alloc_tail;
    allocate->add_option("--game", game_path, "game JSON file")->required();
    allocate->add_option("--samples", samples_path, "shared multi-sample CSV");
    allocate->add_option("--plan", plan_name, "per-coalition|per-agent|shared");
    allocate->add_option("--k", k, "samples per stream when drawing");
    allocate->add_option("--seed", seed, "master seed");
    allocate->add_option("--eps", eps, "uniform Wasserstein radius");
    allocate->add_option("--beta", beta, "uniform per-coalition confidence in (0,1)");
    allocate->add_option("--engine", engine_name, "dual|closed|oracle");
    allocate->add_option("--norm", norm_name_, "ground norm: one|max|euclidean");
    allocate->add_flag("--monolithic", monolithic,
                       "solve the assembled program instead of the decomposed one");
    allocate->add_option("--dump-lp", dump_dir, "write per-coalition dual LPs to this dir");
    alloc_dist.attach(allocate);
    alloc_tail.attach(allocate);

    // ---- sweep-k ----
    auto* sweepk = app.add_subcommand("sweep-k", "sample-size sweep at fixed radius");
    std::string sk_game, sk_plan = "shared", sk_engine = "closed", sk_norm = "one",
                sk_out = "out";
    std::vector<double> sk_axis{5, 10, 30, 50, 100, 200, 500};
    int sk_trials = 500, sk_workers = 1;
    std::uint64_t sk_seed = 42;
    double sk_eps = 0.3;
    std::optional<double> sk_beta;
    dist_flags sk_dist;
    tail_flags sk_tail;
    sweepk->add_option("--game", sk_game, "game JSON file")->required();
    sweepk->add_option("--eps", sk_eps, "fixed Wasserstein radius");
    sweepk->add_option("--beta", sk_beta, "fixed confidence; radius resolved per K");
    sweepk->add_option("--axis", sk_axis, "sample sizes")->delimiter(',');
    sweepk->add_option("--trials", sk_trials, "trials per axis point");
    sweepk->add_option("--seed", sk_seed, "master seed");
    sweepk->add_option("--plan", sk_plan, "per-coalition|per-agent|shared");
    sweepk->add_option("--out", sk_out, "output directory");
    sweepk->add_option("--workers", sk_workers, "worker threads (output-invariant)");
    sweepk->add_option("--engine", sk_engine, "dual|closed|oracle");
    sweepk->add_option("--norm", sk_norm, "ground norm");
    sk_dist.attach(sweepk);
    sk_tail.attach(sweepk);

    // ---- sweep-eps ----
    auto* sweepe = app.add_subcommand("sweep-eps", "radius sweep at fixed sample size");
    std::string se_game, se_plan = "shared", se_engine = "closed", se_norm = "one",
                se_out = "out";
    std::vector<double> se_axis{0.01, 0.03, 0.1, 0.3, 1.0};
    int se_trials = 500, se_workers = 1, se_k = 100;
    std::uint64_t se_seed = 42;
    dist_flags se_dist;
    tail_flags se_tail;
    sweepe->add_option("--game", se_game, "game JSON file")->required();
    sweepe->add_option("--k", se_k, "fixed sample size");
    sweepe->add_option("--axis", se_axis, "radius grid")->delimiter(',');
    sweepe->add_option("--trials", se_trials, "trials per axis point");
    sweepe->add_option("--seed", se_seed, "master seed");
    sweepe->add_option("--plan", se_plan, "per-coalition|per-agent|shared");
    sweepe->add_option("--out", se_out, "output directory");
    sweepe->add_option("--workers", se_workers, "worker threads (output-invariant)");
    sweepe->add_option("--engine", se_engine, "dual|closed|oracle");
    sweepe->add_option("--norm", se_norm, "ground norm");
    se_dist.attach(sweepe);
    se_tail.attach(sweepe);

    // ---- consistency ----
    auto* cons = app.add_subcommand("consistency",
                                    "radius-schedule study: gap to the expected values");
    std::string co_game, co_plan = "shared", co_engine = "closed", co_norm = "one",
                co_out = "out";
    std::vector<double> co_axis{10, 100, 1000, 10000};
    std::uint64_t co_seed = 42;
    std::optional<double> co_fixed_eps;
    dist_flags co_dist;
    tail_flags co_tail;
    cons->add_option("--game", co_game, "game JSON file")->required();
    cons->add_option("--axis", co_axis, "sample sizes")->delimiter(',');
    cons->add_option("--fixed-eps", co_fixed_eps,
                     "hold the radius fixed (negative control) instead of the schedule");
    cons->add_option("--seed", co_seed, "master seed");
    cons->add_option("--plan", co_plan, "per-coalition|per-agent|shared");
    cons->add_option("--out", co_out, "output directory");
    cons->add_option("--engine", co_engine, "dual|closed|oracle");
    cons->add_option("--norm", co_norm, "ground norm");
    co_dist.attach(cons);
    co_tail.attach(cons);

    // ---- check ----
    auto* check = app.add_subcommand("check", "containment report for a sample file");
    std::string ch_game, ch_samples, ch_norm = "one";
    std::optional<double> ch_eps, ch_beta;
    dist_flags ch_dist;
    tail_flags ch_tail;
    check->add_option("--game", ch_game, "game JSON file")->required();
    check->add_option("--samples", ch_samples, "shared multi-sample CSV")->required();
    check->add_option("--eps", ch_eps, "uniform Wasserstein radius");
    check->add_option("--beta", ch_beta, "uniform per-coalition confidence");
    check->add_option("--norm", ch_norm, "ground norm");
    ch_dist.attach(check);
    ch_tail.attach(check);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(allocate)) {
            return run_allocate(game_path, samples_path, plan_name, k, seed, eps, beta,
                                alloc_dist, alloc_tail, engine_name, norm_name_, monolithic,
                                dump_dir);
        }

        if (app.got_subcommand(sweepk) || app.got_subcommand(sweepe)) {
            const bool is_k = app.got_subcommand(sweepk);
            const auto game = drcg::game_spec::load(is_k ? sk_game : se_game);
            const auto& dflags = is_k ? sk_dist : se_dist;
            const auto& tflags = is_k ? sk_tail : se_tail;
            drcg::experiment_config cfg(game, dflags.resolve(game));
            cfg.axis = is_k ? drcg::sweep_axis::sample_size : drcg::sweep_axis::radius;
            cfg.axis_values = is_k ? sk_axis : se_axis;
            cfg.trials = is_k ? sk_trials : se_trials;
            cfg.plan = drcg::parse_sampling_mode(is_k ? sk_plan : se_plan);
            cfg.tail = tflags.resolve(game.support().dim());
            cfg.master_seed = is_k ? sk_seed : se_seed;
            cfg.workers = is_k ? sk_workers : se_workers;
            cfg.engine = drcg::parse_wc_engine(is_k ? sk_engine : se_engine);
            cfg.ground = drcg::parse_norm_tag(is_k ? sk_norm : se_norm);
            if (is_k) {
                cfg.fixed_eps = sk_eps;
                cfg.beta = sk_beta;
            } else {
                cfg.fixed_k = se_k;
            }

            const auto result = is_k ? drcg::run_sample_size_sweep(cfg)
                                     : drcg::run_radius_sweep(cfg);
            const std::filesystem::path out_dir = is_k ? sk_out : se_out;
            std::filesystem::create_directories(out_dir);
            const std::string stem = is_k ? "sweep_k" : "sweep_eps";
            {
                std::ostringstream os;
                drcg::write_records_csv(os, result.records);
                write_file(out_dir / (stem + ".csv"), os.str());
            }
            {
                std::ostringstream os;
                drcg::write_summary_csv(os, result);
                write_file(out_dir / (stem + "_summary.csv"), os.str());
            }
            print_sweep_stdout(result, cfg.tail);
            return 0;
        }

        if (app.got_subcommand(cons)) {
            const auto game = drcg::game_spec::load(co_game);
            drcg::experiment_config cfg(game, co_dist.resolve(game));
            cfg.axis_values = co_axis;
            cfg.trials = 1;
            cfg.plan = drcg::parse_sampling_mode(co_plan);
            cfg.tail = co_tail.resolve(game.support().dim());
            cfg.master_seed = co_seed;
            cfg.engine = drcg::parse_wc_engine(co_engine);
            cfg.ground = drcg::parse_norm_tag(co_norm);
            const auto rows = drcg::run_consistency_study(cfg, co_fixed_eps);
            std::filesystem::create_directories(co_out);
            std::ostringstream os;
            drcg::write_consistency_csv(os, rows);
            write_file(std::filesystem::path(co_out) / "consistency.csv", os.str());
            std::cout << "constants: " << constants_json(cfg.tail).dump() << "\n";
            for (const auto& r : rows)
                std::cout << "K=" << r.k << " eps=" << drcg::fmt12(r.eps)
                          << " max_gap=" << drcg::fmt12(r.max_gap) << "\n";
            return 0;
        }

        if (app.got_subcommand(check)) {
            const auto game = drcg::game_spec::load(ch_game);
            if (ch_eps.has_value() == ch_beta.has_value())
                throw drcg::input_error("pass exactly one of --eps / --beta");
            const auto samples = shared_samples_from_csv(ch_samples, game);
            const auto t = ch_tail.resolve(game.support().dim());
            const auto norm = drcg::parse_norm_tag(ch_norm);
            const auto config =
                ch_eps ? drcg::ambiguity_config::uniform_radius(game.n_agents(), *ch_eps, t, norm)
                       : drcg::ambiguity_config::uniform_confidence(game.n_agents(), *ch_beta,
                                                                    t, norm);
            const auto dr = drcg::build_dr_core(game, samples, config);
            const auto expected = drcg::build_expected_core(game, ch_dist.resolve(game));
            const auto rep = drcg::check_containment(dr, expected);
            json dom = json::object();
            for (const auto& [s, f] : rep.dominance) dom[std::to_string(s)] = f;
            json out;
            out["contained"] = rep.contained;
            out["vacuous"] = rep.vacuous;
            out["max_violation"] = rep.max_violation;
            out["dominance"] = std::move(dom);
            out["thresholds_dr"] = thresholds_json(dr.thresholds);
            out["thresholds_expected"] = thresholds_json(expected.thresholds);
            out["constants"] = constants_json(t);
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const drcg::empty_core_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
