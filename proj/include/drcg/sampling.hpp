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

#ifndef DRCG_SAMPLING_HPP
#define DRCG_SAMPLING_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "drcg/coalition.hpp"
#include "drcg/empirical.hpp"
#include "drcg/errors.hpp"
#include "drcg/game.hpp"
#include "drcg/truncated_gaussian.hpp"

namespace drcg {

namespace seeds {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream roles keep coalition/agent/trial streams disjoint for any master seed.
constexpr std::uint64_t role_shared = 0x01;
constexpr std::uint64_t role_coalition = 0x02;
constexpr std::uint64_t role_agent = 0x03;
constexpr std::uint64_t role_trial = 0x04;
constexpr std::uint64_t role_axis = 0x05;

/// Child stream seed from (master, role, id) by a splitmix chain.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t role,
                                 std::uint64_t id) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ role);
    h = splitmix64(h ^ id);
    return h;
}

} // namespace seeds

/// Deterministic uniform(0,1) stream: mt19937_64 bits mapped to 53-bit doubles,
/// so output is identical across platforms and worker layouts.
class uniform_stream {
public:
    explicit uniform_stream(std::uint64_t seed) : eng_(seed) {}
    double next() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

/// K i.i.d. draws by inverse-CDF; sample count and values are a pure function
/// of (spec, count, stream_seed).
inline empirical_distribution sample_truncated_gaussian(const truncated_gaussian& dist,
                                                        int count,
                                                        std::uint64_t stream_seed) {
    if (count < 1) throw input_error("sample count must be >= 1");
    uniform_stream u(stream_seed);
    std::vector<std::vector<double>> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) samples.push_back({dist.quantile(u.next())});
    return empirical_distribution(std::move(samples));
}

enum class sampling_mode { per_coalition, per_agent, shared };

inline const char* sampling_mode_name(sampling_mode m) {
    switch (m) {
        case sampling_mode::per_coalition: return "per-coalition";
        case sampling_mode::per_agent: return "per-agent";
        case sampling_mode::shared: return "shared";
    }
    return "?";
}

inline sampling_mode parse_sampling_mode(const std::string& s) {
    if (s == "per-coalition" || s == "per_coalition") return sampling_mode::per_coalition;
    if (s == "per-agent" || s == "per_agent") return sampling_mode::per_agent;
    if (s == "shared") return sampling_mode::shared;
    throw input_error("unknown sampling plan '" + s +
                      "' (expected per-coalition|per-agent|shared)");
}

/// Who draws how many samples.
///   shared        - one multi-sample of size shared_count reused by every coalition
///   per_coalition - independent stream and count per coalition
///   per_agent     - each agent draws K_i; coalition S receives the concatenation
///                   over its members, so K_S = sum_{i in S} K_i and coalitions
///                   sharing an agent share that agent's atoms
struct sampling_plan {
    sampling_mode mode = sampling_mode::shared;
    int shared_count = 0;
    std::map<coalition_id, int> coalition_counts;
    std::map<int, int> agent_counts; // agent index 1..N
    std::uint64_t master_seed = 0;

    static sampling_plan shared_plan(int count, std::uint64_t seed) {
        sampling_plan p;
        p.mode = sampling_mode::shared;
        p.shared_count = count;
        p.master_seed = seed;
        return p;
    }

    static sampling_plan per_coalition_uniform(int n_agents, int count, std::uint64_t seed) {
        sampling_plan p;
        p.mode = sampling_mode::per_coalition;
        for (coalition_id s : enumerate_subcoalitions(n_agents)) p.coalition_counts[s] = count;
        p.master_seed = seed;
        return p;
    }

    static sampling_plan per_agent_plan(std::map<int, int> counts, std::uint64_t seed) {
        sampling_plan p;
        p.mode = sampling_mode::per_agent;
        p.agent_counts = std::move(counts);
        p.master_seed = seed;
        return p;
    }

    static sampling_plan per_agent_uniform(int n_agents, int count, std::uint64_t seed) {
        sampling_plan p;
        p.mode = sampling_mode::per_agent;
        for (int i = 1; i <= n_agents; ++i) p.agent_counts[i] = count;
        p.master_seed = seed;
        return p;
    }

    /// Resolved multi-sample size K_S for one coalition.
    int coalition_count(coalition_id s) const {
        switch (mode) {
            case sampling_mode::shared:
                if (shared_count < 1) throw config_error("shared sample count missing");
                return shared_count;
            case sampling_mode::per_coalition: {
                auto it = coalition_counts.find(s);
                if (it == coalition_counts.end() || it->second < 1)
                    throw config_error("missing sample count for coalition " +
                                       coalition_to_string(s));
                return it->second;
            }
            case sampling_mode::per_agent: {
                int total = 0;
                for (int i : coalition_members(s)) {
                    auto it = agent_counts.find(i);
                    if (it == agent_counts.end() || it->second < 1)
                        throw config_error("missing sample count for agent " +
                                           std::to_string(i));
                    total += it->second;
                }
                return total;
            }
        }
        throw config_error("invalid sampling mode");
    }
};

/// Draw a multi-sample for every nonempty proper coalition of the game.
/// The truncation interval must sit inside the game's support box.
inline std::map<coalition_id, empirical_distribution> build_multisamples(
    const sampling_plan& plan, const truncated_gaussian& dist, const game_spec& game) {
    if (game.support().dim() != 1)
        throw config_error("truncated-Gaussian sampling covers 1-D games only");
    if (dist.lo < game.support().lo[0] - 1e-12 || dist.hi > game.support().hi[0] + 1e-12)
        throw config_error("truncation interval must lie inside the game support box");

    const auto coalitions = enumerate_subcoalitions(game);
    std::map<coalition_id, empirical_distribution> out;

    switch (plan.mode) {
        case sampling_mode::shared: {
            if (plan.shared_count < 1) throw config_error("shared sample count missing");
            const auto emp = sample_truncated_gaussian(
                dist, plan.shared_count,
                seeds::stream_seed(plan.master_seed, seeds::role_shared, 0));
            for (coalition_id s : coalitions) out.emplace(s, emp);
            break;
        }
        case sampling_mode::per_coalition: {
            for (coalition_id s : coalitions) {
                const int k = plan.coalition_count(s);
                out.emplace(s, sample_truncated_gaussian(
                                   dist, k,
                                   seeds::stream_seed(plan.master_seed,
                                                      seeds::role_coalition, s)));
            }
            break;
        }
        case sampling_mode::per_agent: {
            std::map<int, empirical_distribution> agent_samples;
            for (int i = 1; i <= game.n_agents(); ++i) {
                auto it = plan.agent_counts.find(i);
                if (it == plan.agent_counts.end() || it->second < 1)
                    throw config_error("missing sample count for agent " + std::to_string(i));
                agent_samples.emplace(
                    i, sample_truncated_gaussian(
                           dist, it->second,
                           seeds::stream_seed(plan.master_seed, seeds::role_agent,
                                              static_cast<std::uint64_t>(i))));
            }
            for (coalition_id s : coalitions) {
                std::vector<std::vector<double>> concat;
                for (int i : coalition_members(s)) {
                    const auto& src = agent_samples.at(i).samples();
                    concat.insert(concat.end(), src.begin(), src.end());
                }
                out.emplace(s, empirical_distribution(std::move(concat)));
            }
            break;
        }
    }
    return out;
}

} // namespace drcg

#endif // DRCG_SAMPLING_HPP
