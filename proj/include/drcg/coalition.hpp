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

#ifndef DRCG_COALITION_HPP
#define DRCG_COALITION_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "drcg/errors.hpp"

namespace drcg {

/// Coalition as a bitmask over agents 1..N: bit (i-1) set <=> agent i belongs.
/// Zero (empty coalition) and the full mask (grand coalition) are excluded
/// from all per-coalition maps.
using coalition_id = std::uint32_t;

/// Bitmask width bound; beyond this the per-coalition LPs are impractical anyway.
constexpr int max_agents = 20;

constexpr coalition_id grand_coalition(int n_agents) {
    return (coalition_id{1} << n_agents) - 1u;
}

constexpr bool coalition_contains(coalition_id s, int agent) {
    return ((s >> (agent - 1)) & 1u) != 0;
}

constexpr int coalition_size(coalition_id s) { return std::popcount(s); }

inline coalition_id coalition_of(const std::vector<int>& members, int n_agents) {
    coalition_id s = 0;
    for (int i : members) {
        if (i < 1 || i > n_agents)
            throw input_error("agent index " + std::to_string(i) + " outside 1.." +
                              std::to_string(n_agents));
        s |= coalition_id{1} << (i - 1);
    }
    return s;
}

inline std::vector<int> coalition_members(coalition_id s) {
    std::vector<int> out;
    for (int i = 1; s != 0; ++i, s >>= 1)
        if (s & 1u) out.push_back(i);
    return out;
}

/// "{1,3}" style label for reports.
inline std::string coalition_to_string(coalition_id s) {
    std::string out = "{";
    bool first = true;
    for (int i : coalition_members(s)) {
        if (!first) out += ",";
        out += std::to_string(i);
        first = false;
    }
    return out + "}";
}

/// All nonempty proper subcoalitions of {1..N} in ascending bitmask order.
/// Exactly 2^N - 2 entries; the empty set and the grand coalition never appear.
inline std::vector<coalition_id> enumerate_subcoalitions(int n_agents) {
    if (n_agents < 2 || n_agents > max_agents)
        throw config_error("agent count must be in 2.." + std::to_string(max_agents) +
                           ", got " + std::to_string(n_agents));
    std::vector<coalition_id> out;
    out.reserve((std::size_t{1} << n_agents) - 2);
    for (coalition_id s = 1; s < grand_coalition(n_agents); ++s) out.push_back(s);
    return out;
}

} // namespace drcg

#endif // DRCG_COALITION_HPP
