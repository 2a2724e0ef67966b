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

#ifndef DRCG_GAME_HPP
#define DRCG_GAME_HPP

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "drcg/coalition.hpp"
#include "drcg/errors.hpp"
#include "drcg/norms.hpp"

namespace drcg {

/// One affine piece a.xi + b.
struct affine_piece {
    std::vector<double> a;
    double b = 0.0;
};

/// Max-of-affine coalitional value u(xi) = max_m (a_m.xi + b_m).
/// Convex, finite everywhere, Lipschitz with constant max_m ||a_m||_dual.
class piecewise_affine_value {
public:
    explicit piecewise_affine_value(std::vector<affine_piece> pieces)
        : pieces_(std::move(pieces)) {
        if (pieces_.empty())
            throw config_error("value function needs at least one affine piece");
        const std::size_t p = pieces_.front().a.size();
        if (p == 0) throw config_error("affine piece has empty slope vector");
        for (const auto& pc : pieces_)
            if (pc.a.size() != p)
                throw config_error("affine pieces disagree on dimension");
    }

    int dim() const { return static_cast<int>(pieces_.front().a.size()); }
    const std::vector<affine_piece>& pieces() const { return pieces_; }
    bool is_affine() const { return pieces_.size() == 1; }

    double operator()(std::span<const double> xi) const {
        if (static_cast<int>(xi.size()) != dim())
            throw input_error("evaluation point has dimension " +
                              std::to_string(xi.size()) + ", value function expects " +
                              std::to_string(dim()));
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& pc : pieces_) {
            double v = pc.b;
            for (std::size_t j = 0; j < xi.size(); ++j) v += pc.a[j] * xi[j];
            best = std::max(best, v);
        }
        return best;
    }

    double operator()(double xi) const { return (*this)(std::span<const double>(&xi, 1)); }

    /// max_m ||a_m||_* : |u(x)-u(y)| <= L * ||x-y|| under the ground norm.
    double lipschitz_constant(norm_tag ground) const {
        double L = 0.0;
        for (const auto& pc : pieces_) L = std::max(L, dual_norm_of(pc.a, ground));
        return L;
    }

private:
    std::vector<affine_piece> pieces_;
};

/// Axis-aligned box [lo_1,hi_1] x ... x [lo_p,hi_p]; closed, convex, compact.
struct box_support {
    std::vector<double> lo;
    std::vector<double> hi;

    box_support(std::vector<double> lo_, std::vector<double> hi_)
        : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.empty() || lo.size() != hi.size())
            throw config_error("support box bounds must be nonempty and equal in length");
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (!(lo[j] <= hi[j]))
                throw config_error("support box has lo > hi in coordinate " + std::to_string(j + 1));
    }

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(std::span<const double> xi, double tol = 0.0) const {
        if (static_cast<int>(xi.size()) != dim()) return false;
        for (std::size_t j = 0; j < xi.size(); ++j)
            if (xi[j] < lo[j] - tol || xi[j] > hi[j] + tol) return false;
        return true;
    }
};

/// Coalitional game: N agents, a piecewise-affine value function for every
/// nonempty proper coalition, a deterministic grand-coalition value, and the
/// uncertainty support box shared by all value functions.
class game_spec {
public:
    game_spec(int n_agents, double grand_value, box_support support,
              std::map<coalition_id, piecewise_affine_value> values)
        : n_agents_(n_agents),
          grand_value_(grand_value),
          support_(std::move(support)),
          values_(std::move(values)) {
        const auto coalitions = enumerate_subcoalitions(n_agents_);
        if (values_.size() != coalitions.size())
            throw config_error("game needs a value function for each of the " +
                               std::to_string(coalitions.size()) +
                               " nonempty proper coalitions, got " +
                               std::to_string(values_.size()));
        for (coalition_id s : coalitions) {
            auto it = values_.find(s);
            if (it == values_.end())
                throw config_error("missing value function for coalition " +
                                   coalition_to_string(s));
            if (it->second.dim() != support_.dim())
                throw config_error("value function of coalition " + coalition_to_string(s) +
                                   " has dimension " + std::to_string(it->second.dim()) +
                                   ", support has " + std::to_string(support_.dim()));
        }
    }

    int n_agents() const { return n_agents_; }
    double grand_value() const { return grand_value_; }
    const box_support& support() const { return support_; }
    const std::map<coalition_id, piecewise_affine_value>& values() const { return values_; }

    const piecewise_affine_value& value(coalition_id s) const {
        auto it = values_.find(s);
        if (it == values_.end())
            throw input_error("no value function for coalition " + coalition_to_string(s));
        return it->second;
    }

    static game_spec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static game_spec load(const std::string& path);
    void save(const std::string& path) const;

private:
    int n_agents_;
    double grand_value_;
    box_support support_;
    std::map<coalition_id, piecewise_affine_value> values_;
};

inline std::vector<coalition_id> enumerate_subcoalitions(const game_spec& g) {
    return enumerate_subcoalitions(g.n_agents());
}

inline game_spec game_spec::from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("n_agents").get<int>();
        const double gv = j.at("grand_value").get<double>();
        box_support box(j.at("support").at("lo").get<std::vector<double>>(),
                        j.at("support").at("hi").get<std::vector<double>>());
        std::map<coalition_id, piecewise_affine_value> values;
        for (const auto& cj : j.at("coalitions")) {
            const auto members = cj.at("members").get<std::vector<int>>();
            const coalition_id s = coalition_of(members, n);
            if (s == 0 || s == grand_coalition(n))
                throw config_error("coalition entries must be nonempty proper subsets");
            std::vector<affine_piece> pieces;
            for (const auto& pj : cj.at("pieces"))
                pieces.push_back({pj.at("a").get<std::vector<double>>(),
                                  pj.at("b").get<double>()});
            if (!values.emplace(s, piecewise_affine_value(std::move(pieces))).second)
                throw config_error("duplicate coalition " + coalition_to_string(s));
        }
        return game_spec(n, gv, std::move(box), std::move(values));
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("malformed game document: ") + e.what());
    }
}

inline nlohmann::json game_spec::to_json() const {
    nlohmann::json j;
    j["n_agents"] = n_agents_;
    j["grand_value"] = grand_value_;
    j["support"] = {{"lo", support_.lo}, {"hi", support_.hi}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [s, v] : values_) {
        nlohmann::json cj;
        cj["members"] = coalition_members(s);
        nlohmann::json pieces = nlohmann::json::array();
        for (const auto& pc : v.pieces()) pieces.push_back({{"a", pc.a}, {"b", pc.b}});
        cj["pieces"] = std::move(pieces);
        arr.push_back(std::move(cj));
    }
    j["coalitions"] = std::move(arr);
    return j;
}

inline game_spec game_spec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open game file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("cannot parse game file '" + path + "': " + e.what());
    }
    return from_json(j);
}

inline void game_spec::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write game file '" + path + "'");
    out << to_json().dump(2) << "\n";
}

inline bool operator==(const affine_piece& a, const affine_piece& b) {
    return a.a == b.a && a.b == b.b;
}

inline bool operator==(const piecewise_affine_value& a, const piecewise_affine_value& b) {
    return a.pieces() == b.pieces();
}

inline bool operator==(const game_spec& a, const game_spec& b) {
    return a.n_agents() == b.n_agents() && a.grand_value() == b.grand_value() &&
           a.support().lo == b.support().lo && a.support().hi == b.support().hi &&
           a.values() == b.values();
}

} // namespace drcg

#endif // DRCG_GAME_HPP
