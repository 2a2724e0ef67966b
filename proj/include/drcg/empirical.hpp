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

#ifndef DRCG_EMPIRICAL_HPP
#define DRCG_EMPIRICAL_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "drcg/errors.hpp"
#include "drcg/game.hpp"

namespace drcg {

/// Uniformly weighted multi-sample: K atoms of weight 1/K each.
class empirical_distribution {
public:
    explicit empirical_distribution(std::vector<std::vector<double>> samples)
        : samples_(std::move(samples)) {
        if (samples_.empty()) throw input_error("empirical distribution needs K >= 1 samples");
        const std::size_t p = samples_.front().size();
        if (p == 0) throw input_error("samples must have at least one coordinate");
        for (const auto& s : samples_)
            if (s.size() != p) throw input_error("samples disagree on dimension");
    }

    int dim() const { return static_cast<int>(samples_.front().size()); }
    int count() const { return static_cast<int>(samples_.size()); }
    const std::vector<std::vector<double>>& samples() const { return samples_; }

    /// (1/K) sum_k u(xi_k).
    double mean_value(const piecewise_affine_value& u) const {
        double acc = 0.0;
        for (const auto& s : samples_) acc += u(s);
        return acc / static_cast<double>(count());
    }

    std::vector<double> coordinate_mean() const {
        std::vector<double> m(samples_.front().size(), 0.0);
        for (const auto& s : samples_)
            for (std::size_t j = 0; j < m.size(); ++j) m[j] += s[j];
        for (double& v : m) v /= static_cast<double>(count());
        return m;
    }

    // CSV layout: header x1,...,xp then one row per sample.
    void write_csv(std::ostream& os) const {
        for (int j = 1; j <= dim(); ++j) os << (j > 1 ? ",x" : "x") << j;
        os << "\n";
        char buf[64];
        for (const auto& s : samples_) {
            for (std::size_t j = 0; j < s.size(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", s[j]);
                os << (j > 0 ? "," : "") << buf;
            }
            os << "\n";
        }
    }

    static empirical_distribution read_csv(std::istream& is) {
        std::string line;
        if (!std::getline(is, line)) throw input_error("empty sample CSV");
        std::vector<std::vector<double>> rows;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                try {
                    row.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    throw input_error("bad CSV cell '" + cell + "'");
                }
            }
            rows.push_back(std::move(row));
        }
        return empirical_distribution(std::move(rows));
    }

    void save_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw input_error("cannot write sample file '" + path + "'");
        write_csv(out);
    }

    static empirical_distribution load_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw input_error("cannot open sample file '" + path + "'");
        return read_csv(in);
    }

private:
    std::vector<std::vector<double>> samples_;
};

/// Weighted finite distribution; candidate measures in oracles and
/// discretized reference measures.
struct discrete_distribution {
    std::vector<std::vector<double>> atoms;
    std::vector<double> weights;

    discrete_distribution(std::vector<std::vector<double>> atoms_,
                          std::vector<double> weights_)
        : atoms(std::move(atoms_)), weights(std::move(weights_)) {
        if (atoms.empty() || atoms.size() != weights.size())
            throw input_error("discrete distribution needs matching atoms and weights");
        double sum = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw input_error("negative atom weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw input_error("atom weights must sum to 1 (got " + std::to_string(sum) + ")");
        const std::size_t p = atoms.front().size();
        for (const auto& a : atoms)
            if (a.size() != p) throw input_error("atoms disagree on dimension");
    }

    explicit discrete_distribution(const empirical_distribution& emp)
        : atoms(emp.samples()),
          weights(emp.samples().size(), 1.0 / static_cast<double>(emp.count())) {}

    int dim() const { return static_cast<int>(atoms.front().size()); }
};

} // namespace drcg

#endif // DRCG_EMPIRICAL_HPP
