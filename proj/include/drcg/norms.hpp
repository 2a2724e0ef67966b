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

#ifndef DRCG_NORMS_HPP
#define DRCG_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "drcg/errors.hpp"

namespace drcg {

/// Ground norms for transport costs; the dual program bounds dual variables
/// in the corresponding dual norm.
enum class norm_tag { one, max, euclidean };

/// one <-> max, euclidean <-> euclidean.
constexpr norm_tag dual_of(norm_tag n) {
    switch (n) {
        case norm_tag::one: return norm_tag::max;
        case norm_tag::max: return norm_tag::one;
        case norm_tag::euclidean: return norm_tag::euclidean;
    }
    return norm_tag::euclidean;
}

inline double norm_of(std::span<const double> v, norm_tag n) {
    double r = 0.0;
    switch (n) {
        case norm_tag::one:
            for (double x : v) r += std::abs(x);
            return r;
        case norm_tag::max:
            for (double x : v) r = std::max(r, std::abs(x));
            return r;
        case norm_tag::euclidean:
            for (double x : v) r += x * x;
            return std::sqrt(r);
    }
    return r;
}

inline double dual_norm_of(std::span<const double> v, norm_tag n) {
    return norm_of(v, dual_of(n));
}

inline const char* norm_name(norm_tag n) {
    switch (n) {
        case norm_tag::one: return "one";
        case norm_tag::max: return "max";
        case norm_tag::euclidean: return "euclidean";
    }
    return "?";
}

inline norm_tag parse_norm_tag(const std::string& s) {
    if (s == "one" || s == "1" || s == "l1") return norm_tag::one;
    if (s == "max" || s == "inf" || s == "linf") return norm_tag::max;
    if (s == "euclidean" || s == "2" || s == "l2") return norm_tag::euclidean;
    throw input_error("unknown norm tag '" + s + "' (expected one|max|euclidean)");
}

} // namespace drcg

#endif // DRCG_NORMS_HPP
