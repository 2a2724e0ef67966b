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

#ifndef DRCG_ERRORS_HPP
#define DRCG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace drcg {

/// Invalid static configuration (game file, sampling plan, tail constants).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid runtime input (dimension mismatch, argument out of range).
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure: solver cycling safeguard exhausted, quadrature
/// non-convergence, ill-conditioned active set.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested combination is outside the implemented theory (e.g. the
/// radius/confidence bound at support dimension 2, Euclidean dual cones
/// beyond dimension 2).
struct unsupported_error : std::runtime_error {
    explicit unsupported_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A polyhedron handed to the min-norm projector has no feasible point.
struct empty_region_error : std::runtime_error {
    explicit empty_region_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The DR core is empty for the given data and radii.
struct empty_core_error : std::runtime_error {
    explicit empty_core_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace drcg

#endif // DRCG_ERRORS_HPP
