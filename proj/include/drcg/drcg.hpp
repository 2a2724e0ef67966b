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

#ifndef DRCG_DRCG_HPP
#define DRCG_DRCG_HPP

#include "drcg/ambiguity.hpp"
#include "drcg/coalition.hpp"
#include "drcg/core.hpp"
#include "drcg/empirical.hpp"
#include "drcg/errors.hpp"
#include "drcg/experiment.hpp"
#include "drcg/game.hpp"
#include "drcg/min_norm.hpp"
#include "drcg/norms.hpp"
#include "drcg/sampling.hpp"
#include "drcg/simplex.hpp"
#include "drcg/truncated_gaussian.hpp"
#include "drcg/worst_case.hpp"

#endif // DRCG_DRCG_HPP
