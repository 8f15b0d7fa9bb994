// Copyright 2026 The accept Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Game in, profile out: min-max values, equilibria of the auxiliary games,
// decomposition, classification and assembly.

#include <vector>

#include "accept/game.hpp"
#include "accept/minmax.hpp"
#include "accept/one_shot.hpp"
#include "accept/profile_builder.hpp"
#include "accept/structure.hpp"

namespace accept {

struct PipelineOptions {
  BuildOptions build;
  double tol_v = 1e-4;
  EnumerationOptions equilibria;
  std::vector<double> schedule = default_schedule();
  double minmax_tol = 1e-9;
};

struct Synthesis {
  MinMaxReport minmax;
  ValueTable v1;
  std::vector<EquilibriumSet> equilibria;
  Decomposition decomposition;
  SynthesizedProfile profile;  // plans live in profile.plans
};

inline Synthesis analyze(const StochasticGame& g, const PipelineOptions& o = {}) {
  require_valid(g);
  Synthesis out;
  out.minmax = solve_minmax(g, o.schedule, o.minmax_tol);
  out.v1 = out.minmax.uniform_values();
  out.equilibria = enumerate_all(g, out.v1, o.equilibria);
  out.decomposition = decompose(g, out.equilibria, out.v1, o.tol_v);
  return out;
}

inline Synthesis synthesize(const StochasticGame& g, const PipelineOptions& o = {}) {
  Synthesis out = analyze(g, o);
  auto plans = classify_all(g, out.decomposition, out.v1, o.build);
  out.profile = assemble_profile(g, out.decomposition, std::move(plans), o.build);
  return out;
}

inline CorrelatedBuild synthesize_correlated(const StochasticGame& g, const Synthesis& s, const PipelineOptions& o = {}) {
  return build_correlated_stationary(g, s.decomposition, s.profile.plans, s.v1, o.build);
}

}  // namespace accept
