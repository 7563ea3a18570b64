// Copyright 2026 The fovtopp Authors
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

#ifndef FOVTOPP_ORACLE_HPP_
#define FOVTOPP_ORACLE_HPP_

#include <cstdint>
#include <string>

#include "fovtopp/pathspec.hpp"
#include "fovtopp/profile.hpp"
#include "fovtopp/profilesolver.hpp"

namespace fovtopp {

// Brute-force counterparts to the sweep solver. Everything here re-derives
// the physics from raw vectors on purpose; it must not share residual code
// with the solver so that agreement between the two is meaningful.

struct DpSettings {
  int h_levels = 400;  // discrete h values per node
  double h_cap = 0.0;  // m^2/s^2; <= 0 selects the largest node speed bound
};

/// Dynamic program over the (node, h-level) lattice with stage-1 physics.
/// A transition (i, h) -> (i+1, ht) is admitted iff every node-i inequality
/// holds with h' = (ht - h) / ds, checked by direct residual evaluation.
/// Returns the pointwise-maximal (h) and -minimal (l) surviving level per
/// node among states that are both reachable and co-reachable. Endpoint
/// squared speeds are kept as exact off-lattice singletons.
/// Guarded to grid_n <= 200; throws Infeasible when no chain exists.
SquareSpeedProfile dp_solve(const ProblemInstance& instance, const Grid& grid,
                            const DpSettings& settings);

struct ProbeResult {
  bool ok = true;
  long trials_run = 0;
  // First counterexample, valid only when !ok: the convex combination
  // lambda * a + (1 - lambda) * b violated `tag` with the given residual.
  Vec2 witness_a = Vec2::Zero();
  Vec2 witness_b = Vec2::Zero();
  double witness_lambda = 0.5;
  double residual = 0.0;
  std::string tag;
};

/// Property test for joint convexity of a node constraint set: rejection
/// sampling of feasible pairs inside [w_lo, w_hi], then midpoint and random
/// convex combinations must stay feasible within residual 1e-9. Throws
/// SamplingExhausted after 1e5 consecutive rejections.
ProbeResult convexity_probe(const NodeConstraintSet& constraints, long trials,
                            const Vec2& w_lo = Vec2(0.0, -50.0),
                            const Vec2& w_hi = Vec2(50.0, 50.0),
                            std::uint64_t seed = 20260817ull);

struct EquivalenceStats {
  long trials = 0;
  long fov_agree = 0;
  long fov_disagree = 0;
  long fov_boundary = 0;  // |angle - alpha| < 1e-6, excluded from the verdict
  long cone_agree = 0;
  long cone_disagree = 0;
  long cone_boundary = 0;
  long skipped = 0;  // degenerate thrust or landmark geometry
};

/// Draws random (gamma, gamma', gamma'', psi, landmark, d, alpha, w) tuples
/// and compares the conic field-of-view / attitude-cone constraints against
/// the geometric predicates evaluated on the thrust-implied attitude.
EquivalenceStats equivalence_probe(long trials,
                                   std::uint64_t seed = 20260817ull);

}  // namespace fovtopp

#endif  // FOVTOPP_ORACLE_HPP_
