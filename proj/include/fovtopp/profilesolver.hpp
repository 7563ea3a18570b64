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

#ifndef FOVTOPP_PROFILESOLVER_HPP_
#define FOVTOPP_PROFILESOLVER_HPP_

#include <utility>
#include <vector>

#include "fovtopp/attsmooth.hpp"
#include "fovtopp/errors.hpp"
#include "fovtopp/fovcone.hpp"
#include "fovtopp/profile.hpp"

namespace fovtopp {

/// Per-node lower/upper bounds on h, endpoint pins applied.
struct SpeedBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Constraints coupling grid nodes i and i+1 through w = (h_i, h'_i) with
/// the finite difference h'_i = (h_{i+1} - h_i)/ds.
struct NodeConstraintSet {
  std::vector<Soc2Constraint> constraints;
  double ds = 0.0;
};

/// B_l/B_u arrays; throws InfeasibleBounds when they cross anywhere
/// (including at the pinned endpoints).
SpeedBounds build_speed_bounds(const ProblemInstance& instance,
                               const Grid& grid);

/// Constraint sets for transitions i = 0..n-1. Stage 1: FoV rows for the
/// landmarks required at s_i, the attitude cone, the total-thrust ball, and
/// the h box rows. Stage 2: FoV + cone retained, thrust ball replaced by the
/// eight per-motor rows (via c_par and the torque map of the schedule), plus
/// the nonholonomy tube around the smoothed body-z axis.
std::vector<NodeConstraintSet> constraint_cache(
    const ProblemInstance& instance, const Grid& grid, int stage,
    const RotationSchedule* schedule = nullptr);

/// Exact set of free-coordinate values x in `box` such that all constraints
/// hold with the fixed coordinate at `value`. which = 0 fixes h_i (x ranges
/// over h_{i+1}); which = 1 fixes h_{i+1} (x ranges over h_i). Closed form
/// per constraint; the result is an interval by convexity.
Interval reduce_interval(const NodeConstraintSet& set, int which, double value,
                         const Interval& box);

/// One propagation step: the (min, max) of the objective coordinate over the
/// two-variable feasible set, the other coordinate ranging over its current
/// interval. Backward: objective h_i; forward: objective h_{i+1}. Bisection
/// to eps_h with reduce_interval as the feasibility test.
/// Throws StepInfeasible when the joint feasible set is empty.
std::pair<double, double> propagate(SweepPhase direction,
                                    const NodeConstraintSet& set,
                                    const Interval& interval_i,
                                    const Interval& interval_ip1, double eps_h);

/// The full backward/forward pass for one stage.
/// Throws Infeasible{stage, phase, index} when a step collapses.
SquareSpeedProfile backward_forward(const ProblemInstance& instance,
                                    const Grid& grid, int stage,
                                    const RotationSchedule* schedule = nullptr);

struct SolveResult {
  SquareSpeedProfile stage2;
  RotationSchedule schedule;
  SquareSpeedProfile stage1;
};

/// Stage 1 sweep, attitude smoothing, stage 2 sweep.
SolveResult solve(const ProblemInstance& instance);

}  // namespace fovtopp

#endif  // FOVTOPP_PROFILESOLVER_HPP_
