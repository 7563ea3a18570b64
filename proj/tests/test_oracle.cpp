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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fovtopp/errors.hpp"
#include "fovtopp/fovcone.hpp"
#include "fovtopp/oracle.hpp"
#include "fovtopp/profilesolver.hpp"
#include "fovtopp/quadmodel.hpp"
#include "fovtopp/trajout.hpp"
#include "support/fixtures.hpp"

using namespace fovtopp;
using fovtopp::testing::load;

namespace {

ProblemInstance straight_instance(double s_end, int grid_n) {
  PolySegment seg;
  seg.s0 = 0.0;
  seg.s1 = s_end;
  seg.coeffs.setZero(3, 2);
  seg.coeffs(0, 1) = 1.0;
  PolySegment th;
  th.s0 = 0.0;
  th.s1 = s_end;
  th.coeffs.setZero(1, 1);
  ProblemInstance inst;
  inst.path.gamma_segments = {seg};
  inst.path.theta_segments = {th};
  inst.path.s_end = s_end;
  inst.grid_n = grid_n;
  return inst;
}

double dp_time(const ProblemInstance& inst, const Grid& grid,
               const DpSettings& settings) {
  const SquareSpeedProfile prof = dp_solve(inst, grid, settings);
  return reconstruct_time(grid, prof).back();
}

// Time increase caused by lowering the whole profile by one lattice cell;
// the natural scale for comparing DP solutions across lattice resolutions.
double one_cell_tolerance(const Grid& grid, const SquareSpeedProfile& prof,
                          double cell) {
  double tol = 0.0;
  for (int i = 0; i < grid.n(); ++i) {
    const double a = std::sqrt(std::max(0.0, prof.h[i]));
    const double b = std::sqrt(std::max(0.0, prof.h[i + 1]));
    const double ac = std::sqrt(prof.h[i] + cell);
    const double bc = std::sqrt(prof.h[i + 1] + cell);
    tol += 2.0 * grid.ds * (1.0 / (a + b) - 1.0 / (ac + bc));
  }
  return tol;
}

}  // namespace

TEST_CASE("dp oracle saturates a box-only instance at the speed limit") {
  ProblemInstance inst = straight_instance(10.0, 10);
  inst.v_max = 5.0;
  inst.quad.c_max = 100.0;  // actuation never binds
  const Grid grid = discretize(inst);
  const SquareSpeedProfile prof = dp_solve(inst, grid, DpSettings{51, 0.0});
  REQUIRE(prof.h.size() == 11);
  CHECK(prof.h.front() == 0.0);
  CHECK(prof.h.back() == 0.0);
  const SpeedBounds bounds = build_speed_bounds(inst, grid);
  for (int i = 1; i < 10; ++i) {
    // Top lattice level == B_u == 25 away from the pins.
    CHECK(prof.h[i] == doctest::Approx(25.0).epsilon(1e-9));
    CHECK(prof.h[i] <= bounds.upper[i] + 1e-9);
    CHECK(prof.l[i] == 0.0);
  }
}

TEST_CASE("dp oracle validation guards") {
  ProblemInstance inst = straight_instance(10.0, 250);
  const Grid grid = discretize(inst);
  CHECK_THROWS_AS(dp_solve(inst, grid, DpSettings{100, 50.0}), ValidationError);
  ProblemInstance small = straight_instance(10.0, 10);
  const Grid sg = discretize(small);
  CHECK_THROWS_AS(dp_solve(small, sg, DpSettings{1, 50.0}), ValidationError);
}

TEST_CASE("dp oracle reproduces the bang-bang optimum") {
  nlohmann::json doc = fovtopp::testing::bangbang_doc();
  doc["solver"]["grid_n"] = 50;
  const ProblemInstance inst = load(doc);
  const Grid grid = discretize(inst);
  const SquareSpeedProfile dp = dp_solve(inst, grid, DpSettings{400, 180.0});
  CHECK(dp.h.front() == 0.0);
  CHECK(dp.h.back() == 0.0);
  const double t_dp = reconstruct_time(grid, dp).back();
  const double g = 9.81;
  const double a_max = std::sqrt(std::pow(4.0 * inst.quad.c_max, 2) - g * g);
  const double t_star = 2.0 * std::sqrt(10.0 / a_max);
  CHECK(std::abs(t_dp - t_star) / t_star < 0.03);

  // The lattice solution can only be slower than the continuous sweep.
  // Pointwise it tracks within a few lattice cells: one cell of quantization
  // can compound through the step map (whose gain is not exactly 1 on a
  // sloped limit arc) before re-syncing, so allow three.
  const SquareSpeedProfile bf = backward_forward(inst, grid, 1);
  const double t_bf = reconstruct_time(grid, bf).back();
  CHECK(t_dp >= t_bf - 1e-9);
  const double cell = 180.0 / 399.0;
  const double tol = std::max(2.0 * inst.eps_h, 3.0 * cell);
  for (size_t i = 0; i < dp.h.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(dp.h[i] - bf.h[i]) <= tol);
  }
}

TEST_CASE("dp oracle and sweeps agree on a random cubic") {
  const ProblemInstance inst = load(fovtopp::testing::random_cubic_doc(0));
  const Grid grid = discretize(inst);
  const SpeedBounds bounds = build_speed_bounds(inst, grid);
  const double cap =
      *std::max_element(bounds.upper.begin(), bounds.upper.end());
  const SquareSpeedProfile dp =
      dp_solve(inst, grid, DpSettings{400, cap});
  const SquareSpeedProfile bf = backward_forward(inst, grid, 1);
  const double cell = cap / 399.0;
  const double tol = std::max(2.0 * inst.eps_h, 3.0 * cell);
  for (size_t i = 0; i < dp.h.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(dp.h[i] - bf.h[i]) <= tol);
  }
  const double t_dp = reconstruct_time(grid, dp).back();
  const double t_bf = reconstruct_time(grid, bf).back();
  CHECK(std::abs(t_dp - t_bf) / t_bf < 0.03);
}

TEST_CASE("dp oracle agrees on infeasibility") {
  const ProblemInstance inst = load(fovtopp::testing::random_cubic_doc(3));
  const Grid grid = discretize(inst);
  CHECK_THROWS_AS(backward_forward(inst, grid, 1), Infeasible);
  try {
    dp_solve(inst, grid, DpSettings{200, 0.0});
    FAIL("expected Infeasible");
  } catch (const Infeasible& e) {
    CHECK(e.stage() == 1);
  }
}

TEST_CASE("doubling dp levels never speeds the solution past one cell") {
  nlohmann::json doc = fovtopp::testing::bangbang_doc();
  doc["solver"]["grid_n"] = 40;
  const ProblemInstance inst = load(doc);
  const Grid grid = discretize(inst);
  const SquareSpeedProfile p400 = dp_solve(inst, grid, DpSettings{400, 180.0});
  const SquareSpeedProfile p800 = dp_solve(inst, grid, DpSettings{800, 180.0});
  const double t400 = reconstruct_time(grid, p400).back();
  const double t800 = reconstruct_time(grid, p800).back();
  const double tol = one_cell_tolerance(grid, p400, 180.0 / 399.0);
  CHECK(t400 - t800 <= tol + 1e-9);
}

TEST_CASE("convexity probe runs to completion on convex families") {
  const Vec3 g_vec(0.0, 0.0, -9.81);
  const ThrustAffine ta = thrust_affine(Vec3(1, 0, 0), Vec3::Zero(), g_vec);
  SUBCASE("feasible set reports every trial") {
    NodeConstraintSet set;
    set.ds = 0.1;
    set.constraints = {thrust_ball_constraint(ta, 40.0),
                       linear_row(Vec2(1.0, 0.0), 0.0, "box_lo")};
    const ProbeResult res = convexity_probe(set, 250);
    CHECK(res.ok);
    CHECK(res.trials_run == 250);
  }
  SUBCASE("an empty feasible region exhausts the sampler") {
    // 4 c_max < g: not even hover fits, so no feasible pair ever appears.
    NodeConstraintSet set;
    set.ds = 0.1;
    set.constraints = {thrust_ball_constraint(ta, 5.0)};
    CHECK_THROWS_AS(convexity_probe(set, 10), SamplingExhausted);
  }
}

TEST_CASE("conic and geometric constraint forms never disagree") {
  const EquivalenceStats st = equivalence_probe(10000);
  CHECK(st.trials == 10000);
  CHECK(st.fov_disagree == 0);
  CHECK(st.cone_disagree == 0);
  CHECK(st.fov_agree + st.fov_disagree + st.fov_boundary + st.skipped ==
        st.trials);
  CHECK(st.cone_agree + st.cone_disagree + st.cone_boundary + st.skipped ==
        st.trials);
  CHECK(st.fov_agree > 5000);
  CHECK(st.cone_agree > 5000);

  SUBCASE("the probe is deterministic in its seed") {
    const EquivalenceStats a = equivalence_probe(3000);
    const EquivalenceStats b = equivalence_probe(3000);
    CHECK(a.fov_agree == b.fov_agree);
    CHECK(a.cone_agree == b.cone_agree);
    CHECK(a.fov_boundary == b.fov_boundary);
    CHECK(a.skipped == b.skipped);
  }
  SUBCASE("a different seed still finds no disagreement") {
    const EquivalenceStats c = equivalence_probe(3000, 99);
    CHECK(c.fov_disagree == 0);
    CHECK(c.cone_disagree == 0);
  }
}

TEST_CASE("near-grazing cones accept every in-cone geometry") {
  // With alpha just below pi/2 the cone is almost a half space; any landmark
  // constructed inside it must satisfy both the conic row and the geometric
  // predicate, with no false negatives near the grazing regime.
  CameraRig rig;
  rig.d = 0.0;
  rig.alpha = M_PI / 2.0 - 1e-3;
  const Vec3 g_vec(0.0, 0.0, -9.81);
  const Vec3 gamma_p = Vec3(0.9, 0.1, 0.05).normalized();
  const ThrustAffine ta = thrust_affine(gamma_p, Vec3(0.02, -0.3, 0.0), g_vec);
  const Vec3 gamma(1.0, -2.0, 3.0);
  const Vec3 psi(1.0, 0.0, 0.0);
  const Vec3 perp = psi_perp(psi);

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 500; ++t) {
    const Vec2 w(0.05 + 25.0 * u01(rng), -15.0 + 30.0 * u01(rng));
    const Vec3 c = ta.thrust(w);
    Mat3 R;
    try {
      R = attitude_from_thrust(c, psi);
    } catch (const DegenerateAttitude&) {
      continue;
    }
    const Vec3 x_b = R.col(0);
    // A direction at angle phi < alpha from the optical axis.
    const double phi = (rig.alpha - 2e-3) * u01(rng);
    Vec3 side = x_b.cross(Vec3(0.3, 0.7, 0.2).normalized());
    if (side.norm() < 1e-6) side = x_b.cross(Vec3::UnitY());
    side.normalize();
    const Vec3 dir = std::cos(phi) * x_b + std::sin(phi) * side;
    const Vec3 landmark = gamma + (0.5 + 3.0 * u01(rng)) * dir;

    CHECK(fov_predicate(gamma, R, landmark, rig));
    const Soc2Constraint row = fov_constraint(gamma, perp, ta, landmark, rig);
    CHECK(row.residual(w) <= 1e-9);
    ++checked;
  }
  CHECK(checked > 400);
}
