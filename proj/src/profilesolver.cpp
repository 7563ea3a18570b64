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

#include "fovtopp/profilesolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace fovtopp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Admissible x for one constraint along the line w = w0 + x * w_dir,
/// i.e. the closed-form solution of ||a x + b|| <= p x + q.
Interval soc1d(const Soc2Constraint& con, const Vec2& w0, const Vec2& w_dir) {
  const Vec3 a = con.M * w_dir;
  const Vec3 b = con.M * w0 + con.m;
  const double p = con.r.dot(w_dir);
  const double q = con.r.dot(w0) + con.r0;

  const double a2 = a.squaredNorm();
  if (a2 == 0.0 && p == 0.0)
    return (b.norm() <= q) ? Interval::all() : Interval::none();
  if (a2 == 0.0) {
    // ||b|| <= p x + q: a halfline.
    const double t = (b.norm() - q) / p;
    return (p > 0.0) ? Interval{t, kInf} : Interval{-kInf, t};
  }

  const double A = a2 - p * p;
  const double B = 2.0 * (a.dot(b) - p * q);
  const double C = b.squaredNorm() - q * q;

  Interval halfplane = Interval::all();
  if (p > 0.0)
    halfplane = {-q / p, kInf};
  else if (p < 0.0)
    halfplane = {-kInf, -q / p};
  else if (q < 0.0)
    return Interval::none();

  if (std::abs(A) <= 1e-12 * (a2 + p * p)) {
    // Degenerate quadratic: B x + C <= 0 within the halfplane.
    Interval s = Interval::all();
    if (B > 0.0)
      s = {-kInf, -C / B};
    else if (B < 0.0)
      s = {-C / B, kInf};
    else if (C > 0.0)
      return Interval::none();
    return s.intersect(halfplane);
  }

  double disc = B * B - 4.0 * A * C;
  // Forming B^2 - 4AC cancels catastrophically near tangencies; a tiny
  // negative discriminant there is indistinguishable from a double root,
  // so clamp it rather than report an empty slice.
  if (disc < 0.0 && disc > -1e-12 * (B * B + std::abs(4.0 * A * C)))
    disc = 0.0;
  if (A > 0.0) {
    if (disc < 0.0) return Interval::none();
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (B + std::copysign(sq, B));
    double x1, x2;
    if (qq == 0.0) {
      x1 = x2 = 0.0;  // B = 0 and C = 0: double root at the origin
    } else {
      x1 = qq / A;
      x2 = C / qq;
    }
    return Interval{std::min(x1, x2), std::max(x1, x2)}.intersect(halfplane);
  }

  // A < 0 (so p != 0): the quadratic opens downward and Q <= 0 holds outside
  // the root interval. Q(-q/p) = ||a(-q/p) + b||^2 >= 0 places -q/p between
  // the roots, so exactly one ray survives the halfplane cut.
  if (disc < 0.0) return halfplane;
  const double sq = std::sqrt(disc);
  const double x1 = (-B + sq) / (2.0 * A);
  const double x2 = (-B - sq) / (2.0 * A);
  return (p > 0.0) ? Interval{std::max(x1, x2), kInf}
                   : Interval{-kInf, std::min(x1, x2)};
}

/// Line through the (h_i, h_{i+1}) plane in w = (h, h') coordinates with one
/// coordinate fixed. which = 0: h fixed at `value`, x = h_{i+1}; which = 1:
/// h_{i+1} fixed, x = h_i.
void line_params(int which, double value, double ds, Vec2* w0, Vec2* w_dir) {
  if (which == 0) {
    *w0 = Vec2(value, -value / ds);
    *w_dir = Vec2(0.0, 1.0 / ds);
  } else {
    *w0 = Vec2(0.0, value / ds);
    *w_dir = Vec2(1.0, -1.0 / ds);
  }
}

}  // namespace

Interval reduce_interval(const NodeConstraintSet& set, int which, double value,
                         const Interval& box) {
  Vec2 w0, w_dir;
  line_params(which, value, set.ds, &w0, &w_dir);
  Interval out = box;
  for (const Soc2Constraint& con : set.constraints) {
    out = out.intersect(soc1d(con, w0, w_dir));
    if (out.empty()) return Interval::none();
  }
  return out;
}

namespace {

struct StepContext {
  const NodeConstraintSet& set;
  int fix_which;  // coordinate index of the objective (the one we fix)
  Interval other_box;

  bool feasible(double x) const {
    return !reduce_interval(set, fix_which, x, other_box).empty();
  }
};

/// Tightens the objective box using the linear rows exactly: a linear row is
/// satisfiable for some y in other_box iff gx*x >= -r0 - max_y(gy*y).
Interval prune_by_linear_rows(const NodeConstraintSet& set, bool backward,
                              Interval obox, const Interval& fbox) {
  const double ds = set.ds;
  for (const Soc2Constraint& con : set.constraints) {
    if (!con.M.isZero(0.0) || !con.m.isZero(0.0)) continue;
    // r.w + r0 with w = (h, (h_tilde - h)/ds) in (x, y) coordinates.
    double gx, gy;
    if (backward) {  // x = h, y = h_tilde
      gx = con.r(0) - con.r(1) / ds;
      gy = con.r(1) / ds;
    } else {  // x = h_tilde, y = h
      gx = con.r(1) / ds;
      gy = con.r(0) - con.r(1) / ds;
    }
    const double best = (gy >= 0.0) ? gy * fbox.hi : gy * fbox.lo;
    const double rhs = -con.r0 - best;
    if (gx > 0.0)
      obox.lo = std::max(obox.lo, rhs / gx);
    else if (gx < 0.0)
      obox.hi = std::min(obox.hi, rhs / gx);
    else if (rhs > 0.0)
      return Interval::none();
    if (obox.empty()) return Interval::none();
  }
  return obox;
}

}  // namespace

std::pair<double, double> propagate(SweepPhase direction,
                                    const NodeConstraintSet& set,
                                    const Interval& interval_i,
                                    const Interval& interval_ip1,
                                    double eps_h) {
  const bool backward = direction == SweepPhase::kBackward;
  const Interval obox_in = backward ? interval_i : interval_ip1;
  const Interval fbox = backward ? interval_ip1 : interval_i;
  if (obox_in.empty() || fbox.empty())
    throw StepInfeasible("empty input interval");

  // A collapsed known-side interval (a committed forward value or a pinned
  // endpoint) admits an exact answer: slice the joint feasible set at that
  // value. This sidesteps the seed scan entirely, which matters where the
  // admissible slice pinches to near-zero width against an active bound.
  // A greedy sweep riding a limit curve (e.g. the maximum-deceleration arc
  // into the end pin) makes the true slice a single point; there, roundoff
  // in the row arithmetic can separate the slice from the box by a few ulp,
  // so an ulp-scale gap snaps onto the certified box instead of failing.
  if (fbox.lo == fbox.hi) {
    const Interval raw =
        reduce_interval(set, backward ? 1 : 0, fbox.lo, Interval::all());
    if (raw.empty()) throw StepInfeasible("no feasible point in the box");
    const Interval slice = raw.intersect(obox_in);
    if (!slice.empty()) return {slice.lo, slice.hi};
    const double tol = 1e-9 + 1e-12 * std::abs(fbox.lo);
    if (raw.lo > obox_in.hi && raw.lo - obox_in.hi <= tol)
      return {obox_in.hi, obox_in.hi};
    if (raw.hi < obox_in.lo && obox_in.lo - raw.hi <= tol)
      return {obox_in.lo, obox_in.lo};
    throw StepInfeasible("no feasible point in the box");
  }

  const StepContext ctx{set, backward ? 0 : 1, fbox};
  const Interval obox = prune_by_linear_rows(set, backward, obox_in, fbox);
  if (obox.empty()) throw StepInfeasible("linear rows exclude the whole box");

  // Seed search: endpoints and midpoint of the objective box first, then
  // closed-form slices taken at points of the known-side interval (cheap and
  // reliable when that interval is much narrower than the objective box),
  // then escalating uniform scans. The joint feasible set is convex, so its
  // objective-axis projection is an interval.
  double seed = std::numeric_limits<double>::quiet_NaN();
  const double cands[3] = {obox.lo, obox.hi, 0.5 * (obox.lo + obox.hi)};
  for (double c : cands) {
    if (ctx.feasible(c)) {
      seed = c;
      break;
    }
  }
  if (std::isnan(seed)) {
    const double ycands[3] = {fbox.lo, fbox.hi, 0.5 * (fbox.lo + fbox.hi)};
    for (double y : ycands) {
      const Interval sl = reduce_interval(set, backward ? 1 : 0, y, obox);
      if (!sl.empty()) {
        seed = 0.5 * (sl.lo + sl.hi);
        break;
      }
    }
  }
  if (std::isnan(seed)) {
    for (int n_scan : {64, 256, 1024, 4096}) {
      for (int k = 1; k < n_scan; ++k) {
        const double x = obox.lo + (obox.hi - obox.lo) * k / n_scan;
        if (ctx.feasible(x)) {
          seed = x;
          break;
        }
      }
      if (!std::isnan(seed)) break;
    }
  }
  if (std::isnan(seed)) {
    for (int n_scan : {64, 256, 1024, 4096}) {
      for (int k = 1; k < n_scan; ++k) {
        const double y = fbox.lo + (fbox.hi - fbox.lo) * k / n_scan;
        const Interval sl = reduce_interval(set, backward ? 1 : 0, y, obox);
        if (!sl.empty()) {
          seed = 0.5 * (sl.lo + sl.hi);
          break;
        }
      }
      if (!std::isnan(seed)) break;
    }
  }
  if (std::isnan(seed)) throw StepInfeasible("no feasible point in the box");

  double lo_star = obox.lo;
  if (!ctx.feasible(obox.lo)) {
    double bad = obox.lo, good = seed;
    while (good - bad > eps_h) {
      const double mid = 0.5 * (bad + good);
      (ctx.feasible(mid) ? good : bad) = mid;
    }
    lo_star = good;  // keep the certified-feasible side
  }
  double hi_star = obox.hi;
  if (!ctx.feasible(obox.hi)) {
    double good = seed, bad = obox.hi;
    while (bad - good > eps_h) {
      const double mid = 0.5 * (bad + good);
      (ctx.feasible(mid) ? good : bad) = mid;
    }
    hi_star = good;
  }
  return {lo_star, hi_star};
}

SpeedBounds build_speed_bounds(const ProblemInstance& instance,
                               const Grid& grid) {
  const int n = grid.n();
  SpeedBounds b;
  b.lower.assign(n + 1, 0.0);
  b.upper.assign(n + 1, kHCap);
  for (int i = 0; i <= n; ++i) {
    if (instance.v_max) {
      const double g2 = grid.nodes[i].gamma_p.squaredNorm();
      b.upper[i] = std::min(kHCap, (*instance.v_max) * (*instance.v_max) / g2);
    }
    for (const SpeedFloor& sf : instance.speed_floors) {
      if (grid.nodes[i].s >= sf.s0 && grid.nodes[i].s <= sf.s1)
        b.lower[i] = std::max(b.lower[i], sf.h_min);
    }
  }
  // Pin the boundary squared speeds by collapsing the end boxes.
  b.lower[0] = std::max(b.lower[0], instance.h_start);
  b.upper[0] = std::min(b.upper[0], instance.h_start);
  b.lower[n] = std::max(b.lower[n], instance.h_end);
  b.upper[n] = std::min(b.upper[n], instance.h_end);
  for (int i = 0; i <= n; ++i) {
    if (b.lower[i] > b.upper[i])
      throw InfeasibleBounds("B_l > B_u at node " + std::to_string(i));
  }
  return b;
}

std::vector<NodeConstraintSet> constraint_cache(
    const ProblemInstance& instance, const Grid& grid, int stage,
    const RotationSchedule* schedule) {
  if (stage != 1 && stage != 2)
    throw ValidationError("stage", "must be 1 or 2");
  if (stage == 2 &&
      (schedule == nullptr ||
       schedule->R.size() != grid.nodes.size() ||
       schedule->Gamma.size() != grid.nodes.size()))
    throw ValidationError("schedule", "stage 2 requires a full rotation schedule");

  const int n = grid.n();
  const SpeedBounds bounds = build_speed_bounds(instance, grid);
  std::map<int, Vec3> landmark_by_id;
  for (const Landmark& lm : instance.landmarks) landmark_by_id[lm.id] = lm.xyz;
  const Mixer mixer = mixer_matrix(instance.quad);

  std::vector<NodeConstraintSet> cache(n);
  for (int i = 0; i < n; ++i) {
    NodeConstraintSet& set = cache[i];
    set.ds = grid.ds;
    const GridNode& node = grid.nodes[i];
    const ThrustAffine ta =
        thrust_affine(node.gamma_p, node.gamma_pp, instance.quad.g_vec);

    set.constraints.push_back(
        linear_row(Vec2(1.0, 0.0), -bounds.lower[i], "box_lo"));
    set.constraints.push_back(
        linear_row(Vec2(-1.0, 0.0), bounds.upper[i], "box_hi"));

    const Requirements req = requirements_at(instance, node.s);
    for (int id : req.landmark_ids) {
      try {
        set.constraints.push_back(fov_constraint(
            node.gamma, node.psi_perp, ta, landmark_by_id.at(id), instance.rig));
      } catch (const LandmarkTooClose& e) {
        throw LandmarkTooClose(e.what(), i, id);
      }
    }
    // The cone row enters the program only where the schedule actually
    // constrains the node; the default cone returned by requirements_at is a
    // near half-space and stays a verification-side check.
    const bool cone_scheduled =
        std::any_of(instance.attitude_schedule.begin(),
                    instance.attitude_schedule.end(),
                    [&node](const AttitudeInterval& ai) {
                      return node.s >= ai.s0 && node.s <= ai.s1;
                    });
    if (cone_scheduled)
      set.constraints.push_back(attitude_cone_constraint(req.n, req.beta, ta));

    if (stage == 1) {
      set.constraints.push_back(
          thrust_ball_constraint(ta, 4.0 * instance.quad.c_max));
      continue;
    }

    const Vec3 zb = schedule->R[i].col(2);
    set.constraints.push_back(nonholonomy_constraint(zb, ta, instance.eta));

    // Per-motor rows: u(w) = F_inv (c_par(w), tau(w)) with c_par = zb . c(w)
    // and tau linear in w through the Gamma schedule.
    const Vec2 a_c = ta.P.transpose() * zb;
    const double b_c = ta.p.dot(zb);
    const Vec3& g_vecrate = schedule->Gamma[i];
    const Vec3& g_rate_p = schedule->Gamma_p[i];
    const Mat3& inertia = instance.quad.J;
    Eigen::Matrix<double, 4, 2> a_u;
    a_u.row(0) = a_c.transpose();
    a_u.block<3, 1>(1, 0) =
        g_vecrate.cross(inertia * g_vecrate) + inertia * g_rate_p;
    a_u.block<3, 1>(1, 1) = 0.5 * inertia * g_vecrate;
    a_u = (mixer.F_inv * a_u).eval();
    const Vec4 b_u = mixer.F_inv * Vec4(b_c, 0.0, 0.0, 0.0);
    for (int k = 0; k < 4; ++k) {
      const Vec2 ak = a_u.row(k).transpose();
      set.constraints.push_back(
          linear_row(ak, b_u(k) - instance.quad.c_min, "motor_lo"));
      set.constraints.push_back(
          linear_row(-ak, instance.quad.c_max - b_u(k), "motor_hi"));
    }
  }
  return cache;
}

SquareSpeedProfile backward_forward(const ProblemInstance& instance,
                                    const Grid& grid, int stage,
                                    const RotationSchedule* schedule) {
  const SpeedBounds bounds = build_speed_bounds(instance, grid);
  const std::vector<NodeConstraintSet> cache =
      constraint_cache(instance, grid, stage, schedule);
  const int n = grid.n();
  std::vector<double> l = bounds.lower;
  std::vector<double> u = bounds.upper;

  for (int i = n - 1; i >= 0; --i) {
    try {
      const auto [lo, hi] =
          propagate(SweepPhase::kBackward, cache[i], {l[i], u[i]},
                    {l[i + 1], u[i + 1]}, instance.eps_h);
      l[i] = lo;
      u[i] = hi;
    } catch (const StepInfeasible&) {
      throw Infeasible(stage, SweepPhase::kBackward, i);
    }
  }
  // The forward sweep commits h_i node by node and propagates from the
  // committed value (a collapsed interval), so every adjacent pair of the
  // returned profile is jointly feasible, not merely interval-consistent.
  // The backward intervals guarantee each committed value stays extendable.
  // Committing the exact interval maximum would sit on a constraint
  // tangency where roundoff can empty the next slice, so the commit backs
  // off by eps_h (or to the interval midpoint when the interval is
  // narrower), staying strictly inside the certified range.
  for (int i = 0; i < n; ++i) {
    u[i] = std::max(l[i], u[i] - std::min(instance.eps_h, 0.5 * (u[i] - l[i])));
    try {
      const auto [lo, hi] =
          propagate(SweepPhase::kForward, cache[i], {u[i], u[i]},
                    {l[i + 1], u[i + 1]}, instance.eps_h);
      l[i + 1] = lo;
      u[i + 1] = hi;
    } catch (const StepInfeasible&) {
      throw Infeasible(stage, SweepPhase::kForward, i + 1);
    }
  }

  SquareSpeedProfile prof;
  prof.grid = grid;
  prof.h = std::move(u);
  prof.l = std::move(l);
  return prof;
}

SolveResult solve(const ProblemInstance& instance) {
  const Grid grid = discretize(instance);
  SolveResult out;
  out.stage1 = backward_forward(instance, grid, 1);
  const std::vector<Vec3> z =
      zb_from_profile(grid, out.stage1, instance.quad.g_vec);
  std::vector<Vec3> psi(grid.nodes.size());
  for (size_t i = 0; i < grid.nodes.size(); ++i) psi[i] = grid.nodes[i].psi;
  out.schedule = smoothen(grid, z, psi, instance.sigma_value());
  out.stage2 = backward_forward(instance, grid, 2, &out.schedule);
  return out;
}

}  // namespace fovtopp
