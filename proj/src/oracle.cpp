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

#include "fovtopp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "fovtopp/errors.hpp"
#include "fovtopp/fovcone.hpp"

namespace fovtopp {
namespace {

constexpr double kDpTol = 1e-9;

// One landmark's visibility data at a node, precomputed from raw vectors.
struct DpLandmark {
  Vec3 u;      // (l - gamma) x psi_perp
  double chi;  // offset-corrected cone scale
};

struct DpNode {
  Vec3 gamma_p, gamma_pp, psi_perp;
  double box_lo = 0.0, box_hi = kHCap;
  Vec3 cone_n;
  double cos_beta = 0.0;
  bool cone_active = false;  // some attitude interval covers this node
  std::vector<DpLandmark> landmarks;
};

// Direct residual check of every node-i inequality at w = (h, (ht - h)/ds).
// Intentionally re-derives the physics instead of reusing solver records.
bool transition_ok(const DpNode& nd, double ds, double h, double ht,
                   const Vec3& g_vec, double c_total_max) {
  if (h < nd.box_lo - kDpTol || h > nd.box_hi + kDpTol) return false;
  const double hp = (ht - h) / ds;
  const Vec3 c = nd.gamma_pp * h + 0.5 * nd.gamma_p * hp - g_vec;
  for (const DpLandmark& lm : nd.landmarks) {
    if (lm.chi * nd.psi_perp.cross(c).norm() > c.dot(lm.u) + kDpTol)
      return false;
  }
  const double cn = c.norm();
  if (nd.cone_active && nd.cos_beta * cn > nd.cone_n.dot(c) + kDpTol)
    return false;
  if (cn > c_total_max + kDpTol) return false;
  return true;
}

}  // namespace

SquareSpeedProfile dp_solve(const ProblemInstance& instance, const Grid& grid,
                            const DpSettings& settings) {
  const int n = grid.n();
  if (n > 200)
    throw ValidationError("grid_n", "dp_solve is limited to grid_n <= 200");
  if (settings.h_levels < 2)
    throw ValidationError("h_levels", "must be >= 2");

  std::map<int, Vec3> landmark_by_id;
  for (const Landmark& lm : instance.landmarks) landmark_by_id[lm.id] = lm.xyz;
  const double sin_a = std::sin(instance.rig.alpha);
  const double cos_a = std::cos(instance.rig.alpha);
  const double d = instance.rig.d;

  std::vector<DpNode> nodes(n);
  std::vector<double> direct_hi(n + 1, kHCap);
  std::vector<double> direct_lo(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    const GridNode& gn = grid.nodes[i];
    if (instance.v_max) {
      direct_hi[i] = std::min(
          kHCap,
          (*instance.v_max) * (*instance.v_max) / gn.gamma_p.squaredNorm());
    }
    for (const SpeedFloor& sf : instance.speed_floors) {
      if (gn.s >= sf.s0 && gn.s <= sf.s1)
        direct_lo[i] = std::max(direct_lo[i], sf.h_min);
    }
    if (i == n) break;

    DpNode& nd = nodes[i];
    nd.gamma_p = gn.gamma_p;
    nd.gamma_pp = gn.gamma_pp;
    nd.psi_perp = gn.psi_perp;
    nd.box_lo = direct_lo[i];
    nd.box_hi = direct_hi[i];
    const Requirements req = requirements_at(instance, gn.s);
    nd.cone_n = req.n;
    nd.cos_beta = std::cos(req.beta);
    for (const AttitudeInterval& ai : instance.attitude_schedule)
      nd.cone_active = nd.cone_active || (gn.s >= ai.s0 && gn.s <= ai.s1);
    for (int id : req.landmark_ids) {
      const Vec3 v = landmark_by_id.at(id) - gn.gamma;
      const double disc = v.squaredNorm() - d * d * sin_a * sin_a;
      if (v.norm() < d || disc <= 0.0)
        throw LandmarkTooClose("landmark inside the camera offset sphere", i,
                               id);
      DpLandmark dl;
      dl.chi = d * sin_a * sin_a + cos_a * std::sqrt(disc);
      dl.u = v.cross(gn.psi_perp);
      nd.landmarks.push_back(dl);
    }
  }

  double h_cap = settings.h_cap;
  if (h_cap <= 0.0) h_cap = *std::max_element(direct_hi.begin(), direct_hi.end());

  // Candidate levels: a uniform lattice on [0, h_cap], trimmed to each node's
  // direct box; the pinned endpoint values are kept as exact singletons.
  std::vector<std::vector<double>> cand(n + 1);
  for (int i = 0; i <= n; ++i) {
    if (i == 0) {
      cand[i] = {instance.h_start};
    } else if (i == n) {
      if (instance.h_end >= direct_lo[n] - kDpTol &&
          instance.h_end <= direct_hi[n] + kDpTol)
        cand[i] = {instance.h_end};
    } else {
      for (int k = 0; k < settings.h_levels; ++k) {
        const double v = h_cap * k / (settings.h_levels - 1);
        if (v >= direct_lo[i] - kDpTol && v <= direct_hi[i] + kDpTol)
          cand[i].push_back(v);
      }
    }
    if (cand[i].empty())
      throw Infeasible(1, i == n ? SweepPhase::kForward : SweepPhase::kBackward,
                       i);
  }

  const double ball = 4.0 * instance.quad.c_max;
  const Vec3& g_vec = instance.quad.g_vec;

  std::vector<std::vector<char>> reach(n + 1), co(n + 1);
  reach[0].assign(cand[0].size(), 1);
  for (int i = 0; i < n; ++i) {
    reach[i + 1].assign(cand[i + 1].size(), 0);
    bool any = false;
    for (size_t kt = 0; kt < cand[i + 1].size(); ++kt) {
      for (size_t k = 0; k < cand[i].size(); ++k) {
        if (!reach[i][k]) continue;
        if (transition_ok(nodes[i], grid.ds, cand[i][k], cand[i + 1][kt],
                          g_vec, ball)) {
          reach[i + 1][kt] = 1;
          any = true;
          break;
        }
      }
    }
    if (!any) throw Infeasible(1, SweepPhase::kForward, i + 1);
  }

  co[n].assign(cand[n].size(), 1);
  for (int i = n - 1; i >= 0; --i) {
    co[i].assign(cand[i].size(), 0);
    bool any = false;
    for (size_t k = 0; k < cand[i].size(); ++k) {
      for (size_t kt = 0; kt < cand[i + 1].size(); ++kt) {
        if (!co[i + 1][kt]) continue;
        if (transition_ok(nodes[i], grid.ds, cand[i][k], cand[i + 1][kt],
                          g_vec, ball)) {
          co[i][k] = 1;
          any = true;
          break;
        }
      }
    }
    if (!any) throw Infeasible(1, SweepPhase::kBackward, i);
  }

  SquareSpeedProfile prof;
  prof.grid = grid;
  prof.h.assign(n + 1, 0.0);
  prof.l.assign(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < cand[i].size(); ++k) {
      if (reach[i][k] && co[i][k]) {
        hi = std::max(hi, cand[i][k]);
        lo = std::min(lo, cand[i][k]);
      }
    }
    if (!(hi >= lo)) throw Infeasible(1, SweepPhase::kForward, i);
    prof.h[i] = hi;
    prof.l[i] = lo;
  }
  return prof;
}

ProbeResult convexity_probe(const NodeConstraintSet& constraints, long trials,
                            const Vec2& w_lo, const Vec2& w_hi,
                            std::uint64_t seed) {
  if (trials < 1) throw ValidationError("trials", "must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  auto feasible = [&constraints](const Vec2& w) {
    for (const Soc2Constraint& c : constraints.constraints)
      if (c.residual(w) > 0.0) return false;
    return true;
  };
  auto sample_feasible = [&]() {
    for (int k = 0; k < 100000; ++k) {
      const Vec2 w(w_lo(0) + (w_hi(0) - w_lo(0)) * u01(rng),
                   w_lo(1) + (w_hi(1) - w_lo(1)) * u01(rng));
      if (feasible(w)) return w;
    }
    throw SamplingExhausted("no feasible point in 1e5 rejection draws");
  };

  ProbeResult res;
  for (long t = 0; t < trials; ++t) {
    res.trials_run = t + 1;
    const Vec2 a = sample_feasible();
    const Vec2 b = sample_feasible();
    const double lambdas[2] = {0.5, u01(rng)};
    for (double lam : lambdas) {
      const Vec2 w = lam * a + (1.0 - lam) * b;
      for (const Soc2Constraint& c : constraints.constraints) {
        const double r = c.residual(w);
        if (r > 1e-9) {
          res.ok = false;
          res.witness_a = a;
          res.witness_b = b;
          res.witness_lambda = lam;
          res.residual = r;
          res.tag = c.tag;
          return res;
        }
      }
    }
  }
  return res;
}

EquivalenceStats equivalence_probe(long trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("trials", "must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto unit = [&]() {
    Vec3 v;
    do {
      v = Vec3(gauss(rng), gauss(rng), gauss(rng));
    } while (v.norm() < 1e-6);
    return Vec3(v / v.norm());
  };

  const Vec3 g_vec(0.0, 0.0, -9.81);
  EquivalenceStats st;
  for (long t = 0; t < trials; ++t) {
    ++st.trials;
    const Vec3 gamma = 2.0 * Vec3(gauss(rng), gauss(rng), gauss(rng));
    const Vec3 gamma_p = unit() * (0.5 + 1.5 * u01(rng));
    const Vec3 gamma_pp = Vec3(gauss(rng), gauss(rng), gauss(rng));
    const double theta = 2.0 * M_PI * u01(rng);
    const Vec3 psi(std::cos(theta), std::sin(theta), 0.0);
    const Vec3 psi_perp = Vec3::UnitZ().cross(psi);

    CameraRig rig;
    rig.d = (t % 4 == 0) ? 0.0 : 0.3 * u01(rng);
    rig.alpha = 0.15 + 1.25 * u01(rng);
    const Vec3 landmark = gamma + unit() * (rig.d + 0.2 + 3.0 * u01(rng));

    const double h = 0.05 + 25.0 * u01(rng);
    const double hp = -20.0 + 40.0 * u01(rng);
    const Vec2 w(h, hp);
    const ThrustAffine ta = thrust_affine(gamma_p, gamma_pp, g_vec);
    const Vec3 c = ta.thrust(w);

    Mat3 R;
    try {
      R = attitude_from_thrust(c, psi);
    } catch (const DegenerateAttitude&) {
      ++st.skipped;
      continue;
    }

    Soc2Constraint fov;
    try {
      fov = fov_constraint(gamma, psi_perp, ta, landmark, rig);
    } catch (const LandmarkTooClose&) {
      ++st.skipped;
      continue;
    }
    const bool conic_fov = fov.residual(w) <= 0.0;

    const Vec3 x_b = R.col(0);
    const Vec3 dir = landmark - (gamma + rig.d * x_b);
    if (dir.norm() <= kEpsC) {
      ++st.skipped;
      continue;
    }
    const double angle = std::atan2(x_b.cross(dir).norm(), x_b.dot(dir));
    if (std::abs(angle - rig.alpha) < 1e-6) {
      ++st.fov_boundary;
    } else {
      const bool geometric_fov = fov_predicate(gamma, R, landmark, rig);
      if (conic_fov == geometric_fov)
        ++st.fov_agree;
      else
        ++st.fov_disagree;
    }

    const Vec3 n = unit();
    const double beta = 0.05 + (M_PI / 2.0 - 0.1) * u01(rng);
    const bool conic_cone =
        attitude_cone_constraint(n, beta, ta).residual(w) <= 0.0;
    const Vec3 z_b = R.col(2);
    const double z_angle = std::atan2(z_b.cross(n).norm(), z_b.dot(n));
    if (std::abs(z_angle - beta) < 1e-6) {
      ++st.cone_boundary;
    } else {
      const bool geometric_cone = z_angle <= beta;
      if (conic_cone == geometric_cone)
        ++st.cone_agree;
      else
        ++st.cone_disagree;
    }
  }
  return st;
}

}  // namespace fovtopp
