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

#include "fovtopp/fovcone.hpp"

#include <cmath>

#include "fovtopp/errors.hpp"

namespace fovtopp {

ThrustAffine thrust_affine(const Vec3& gamma_p, const Vec3& gamma_pp,
                           const Vec3& g_vec) {
  ThrustAffine ta;
  ta.P.col(0) = gamma_pp;
  ta.P.col(1) = 0.5 * gamma_p;
  ta.p = -g_vec;
  return ta;
}

double fov_chi(const Vec3& v, const CameraRig& rig) {
  const double sa = std::sin(rig.alpha);
  const double ca = std::cos(rig.alpha);
  const double disc = v.squaredNorm() - rig.d * rig.d * sa * sa;
  if (v.norm() < rig.d || disc <= 0.0)
    throw LandmarkTooClose("landmark too close to the camera center (|v| = " +
                           std::to_string(v.norm()) + ", d = " +
                           std::to_string(rig.d) + ")");
  return rig.d * sa * sa + ca * std::sqrt(disc);
}

FovTerm fov_term(const Vec3& gamma, const Vec3& psi_perp, const Vec3& landmark,
                 const CameraRig& rig) {
  FovTerm t;
  t.v = landmark - gamma;
  t.chi = fov_chi(t.v, rig);
  t.u = t.v.cross(psi_perp);
  return t;
}

Soc2Constraint fov_constraint(const Vec3& gamma, const Vec3& psi_perp,
                              const ThrustAffine& ta, const Vec3& landmark,
                              const CameraRig& rig) {
  const FovTerm t = fov_term(gamma, psi_perp, landmark, rig);
  const Mat3 px = skew(psi_perp);
  Soc2Constraint c;
  c.M = t.chi * (px * ta.P);
  c.m = t.chi * (px * ta.p);
  c.r = ta.P.transpose() * t.u;
  c.r0 = ta.p.dot(t.u);
  c.tag = "fov";
  return c;
}

Soc2Constraint attitude_cone_constraint(const Vec3& n, double beta,
                                        const ThrustAffine& ta) {
  const double cb = std::cos(beta);
  Soc2Constraint c;
  c.M = cb * ta.P;
  c.m = cb * ta.p;
  c.r = ta.P.transpose() * n;
  c.r0 = ta.p.dot(n);
  c.tag = "cone";
  return c;
}

Soc2Constraint thrust_ball_constraint(const ThrustAffine& ta,
                                      double c_total_max) {
  Soc2Constraint c;
  c.M = ta.P;
  c.m = ta.p;
  c.r0 = c_total_max;
  c.tag = "thrust_ball";
  return c;
}

Soc2Constraint nonholonomy_constraint(const Vec3& z_b, const ThrustAffine& ta,
                                      double eta) {
  const Mat3 zx = skew(z_b);
  Soc2Constraint c;
  c.M = zx * ta.P;
  c.m = zx * ta.p;
  c.r0 = eta;
  c.tag = "nonholonomy";
  return c;
}

Soc2Constraint linear_row(const Vec2& a, double b, const std::string& tag) {
  Soc2Constraint c;
  c.r = a;
  c.r0 = b;
  c.tag = tag;
  return c;
}

bool fov_predicate(const Vec3& p_w, const Mat3& R, const Vec3& landmark,
                   const CameraRig& rig) {
  const Vec3 x_b = R.col(0);
  const Vec3 dir = landmark - (p_w + rig.d * x_b);
  if (dir.norm() <= kEpsC) return true;  // landmark at the camera center
  const double angle = std::atan2(x_b.cross(dir).norm(), x_b.dot(dir));
  return angle <= rig.alpha;
}

}  // namespace fovtopp
