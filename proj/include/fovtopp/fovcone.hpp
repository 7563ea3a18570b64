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

#ifndef FOVTOPP_FOVCONE_HPP_
#define FOVTOPP_FOVCONE_HPP_

#include <string>
#include <vector>

#include "fovtopp/quadmodel.hpp"

namespace fovtopp {

/// One second-order-cone constraint on the square-speed pair w = (h, h'):
///
///   || M w + m ||_2  <=  r . w + r0
///
/// With M == 0 and m == 0 the constraint degenerates to the linear row
/// r . w + r0 >= 0; builders below use that form for motor bounds.
struct Soc2Constraint {
  Mat32 M = Mat32::Zero();
  Vec2 r = Vec2::Zero();
  Vec3 m = Vec3::Zero();
  double r0 = 0.0;
  std::string tag;

  /// Signed violation: negative (or zero) iff the constraint holds at w.
  double residual(const Vec2& w) const { return (M * w + m).norm() - (r.dot(w) + r0); }

  bool satisfied(const Vec2& w, double tol = 0.0) const {
    return residual(w) <= tol;
  }
};

/// Affine map from w = (h, h') to the mass-normalized thrust vector,
/// c(w) = P w + p with P = [ gamma'' | gamma'/2 ] and p = -g_vec.
struct ThrustAffine {
  Mat32 P = Mat32::Zero();
  Vec3 p = Vec3::Zero();

  Vec3 thrust(const Vec2& w) const { return P * w + p; }
};

ThrustAffine thrust_affine(const Vec3& gamma_p, const Vec3& gamma_pp,
                           const Vec3& g_vec);

/// Precomputed landmark geometry for the field-of-view cone.
struct FovTerm {
  Vec3 v = Vec3::Zero();  ///< landmark displacement l - gamma
  Vec3 u = Vec3::Zero();  ///< cone axis term v x psi_perp
  double chi = 0.0;       ///< offset scale, always > 0
};

/// Scale factor used by the field-of-view cone at relative landmark
/// position v = l - gamma. Throws LandmarkTooClose when ||v|| < d or
/// ||v||^2 <= d^2 sin^2(alpha).
double fov_chi(const Vec3& v, const CameraRig& rig);

FovTerm fov_term(const Vec3& gamma, const Vec3& psi_perp, const Vec3& landmark,
                 const CameraRig& rig);

/// Field-of-view constraint for one landmark at one path node:
/// the landmark at l stays within the half-angle alpha of the camera
/// axis for every thrust direction compatible with w.
Soc2Constraint fov_constraint(const Vec3& gamma, const Vec3& psi_perp,
                              const ThrustAffine& ta, const Vec3& landmark,
                              const CameraRig& rig);

/// Attitude cone: angle between thrust c(w) and the unit axis n at most beta.
Soc2Constraint attitude_cone_constraint(const Vec3& n, double beta,
                                        const ThrustAffine& ta);

/// Total thrust magnitude bound ||c(w)|| <= c_total_max (the caller supplies
/// the vehicle total, i.e. 4 c_max for four motors).
Soc2Constraint thrust_ball_constraint(const ThrustAffine& ta,
                                      double c_total_max);

/// Nonholonomy tube: || z_b x c(w) || <= eta for a fixed body z axis.
Soc2Constraint nonholonomy_constraint(const Vec3& z_b, const ThrustAffine& ta,
                                      double eta);

/// Linear row a . w + b >= 0 wrapped as a degenerate cone constraint.
Soc2Constraint linear_row(const Vec2& a, double b, const std::string& tag);

/// Direct geometric check that the landmark lies inside the camera cone of
/// the body frame R at position p_w (camera center offset d along body x).
/// Independent of the conic encoding; used by the probing oracles.
bool fov_predicate(const Vec3& p_w, const Mat3& R, const Vec3& landmark,
                   const CameraRig& rig);

}  // namespace fovtopp

#endif  // FOVTOPP_FOVCONE_HPP_
