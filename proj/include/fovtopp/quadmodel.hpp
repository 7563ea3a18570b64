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

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace fovtopp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

// Threshold below which a thrust vector is considered directionless.
inline constexpr double kEpsC = 1e-9;

// Skew-symmetric matrix such that skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& a);

// Inverse of skew() for a skew-symmetric matrix (reads the off-diagonals).
Vec3 vee(const Mat3& a);

/// Physical quadrotor parameters, mass-normalized throughout: the inertia J
/// carries units m^2 and per-motor thrusts are accelerations (m/s^2).
struct QuadParams {
  Mat3 J = Mat3::Identity() * 5e-3;
  double k_L = 0.1;       // arm lever coefficient (m)
  double k_M = 0.05;      // drag-torque coefficient (m)
  double c_min = 0.0;     // per-motor minimum thrust (m/s^2)
  double c_max = 8.0;     // per-motor maximum thrust (m/s^2)
  Vec3 g_vec{0.0, 0.0, -9.81};

  // Throws ValidationError when an invariant fails.
  void validate() const;
};

/// Motor mixer: F maps per-motor thrusts to (total thrust, body torque).
struct Mixer {
  Mat4 F;
  Mat4 F_inv;
};

/// Forward camera with optical center offset d along body x and cone
/// half-angle alpha (rad).
struct CameraRig {
  double d = 0.1;
  double alpha = 0.7853981633974483;  // pi/4

  void validate() const;
};

/// Builds the mixer for a cross-configuration quad. Rows of F are mutually
/// orthogonal, so the inverse always exists for valid parameters.
Mixer mixer_matrix(const QuadParams& params);

/// Recovers the body frame from a world thrust vector and a unit heading in
/// the world x-y plane: z_B along c_vec, x_B the in-plane camera direction.
/// Throws DegenerateAttitude when ||c_vec|| <= kEpsC or c_vec is parallel to
/// z_W x psi.
Mat3 attitude_from_thrust(const Vec3& c_vec, const Vec3& psi);

/// Body angular velocity omega = Gamma_s * sqrt(h).
Vec3 body_rates(const Vec3& gamma_s, double h);

/// Body torque tau = omega x J omega + J * omega_dot with
/// omega_dot = Gammap_s * h + 0.5 * Gamma_s * h_prime. Linear in (h, h') for
/// fixed Gamma data.
Vec3 torque(const Vec3& gamma_s, const Vec3& gammap_s, double h,
            double h_prime, const Mat3& J);

/// Per-motor thrusts realizing a collective thrust c_par and torque tau.
Vec4 motor_thrusts(double c_par, const Vec3& tau, const Mixer& mixer);

}  // namespace fovtopp
