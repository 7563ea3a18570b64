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

#include "fovtopp/quadmodel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fovtopp/errors.hpp"

namespace fovtopp {

Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
      -a.y(), a.x(), 0.0;
  return s;
}

Vec3 vee(const Mat3& a) { return Vec3(a(2, 1), a(0, 2), a(1, 0)); }

void QuadParams::validate() const {
  if (!J.allFinite()) throw ValidationError("quad.J", "entries must be finite");
  if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + J.cwiseAbs().maxCoeff()))
    throw ValidationError("quad.J", "inertia must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> eig(J);
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError("quad.J", "inertia must be positive definite");
  if (!(k_L > 0.0)) throw ValidationError("quad.k_L", "must be > 0");
  if (!(k_M > 0.0)) throw ValidationError("quad.k_M", "must be > 0");
  if (!(c_min >= 0.0)) throw ValidationError("quad.c_min", "must be >= 0");
  if (!(c_max > c_min)) throw ValidationError("quad.c_max", "must exceed c_min");
  if (!g_vec.allFinite()) throw ValidationError("quad.g_vec", "must be finite");
}

void CameraRig::validate() const {
  if (!(d >= 0.0)) throw ValidationError("camera.d", "must be >= 0");
  if (!(alpha > 0.0 && alpha < M_PI / 2.0))
    throw ValidationError("camera.alpha", "must lie in (0, pi/2)");
}

Mixer mixer_matrix(const QuadParams& params) {
  const double kl = params.k_L;
  const double km = params.k_M;
  Mixer mixer;
  mixer.F << 1.0, 1.0, 1.0, 1.0,
             -kl, kl, kl, -kl,
             -kl, -kl, kl, kl,
             -km, km, -km, km;
  // The rows are orthogonal, so a general inverse is safe; the structure is
  // asserted by tests against F^T diag(1/4, 1/(4 k_L^2), ., 1/(4 k_M^2)).
  mixer.F_inv = mixer.F.inverse();
  return mixer;
}

Mat3 attitude_from_thrust(const Vec3& c_vec, const Vec3& psi) {
  const double c_norm = c_vec.norm();
  if (c_norm <= kEpsC)
    throw DegenerateAttitude("thrust vector has vanishing norm");
  const Vec3 psi_perp = Vec3::UnitZ().cross(psi);
  const Vec3 x_raw = psi_perp.cross(c_vec);
  if (x_raw.norm() <= kEpsC)
    throw DegenerateAttitude("thrust vector parallel to z_W x psi");

  const Vec3 z_b = c_vec / c_norm;
  const Vec3 x_b = psi_perp.cross(z_b).normalized();
  const Vec3 y_b = z_b.cross(x_b);
  Mat3 r;
  r.col(0) = x_b;
  r.col(1) = y_b;
  r.col(2) = z_b;
  return r;
}

Vec3 body_rates(const Vec3& gamma_s, double h) {
  return gamma_s * std::sqrt(std::max(h, 0.0));
}

Vec3 torque(const Vec3& gamma_s, const Vec3& gammap_s, double h,
            double h_prime, const Mat3& J) {
  // omega = Gamma sqrt(h) makes the gyroscopic term linear in h, and
  // d/dt(Gamma sqrt(h)) along s(t) with ds/dt = sqrt(h) gives
  // omega_dot = Gamma' h + Gamma h'/2.
  const Vec3 gyro = gamma_s.cross(J * gamma_s) * std::max(h, 0.0);
  const Vec3 omega_dot = gammap_s * h + 0.5 * gamma_s * h_prime;
  return gyro + J * omega_dot;
}

Vec4 motor_thrusts(double c_par, const Vec3& tau, const Mixer& mixer) {
  Vec4 wrench;
  wrench << c_par, tau.x(), tau.y(), tau.z();
  return mixer.F_inv * wrench;
}

}  // namespace fovtopp
