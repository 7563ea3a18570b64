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

#include <cmath>
#include <random>

#include "fovtopp/errors.hpp"
#include "fovtopp/quadmodel.hpp"

using namespace fovtopp;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> nrm;
  Vec3 v(nrm(rng), nrm(rng), nrm(rng));
  while (v.norm() < 1e-6) v = Vec3(nrm(rng), nrm(rng), nrm(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("skew matches the cross product and vee inverts it") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nrm;
  for (int k = 0; k < 50; ++k) {
    const Vec3 a(nrm(rng), nrm(rng), nrm(rng));
    const Vec3 b(nrm(rng), nrm(rng), nrm(rng));
    CHECK((skew(a) * b - a.cross(b)).norm() == doctest::Approx(0.0));
    CHECK((vee(skew(a)) - a).norm() == doctest::Approx(0.0));
    CHECK((skew(a) + skew(a).transpose()).norm() == 0.0);
  }
}

TEST_CASE("mixer maps symmetric thrust to pure lift and back") {
  QuadParams params;
  params.k_L = 0.1;
  params.k_M = 0.05;
  const Mixer mixer = mixer_matrix(params);

  const double c = 1.7;
  const Vec4 wrench = mixer.F * Vec4(c, c, c, c);
  CHECK(wrench(0) == doctest::Approx(4 * c));
  CHECK(wrench.tail<3>().norm() == doctest::Approx(0.0));

  const Vec4 motors = mixer.F_inv * Vec4(4 * c, 0, 0, 0);
  CHECK((motors - Vec4(c, c, c, c)).norm() == doctest::Approx(0.0));
}

TEST_CASE("mixer determinant and inverse structure") {
  QuadParams params;
  params.k_L = 0.1;
  params.k_M = 0.05;
  const Mixer mixer = mixer_matrix(params);

  CHECK(std::abs(mixer.F.determinant()) ==
        doctest::Approx(16.0 * params.k_L * params.k_L * params.k_M)
            .epsilon(1e-12));
  CHECK((mixer.F * mixer.F_inv - Mat4::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((mixer.F.row(0) - Eigen::RowVector4d::Ones()).norm() == 0.0);

  // Orthogonal rows make the inverse a scaled transpose.
  Mat4 scale = Mat4::Zero();
  scale(0, 0) = 0.25;
  scale(1, 1) = 1.0 / (4.0 * params.k_L * params.k_L);
  scale(2, 2) = 1.0 / (4.0 * params.k_L * params.k_L);
  scale(3, 3) = 1.0 / (4.0 * params.k_M * params.k_M);
  const Mat4 structural = mixer.F.transpose() * scale;
  CHECK((mixer.F_inv - structural).cwiseAbs().maxCoeff() <
        1e-12 * structural.cwiseAbs().maxCoeff());
}

TEST_CASE("attitude_from_thrust hover is the identity frame") {
  const Mat3 R = attitude_from_thrust(Vec3(0, 0, 9.81), Vec3(1, 0, 0));
  CHECK((R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("attitude_from_thrust forward-tilted hand case") {
  const Mat3 R = attitude_from_thrust(Vec3(9.81, 0, 9.81), Vec3(1, 0, 0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK((R.col(0) - Vec3(inv_sqrt2, 0, -inv_sqrt2)).norm() < 1e-12);
  CHECK((R.col(1) - Vec3(0, 1, 0)).norm() < 1e-12);
  CHECK((R.col(2) - Vec3(inv_sqrt2, 0, inv_sqrt2)).norm() < 1e-12);
}

TEST_CASE("attitude_from_thrust rejects degenerate input") {
  CHECK_THROWS_AS(attitude_from_thrust(Vec3(0, 1e-12, 0), Vec3(1, 0, 0)),
                  DegenerateAttitude);
  // c parallel to z_W x psi = (0,1,0)
  CHECK_THROWS_AS(attitude_from_thrust(Vec3(0, 1, 0), Vec3(1, 0, 0)),
                  DegenerateAttitude);
}

TEST_CASE("attitude_from_thrust returns a rotation aligned with the thrust") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const Vec3 c = random_unit(rng) * (0.5 + 20.0 * uni(rng));
    const double th = 2 * M_PI * uni(rng);
    const Vec3 psi(std::cos(th), std::sin(th), 0.0);
    Mat3 R;
    try {
      R = attitude_from_thrust(c, psi);
    } catch (const DegenerateAttitude&) {
      continue;
    }
    ++checked;
    CHECK((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((R.col(2) - c.normalized()).norm() < 1e-10);
    // x_B lies in the span of psi and z_W: orthogonal to psi_perp.
    CHECK(std::abs(R.col(0).dot(Vec3::UnitZ().cross(psi))) < 1e-10);
  }
}

TEST_CASE("body_rates scales the rate map by the speed") {
  CHECK(body_rates(Vec3::Zero(), 25.0).norm() == 0.0);
  CHECK(body_rates(Vec3(0.3, -0.2, 0.9), 0.0).norm() == 0.0);
  CHECK((body_rates(Vec3(0.2, 0, 0), 4.0) - Vec3(0.4, 0, 0)).norm() <
        1e-15);
}

TEST_CASE("torque trivial cases") {
  const Mat3 J = Mat3::Identity();
  CHECK(torque(Vec3::Zero(), Vec3::Zero(), 3.7, -2.2, J).norm() == 0.0);

  // Parallel omega and J omega kill the gyroscopic term; remaining term is
  // J * Gamma * h'/2.
  const double a = 0.8, b = 1.3;
  const Vec3 tau = torque(Vec3(a, 0, 0), Vec3::Zero(), 5.0, 2 * b, J);
  CHECK((tau - Vec3(a * b, 0, 0)).norm() < 1e-14);
}

TEST_CASE("torque matches a finite-difference rate oracle") {
  // Analytic schedule Gamma(s) on a profile h(s) = p + q s. The time map has
  // the closed form s(t) = sqrt(p) t + q t^2 / 4, so omega(t) is known
  // exactly and its derivative can be differenced in t.
  const double p = 9.0, q = 3.0;
  auto gamma_of = [](double s) {
    return Vec3(0.3 * std::sin(s), 0.2 * std::cos(s), 0.1 * s);
  };
  auto gammap_of = [](double s) {
    return Vec3(0.3 * std::cos(s), -0.2 * std::sin(s), 0.1);
  };
  Mat3 J;
  J << 4e-3, 1e-4, 0.0,
       1e-4, 5e-3, -2e-4,
       0.0, -2e-4, 6e-3;

  auto s_of_t = [&](double t) { return std::sqrt(p) * t + 0.25 * q * t * t; };
  auto omega_of_t = [&](double t) {
    const double s = s_of_t(t);
    return Vec3(gamma_of(s) * std::sqrt(p + q * s));
  };

  for (double t : {0.1, 0.4, 0.9}) {
    const double dt = 1e-5;
    const Vec3 omega = omega_of_t(t);
    const Vec3 omega_dot_fd =
        (omega_of_t(t + dt) - omega_of_t(t - dt)) / (2 * dt);
    const Vec3 tau_fd = omega.cross(J * omega) + J * omega_dot_fd;

    const double s = s_of_t(t);
    const double h = p + q * s;
    const Vec3 tau = torque(gamma_of(s), gammap_of(s), h, q, J);
    CHECK((tau - tau_fd).norm() < 1e-6 * (1.0 + tau_fd.norm()));
  }
}

TEST_CASE("torque is affine in the decision pair") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nrm;
  Mat3 J;
  J << 5e-3, 0, 0, 0, 4e-3, 0, 0, 0, 6e-3;
  const Vec3 g(nrm(rng), nrm(rng), nrm(rng));
  const Vec3 gp(nrm(rng), nrm(rng), nrm(rng));

  // The gyroscopic part is linear in h and the J omega_dot part linear in
  // (h, h'), so convex combinations interpolate exactly.
  const Vec2 w1(4.0, -1.5), w2(9.0, 2.5);
  for (double lam : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    const Vec2 w = lam * w1 + (1 - lam) * w2;
    const Vec3 lhs = torque(g, gp, w(0), w(1), J);
    const Vec3 rhs = lam * torque(g, gp, w1(0), w1(1), J) +
                     (1 - lam) * torque(g, gp, w2(0), w2(1), J);
    CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("motor_thrusts splits hover evenly and honors torque") {
  QuadParams params;
  params.k_L = 0.1;
  params.k_M = 0.05;
  const Mixer mixer = mixer_matrix(params);

  CHECK((motor_thrusts(8.0, Vec3::Zero(), mixer) - Vec4(2, 2, 2, 2)).norm() <
        1e-12);
  CHECK(motor_thrusts(0.0, Vec3::Zero(), mixer).norm() < 1e-12);

  const Vec4 u =
      motor_thrusts(8.0, Vec3(0.4 * params.k_L, 0.0, 0.0), mixer);
  CHECK((u - Vec4(1.9, 2.1, 2.1, 1.9)).norm() < 1e-12);

  // Round trip through the forward map.
  const Vec4 wrench = mixer.F * u;
  CHECK(wrench(0) == doctest::Approx(8.0));
  CHECK(wrench(1) == doctest::Approx(0.4 * params.k_L));
  CHECK(std::abs(wrench(2)) < 1e-12);
  CHECK(std::abs(wrench(3)) < 1e-12);
}

TEST_CASE("QuadParams validation rejects broken parameters") {
  QuadParams params;
  CHECK_NOTHROW(params.validate());

  QuadParams asym = params;
  asym.J(0, 1) = 0.5;
  CHECK_THROWS_AS(asym.validate(), ValidationError);

  QuadParams indef = params;
  indef.J = -Mat3::Identity();
  CHECK_THROWS_AS(indef.validate(), ValidationError);

  QuadParams lever = params;
  lever.k_L = 0.0;
  CHECK_THROWS_AS(lever.validate(), ValidationError);

  QuadParams bounds = params;
  bounds.c_min = 9.0;
  bounds.c_max = 8.0;
  CHECK_THROWS_AS(bounds.validate(), ValidationError);

  QuadParams negative = params;
  negative.c_min = -1.0;
  CHECK_THROWS_AS(negative.validate(), ValidationError);
}

TEST_CASE("CameraRig validation bounds the half-angle") {
  CameraRig rig;
  CHECK_NOTHROW(rig.validate());
  rig.alpha = M_PI / 2.0;
  CHECK_THROWS_AS(rig.validate(), ValidationError);
  rig.alpha = 0.5;
  rig.d = -0.1;
  CHECK_THROWS_AS(rig.validate(), ValidationError);
}
