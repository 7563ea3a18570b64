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

#include "fovtopp/attsmooth.hpp"

#include <algorithm>
#include <cmath>

#include "fovtopp/errors.hpp"

namespace fovtopp {
namespace {

constexpr double kZTildeFloor = 1e-6;

double kernel_value(double x, double sigma, int order) {
  const double s2 = sigma * sigma;
  const double f = std::exp(-0.5 * x * x / s2) / (sigma * std::sqrt(2.0 * M_PI));
  switch (order) {
    case 0:
      return f;
    case 1:
      return -x / s2 * f;
    case 2:
      return (x * x / (s2 * s2) - 1.0 / s2) * f;
    default:
      throw ValidationError("deriv_order", "must be 0, 1, or 2");
  }
}

}  // namespace

std::vector<Vec3> gaussian_convolve(const std::vector<Vec3>& samples,
                                    double ds, double sigma, int deriv_order) {
  if (!(sigma > 0.0)) throw ValidationError("sigma", "must be > 0");
  if (!(ds > 0.0)) throw ValidationError("ds", "must be > 0");
  if (samples.size() < 2)
    throw ValidationError("samples", "need at least 2 samples");

  const int w = std::max(1, static_cast<int>(std::ceil(4.0 * sigma / ds)));
  std::vector<double> weights(2 * w + 1);
  for (int k = -w; k <= w; ++k) {
    const double trap = (k == -w || k == w) ? 0.5 : 1.0;
    weights[k + w] = kernel_value(k * ds, sigma, deriv_order) * ds * trap;
  }
  if (deriv_order == 0) {
    double mass = 0.0;
    for (double wk : weights) mass += wk;
    for (double& wk : weights) wk /= mass;
  }

  const int n = static_cast<int>(samples.size());
  std::vector<Vec3> out(n, Vec3::Zero());
  for (int i = 0; i < n; ++i) {
    Vec3 acc = Vec3::Zero();
    for (int k = -w; k <= w; ++k) {
      const int j = std::clamp(i - k, 0, n - 1);  // replicate-end padding
      acc += weights[k + w] * samples[j];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<Vec3> zb_from_profile(const Grid& grid,
                                  const SquareSpeedProfile& profile,
                                  const Vec3& g_vec) {
  const int n = grid.n();
  if (static_cast<int>(profile.h.size()) != n + 1)
    throw ValidationError("profile", "profile/grid size mismatch");
  std::vector<Vec3> z(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double h = profile.h[i];
    const double hp = (i < n) ? (profile.h[i + 1] - h) / grid.ds
                              : (h - profile.h[i - 1]) / grid.ds;
    const Vec3 c = grid.nodes[i].gamma_pp * h +
                   0.5 * grid.nodes[i].gamma_p * hp - g_vec;
    const double cn = c.norm();
    if (cn < 1e-9)
      throw DegenerateThrust("vanishing thrust at grid node " +
                             std::to_string(i));
    z[i] = c / cn;
  }
  return z;
}

RotationSchedule smoothen(const Grid& grid, const std::vector<Vec3>& z_samples,
                          const std::vector<Vec3>& psi_samples, double sigma) {
  const int n = grid.n();
  if (static_cast<int>(z_samples.size()) != n + 1 ||
      static_cast<int>(psi_samples.size()) != n + 1)
    throw ValidationError("samples", "sample/grid size mismatch");

  RotationSchedule sched;
  sched.sigma = sigma;
  const std::vector<Vec3> z_tilde = gaussian_convolve(z_samples, grid.ds, sigma, 0);

  sched.R.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double zn = z_tilde[i].norm();
    if (zn < kZTildeFloor)
      throw SmoothingDegenerate("smoothed body-z field cancels at node " +
                                std::to_string(i));
    try {
      sched.R[i] = attitude_from_thrust(z_tilde[i] / zn, psi_samples[i]);
    } catch (const DegenerateAttitude& e) {
      throw SmoothingDegenerate("attitude reconstruction failed at node " +
                                std::to_string(i) + ": " + e.what());
    }
  }

  const double ds = grid.ds;
  sched.R_p.resize(n + 1);
  sched.R_pp.resize(n + 1);
  if (n >= 1) {
    sched.R_p[0] = (sched.R[1] - sched.R[0]) / ds;
    sched.R_p[n] = (sched.R[n] - sched.R[n - 1]) / ds;
  }
  for (int i = 1; i < n; ++i)
    sched.R_p[i] = (sched.R[i + 1] - sched.R[i - 1]) / (2.0 * ds);
  for (int i = 1; i < n; ++i)
    sched.R_pp[i] = (sched.R[i + 1] - 2.0 * sched.R[i] + sched.R[i - 1]) / (ds * ds);
  sched.R_pp[0] = (n >= 2) ? sched.R_pp[1] : Mat3::Zero();
  sched.R_pp[n] = (n >= 2) ? sched.R_pp[n - 1] : Mat3::Zero();

  sched.Gamma.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const Mat3 a = sched.R[i].transpose() * sched.R_p[i];
    sched.Gamma[i] = vee(0.5 * (a - a.transpose()));
  }
  sched.Gamma_p.resize(n + 1);
  if (n >= 1) {
    sched.Gamma_p[0] = (sched.Gamma[1] - sched.Gamma[0]) / ds;
    sched.Gamma_p[n] = (sched.Gamma[n] - sched.Gamma[n - 1]) / ds;
  }
  for (int i = 1; i < n; ++i)
    sched.Gamma_p[i] = (sched.Gamma[i + 1] - sched.Gamma[i - 1]) / (2.0 * ds);
  return sched;
}

}  // namespace fovtopp
