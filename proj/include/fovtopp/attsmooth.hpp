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

#ifndef FOVTOPP_ATTSMOOTH_HPP_
#define FOVTOPP_ATTSMOOTH_HPP_

#include <vector>

#include "fovtopp/profile.hpp"
#include "fovtopp/quadmodel.hpp"

namespace fovtopp {

/// Smoothed per-node rotation schedule with arc-length derivatives and the
/// body-rate maps Gamma (from [Gamma]_x = R^T R') and Gamma'.
struct RotationSchedule {
  std::vector<Mat3> R;
  std::vector<Mat3> R_p;   ///< dR/ds
  std::vector<Mat3> R_pp;  ///< d2R/ds2
  std::vector<Vec3> Gamma;
  std::vector<Vec3> Gamma_p;
  double sigma = 0.0;
};

/// Discrete Gaussian convolution of a uniformly sampled vector field.
/// The kernel (or its 1st/2nd derivative for deriv_order 1/2) is truncated
/// at +-4 sigma, trapezoid-weighted, and extended past the ends by
/// replicating the boundary samples; the order-0 weights are normalized to
/// unit discrete mass.
std::vector<Vec3> gaussian_convolve(const std::vector<Vec3>& samples,
                                    double ds, double sigma, int deriv_order);

/// Stage-1 thrust directions: the normalized c_i = P_i w_i + p with the
/// finite-difference h' (backward difference at the last node).
/// Throws DegenerateThrust when some ||c_i|| < 1e-9.
std::vector<Vec3> zb_from_profile(const Grid& grid,
                                  const SquareSpeedProfile& profile,
                                  const Vec3& g_vec);

/// Gaussian-smooth the body-z field, rebuild heading-consistent rotations,
/// and differentiate the schedule on the grid.
/// Throws SmoothingDegenerate on antipodal cancellation or degenerate
/// attitude reconstruction.
RotationSchedule smoothen(const Grid& grid, const std::vector<Vec3>& z_samples,
                          const std::vector<Vec3>& psi_samples, double sigma);

}  // namespace fovtopp

#endif  // FOVTOPP_ATTSMOOTH_HPP_
