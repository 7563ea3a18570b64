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

#include <optional>
#include <string>
#include <vector>

#include "fovtopp/quadmodel.hpp"

namespace fovtopp {

// A polynomial piece over [s0, s1], coefficients in ascending powers of
// (s - s0). One row per output dimension.
struct PolySegment {
  double s0 = 0.0;
  double s1 = 0.0;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> coeffs;  // dims x (deg+1)
};

/// Piecewise-polynomial path gamma: [0, S_end] -> R^3 with a piecewise-
/// polynomial heading angle theta: [0, S_end] -> R. Both covers must be
/// contiguous and C2 across their breakpoints.
struct PathSpec {
  std::vector<PolySegment> gamma_segments;  // 3 x (deg+1) coefficient blocks
  std::vector<PolySegment> theta_segments;  // 1 x (deg+1) coefficient blocks
  double s_end = 0.0;

  // Checks contiguity, C2 continuity (1e-8), regularity on a dense sample,
  // and heading smoothness. Throws ValidationError.
  void validate() const;
};

struct PathPoint {
  Vec3 gamma, gamma_p, gamma_pp;
  Vec3 psi, psi_p, psi_pp;
  double theta = 0.0;
};

/// Evaluates the path and heading with first and second derivatives.
/// Throws OutOfRange for s outside [0, S_end].
PathPoint eval_path(const PathSpec& spec, double s);

/// z_W x psi; unit and orthogonal to psi for unit planar psi.
Vec3 psi_perp(const Vec3& psi);

struct Landmark {
  int id = 0;
  Vec3 xyz = Vec3::Zero();
};

struct VisibilityInterval {
  double s0 = 0.0, s1 = 0.0;  // closed interval
  std::vector<int> ids;
};

struct AttitudeInterval {
  double s0 = 0.0, s1 = 0.0;  // closed interval
  Vec3 n = Vec3::UnitZ();
  double beta = 0.0;
};

// Optional lower squared-speed bound over an s-interval (rarely used; the
// default floor is 0 everywhere).
struct SpeedFloor {
  double s0 = 0.0, s1 = 0.0;
  double h_min = 0.0;
};

inline constexpr double kDefaultBetaSlack = 1e-6;   // default beta = pi/2 - this
inline constexpr double kHCap = 1e6;                // upper h cap without v_max (m^2/s^2)

/// Everything the solver needs: geometry, requirements, limits, and solver
/// settings.
struct ProblemInstance {
  PathSpec path;
  std::vector<Landmark> landmarks;
  std::vector<VisibilityInterval> visibility;
  std::vector<AttitudeInterval> attitude_schedule;
  std::vector<SpeedFloor> speed_floors;
  QuadParams quad;
  CameraRig rig;

  std::optional<double> v_max;       // m/s
  double h_start = 0.0;              // m^2/s^2, pinned at s = 0
  double h_end = 0.0;                // m^2/s^2, pinned at s = S_end
  int grid_n = 1000;
  double eta = 0.5;                  // nonholonomy slack (m/s^2)
  double sigma = 0.0;                // smoothing width; <= 0 means 0.05 * S_end
  double eps_h = 1e-6;               // bisection tolerance (m^2/s^2)

  double sigma_value() const {
    return sigma > 0.0 ? sigma : 0.05 * path.s_end;
  }

  void validate() const;
};

struct GridNode {
  double s;
  Vec3 gamma, gamma_p, gamma_pp;
  Vec3 psi, psi_perp;
};

/// Uniform discretization of [0, S_end] with cached path data per node.
struct Grid {
  std::vector<GridNode> nodes;
  double ds = 0.0;
  double s_end = 0.0;

  // Number of intervals; nodes.size() == n() + 1.
  int n() const { return static_cast<int>(nodes.size()) - 1; }
};

/// Builds the grid and validates regularity at every node.
/// Throws IrregularPath when ||gamma'|| <= 1e-9 at a node.
Grid discretize(const ProblemInstance& instance);

struct Requirements {
  std::vector<int> landmark_ids;   // sorted, deduplicated
  Vec3 n = Vec3::UnitZ();
  double beta = M_PI / 2.0 - kDefaultBetaSlack;
};

/// Union of visibility intervals containing s plus the covering attitude
/// constraint (first covering interval in document order; defaults
/// otherwise). Intervals are closed.
Requirements requirements_at(const ProblemInstance& instance, double s);

/// Parses and validates a JSON problem document. Throws ParseError for
/// malformed input and ValidationError (naming the field) for invariant
/// violations.
ProblemInstance load_problem(const std::string& document);

/// load_problem composed with a filesystem read. Throws IoError when the
/// file cannot be read.
ProblemInstance load_problem_file(const std::string& path);

}  // namespace fovtopp
