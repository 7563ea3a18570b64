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

#ifndef FOVTOPP_TRAJOUT_HPP_
#define FOVTOPP_TRAJOUT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "fovtopp/attsmooth.hpp"
#include "fovtopp/profile.hpp"
#include "fovtopp/quadmodel.hpp"

namespace fovtopp {

struct TrajectorySample {
  double t = 0.0;
  double s = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
  Vec4 motors = Vec4::Zero();
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double total_time = 0.0;
};

/// Per-sample constraint residuals, slack-signed: positive means satisfied
/// with that much margin.
struct SampleResiduals {
  double t = 0.0;
  /// (landmark id, alpha - angle) on the sampled (smoothed) attitude.
  std::vector<std::pair<int, double>> fov_slack;
  /// (landmark id, alpha - angle) on the thrust-implied attitude.
  std::vector<std::pair<int, double>> fov_slack_thrust;
  double cone_slack = 0.0;        ///< beta - angle(n, c)
  double thrust_slack = 0.0;      ///< 4 c_max - ||c||
  double motor_low_slack = 0.0;   ///< min_k (u_k - c_min)
  double motor_high_slack = 0.0;  ///< min_k (c_max - u_k)
  double nonholonomy = 0.0;       ///< ||z_B x c|| on the sampled attitude
};

struct VerificationReport {
  std::vector<SampleResiduals> samples;
  double margin_deg = 0.0;
  bool has_fov = false;  ///< some landmark is required somewhere

  // Minima of the slacks over all samples (+inf when never evaluated).
  double min_fov_slack_rad = 0.0;
  double min_fov_slack_thrust_rad = 0.0;
  double min_cone_slack_rad = 0.0;
  double min_thrust_slack = 0.0;
  double min_motor_slack = 0.0;
  double max_nonholonomy = 0.0;

  // Violation counts: angles beyond slack -margin, magnitudes beyond 1e-6.
  int fov_violations = 0;
  int cone_violations = 0;
  int thrust_violations = 0;
  int motor_violations = 0;
};

/// Node timestamps t_0 = 0 .. t_n = T with dt_i = 2 ds / (sqrt h_i + sqrt
/// h_{i+1}), exact for the solver's piecewise-linear h. Throws
/// SingularProfile when both squared speeds of a segment vanish.
std::vector<double> reconstruct_time(const Grid& grid,
                                     const SquareSpeedProfile& profile);

/// Uniform-dt sampling (plus the exact final time) of the flat outputs,
/// with nearest-node orientation and the node-certified motor plan.
Trajectory sample_trajectory(const ProblemInstance& instance, const Grid& grid,
                             const SquareSpeedProfile& profile,
                             const RotationSchedule& schedule, double dt);

/// Independent geometric re-check of every constraint on the sampled
/// trajectory; margin_deg loosens only the angle checks.
VerificationReport verify(const Trajectory& trajectory,
                          const ProblemInstance& instance, double margin_deg);

/// Renders the trajectory (and a summary of the report) as "json" or "csv".
std::string serialize(const Trajectory& trajectory,
                      const VerificationReport& report,
                      const std::string& format);

/// Inverse of serialize(json): the trajectory, and optionally the embedded
/// report object (as a JSON string) for round-trip checks.
Trajectory parse_trajectory_json(const std::string& document,
                                 std::string* report_out = nullptr);

/// Inverse of serialize(csv) for the sample table.
Trajectory parse_trajectory_csv(const std::string& document);

/// The report-summary object used inside serialize(json), as a JSON string.
std::string report_to_json(const VerificationReport& report);

}  // namespace fovtopp

#endif  // FOVTOPP_TRAJOUT_HPP_
