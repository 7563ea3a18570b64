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

#include "fovtopp/trajout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "fovtopp/errors.hpp"

namespace fovtopp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Keeps CSV output byte-stable across platforms that disagree on -0.
double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::vector<double> reconstruct_time(const Grid& grid,
                                     const SquareSpeedProfile& profile) {
  const int n = grid.n();
  if (static_cast<int>(profile.h.size()) != n + 1)
    throw ValidationError("profile", "profile/grid size mismatch");
  std::vector<double> t(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double denom = std::sqrt(std::max(0.0, profile.h[i])) +
                         std::sqrt(std::max(0.0, profile.h[i + 1]));
    if (denom == 0.0)
      throw SingularProfile("squared speed vanishes across segment " +
                            std::to_string(i));
    t[i + 1] = t[i] + 2.0 * grid.ds / denom;
  }
  return t;
}

Trajectory sample_trajectory(const ProblemInstance& instance, const Grid& grid,
                             const SquareSpeedProfile& profile,
                             const RotationSchedule& schedule, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
  if (schedule.R.size() != grid.nodes.size())
    throw ValidationError("schedule", "schedule/grid size mismatch");
  const std::vector<double> t_nodes = reconstruct_time(grid, profile);
  const double total = t_nodes.back();
  if (!std::isfinite(total) || total / dt > 2e7)
    throw SamplingExhausted("sampling " + std::to_string(total) +
                            " s at dt = " + std::to_string(dt) +
                            " needs too many samples");

  const int n = grid.n();
  std::vector<double> slope(n);
  for (int i = 0; i < n; ++i)
    slope[i] = (profile.h[i + 1] - profile.h[i]) / grid.ds;

  std::vector<double> times;
  for (long k = 0; k * dt < total; ++k) times.push_back(k * dt);
  if (total - times.back() > 1e-12 * std::max(1.0, total))
    times.push_back(total);
  else
    times.back() = total;

  const Mixer mixer = mixer_matrix(instance.quad);
  Trajectory out;
  out.total_time = total;
  out.samples.reserve(times.size());

  for (size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    int i = static_cast<int>(
                std::upper_bound(t_nodes.begin(), t_nodes.end(), t) -
                t_nodes.begin()) - 1;
    i = std::clamp(i, 0, n - 1);
    const double u = t - t_nodes[i];
    const double a = slope[i];
    const double sqh_i = std::sqrt(std::max(0.0, profile.h[i]));
    // Under piecewise-linear h(s), sqrt(h) grows linearly in time within a
    // segment: s(t) = s_i + sqrt(h_i) u + a u^2 / 4.
    double s = grid.nodes[i].s + sqh_i * u + 0.25 * a * u * u;
    s = std::clamp(s, grid.nodes[i].s, grid.nodes[i + 1].s);
    if (k + 1 == times.size()) s = grid.s_end;
    double h_t = profile.h[i] + a * (s - grid.nodes[i].s);
    if (h_t < 0.0) h_t = 0.0;

    const PathPoint pp = eval_path(instance.path, s);
    TrajectorySample smp;
    smp.t = t;
    smp.s = s;
    smp.position = pp.gamma;
    const double sqh = std::sqrt(h_t);
    smp.velocity = pp.gamma_p * sqh;
    smp.acceleration = 0.5 * pp.gamma_p * a + pp.gamma_pp * h_t;

    const int jn = std::clamp(static_cast<int>(std::lround(s / grid.ds)), 0, n);
    smp.R = schedule.R[jn];
    smp.omega = schedule.Gamma[jn] * sqh;

    // Motor plan from the node-certified decision pair of this segment, so
    // the emitted thrusts are exactly the ones the stage-2 rows bounded.
    const Vec3 c_node = grid.nodes[i].gamma_pp * profile.h[i] +
                        0.5 * grid.nodes[i].gamma_p * a - instance.quad.g_vec;
    const double c_par = schedule.R[i].col(2).dot(c_node);
    const Vec3 tau = torque(schedule.Gamma[i], schedule.Gamma_p[i],
                            profile.h[i], a, instance.quad.J);
    smp.motors = motor_thrusts(c_par, tau, mixer);
    out.samples.push_back(std::move(smp));
  }
  return out;
}

VerificationReport verify(const Trajectory& trajectory,
                          const ProblemInstance& instance, double margin_deg) {
  if (trajectory.samples.empty())
    throw ValidationError("trajectory", "no samples");
  VerificationReport rep;
  rep.margin_deg = margin_deg;
  rep.min_fov_slack_rad = kInf;
  rep.min_fov_slack_thrust_rad = kInf;
  rep.min_cone_slack_rad = kInf;
  rep.min_thrust_slack = kInf;
  rep.min_motor_slack = kInf;
  rep.max_nonholonomy = 0.0;
  const double margin = margin_deg * M_PI / 180.0;

  std::map<int, Vec3> landmark_by_id;
  for (const Landmark& lm : instance.landmarks)
    landmark_by_id[lm.id] = lm.xyz;

  for (const TrajectorySample& smp : trajectory.samples) {
    SampleResiduals res;
    res.t = smp.t;
    const Vec3 c = smp.acceleration - instance.quad.g_vec;
    const Requirements req = requirements_at(instance, smp.s);

    const Vec3 x_b = smp.R.col(0);
    for (int id : req.landmark_ids) {
      rep.has_fov = true;
      const Vec3 dir =
          landmark_by_id.at(id) - (smp.position + instance.rig.d * x_b);
      const double ang = angle_between(x_b, dir);
      const double slack = instance.rig.alpha - ang;
      res.fov_slack.emplace_back(id, slack);
      rep.min_fov_slack_rad = std::min(rep.min_fov_slack_rad, slack);
      if (slack < -margin) ++rep.fov_violations;
    }
    if (!req.landmark_ids.empty()) {
      try {
        const Mat3 r_thrust =
            attitude_from_thrust(c, eval_path(instance.path, smp.s).psi);
        const Vec3 x_t = r_thrust.col(0);
        for (int id : req.landmark_ids) {
          const Vec3 dir =
              landmark_by_id.at(id) - (smp.position + instance.rig.d * x_t);
          const double slack = instance.rig.alpha - angle_between(x_t, dir);
          res.fov_slack_thrust.emplace_back(id, slack);
          rep.min_fov_slack_thrust_rad =
              std::min(rep.min_fov_slack_thrust_rad, slack);
        }
      } catch (const DegenerateAttitude&) {
        // No thrust-implied attitude at this sample; nothing to record.
      }
    }

    const double cn = c.norm();
    const double cone_ang = (cn > kEpsC) ? angle_between(req.n, c) : 0.0;
    res.cone_slack = req.beta - cone_ang;
    rep.min_cone_slack_rad = std::min(rep.min_cone_slack_rad, res.cone_slack);
    if (res.cone_slack < -margin) ++rep.cone_violations;

    res.thrust_slack = 4.0 * instance.quad.c_max - cn;
    rep.min_thrust_slack = std::min(rep.min_thrust_slack, res.thrust_slack);
    if (res.thrust_slack < -1e-6) ++rep.thrust_violations;

    res.motor_low_slack = (smp.motors.array() - instance.quad.c_min).minCoeff();
    res.motor_high_slack =
        (instance.quad.c_max - smp.motors.array()).minCoeff();
    const double motor_slack =
        std::min(res.motor_low_slack, res.motor_high_slack);
    rep.min_motor_slack = std::min(rep.min_motor_slack, motor_slack);
    if (motor_slack < -1e-6) ++rep.motor_violations;

    res.nonholonomy = smp.R.col(2).cross(c).norm();
    rep.max_nonholonomy = std::max(rep.max_nonholonomy, res.nonholonomy);

    rep.samples.push_back(std::move(res));
  }
  return rep;
}

namespace {

nlohmann::json report_json_object(const VerificationReport& rep) {
  const double deg = 180.0 / M_PI;
  nlohmann::json j;
  j["margin_deg"] = rep.margin_deg;
  j["has_fov"] = rep.has_fov;
  j["num_samples"] = rep.samples.size();
  j["min_fov_slack_deg"] = finite_or_null(rep.min_fov_slack_rad * deg);
  j["min_fov_slack_thrust_deg"] =
      finite_or_null(rep.min_fov_slack_thrust_rad * deg);
  j["min_cone_slack_deg"] = finite_or_null(rep.min_cone_slack_rad * deg);
  j["min_thrust_slack"] = finite_or_null(rep.min_thrust_slack);
  j["min_motor_slack"] = finite_or_null(rep.min_motor_slack);
  j["max_nonholonomy"] = rep.max_nonholonomy;
  j["violations"] = {{"fov", rep.fov_violations},
                     {"cone", rep.cone_violations},
                     {"thrust", rep.thrust_violations},
                     {"motor", rep.motor_violations}};
  return j;
}

nlohmann::json sample_json_object(const TrajectorySample& s) {
  Eigen::Quaterniond q(s.R);
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return nlohmann::json{
      {"t", s.t},
      {"s", s.s},
      {"x", s.position.x()},  {"y", s.position.y()},  {"z", s.position.z()},
      {"vx", s.velocity.x()}, {"vy", s.velocity.y()}, {"vz", s.velocity.z()},
      {"ax", s.acceleration.x()},
      {"ay", s.acceleration.y()},
      {"az", s.acceleration.z()},
      {"qw", q.w()}, {"qx", q.x()}, {"qy", q.y()}, {"qz", q.z()},
      {"wx", s.omega.x()}, {"wy", s.omega.y()}, {"wz", s.omega.z()},
      {"c1", s.motors(0)}, {"c2", s.motors(1)},
      {"c3", s.motors(2)}, {"c4", s.motors(3)}};
}

}  // namespace

std::string serialize(const Trajectory& trajectory,
                      const VerificationReport& report,
                      const std::string& format) {
  if (format == "csv") {
    std::string out =
        "t,s,x,y,z,vx,vy,vz,ax,ay,az,qw,qx,qy,qz,wx,wy,wz,c1,c2,c3,c4\n";
    for (const TrajectorySample& s : trajectory.samples) {
      Eigen::Quaterniond q(s.R);
      if (q.w() < 0.0) q.coeffs() *= -1.0;
      out += fmt::format(
          "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
          clean_zero(s.t), clean_zero(s.s), clean_zero(s.position.x()),
          clean_zero(s.position.y()), clean_zero(s.position.z()),
          clean_zero(s.velocity.x()), clean_zero(s.velocity.y()),
          clean_zero(s.velocity.z()), clean_zero(s.acceleration.x()),
          clean_zero(s.acceleration.y()), clean_zero(s.acceleration.z()),
          clean_zero(q.w()), clean_zero(q.x()), clean_zero(q.y()),
          clean_zero(q.z()), clean_zero(s.omega.x()), clean_zero(s.omega.y()),
          clean_zero(s.omega.z()), clean_zero(s.motors(0)),
          clean_zero(s.motors(1)), clean_zero(s.motors(2)),
          clean_zero(s.motors(3)));
    }
    return out;
  }
  if (format == "json") {
    nlohmann::json j;
    j["total_time"] = trajectory.total_time;
    nlohmann::json samples = nlohmann::json::array();
    for (const TrajectorySample& s : trajectory.samples)
      samples.push_back(sample_json_object(s));
    j["samples"] = std::move(samples);
    j["report"] = report_json_object(report);
    return j.dump(2) + "\n";
  }
  throw ValidationError("format", "must be json or csv");
}

std::string report_to_json(const VerificationReport& report) {
  return report_json_object(report).dump(2) + "\n";
}

namespace {

TrajectorySample sample_from_fields(const double* f) {
  TrajectorySample s;
  s.t = f[0];
  s.s = f[1];
  s.position = Vec3(f[2], f[3], f[4]);
  s.velocity = Vec3(f[5], f[6], f[7]);
  s.acceleration = Vec3(f[8], f[9], f[10]);
  Eigen::Quaterniond q(f[11], f[12], f[13], f[14]);  // w, x, y, z
  s.R = q.normalized().toRotationMatrix();
  s.omega = Vec3(f[15], f[16], f[17]);
  s.motors = Vec4(f[18], f[19], f[20], f[21]);
  return s;
}

}  // namespace

Trajectory parse_trajectory_json(const std::string& document,
                                 std::string* report_out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object() || !j.contains("total_time") || !j.contains("samples"))
    throw ParseError("trajectory document must have total_time and samples");
  Trajectory out;
  out.total_time = j["total_time"].get<double>();
  static const char* kKeys[22] = {"t",  "s",  "x",  "y",  "z",  "vx", "vy",
                                  "vz", "ax", "ay", "az", "qw", "qx", "qy",
                                  "qz", "wx", "wy", "wz", "c1", "c2", "c3",
                                  "c4"};
  for (const nlohmann::json& sj : j["samples"]) {
    double f[22];
    for (int k = 0; k < 22; ++k) {
      if (!sj.contains(kKeys[k]) || !sj[kKeys[k]].is_number())
        throw ParseError(std::string("sample missing field ") + kKeys[k]);
      f[k] = sj[kKeys[k]].get<double>();
    }
    out.samples.push_back(sample_from_fields(f));
  }
  if (report_out && j.contains("report")) *report_out = j["report"].dump(2);
  return out;
}

Trajectory parse_trajectory_csv(const std::string& document) {
  std::istringstream in(document);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty CSV document");
  if (line == "t,s,x,y,z,vx,vy,vz,ax,ay,az,qw,qx,qy,qz,wx,wy,wz,c1,c2,c3,c4\r")
    line.pop_back();
  if (line != "t,s,x,y,z,vx,vy,vz,ax,ay,az,qw,qx,qy,qz,wx,wy,wz,c1,c2,c3,c4")
    throw ParseError("unexpected CSV header");
  Trajectory out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double f[22];
    size_t pos = 0;
    for (int k = 0; k < 22; ++k) {
      const size_t next = line.find(',', pos);
      const std::string tok = line.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos);
      try {
        f[k] = std::stod(tok);
      } catch (const std::exception&) {
        throw ParseError("bad number on line " + std::to_string(lineno));
      }
      if (k < 21) {
        if (next == std::string::npos)
          throw ParseError("short row on line " + std::to_string(lineno));
        pos = next + 1;
      }
    }
    out.samples.push_back(sample_from_fields(f));
  }
  if (!out.samples.empty()) out.total_time = out.samples.back().t;
  return out;
}

}  // namespace fovtopp
