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

#include "support/fixtures.hpp"

#include <cmath>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace fovtopp {
namespace testing {
namespace {

constexpr double kPi = 3.14159265358979323846;

nlohmann::json vec_json(const Vec3& v) {
  return nlohmann::json::array({v.x(), v.y(), v.z()});
}

nlohmann::json iso_inertia(double j) {
  return nlohmann::json::array({{j, 0.0, 0.0}, {0.0, j, 0.0}, {0.0, 0.0, j}});
}

// Single linear heading theta(s) = theta0 + rate * s over [0, s_end].
nlohmann::json linear_heading(double theta0, double rate, double s_end) {
  return {{"segments",
           nlohmann::json::array(
               {{{"s_range", {0.0, s_end}},
                 {"theta_coeffs", nlohmann::json::array({theta0, rate})}}})}};
}

}  // namespace

PolySegment hermite_segment(double s0, double s1, const Vec3& f0,
                            const Vec3& d0, const Vec3& dd0, const Vec3& f1,
                            const Vec3& d1, const Vec3& dd1) {
  const double L = s1 - s0;
  Eigen::Matrix3d M;
  M << L * L * L, L * L * L * L, L * L * L * L * L,            //
      3 * L * L, 4 * L * L * L, 5 * L * L * L * L,             //
      6 * L, 12 * L * L, 20 * L * L * L;
  Eigen::Matrix3d rhs;  // one column of residuals per path component
  for (int c = 0; c < 3; ++c) {
    const double a0 = f0[c], a1 = d0[c], a2 = 0.5 * dd0[c];
    rhs(0, c) = f1[c] - (a0 + a1 * L + a2 * L * L);
    rhs(1, c) = d1[c] - (a1 + 2 * a2 * L);
    rhs(2, c) = dd1[c] - 2 * a2;
  }
  const Eigen::Matrix3d tail = M.colPivHouseholderQr().solve(rhs);

  PolySegment seg;
  seg.s0 = s0;
  seg.s1 = s1;
  seg.coeffs.setZero(3, 6);
  for (int c = 0; c < 3; ++c) {
    seg.coeffs(c, 0) = f0[c];
    seg.coeffs(c, 1) = d0[c];
    seg.coeffs(c, 2) = 0.5 * dd0[c];
    seg.coeffs(c, 3) = tail(0, c);
    seg.coeffs(c, 4) = tail(1, c);
    seg.coeffs(c, 5) = tail(2, c);
  }
  return seg;
}

std::vector<PolySegment> hermite_path(const CurveFn& curve, double s_end,
                                      int segments) {
  std::vector<PolySegment> out;
  out.reserve(segments);
  const double ds = s_end / segments;
  Vec3 f0, d0, dd0, f1, d1, dd1;
  curve(0.0, &f0, &d0, &dd0);
  for (int k = 0; k < segments; ++k) {
    const double s0 = k * ds;
    const double s1 = (k + 1 == segments) ? s_end : (k + 1) * ds;
    curve(s1, &f1, &d1, &dd1);
    out.push_back(hermite_segment(s0, s1, f0, d0, dd0, f1, d1, dd1));
    f0 = f1;
    d0 = d1;
    dd0 = dd1;
  }
  return out;
}

nlohmann::json segments_json(const std::vector<PolySegment>& segs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PolySegment& seg : segs) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < seg.coeffs.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < seg.coeffs.cols(); ++c) row.push_back(seg.coeffs(r, c));
      rows.push_back(std::move(row));
    }
    arr.push_back({{"s_range", {seg.s0, seg.s1}},
                   {"gamma_coeffs", std::move(rows)}});
  }
  return arr;
}

nlohmann::json bangbang_doc() {
  // Straight 10 m line, rest to rest, no camera requirements. The tiny
  // inertia keeps the smoothed attitude swing (a ~120 deg flip at the
  // switching point) within the motor budget.
  nlohmann::json doc;
  doc["path"] = {{"segments",
                  nlohmann::json::array(
                      {{{"s_range", {0.0, 10.0}},
                        {"gamma_coeffs",
                         nlohmann::json::array({{0.0, 1.0}, {0.0}, {0.0}})}}})}};
  doc["quad"] = {{"J", iso_inertia(2e-5)}, {"k_L", 0.15}, {"k_M", 0.02},
                 {"c_min", 0.0},           {"c_max", 4.905}};
  doc["solver"] = {{"grid_n", 1000}, {"h_start", 0.0}, {"h_end", 0.0},
                   {"sigma", 0.2},   {"eta", 0.05}};
  return doc;
}

nlohmann::json spiral_doc() {
  // Climbing spiral, radius 3 m, 1.5 turns, camera pointed at a landmark on
  // the axis. Flown wall-to-wall at the speed limit with fly-through
  // endpoint pins so the tilt stays nearly constant.
  const double s_end = 9.0 * kPi;
  const double rise = 3.0 / s_end;  // 3 m total climb
  const CurveFn curve = [rise](double s, Vec3* f, Vec3* d1, Vec3* d2) {
    const double a = s / 3.0;
    *f = Vec3(3.0 * std::cos(a), 3.0 * std::sin(a), rise * s);
    *d1 = Vec3(-std::sin(a), std::cos(a), rise);
    *d2 = Vec3(-std::cos(a) / 3.0, -std::sin(a) / 3.0, 0.0);
  };
  nlohmann::json doc;
  doc["path"] = {{"segments", segments_json(hermite_path(curve, s_end, 24))}};
  doc["heading"] = linear_heading(kPi, 1.0 / 3.0, s_end);  // camera inward
  doc["landmarks"] =
      nlohmann::json::array({{{"id", 1}, {"xyz", vec_json(Vec3(0, 0, 1.5))}}});
  doc["visibility"] = nlohmann::json::array(
      {{{"s_range", {0.0, s_end}}, {"ids", nlohmann::json::array({1})}}});
  doc["camera"] = {{"d", 0.1}, {"alpha", 0.9}};
  doc["quad"] = {{"c_min", 0.0}, {"c_max", 3.67875}};
  // v_max is chosen so the squared-speed ceiling equals the endpoint pins:
  // a gap there would make stage 1 drop from the ceiling to the pin in a
  // single grid step, spiking h' and the terminal thrust tilt.
  const double gp = std::sqrt(1.0 + rise * rise);
  doc["solver"] = {{"grid_n", 1000},
                   {"h_start", 12.0},
                   {"h_end", 12.0},
                   {"v_max", std::sqrt(12.0) * gp}};
  return doc;
}

nlohmann::json circle_doc() {
  // Planar circle, radius 4 m, one full lap, camera inward toward a landmark
  // below the center. The landmark stays comfortably inside the cone; the
  // speed limit is the binding constraint.
  const double s_end = 8.0 * kPi;
  const CurveFn curve = [](double s, Vec3* f, Vec3* d1, Vec3* d2) {
    const double a = s / 4.0;
    *f = Vec3(4.0 * std::cos(a), 4.0 * std::sin(a), 0.0);
    *d1 = Vec3(-std::sin(a), std::cos(a), 0.0);
    *d2 = Vec3(-std::cos(a) / 4.0, -std::sin(a) / 4.0, 0.0);
  };
  nlohmann::json doc;
  doc["path"] = {{"segments", segments_json(hermite_path(curve, s_end, 20))}};
  doc["heading"] = linear_heading(kPi, 0.25, s_end);
  doc["landmarks"] =
      nlohmann::json::array({{{"id", 1}, {"xyz", vec_json(Vec3(0, 0, -1))}}});
  doc["visibility"] = nlohmann::json::array(
      {{{"s_range", {0.0, s_end}}, {"ids", nlohmann::json::array({1})}}});
  doc["camera"] = {{"d", 0.1}, {"alpha", 0.8}};
  doc["quad"] = {{"c_min", 0.0}, {"c_max", 4.905}};
  // As in the spiral, the speed ceiling must meet the fly-through pins; the
  // 1e-9 headroom keeps sqrt(23)^2 < 23 roundoff from inverting the pin box.
  // The explicit tube width leaves room for the boundary smoothing lag on
  // top of the interpolated-path speed-ceiling ripple.
  doc["solver"] = {{"grid_n", 1000},
                   {"h_start", 23.0},
                   {"h_end", 23.0},
                   {"v_max", std::sqrt(23.0) * (1.0 + 1e-9)},
                   {"eta", 0.8}};
  return doc;
}

nlohmann::json scurve_doc() {
  // Planar S-curve with a tilt cone that actively binds at the two bend
  // apexes. No landmarks; default forward heading.
  const double s_end = 12.0;
  const double A = 1.5, w = 2.0 * kPi / 12.0;
  const CurveFn curve = [A, w](double s, Vec3* f, Vec3* d1, Vec3* d2) {
    *f = Vec3(s, A * std::sin(w * s), 0.0);
    *d1 = Vec3(1.0, A * w * std::cos(w * s), 0.0);
    *d2 = Vec3(0.0, -A * w * w * std::sin(w * s), 0.0);
  };
  nlohmann::json doc;
  doc["path"] = {{"segments", segments_json(hermite_path(curve, s_end, 16))}};
  doc["attitude"] = nlohmann::json::array({{{"s_range", {0.0, s_end}},
                                            {"n", vec_json(Vec3::UnitZ())},
                                            {"beta", 0.35}}});
  doc["quad"] = {{"c_min", 0.0}, {"c_max", 4.905}};
  doc["solver"] = {{"grid_n", 1000},
                   {"h_start", 9.0},
                   {"h_end", 9.0},
                   {"v_max", 4.0}};
  return doc;
}

nlohmann::json helix_doc() {
  // Climbing helix, radius 3 m, tilt cone binding on the plateau, plus an
  // (inert) squared-speed floor over the middle lap.
  const double s_end = 9.0 * kPi;
  const CurveFn curve = [](double s, Vec3* f, Vec3* d1, Vec3* d2) {
    const double a = s / 3.0;
    *f = Vec3(3.0 * std::cos(a), 3.0 * std::sin(a), 0.12 * s);
    *d1 = Vec3(-std::sin(a), std::cos(a), 0.12);
    *d2 = Vec3(-std::cos(a) / 3.0, -std::sin(a) / 3.0, 0.0);
  };
  nlohmann::json doc;
  doc["path"] = {{"segments", segments_json(hermite_path(curve, s_end, 24))}};
  doc["heading"] = linear_heading(kPi, 1.0 / 3.0, s_end);
  doc["attitude"] = nlohmann::json::array({{{"s_range", {0.0, s_end}},
                                            {"n", vec_json(Vec3::UnitZ())},
                                            {"beta", 0.42}}});
  doc["speed_floor"] = nlohmann::json::array(
      {{{"s_range", {10.0, 18.0}}, {"h_min", 10.0}}});
  doc["quad"] = {{"c_min", 0.0}, {"c_max", 4.905}};
  doc["solver"] = {{"grid_n", 1000},
                   {"h_start", 12.5},
                   {"h_end", 12.5},
                   {"v_max", 3.8}};
  return doc;
}

nlohmann::json fovline_doc() {
  // Straight 10 m dash, rest to rest, with a landmark ahead of and above the
  // finish line. Keeping it framed caps the forward tilt during the
  // acceleration phase, so the field-of-view constraint is strongly active.
  nlohmann::json doc;
  doc["path"] = {{"segments",
                  nlohmann::json::array(
                      {{{"s_range", {0.0, 10.0}},
                        {"gamma_coeffs",
                         nlohmann::json::array({{0.0, 1.0}, {0.0}, {0.0}})}}})}};
  doc["landmarks"] =
      nlohmann::json::array({{{"id", 1}, {"xyz", vec_json(Vec3(12, 0, 1))}}});
  doc["visibility"] = nlohmann::json::array(
      {{{"s_range", {0.0, 10.0}}, {"ids", nlohmann::json::array({1})}}});
  doc["camera"] = {{"d", 0.1}, {"alpha", 0.9}};
  doc["quad"] = {{"J", iso_inertia(2e-5)}, {"k_L", 0.15}, {"k_M", 0.02},
                 {"c_min", 0.0},           {"c_max", 4.905}};
  doc["solver"] = {{"grid_n", 1000}, {"h_start", 0.0}, {"h_end", 0.0},
                   {"sigma", 0.05},  {"eta", 1.5}};
  return doc;
}

nlohmann::json random_cubic_doc(int k) {
  // Gentle random cubics for cross-checks against the dynamic-programming
  // oracle. Curvature ranges are chosen so every instance is dynamically
  // feasible; instances 3 and 7 add a landmark far off the camera axis,
  // which no attitude can frame, making them infeasible.
  std::mt19937 rng(77 + static_cast<unsigned>(k));
  auto uni = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const double s_end = 6.0;
  nlohmann::json coeffs = nlohmann::json::array();
  coeffs.push_back({0.0, 1.0, uni(-0.02, 0.02), uni(-0.005, 0.005)});
  coeffs.push_back({0.0, uni(-0.25, 0.25), uni(-0.02, 0.02), uni(-0.005, 0.005)});
  coeffs.push_back({1.0, uni(-0.25, 0.25), uni(-0.02, 0.02), uni(-0.005, 0.005)});

  nlohmann::json doc;
  doc["path"] = {{"segments", nlohmann::json::array(
                                  {{{"s_range", {0.0, s_end}},
                                    {"gamma_coeffs", std::move(coeffs)}}})}};
  doc["quad"] = {{"c_min", 0.0}, {"c_max", 4.905}};
  doc["solver"] = {{"grid_n", 50},
                   {"h_start", 0.0},
                   {"h_end", 0.0},
                   {"v_max", 4.0}};
  if (k == 3 || k == 7) {
    doc["landmarks"] = nlohmann::json::array(
        {{{"id", 9}, {"xyz", vec_json(Vec3(3, 5, 1))}}});
    doc["visibility"] = nlohmann::json::array(
        {{{"s_range", {0.0, s_end}}, {"ids", nlohmann::json::array({9})}}});
    doc["camera"] = {{"d", 0.1}, {"alpha", 0.05}};
  }
  return doc;
}

std::vector<std::pair<std::string, nlohmann::json>> fixture_suite() {
  return {{"bangbang", bangbang_doc()}, {"spiral", spiral_doc()},
          {"circle", circle_doc()},     {"scurve", scurve_doc()},
          {"helix", helix_doc()},       {"fovline", fovline_doc()}};
}

ProblemInstance load(const nlohmann::json& doc) {
  return load_problem(doc.dump());
}

}  // namespace testing
}  // namespace fovtopp
