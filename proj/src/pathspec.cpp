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

#include "fovtopp/pathspec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fovtopp/errors.hpp"

namespace fovtopp {
namespace {

constexpr double kBreakTol = 1e-9;   // segment contiguity tolerance
constexpr double kC2Tol = 1e-8;      // continuity tolerance at breakpoints
constexpr double kRegularityEps = 1e-9;

// Evaluates one polynomial row with two derivatives at x (ascending powers).
void eval_poly_row(const Eigen::Ref<const Eigen::RowVectorXd>& c, double x,
                   double* v, double* d1, double* d2) {
  // Horner's scheme for the value and both derivatives in one sweep.
  double p = 0.0, p1 = 0.0, p2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    p2 = p2 * x + 2.0 * p1;
    p1 = p1 * x + p;
    p = p * x + c(k);
  }
  *v = p;
  *d1 = p1;
  *d2 = p2;
}

const PolySegment& segment_at(const std::vector<PolySegment>& segs, double s) {
  // Segments are contiguous and sorted; pick the one whose half-open
  // interval [s0, s1) contains s, with the final segment owning s_end.
  auto it = std::upper_bound(
      segs.begin(), segs.end(), s,
      [](double value, const PolySegment& seg) { return value < seg.s1; });
  if (it == segs.end()) --it;
  return *it;
}

void check_cover(const std::vector<PolySegment>& segs, double s_end, int dims,
                 const std::string& field) {
  if (segs.empty()) throw ValidationError(field, "no segments");
  if (std::abs(segs.front().s0) > kBreakTol)
    throw ValidationError(field, "cover must start at s = 0");
  for (size_t k = 0; k < segs.size(); ++k) {
    const PolySegment& seg = segs[k];
    if (!(seg.s1 > seg.s0))
      throw ValidationError(field, "segment " + std::to_string(k) +
                                       " has nonpositive length");
    if (seg.coeffs.rows() != dims || seg.coeffs.cols() < 1)
      throw ValidationError(field, "segment " + std::to_string(k) +
                                       " has malformed coefficients");
    if (!seg.coeffs.allFinite())
      throw ValidationError(field, "segment " + std::to_string(k) +
                                       " has non-finite coefficients");
    if (k > 0 && std::abs(seg.s0 - segs[k - 1].s1) > kBreakTol)
      throw ValidationError(field, "segments " + std::to_string(k - 1) +
                                       " and " + std::to_string(k) +
                                       " are not contiguous");
  }
  if (std::abs(segs.back().s1 - s_end) > kBreakTol)
    throw ValidationError(field, "cover must end at s = S_end");
}

void check_c2(const std::vector<PolySegment>& segs, const std::string& field) {
  for (size_t k = 0; k + 1 < segs.size(); ++k) {
    const PolySegment& a = segs[k];
    const PolySegment& b = segs[k + 1];
    for (int row = 0; row < a.coeffs.rows(); ++row) {
      double lv, l1, l2, rv, r1, r2;
      eval_poly_row(a.coeffs.row(row), a.s1 - a.s0, &lv, &l1, &l2);
      eval_poly_row(b.coeffs.row(row), 0.0, &rv, &r1, &r2);
      auto mismatch = [](double l, double r) {
        return std::abs(l - r) > kC2Tol * std::max({1.0, std::abs(l), std::abs(r)});
      };
      if (mismatch(lv, rv) || mismatch(l1, r1) || mismatch(l2, r2))
        throw ValidationError(field, "not C2 at breakpoint s = " +
                                         std::to_string(a.s1));
    }
  }
}

}  // namespace

void PathSpec::validate() const {
  if (!(s_end > 0.0))
    throw ValidationError("path", "S_end must be positive");
  check_cover(gamma_segments, s_end, 3, "path.segments");
  check_cover(theta_segments, s_end, 1, "heading.segments");
  check_c2(gamma_segments, "path.segments");
  check_c2(theta_segments, "heading.segments");
  // Regularity on a dense per-segment sample; discretize() re-checks at the
  // actual grid nodes.
  for (const PolySegment& seg : gamma_segments) {
    constexpr int kSamples = 64;
    for (int k = 0; k <= kSamples; ++k) {
      const double x = (seg.s1 - seg.s0) * k / kSamples;
      double norm2 = 0.0;
      for (int row = 0; row < 3; ++row) {
        double v, d1, d2;
        eval_poly_row(seg.coeffs.row(row), x, &v, &d1, &d2);
        norm2 += d1 * d1;
      }
      if (std::sqrt(norm2) <= kRegularityEps)
        throw ValidationError("path.segments",
                              "gamma' vanishes near s = " +
                                  std::to_string(seg.s0 + x));
    }
  }
}

PathPoint eval_path(const PathSpec& spec, double s) {
  if (!(s >= 0.0 && s <= spec.s_end))
    throw OutOfRange("s = " + std::to_string(s) + " outside [0, " +
                     std::to_string(spec.s_end) + "]");
  PathPoint out;
  const PolySegment& gseg = segment_at(spec.gamma_segments, s);
  for (int row = 0; row < 3; ++row) {
    double v, d1, d2;
    eval_poly_row(gseg.coeffs.row(row), s - gseg.s0, &v, &d1, &d2);
    out.gamma(row) = v;
    out.gamma_p(row) = d1;
    out.gamma_pp(row) = d2;
  }
  const PolySegment& tseg = segment_at(spec.theta_segments, s);
  double th, th1, th2;
  eval_poly_row(tseg.coeffs.row(0), s - tseg.s0, &th, &th1, &th2);
  out.theta = th;
  const double c = std::cos(th), sn = std::sin(th);
  out.psi = Vec3(c, sn, 0.0);
  out.psi_p = th1 * Vec3(-sn, c, 0.0);
  out.psi_pp = th2 * Vec3(-sn, c, 0.0) + th1 * th1 * Vec3(-c, -sn, 0.0);
  return out;
}

Vec3 psi_perp(const Vec3& psi) { return Vec3::UnitZ().cross(psi); }

void ProblemInstance::validate() const {
  path.validate();
  quad.validate();
  rig.validate();
  const double s_end = path.s_end;

  auto check_range = [s_end](double s0, double s1, const std::string& field) {
    if (!(s0 >= -kBreakTol && s1 <= s_end + kBreakTol && s0 <= s1))
      throw ValidationError(field, "s_range must satisfy 0 <= a <= b <= S_end");
  };

  std::vector<int> known_ids;
  for (const Landmark& lm : landmarks) {
    if (!lm.xyz.allFinite())
      throw ValidationError("landmarks", "coordinates must be finite");
    if (std::find(known_ids.begin(), known_ids.end(), lm.id) != known_ids.end())
      throw ValidationError("landmarks",
                            "duplicate id " + std::to_string(lm.id));
    known_ids.push_back(lm.id);
  }
  for (size_t k = 0; k < visibility.size(); ++k) {
    const VisibilityInterval& vi = visibility[k];
    check_range(vi.s0, vi.s1, "visibility[" + std::to_string(k) + "]");
    for (int id : vi.ids) {
      if (std::find(known_ids.begin(), known_ids.end(), id) == known_ids.end())
        throw ValidationError("visibility[" + std::to_string(k) + "]",
                              "unknown landmark id " + std::to_string(id));
    }
  }
  for (size_t k = 0; k < attitude_schedule.size(); ++k) {
    const AttitudeInterval& ai = attitude_schedule[k];
    check_range(ai.s0, ai.s1, "attitude[" + std::to_string(k) + "]");
    if (std::abs(ai.n.norm() - 1.0) > 1e-6)
      throw ValidationError("attitude[" + std::to_string(k) + "].n",
                            "must be a unit vector");
    if (!(ai.beta >= 0.0 && ai.beta < M_PI / 2.0))
      throw ValidationError("attitude[" + std::to_string(k) + "].beta",
                            "must lie in [0, pi/2)");
  }
  for (size_t k = 0; k < speed_floors.size(); ++k) {
    const SpeedFloor& sf = speed_floors[k];
    check_range(sf.s0, sf.s1, "speed_floor[" + std::to_string(k) + "]");
    if (!(sf.h_min >= 0.0))
      throw ValidationError("speed_floor[" + std::to_string(k) + "].h_min",
                            "must be >= 0");
  }
  if (v_max && !(*v_max > 0.0))
    throw ValidationError("solver.v_max", "must be > 0 when given");
  if (!(h_start >= 0.0)) throw ValidationError("solver.h_start", "must be >= 0");
  if (!(h_end >= 0.0)) throw ValidationError("solver.h_end", "must be >= 0");
  if (grid_n < 2) throw ValidationError("solver.grid_n", "must be >= 2");
  if (!(eta > 0.0)) throw ValidationError("solver.eta", "must be > 0");
  if (!(eps_h > 0.0)) throw ValidationError("solver.eps_h", "must be > 0");
  if (!std::isfinite(sigma)) throw ValidationError("solver.sigma", "must be finite");
}

Grid discretize(const ProblemInstance& instance) {
  const int n = instance.grid_n;
  Grid grid;
  grid.s_end = instance.path.s_end;
  grid.ds = grid.s_end / n;
  grid.nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = (i == n) ? grid.s_end : grid.ds * i;
    const PathPoint p = eval_path(instance.path, s);
    GridNode& node = grid.nodes[i];
    node.s = s;
    node.gamma = p.gamma;
    node.gamma_p = p.gamma_p;
    node.gamma_pp = p.gamma_pp;
    node.psi = p.psi;
    node.psi_perp = fovtopp::psi_perp(p.psi);
    if (node.gamma_p.norm() <= kRegularityEps)
      throw IrregularPath("gamma' vanishes at grid node " + std::to_string(i) +
                          " (s = " + std::to_string(s) + ")");
  }
  return grid;
}

Requirements requirements_at(const ProblemInstance& instance, double s) {
  Requirements req;
  for (const VisibilityInterval& vi : instance.visibility) {
    if (s >= vi.s0 && s <= vi.s1)
      req.landmark_ids.insert(req.landmark_ids.end(), vi.ids.begin(),
                              vi.ids.end());
  }
  std::sort(req.landmark_ids.begin(), req.landmark_ids.end());
  req.landmark_ids.erase(
      std::unique(req.landmark_ids.begin(), req.landmark_ids.end()),
      req.landmark_ids.end());
  for (const AttitudeInterval& ai : instance.attitude_schedule) {
    if (s >= ai.s0 && s <= ai.s1) {
      req.n = ai.n;
      req.beta = ai.beta;
      break;
    }
  }
  return req;
}

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& field) {
  if (!j.is_number())
    throw ValidationError(field, "expected a number");
  return j.get<double>();
}

std::pair<double, double> get_s_range(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2)
    throw ValidationError(field + ".s_range", "expected [a, b]");
  return {get_number(j[0], field + ".s_range[0]"),
          get_number(j[1], field + ".s_range[1]")};
}

Vec3 get_vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3)
    throw ValidationError(field, "expected [x, y, z]");
  return Vec3(get_number(j[0], field), get_number(j[1], field),
              get_number(j[2], field));
}

std::vector<PolySegment> parse_segments(const json& j, int dims,
                                        const std::string& coeff_key,
                                        const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ValidationError(field, "expected a nonempty array of segments");
  std::vector<PolySegment> segs;
  for (size_t k = 0; k < j.size(); ++k) {
    const std::string seg_field = field + "[" + std::to_string(k) + "]";
    const json& sj = j[k];
    if (!sj.is_object() || !sj.contains("s_range") || !sj.contains(coeff_key))
      throw ValidationError(seg_field, "expected s_range and " + coeff_key);
    PolySegment seg;
    std::tie(seg.s0, seg.s1) = get_s_range(sj["s_range"], seg_field);
    const json& cj = sj[coeff_key];
    // For 3-d output the coefficients are one array per component; for the
    // heading they may be given flat.
    std::vector<std::vector<double>> rows;
    if (dims == 1 && cj.is_array() && !cj.empty() && cj[0].is_number()) {
      rows.emplace_back(cj.get<std::vector<double>>());
    } else {
      if (!cj.is_array() || static_cast<int>(cj.size()) != dims)
        throw ValidationError(seg_field + "." + coeff_key,
                              "expected " + std::to_string(dims) +
                                  " coefficient rows");
      for (const json& row : cj) {
        if (!row.is_array() || row.empty())
          throw ValidationError(seg_field + "." + coeff_key,
                                "expected nonempty coefficient rows");
        rows.emplace_back(row.get<std::vector<double>>());
      }
    }
    size_t max_len = 0;
    for (const auto& row : rows) max_len = std::max(max_len, row.size());
    seg.coeffs.setZero(dims, static_cast<int>(max_len));
    for (int r = 0; r < dims; ++r)
      for (size_t c = 0; c < rows[r].size(); ++c)
        seg.coeffs(r, static_cast<int>(c)) = rows[r][c];
    segs.push_back(std::move(seg));
  }
  return segs;
}

}  // namespace

ProblemInstance load_problem(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("document root must be an object");

  ProblemInstance inst;
  if (!j.contains("path") || !j["path"].is_object() ||
      !j["path"].contains("segments"))
    throw ValidationError("path.segments", "missing");
  inst.path.gamma_segments =
      parse_segments(j["path"]["segments"], 3, "gamma_coeffs", "path.segments");
  inst.path.s_end = inst.path.gamma_segments.back().s1;

  if (j.contains("heading")) {
    if (!j["heading"].is_object() || !j["heading"].contains("segments"))
      throw ValidationError("heading.segments", "missing");
    inst.path.theta_segments = parse_segments(j["heading"]["segments"], 1,
                                              "theta_coeffs", "heading.segments");
  } else {
    // Default heading: theta == 0 (camera along world x).
    PolySegment seg;
    seg.s0 = 0.0;
    seg.s1 = inst.path.s_end;
    seg.coeffs.setZero(1, 1);
    inst.path.theta_segments = {seg};
  }

  if (j.contains("landmarks")) {
    if (!j["landmarks"].is_array())
      throw ValidationError("landmarks", "expected an array");
    for (size_t k = 0; k < j["landmarks"].size(); ++k) {
      const json& lj = j["landmarks"][k];
      const std::string field = "landmarks[" + std::to_string(k) + "]";
      if (!lj.is_object() || !lj.contains("id") || !lj.contains("xyz"))
        throw ValidationError(field, "expected id and xyz");
      if (!lj["id"].is_number_integer())
        throw ValidationError(field + ".id", "expected an integer");
      Landmark lm;
      lm.id = lj["id"].get<int>();
      lm.xyz = get_vec3(lj["xyz"], field + ".xyz");
      inst.landmarks.push_back(lm);
    }
  }

  if (j.contains("visibility")) {
    if (!j["visibility"].is_array())
      throw ValidationError("visibility", "expected an array");
    for (size_t k = 0; k < j["visibility"].size(); ++k) {
      const json& vj = j["visibility"][k];
      const std::string field = "visibility[" + std::to_string(k) + "]";
      if (!vj.is_object() || !vj.contains("s_range") || !vj.contains("ids"))
        throw ValidationError(field, "expected s_range and ids");
      VisibilityInterval vi;
      std::tie(vi.s0, vi.s1) = get_s_range(vj["s_range"], field);
      if (!vj["ids"].is_array())
        throw ValidationError(field + ".ids", "expected an array of ids");
      for (const json& idj : vj["ids"]) {
        if (!idj.is_number_integer())
          throw ValidationError(field + ".ids", "expected integer ids");
        vi.ids.push_back(idj.get<int>());
      }
      inst.visibility.push_back(std::move(vi));
    }
  }

  if (j.contains("attitude")) {
    if (!j["attitude"].is_array())
      throw ValidationError("attitude", "expected an array");
    for (size_t k = 0; k < j["attitude"].size(); ++k) {
      const json& aj = j["attitude"][k];
      const std::string field = "attitude[" + std::to_string(k) + "]";
      if (!aj.is_object() || !aj.contains("s_range") || !aj.contains("n") ||
          !aj.contains("beta"))
        throw ValidationError(field, "expected s_range, n, beta");
      AttitudeInterval ai;
      std::tie(ai.s0, ai.s1) = get_s_range(aj["s_range"], field);
      ai.n = get_vec3(aj["n"], field + ".n");
      if (ai.n.norm() <= kRegularityEps)
        throw ValidationError(field + ".n", "must be a nonzero vector");
      ai.n.normalize();
      ai.beta = get_number(aj["beta"], field + ".beta");
      inst.attitude_schedule.push_back(ai);
    }
  }

  if (j.contains("speed_floor")) {
    if (!j["speed_floor"].is_array())
      throw ValidationError("speed_floor", "expected an array");
    for (size_t k = 0; k < j["speed_floor"].size(); ++k) {
      const json& fj = j["speed_floor"][k];
      const std::string field = "speed_floor[" + std::to_string(k) + "]";
      if (!fj.is_object() || !fj.contains("s_range") || !fj.contains("h_min"))
        throw ValidationError(field, "expected s_range and h_min");
      SpeedFloor sf;
      std::tie(sf.s0, sf.s1) = get_s_range(fj["s_range"], field);
      sf.h_min = get_number(fj["h_min"], field + ".h_min");
      inst.speed_floors.push_back(sf);
    }
  }

  if (j.contains("quad")) {
    const json& qj = j["quad"];
    if (!qj.is_object()) throw ValidationError("quad", "expected an object");
    if (qj.contains("J")) {
      const json& jj = qj["J"];
      if (!jj.is_array() || jj.size() != 3)
        throw ValidationError("quad.J", "expected a 3x3 array");
      for (int r = 0; r < 3; ++r) {
        if (!jj[r].is_array() || jj[r].size() != 3)
          throw ValidationError("quad.J", "expected a 3x3 array");
        for (int c = 0; c < 3; ++c)
          inst.quad.J(r, c) = get_number(jj[r][c], "quad.J");
      }
    }
    if (qj.contains("k_L")) inst.quad.k_L = get_number(qj["k_L"], "quad.k_L");
    if (qj.contains("k_M")) inst.quad.k_M = get_number(qj["k_M"], "quad.k_M");
    if (qj.contains("c_min"))
      inst.quad.c_min = get_number(qj["c_min"], "quad.c_min");
    if (qj.contains("c_max"))
      inst.quad.c_max = get_number(qj["c_max"], "quad.c_max");
  }

  if (j.contains("camera")) {
    const json& cj = j["camera"];
    if (!cj.is_object()) throw ValidationError("camera", "expected an object");
    if (cj.contains("d")) inst.rig.d = get_number(cj["d"], "camera.d");
    if (cj.contains("alpha"))
      inst.rig.alpha = get_number(cj["alpha"], "camera.alpha");
  }

  if (j.contains("solver")) {
    const json& sj = j["solver"];
    if (!sj.is_object()) throw ValidationError("solver", "expected an object");
    if (sj.contains("grid_n")) {
      if (!sj["grid_n"].is_number_integer())
        throw ValidationError("solver.grid_n", "expected an integer");
      inst.grid_n = sj["grid_n"].get<int>();
    }
    if (sj.contains("h_start"))
      inst.h_start = get_number(sj["h_start"], "solver.h_start");
    if (sj.contains("h_end"))
      inst.h_end = get_number(sj["h_end"], "solver.h_end");
    if (sj.contains("v_max"))
      inst.v_max = get_number(sj["v_max"], "solver.v_max");
    if (sj.contains("eta")) inst.eta = get_number(sj["eta"], "solver.eta");
    if (sj.contains("sigma"))
      inst.sigma = get_number(sj["sigma"], "solver.sigma");
    if (sj.contains("eps_h"))
      inst.eps_h = get_number(sj["eps_h"], "solver.eps_h");
  }

  inst.validate();
  return inst;
}

ProblemInstance load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return load_problem(buf.str());
}

}  // namespace fovtopp
