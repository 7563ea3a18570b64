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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fovtopp/errors.hpp"
#include "fovtopp/oracle.hpp"
#include "fovtopp/pathspec.hpp"
#include "fovtopp/profilesolver.hpp"
#include "fovtopp/trajout.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level_from_env() {
  const char* v = std::getenv("FOVTOPP_LOG");
  if (!v) return LogLevel::kError;
  const std::string s(v);
  if (s == "debug") return LogLevel::kDebug;
  if (s == "info") return LogLevel::kInfo;
  return LogLevel::kError;
}

const LogLevel g_log_level = log_level_from_env();

void log_at(LogLevel level, const std::string& msg) {
  if (g_log_level >= level) std::cerr << "[fovtopp] " << msg << "\n";
}
void log_info(const std::string& msg) { log_at(LogLevel::kInfo, msg); }
void log_debug(const std::string& msg) { log_at(LogLevel::kDebug, msg); }

struct RunConfig {
  std::string input;
  std::string out_dir = ".";
  std::string format = "json";  // json | csv | both
  double dt = 0.005;
  double margin_deg = 2.0;
  // Negative means "no override"; document values win.
  int grid_n = -1;
  double sigma = -1.0;
  double eta = -1.0;
  double eps_h = -1.0;
  // oracle-dp
  int h_levels = 400;
  double h_cap = 0.0;
  // oracle-probes
  long trials = 10000;
  unsigned long long seed = 20260817ull;
};

void add_common_flags(CLI::App* cmd, RunConfig* cfg, bool needs_out_dir) {
  cmd->add_option("--input", cfg->input, "problem document (JSON)")
      ->required();
  auto* out = cmd->add_option("--out-dir", cfg->out_dir, "output directory");
  if (needs_out_dir) out->required();
  cmd->add_option("--format", cfg->format, "trajectory format: json|csv|both");
  cmd->add_option("--dt", cfg->dt, "sample step in seconds (default 0.005)");
  cmd->add_option("--grid-n", cfg->grid_n, "override solver.grid_n");
  cmd->add_option("--sigma", cfg->sigma, "override smoothing width (m)");
  cmd->add_option("--eta", cfg->eta, "override nonholonomy slack (m/s^2)");
  cmd->add_option("--eps-h", cfg->eps_h, "override bisection tolerance");
  cmd->add_option("--margin-deg", cfg->margin_deg,
                  "verification angle margin in degrees (default 2.0)");
}

json settings_block(const fovtopp::ProblemInstance& doc_values,
                    const RunConfig& cfg,
                    const fovtopp::ProblemInstance& effective) {
  json j;
  j["document"] = {{"grid_n", doc_values.grid_n},
                   {"sigma", doc_values.sigma},
                   {"eta", doc_values.eta},
                   {"eps_h", doc_values.eps_h}};
  json ov;
  ov["grid_n"] = cfg.grid_n >= 0 ? json(cfg.grid_n) : json(nullptr);
  ov["sigma"] = cfg.sigma >= 0.0 ? json(cfg.sigma) : json(nullptr);
  ov["eta"] = cfg.eta >= 0.0 ? json(cfg.eta) : json(nullptr);
  ov["eps_h"] = cfg.eps_h >= 0.0 ? json(cfg.eps_h) : json(nullptr);
  j["overrides"] = ov;
  j["effective"] = {{"grid_n", effective.grid_n},
                    {"sigma", effective.sigma_value()},
                    {"eta", effective.eta},
                    {"eps_h", effective.eps_h}};
  return j;
}

void apply_overrides(fovtopp::ProblemInstance* inst, const RunConfig& cfg) {
  if (cfg.grid_n >= 0) inst->grid_n = cfg.grid_n;
  if (cfg.sigma >= 0.0) inst->sigma = cfg.sigma;
  if (cfg.eta >= 0.0) inst->eta = cfg.eta;
  if (cfg.eps_h >= 0.0) inst->eps_h = cfg.eps_h;
  inst->validate();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fovtopp::IoError("cannot open " + path.string());
  out << content;
  out.flush();
  if (!out) throw fovtopp::IoError("write failed: " + path.string());
}

fs::path ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw fovtopp::IoError("cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

double nz(double v) { return v == 0.0 ? 0.0 : v; }

std::string profile_csv(const fovtopp::SquareSpeedProfile& prof) {
  std::string out = "s,h,l\n";
  for (size_t i = 0; i < prof.h.size(); ++i)
    out += fmt::format("{},{},{}\n", nz(prof.grid.nodes[i].s), nz(prof.h[i]),
                       nz(prof.l[i]));
  return out;
}

std::string plotdata_csv(const fovtopp::SquareSpeedProfile& s1,
                         const fovtopp::SquareSpeedProfile& s2) {
  std::string out = "s,h_stage1,h_stage2\n";
  for (size_t i = 0; i < s1.h.size(); ++i)
    out += fmt::format("{},{},{}\n", nz(s1.grid.nodes[i].s), nz(s1.h[i]),
                       nz(s2.h[i]));
  return out;
}

json base_summary() {
  json j;
  j["status"] = "error";
  j["total_time"] = nullptr;
  j["stage1_time"] = nullptr;
  j["max_fov_slack_deg"] = nullptr;
  return j;
}

void emit_summary(const json& j) { std::cout << j.dump(2) << std::endl; }

json fov_slack_deg(const fovtopp::VerificationReport& rep) {
  if (!rep.has_fov || !std::isfinite(rep.min_fov_slack_rad)) return nullptr;
  // Worst overshoot past the half-angle; negative means everything fit with
  // room to spare.
  return -rep.min_fov_slack_rad * 180.0 / M_PI;
}

int run_solve(const RunConfig& cfg) {
  const fovtopp::ProblemInstance doc_values =
      fovtopp::load_problem_file(cfg.input);
  fovtopp::ProblemInstance inst = doc_values;
  apply_overrides(&inst, cfg);
  if (!(cfg.dt > 0.0))
    throw fovtopp::ValidationError("dt", "must be > 0");
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
    throw fovtopp::ValidationError("format", "must be json, csv, or both");

  log_info("solving " + cfg.input + " with grid_n = " +
           std::to_string(inst.grid_n));
  const fovtopp::SolveResult result = fovtopp::solve(inst);
  const fovtopp::Grid& grid = result.stage2.grid;
  const double t1 = fovtopp::reconstruct_time(grid, result.stage1).back();
  const double t2 = fovtopp::reconstruct_time(grid, result.stage2).back();
  log_info(fmt::format("stage-1 time {:.6f} s, stage-2 time {:.6f} s", t1, t2));

  const fovtopp::Trajectory traj = fovtopp::sample_trajectory(
      inst, grid, result.stage2, result.schedule, cfg.dt);
  const fovtopp::VerificationReport rep =
      fovtopp::verify(traj, inst, cfg.margin_deg);
  log_debug(fmt::format("{} samples, {} fov / {} cone / {} thrust / {} motor "
                        "violations",
                        traj.samples.size(), rep.fov_violations,
                        rep.cone_violations, rep.thrust_violations,
                        rep.motor_violations));

  const fs::path out = ensure_out_dir(cfg.out_dir);
  std::vector<std::string> written;
  if (cfg.format == "json" || cfg.format == "both") {
    write_file(out / "trajectory.json",
               fovtopp::serialize(traj, rep, "json"));
    written.push_back("trajectory.json");
  }
  if (cfg.format == "csv" || cfg.format == "both") {
    write_file(out / "trajectory.csv", fovtopp::serialize(traj, rep, "csv"));
    written.push_back("trajectory.csv");
  }
  write_file(out / "profile_stage1.csv", profile_csv(result.stage1));
  write_file(out / "profile_stage2.csv", profile_csv(result.stage2));
  write_file(out / "report.json", fovtopp::report_to_json(rep));
  write_file(out / "speed_profile_plotdata.csv",
             plotdata_csv(result.stage1, result.stage2));
  written.insert(written.end(), {"profile_stage1.csv", "profile_stage2.csv",
                                 "report.json", "speed_profile_plotdata.csv"});

  json summary = base_summary();
  summary["status"] = "ok";
  summary["total_time"] = t2;
  summary["stage1_time"] = t1;
  summary["max_fov_slack_deg"] = fov_slack_deg(rep);
  summary["violations"] = {{"fov", rep.fov_violations},
                           {"cone", rep.cone_violations},
                           {"thrust", rep.thrust_violations},
                           {"motor", rep.motor_violations}};
  summary["samples"] = traj.samples.size();
  summary["outputs"] = written;
  summary["settings"] = settings_block(doc_values, cfg, inst);
  emit_summary(summary);
  return 0;
}

int run_verify(const RunConfig& cfg) {
  const fovtopp::ProblemInstance doc_values =
      fovtopp::load_problem_file(cfg.input);
  fovtopp::ProblemInstance inst = doc_values;
  apply_overrides(&inst, cfg);

  const fs::path out(cfg.out_dir);
  fovtopp::Trajectory traj;
  if (fs::exists(out / "trajectory.json")) {
    std::ifstream in(out / "trajectory.json", std::ios::binary);
    if (!in) throw fovtopp::IoError("cannot read trajectory.json");
    std::string doc((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    traj = fovtopp::parse_trajectory_json(doc);
  } else if (fs::exists(out / "trajectory.csv")) {
    std::ifstream in(out / "trajectory.csv", std::ios::binary);
    if (!in) throw fovtopp::IoError("cannot read trajectory.csv");
    std::string doc((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    traj = fovtopp::parse_trajectory_csv(doc);
  } else {
    throw fovtopp::IoError("no trajectory.json or trajectory.csv in " +
                           cfg.out_dir);
  }
  log_info(fmt::format("verifying {} samples against {}", traj.samples.size(),
                       cfg.input));

  const fovtopp::VerificationReport rep =
      fovtopp::verify(traj, inst, cfg.margin_deg);
  write_file(out / "report.json", fovtopp::report_to_json(rep));

  const long violations = rep.fov_violations + rep.cone_violations +
                          rep.thrust_violations + rep.motor_violations;
  json summary = base_summary();
  summary["status"] = violations == 0 ? "ok" : "violations";
  summary["total_time"] = traj.total_time;
  summary["stage1_time"] = nullptr;
  summary["max_fov_slack_deg"] = fov_slack_deg(rep);
  summary["violations"] = {{"fov", rep.fov_violations},
                           {"cone", rep.cone_violations},
                           {"thrust", rep.thrust_violations},
                           {"motor", rep.motor_violations}};
  summary["settings"] = settings_block(doc_values, cfg, inst);
  emit_summary(summary);
  if (violations != 0) {
    std::cerr << "error: " << violations << " constraint violations beyond "
              << cfg.margin_deg << " deg margin\n";
    return 2;
  }
  return 0;
}

int run_oracle_dp(const RunConfig& cfg) {
  const fovtopp::ProblemInstance doc_values =
      fovtopp::load_problem_file(cfg.input);
  fovtopp::ProblemInstance inst = doc_values;
  apply_overrides(&inst, cfg);

  const fovtopp::Grid grid = fovtopp::discretize(inst);
  fovtopp::DpSettings settings;
  settings.h_levels = cfg.h_levels;
  settings.h_cap = cfg.h_cap;
  log_info(fmt::format("dp oracle on grid_n = {} with {} h-levels", grid.n(),
                       settings.h_levels));
  const fovtopp::SquareSpeedProfile prof =
      fovtopp::dp_solve(inst, grid, settings);
  const double t = fovtopp::reconstruct_time(grid, prof).back();

  const fs::path out = ensure_out_dir(cfg.out_dir);
  write_file(out / "profile_dp.csv", profile_csv(prof));

  json summary = base_summary();
  summary["status"] = "ok";
  summary["total_time"] = t;
  summary["stage1_time"] = t;
  summary["max_fov_slack_deg"] = nullptr;
  summary["h_levels"] = settings.h_levels;
  summary["outputs"] = {"profile_dp.csv"};
  summary["settings"] = settings_block(doc_values, cfg, inst);
  emit_summary(summary);
  return 0;
}

int run_oracle_probes(const RunConfig& cfg) {
  const fovtopp::EquivalenceStats eq =
      fovtopp::equivalence_probe(cfg.trials, cfg.seed);
  log_info(fmt::format("equivalence: fov {}/{}/{} cone {}/{}/{} skipped {}",
                       eq.fov_agree, eq.fov_disagree, eq.fov_boundary,
                       eq.cone_agree, eq.cone_disagree, eq.cone_boundary,
                       eq.skipped));

  // Convexity: probe the stage-1 node sets of the input problem at a few
  // evenly spaced grid nodes.
  bool convex_ok = true;
  json convexity = json::array();
  long convexity_trials = std::min<long>(cfg.trials, 1000);
  const fovtopp::ProblemInstance inst = fovtopp::load_problem_file(cfg.input);
  const fovtopp::Grid grid = fovtopp::discretize(inst);
  const std::vector<fovtopp::NodeConstraintSet> cache =
      fovtopp::constraint_cache(inst, grid, 1);
  // Interior nodes only: the endpoint boxes are pinned to a single h value,
  // which rejection sampling cannot hit.
  const int n_probe = std::min<int>(8, grid.n() - 1);
  for (int k = 0; k < n_probe; ++k) {
    const int node = 1 + static_cast<int>(static_cast<long>(k) *
                                          (grid.n() - 2) /
                                          std::max(1, n_probe - 1));
    const double cap = inst.v_max ? (*inst.v_max) * (*inst.v_max) : 50.0;
    const fovtopp::ProbeResult pr = fovtopp::convexity_probe(
        cache[node], convexity_trials, fovtopp::Vec2(0.0, -50.0),
        fovtopp::Vec2(cap, 50.0), cfg.seed + k);
    convex_ok = convex_ok && pr.ok;
    convexity.push_back({{"node", node},
                         {"ok", pr.ok},
                         {"trials", pr.trials_run},
                         {"tag", pr.tag}});
    if (!pr.ok)
      std::cerr << "error: convexity violation at node " << node << " ("
                << pr.tag << "), residual " << pr.residual << "\n";
  }

  const bool clean =
      convex_ok && eq.fov_disagree == 0 && eq.cone_disagree == 0;
  json summary = base_summary();
  summary["status"] = clean ? "ok" : "probe_failure";
  summary["total_time"] = nullptr;
  summary["stage1_time"] = nullptr;
  summary["max_fov_slack_deg"] = nullptr;
  summary["equivalence"] = {{"trials", eq.trials},
                            {"fov_agree", eq.fov_agree},
                            {"fov_disagree", eq.fov_disagree},
                            {"fov_boundary", eq.fov_boundary},
                            {"cone_agree", eq.cone_agree},
                            {"cone_disagree", eq.cone_disagree},
                            {"cone_boundary", eq.cone_boundary},
                            {"skipped", eq.skipped}};
  summary["convexity"] = convexity;
  emit_summary(summary);
  return clean ? 0 : 1;
}

int dispatch(const std::string& sub, const RunConfig& cfg) {
  try {
    if (sub == "solve") return run_solve(cfg);
    if (sub == "verify") return run_verify(cfg);
    if (sub == "oracle-dp") return run_oracle_dp(cfg);
    return run_oracle_probes(cfg);
  } catch (const fovtopp::Infeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    json summary = base_summary();
    summary["status"] = "infeasible";
    summary["stage"] = e.stage();
    summary["sweep"] = fovtopp::to_string(e.phase());
    summary["grid_index"] = e.index();
    emit_summary(summary);
    return 2;
  } catch (const fovtopp::SmoothingDegenerate& e) {
    std::cerr << "error: smoothing degenerate: " << e.what() << "\n";
    json s = base_summary();
    s["status"] = "infeasible";
    emit_summary(s);
    return 2;
  } catch (const fovtopp::DegenerateThrust& e) {
    std::cerr << "error: degenerate thrust: " << e.what() << "\n";
    json s = base_summary();
    s["status"] = "infeasible";
    emit_summary(s);
    return 2;
  } catch (const fovtopp::SingularProfile& e) {
    std::cerr << "error: singular profile: " << e.what() << "\n";
    json s = base_summary();
    s["status"] = "infeasible";
    emit_summary(s);
    return 2;
  } catch (const fovtopp::SamplingExhausted& e) {
    std::cerr << "error: sampling exhausted: " << e.what() << "\n";
    json s = base_summary();
    s["status"] = "infeasible";
    emit_summary(s);
    return 2;
  } catch (const fovtopp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    json s = base_summary();
    emit_summary(s);
    return 4;
  } catch (const fovtopp::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    json s = base_summary();
    emit_summary(s);
    return 3;
  } catch (const fovtopp::ValidationError& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    json s = base_summary();
    s["field"] = e.field();
    emit_summary(s);
    return 3;
  } catch (const fovtopp::LandmarkTooClose& e) {
    std::cerr << "error: " << e.what() << " (node " << e.node()
              << ", landmark " << e.landmark_id() << ")\n";
    json s = base_summary();
    emit_summary(s);
    return 3;
  } catch (const fovtopp::Error& e) {
    // OutOfRange, IrregularPath, InfeasibleBounds: document-level problems.
    std::cerr << "error: " << e.what() << "\n";
    json s = base_summary();
    emit_summary(s);
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: unexpected: " << e.what() << "\n";
    json s = base_summary();
    emit_summary(s);
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perception-aware time-optimal path parameterization"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* solve = app.add_subcommand(
      "solve", "run the three-stage pipeline and write artifacts");
  add_common_flags(solve, &cfg, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "re-check an existing trajectory against a problem document");
  add_common_flags(verify, &cfg, true);

  CLI::App* dp = app.add_subcommand(
      "oracle-dp", "brute-force dynamic-programming speed profile");
  add_common_flags(dp, &cfg, true);
  dp->add_option("--h-levels", cfg.h_levels, "lattice levels (default 400)");
  dp->add_option("--h-cap", cfg.h_cap, "lattice cap; 0 = from speed bounds");

  CLI::App* probes = app.add_subcommand(
      "oracle-probes", "convexity and conic/geometric equivalence probes");
  add_common_flags(probes, &cfg, false);
  probes->add_option("--trials", cfg.trials, "trials (default 10000)");
  probes->add_option("--seed", cfg.seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();
  return dispatch(sub, cfg);
}
