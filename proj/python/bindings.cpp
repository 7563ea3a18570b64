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
//
// Python bindings for the solver pipeline: load a problem document, run the
// two-sweep solve, sample and verify the trajectory. Heavy per-sample data
// crosses the boundary as numpy arrays rather than object lists.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "fovtopp/errors.hpp"
#include "fovtopp/oracle.hpp"
#include "fovtopp/pathspec.hpp"
#include "fovtopp/profilesolver.hpp"
#include "fovtopp/trajout.hpp"

namespace py = pybind11;

namespace {

using RowMajorX =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMajorX stack_vec3(const fovtopp::Trajectory& traj,
                     fovtopp::Vec3 fovtopp::TrajectorySample::*field) {
  RowMajorX out(traj.samples.size(), 3);
  for (size_t i = 0; i < traj.samples.size(); ++i)
    out.row(i) = (traj.samples[i].*field).transpose();
  return out;
}

std::vector<double> scalar_column(const fovtopp::Trajectory& traj,
                                  double fovtopp::TrajectorySample::*field) {
  std::vector<double> out;
  out.reserve(traj.samples.size());
  for (const auto& sample : traj.samples) out.push_back(sample.*field);
  return out;
}

}  // namespace

PYBIND11_MODULE(_fovtopp, m) {
  m.doc() =
      "Perception-aware time-optimal path parameterization for quadrotors";

  auto err = py::register_exception<fovtopp::Error>(m, "Error");
  py::register_exception<fovtopp::ParseError>(m, "ParseError", err.ptr());
  py::register_exception<fovtopp::ValidationError>(m, "ValidationError",
                                                   err.ptr());
  py::register_exception<fovtopp::InfeasibleBounds>(m, "InfeasibleBounds",
                                                    err.ptr());
  py::register_exception<fovtopp::Infeasible>(m, "Infeasible", err.ptr());
  py::register_exception<fovtopp::IoError>(m, "IoError", err.ptr());

  py::class_<fovtopp::ProblemInstance>(m, "ProblemInstance")
      .def_readonly("grid_n", &fovtopp::ProblemInstance::grid_n)
      .def_readonly("h_start", &fovtopp::ProblemInstance::h_start)
      .def_readonly("h_end", &fovtopp::ProblemInstance::h_end)
      .def_readonly("eta", &fovtopp::ProblemInstance::eta)
      .def_readonly("eps_h", &fovtopp::ProblemInstance::eps_h)
      .def_property_readonly(
          "v_max",
          [](const fovtopp::ProblemInstance& inst) {
            return inst.v_max ? py::cast(*inst.v_max)
                              : py::object(py::none());
          })
      .def_property_readonly("sigma",
                             &fovtopp::ProblemInstance::sigma_value)
      .def_property_readonly(
          "s_end",
          [](const fovtopp::ProblemInstance& inst) {
            return inst.path.s_end;
          })
      .def("__repr__", [](const fovtopp::ProblemInstance& inst) {
        return "<ProblemInstance s_end=" + std::to_string(inst.path.s_end) +
               " grid_n=" + std::to_string(inst.grid_n) + ">";
      });

  py::class_<fovtopp::Grid>(m, "Grid")
      .def_readonly("ds", &fovtopp::Grid::ds)
      .def_readonly("s_end", &fovtopp::Grid::s_end)
      .def_property_readonly("n", &fovtopp::Grid::n)
      .def("s", [](const fovtopp::Grid& grid) {
        std::vector<double> out;
        out.reserve(grid.nodes.size());
        for (const auto& node : grid.nodes) out.push_back(node.s);
        return out;
      });

  py::class_<fovtopp::SquareSpeedProfile>(m, "SquareSpeedProfile")
      .def_readonly("h", &fovtopp::SquareSpeedProfile::h)
      .def_readonly("l", &fovtopp::SquareSpeedProfile::l);

  py::class_<fovtopp::RotationSchedule>(m, "RotationSchedule")
      .def_readonly("sigma", &fovtopp::RotationSchedule::sigma)
      .def_readonly("R", &fovtopp::RotationSchedule::R);

  py::class_<fovtopp::SolveResult>(m, "SolveResult")
      .def_readonly("stage1", &fovtopp::SolveResult::stage1)
      .def_readonly("stage2", &fovtopp::SolveResult::stage2)
      .def_readonly("schedule", &fovtopp::SolveResult::schedule);

  py::class_<fovtopp::Trajectory>(m, "Trajectory")
      .def_readonly("total_time", &fovtopp::Trajectory::total_time)
      .def("__len__",
           [](const fovtopp::Trajectory& traj) { return traj.samples.size(); })
      .def("times",
           [](const fovtopp::Trajectory& traj) {
             return scalar_column(traj, &fovtopp::TrajectorySample::t);
           })
      .def("arclengths",
           [](const fovtopp::Trajectory& traj) {
             return scalar_column(traj, &fovtopp::TrajectorySample::s);
           })
      .def("positions",
           [](const fovtopp::Trajectory& traj) {
             return stack_vec3(traj, &fovtopp::TrajectorySample::position);
           })
      .def("velocities",
           [](const fovtopp::Trajectory& traj) {
             return stack_vec3(traj, &fovtopp::TrajectorySample::velocity);
           })
      .def("accelerations",
           [](const fovtopp::Trajectory& traj) {
             return stack_vec3(traj, &fovtopp::TrajectorySample::acceleration);
           })
      .def("omegas",
           [](const fovtopp::Trajectory& traj) {
             return stack_vec3(traj, &fovtopp::TrajectorySample::omega);
           })
      .def("rotations",
           [](const fovtopp::Trajectory& traj) {
             std::vector<fovtopp::Mat3> out;
             out.reserve(traj.samples.size());
             for (const auto& sample : traj.samples) out.push_back(sample.R);
             return out;
           })
      .def("motors", [](const fovtopp::Trajectory& traj) {
        RowMajorX out(traj.samples.size(), 4);
        for (size_t i = 0; i < traj.samples.size(); ++i)
          out.row(i) = traj.samples[i].motors.transpose();
        return out;
      });

  py::class_<fovtopp::VerificationReport>(m, "VerificationReport")
      .def_readonly("margin_deg", &fovtopp::VerificationReport::margin_deg)
      .def_readonly("has_fov", &fovtopp::VerificationReport::has_fov)
      .def_readonly("min_fov_slack_rad",
                    &fovtopp::VerificationReport::min_fov_slack_rad)
      .def_readonly("min_fov_slack_thrust_rad",
                    &fovtopp::VerificationReport::min_fov_slack_thrust_rad)
      .def_readonly("min_cone_slack_rad",
                    &fovtopp::VerificationReport::min_cone_slack_rad)
      .def_readonly("min_thrust_slack",
                    &fovtopp::VerificationReport::min_thrust_slack)
      .def_readonly("min_motor_slack",
                    &fovtopp::VerificationReport::min_motor_slack)
      .def_readonly("max_nonholonomy",
                    &fovtopp::VerificationReport::max_nonholonomy)
      .def_readonly("fov_violations",
                    &fovtopp::VerificationReport::fov_violations)
      .def_readonly("cone_violations",
                    &fovtopp::VerificationReport::cone_violations)
      .def_readonly("thrust_violations",
                    &fovtopp::VerificationReport::thrust_violations)
      .def_readonly("motor_violations",
                    &fovtopp::VerificationReport::motor_violations)
      .def("ok", [](const fovtopp::VerificationReport& rep) {
        return rep.fov_violations == 0 && rep.cone_violations == 0 &&
               rep.thrust_violations == 0 && rep.motor_violations == 0;
      });

  py::class_<fovtopp::DpSettings>(m, "DpSettings")
      .def(py::init([](int h_levels, double h_cap) {
             fovtopp::DpSettings settings;
             settings.h_levels = h_levels;
             settings.h_cap = h_cap;
             return settings;
           }),
           py::arg("h_levels") = 400, py::arg("h_cap") = 0.0)
      .def_readwrite("h_levels", &fovtopp::DpSettings::h_levels)
      .def_readwrite("h_cap", &fovtopp::DpSettings::h_cap);

  m.def("load_problem", &fovtopp::load_problem, py::arg("document"),
        "Parse a problem document (JSON text) into a ProblemInstance.");
  m.def("load_problem_file", &fovtopp::load_problem_file, py::arg("path"),
        "Read and parse a problem document from a file.");
  m.def("discretize",
        py::overload_cast<const fovtopp::ProblemInstance&>(
            &fovtopp::discretize),
        py::arg("instance"),
        "Uniform grid over [0, s_end] with instance.grid_n intervals.");
  m.def("solve", &fovtopp::solve, py::arg("instance"),
        py::call_guard<py::gil_scoped_release>(),
        "Stage 1 sweep, attitude smoothing, stage 2 sweep.");
  m.def(
      "backward_forward",
      [](const fovtopp::ProblemInstance& instance, const fovtopp::Grid& grid,
         int stage) { return fovtopp::backward_forward(instance, grid, stage); },
      py::arg("instance"), py::arg("grid"), py::arg("stage") = 1,
      py::call_guard<py::gil_scoped_release>(),
      "One two-sweep pass (stage 1 has no attitude tube).");
  m.def("reconstruct_time", &fovtopp::reconstruct_time, py::arg("grid"),
        py::arg("profile"),
        "Node timestamps t_0 = 0 .. t_n = T for a square-speed profile.");
  m.def("sample_trajectory", &fovtopp::sample_trajectory, py::arg("instance"),
        py::arg("grid"), py::arg("profile"), py::arg("schedule"),
        py::arg("dt") = 0.005, py::call_guard<py::gil_scoped_release>(),
        "Uniform-dt flat-output samples plus the exact final time.");
  m.def("verify", &fovtopp::verify, py::arg("trajectory"), py::arg("instance"),
        py::arg("margin_deg") = 2.0,
        py::call_guard<py::gil_scoped_release>(),
        "Independent geometric re-check of every constraint.");
  m.def("serialize", &fovtopp::serialize, py::arg("trajectory"),
        py::arg("report"), py::arg("format") = "json",
        "Render the trajectory and report summary as 'json' or 'csv'.");
  m.def("report_to_json", &fovtopp::report_to_json, py::arg("report"),
        "The report-summary object as a JSON string.");
  m.def("dp_solve", &fovtopp::dp_solve, py::arg("instance"), py::arg("grid"),
        py::arg("settings") = fovtopp::DpSettings{},
        py::call_guard<py::gil_scoped_release>(),
        "Reference dynamic-programming solve on an h lattice (grid_n <= "
        "200).");
}
