# Copyright 2026 The fovtopp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Perception-aware time-optimal path parameterization for quadrotors."""

from ._fovtopp import (
    DpSettings,
    Error,
    Grid,
    Infeasible,
    InfeasibleBounds,
    IoError,
    ParseError,
    ProblemInstance,
    RotationSchedule,
    SolveResult,
    SquareSpeedProfile,
    Trajectory,
    ValidationError,
    VerificationReport,
    backward_forward,
    discretize,
    dp_solve,
    load_problem,
    load_problem_file,
    reconstruct_time,
    report_to_json,
    sample_trajectory,
    serialize,
    solve,
    verify,
)

__all__ = [
    "DpSettings",
    "Error",
    "Grid",
    "Infeasible",
    "InfeasibleBounds",
    "IoError",
    "ParseError",
    "ProblemInstance",
    "RotationSchedule",
    "SolveResult",
    "SquareSpeedProfile",
    "Trajectory",
    "ValidationError",
    "VerificationReport",
    "backward_forward",
    "discretize",
    "dp_solve",
    "load_problem",
    "load_problem_file",
    "reconstruct_time",
    "report_to_json",
    "sample_trajectory",
    "serialize",
    "solve",
    "verify",
]

__version__ = "0.1.0"
