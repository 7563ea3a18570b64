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

#include <stdexcept>
#include <string>

namespace fovtopp {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem-document syntax error (bad JSON, wrong shape).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed document that violates a model invariant. `field` names the
// offending entry when known.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Query parameter outside the path domain [0, S_end].
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// ||gamma'(s)|| vanished at a grid node; the reparameterization needs a
// regular path.
class IrregularPath : public Error {
 public:
  using Error::Error;
};

// Lower speed bound exceeds the upper one somewhere.
class InfeasibleBounds : public Error {
 public:
  using Error::Error;
};

// Thrust vector too small or parallel to the body-y target; no attitude can
// be recovered from it.
class DegenerateAttitude : public Error {
 public:
  using Error::Error;
};

// Landmark inside the ball where the cone offset becomes imaginary.
class LandmarkTooClose : public Error {
 public:
  LandmarkTooClose(const std::string& what, int node = -1, int landmark_id = -1)
      : Error(what), node_(node), landmark_id_(landmark_id) {}
  int node() const { return node_; }
  int landmark_id() const { return landmark_id_; }

 private:
  int node_;
  int landmark_id_;
};

// Profile-implied thrust vanished; no direction to smooth.
class DegenerateThrust : public Error {
 public:
  using Error::Error;
};

// Smoothed z field collapsed (antipodal cancellation) or the attitude
// construction degenerated at some node.
class SmoothingDegenerate : public Error {
 public:
  using Error::Error;
};

// A profile segment with zero speed at both ends has no finite traversal
// time.
class SingularProfile : public Error {
 public:
  using Error::Error;
};

// Rejection sampling found no feasible point within the attempt budget.
class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure while reading or writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

// One propagation step found an empty two-variable feasible set. Internal to
// the sweeps; backward_forward translates it into Infeasible.
class StepInfeasible : public Error {
 public:
  using Error::Error;
};

enum class SweepPhase { kBackward, kForward };

inline const char* to_string(SweepPhase phase) {
  return phase == SweepPhase::kBackward ? "backward" : "forward";
}

// The instance admits no feasible profile; carries which stage, which sweep,
// and the grid index where the intervals collapsed.
class Infeasible : public Error {
 public:
  Infeasible(int stage, SweepPhase phase, int index)
      : Error("infeasible at stage " + std::to_string(stage) + ", " +
              to_string(phase) + " sweep, grid index " + std::to_string(index)),
        stage_(stage),
        phase_(phase),
        index_(index) {}
  int stage() const { return stage_; }
  SweepPhase phase() const { return phase_; }
  int index() const { return index_; }

 private:
  int stage_;
  SweepPhase phase_;
  int index_;
};

}  // namespace fovtopp
