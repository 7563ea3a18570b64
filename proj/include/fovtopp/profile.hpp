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

#ifndef FOVTOPP_PROFILE_HPP_
#define FOVTOPP_PROFILE_HPP_

#include <limits>
#include <vector>

#include "fovtopp/pathspec.hpp"

namespace fovtopp {

/// Closed interval [lo, hi]; empty when lo > hi.
struct Interval {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  bool empty() const { return !(lo <= hi); }
  static Interval all() {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }
  static Interval none() { return {}; }
  Interval intersect(const Interval& o) const {
    return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
  }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Square-speed profile on a grid: per-node squared speed h_i (the flown
/// value, i.e. the upper feasible-interval endpoint) and the lower interval
/// endpoint l_i kept for diagnostics.
struct SquareSpeedProfile {
  Grid grid;
  std::vector<double> h;
  std::vector<double> l;
};

}  // namespace fovtopp

#endif  // FOVTOPP_PROFILE_HPP_
