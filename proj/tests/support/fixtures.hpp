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

#ifndef FOVTOPP_TESTS_SUPPORT_FIXTURES_HPP_
#define FOVTOPP_TESTS_SUPPORT_FIXTURES_HPP_

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fovtopp/pathspec.hpp"

namespace fovtopp {
namespace testing {

// C2 curve sampled at m+1 knots and interpolated with quintic Hermite
// segments (value, first and second derivative matched at every knot).
using CurveFn =
    std::function<void(double s, Vec3* f, Vec3* d1, Vec3* d2)>;

PolySegment hermite_segment(double s0, double s1, const Vec3& f0,
                            const Vec3& d0, const Vec3& dd0, const Vec3& f1,
                            const Vec3& d1, const Vec3& dd1);

std::vector<PolySegment> hermite_path(const CurveFn& curve, double s_end,
                                      int segments);

// JSON coefficient rows for a list of gamma segments.
nlohmann::json segments_json(const std::vector<PolySegment>& segs);

// Benchmark problem documents. Every builder returns a full problem document
// accepted by load_problem.
nlohmann::json bangbang_doc();             // straight 10 m, rest-to-rest
nlohmann::json spiral_doc();               // center landmark, defaults eta/sigma
nlohmann::json circle_doc();               // planar circle, inward camera
nlohmann::json scurve_doc();               // attitude cone actively binding
nlohmann::json helix_doc();                // climbing circle, cone + floor
nlohmann::json fovline_doc();              // straight line, landmark ahead
nlohmann::json random_cubic_doc(int k);    // k in [0, 10); 3 and 7 infeasible

// The feasible end-to-end benchmark suite (doc name, document).
std::vector<std::pair<std::string, nlohmann::json>> fixture_suite();

ProblemInstance load(const nlohmann::json& doc);

}  // namespace testing
}  // namespace fovtopp

#endif  // FOVTOPP_TESTS_SUPPORT_FIXTURES_HPP_
