// Copyright 2026 The sibgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON instance and result files.
//
// Instance:
//   { "dimension": 2, "mode": "hard" | "soft", "C": 0.5, "epsilon": 0.05,
//     "bodies": [ {"type": "polytope", "points": [[0, 0], [1, 0]]},
//                 {"type": "reduced_polytope", "points": [...], "nu": 0.5},
//                 {"type": "aabb", "lo": [...], "hi": [...]},
//                 {"type": "ball", "center": [...], "radius": 1},
//                 {"type": "ellipsoid", "center": [...], "sigma": [[...], ...]} ] }
//
// Matrices are row-major lists of rows. Doubles are written in the shortest
// form that reads back to the same bits.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sibgame/bodies.hpp"
#include "sibgame/eja.hpp"

namespace sibgame {

using Json = nlohmann::json;

// Validation failure; the message starts with the offending field path.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceFile {
  Index dimension = 0;
  std::vector<ConvexBody> bodies;
  std::string mode = "hard";
  std::optional<double> C;
  double epsilon = 0.05;
};

namespace io_internal {

inline const Json& Field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "." + key + ": missing field");
  return *it;
}

inline double Number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(path + ": must be finite");
  return v;
}

inline Vector ReadVector(const Json& j, Index d, const std::string& path) {
  if (!j.is_array()) throw InputError(path + ": expected an array of numbers");
  if (d >= 0 && static_cast<Index>(j.size()) != d) {
    throw InputError(path + ": expected length " + std::to_string(d) + ", got " +
                     std::to_string(j.size()));
  }
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = Number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

// Nonempty list of length-d points, returned as the columns of a d x m matrix.
inline Matrix ReadPoints(const Json& j, Index d, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InputError(path + ": expected a nonempty array of points");
  Matrix m(d, static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    m.col(static_cast<Index>(i)) = ReadVector(j[i], d, path + "[" + std::to_string(i) + "]");
  }
  return m;
}

inline Json WriteVector(const Eigen::Ref<const Vector>& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Json WriteColumns(const Matrix& m) {
  Json a = Json::array();
  for (Index j = 0; j < m.cols(); ++j) a.push_back(WriteVector(m.col(j)));
  return a;
}

inline Json WriteRows(const Matrix& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(WriteVector(m.row(i).transpose()));
  return a;
}

template <class F>
auto Construct(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace io_internal

inline ConvexBody ParseBody(const Json& j, Index d, const std::string& path) {
  using namespace io_internal;
  const Json& type = Field(j, "type", path);
  if (!type.is_string()) throw InputError(path + ".type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "polytope") {
    Matrix pts = ReadPoints(Field(j, "points", path), d, path + ".points");
    return Construct(path, [&] { return ConvexBody(Polytope(std::move(pts))); });
  }
  if (t == "reduced_polytope") {
    Matrix pts = ReadPoints(Field(j, "points", path), d, path + ".points");
    const double nu = Number(Field(j, "nu", path), path + ".nu");
    const double m = static_cast<double>(pts.cols());
    if (!(nu <= 1.0) || !(nu * m >= 1.0 - 1e-12)) {
      throw InputError(path + ".nu: must lie in [1/m, 1] with m = " +
                       std::to_string(pts.cols()) + ", got " + std::to_string(nu));
    }
    return Construct(path, [&] { return ConvexBody(ReducedPolytope(std::move(pts), nu)); });
  }
  if (t == "aabb") {
    Vector lo = ReadVector(Field(j, "lo", path), d, path + ".lo");
    Vector hi = ReadVector(Field(j, "hi", path), d, path + ".hi");
    for (Index k = 0; k < d; ++k) {
      if (lo[k] > hi[k]) {
        throw InputError(path + ".lo[" + std::to_string(k) + "]: exceeds hi[" +
                         std::to_string(k) + "]");
      }
    }
    return Construct(path, [&] { return ConvexBody(Aabb(std::move(lo), std::move(hi))); });
  }
  if (t == "ball") {
    Vector c = ReadVector(Field(j, "center", path), d, path + ".center");
    const double r = Number(Field(j, "radius", path), path + ".radius");
    if (r < 0.0) throw InputError(path + ".radius: must be >= 0");
    return Construct(path, [&] { return ConvexBody(Ball(std::move(c), r)); });
  }
  if (t == "ellipsoid") {
    Vector c = ReadVector(Field(j, "center", path), d, path + ".center");
    const Json& s = Field(j, "sigma", path);
    if (!s.is_array() || static_cast<Index>(s.size()) != d) {
      throw InputError(path + ".sigma: expected " + std::to_string(d) + " rows");
    }
    Matrix sigma(d, d);
    for (Index r = 0; r < d; ++r) {
      sigma.row(r) = ReadVector(s[static_cast<size_t>(r)], d,
                                path + ".sigma[" + std::to_string(r) + "]")
                         .transpose();
    }
    return Construct(path + ".sigma",
                     [&] { return ConvexBody(Ellipsoid(std::move(c), std::move(sigma))); });
  }
  throw InputError(path + ".type: unknown body type '" + t + "'");
}

inline InstanceFile ParseInstance(const Json& j) {
  using namespace io_internal;
  if (!j.is_object()) throw InputError("$: expected a JSON object");
  InstanceFile f;
  const Json& dim = Field(j, "dimension", "$");
  if (!dim.is_number_integer() || dim.get<std::int64_t>() < 1) {
    throw InputError("dimension: expected a positive integer");
  }
  f.dimension = dim.get<Index>();
  const Json& bodies = Field(j, "bodies", "$");
  if (!bodies.is_array()) throw InputError("bodies: expected an array");
  for (size_t i = 0; i < bodies.size(); ++i) {
    f.bodies.push_back(ParseBody(bodies[i], f.dimension, "bodies[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("mode"); it != j.end()) {
    if (!it->is_string()) throw InputError("mode: expected \"hard\" or \"soft\"");
    f.mode = it->get<std::string>();
    if (f.mode != "hard" && f.mode != "soft") {
      throw InputError("mode: expected \"hard\" or \"soft\", got '" + f.mode + "'");
    }
  }
  if (auto it = j.find("C"); it != j.end()) {
    f.C = Number(*it, "C");
    if (!(*f.C > 0.0)) throw InputError("C: must be positive");
  }
  if (auto it = j.find("epsilon"); it != j.end()) {
    f.epsilon = Number(*it, "epsilon");
    if (!(f.epsilon > 0.0)) throw InputError("epsilon: must be positive");
  }
  return f;
}

inline InstanceFile ParseInstanceText(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("$: malformed JSON: ") + e.what());
  }
  return ParseInstance(j);
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline InstanceFile LoadInstance(const std::string& path) {
  return ParseInstanceText(ReadFile(path));
}

inline Json EmitBody(const ConvexBody& body) {
  using namespace io_internal;
  Json j;
  j["type"] = BodyTypeName(body);
  if (const auto* b = std::get_if<Polytope>(&body)) {
    j["points"] = WriteColumns(b->points());
  } else if (const auto* b = std::get_if<ReducedPolytope>(&body)) {
    j["points"] = WriteColumns(b->points());
    j["nu"] = b->nu();
  } else if (const auto* b = std::get_if<Aabb>(&body)) {
    j["lo"] = WriteVector(b->lo());
    j["hi"] = WriteVector(b->hi());
  } else if (const auto* b = std::get_if<Ball>(&body)) {
    j["center"] = WriteVector(b->center());
    j["radius"] = b->radius();
  } else {
    const auto& e = std::get<Ellipsoid>(body);
    j["center"] = WriteVector(e.center());
    j["sigma"] = WriteRows(e.sigma());
  }
  return j;
}

inline Json EmitInstance(const InstanceFile& f) {
  Json j;
  j["dimension"] = f.dimension;
  j["mode"] = f.mode;
  if (f.C) j["C"] = *f.C;
  j["epsilon"] = f.epsilon;
  Json bodies = Json::array();
  for (const auto& b : f.bodies) bodies.push_back(EmitBody(b));
  j["bodies"] = std::move(bodies);
  return j;
}

struct ResultFile {
  std::string mode = "hard";
  std::string status = "converged";
  bool converged = true;
  double radius = 0.0;
  Vector center;
  Matrix witnesses;  // d x n
  std::optional<Vector> slacks;
  std::optional<double> objective;
  double nu_x = 0.0;
  double nu_y = 0.0;
  std::int64_t iterations = 0;
  std::int64_t width_doublings = 0;
  std::optional<std::int64_t> radius_halvings;
  std::optional<std::int64_t> bracket_steps;
  double wall_time_ms = 0.0;
};

inline Json EmitResult(const ResultFile& r) {
  using namespace io_internal;
  Json j;
  j["mode"] = r.mode;
  j["status"] = r.status;
  j["converged"] = r.converged;
  j["radius"] = r.radius;
  j["center"] = WriteVector(r.center);
  j["witnesses"] = WriteColumns(r.witnesses);
  if (r.slacks) j["slacks"] = WriteVector(*r.slacks);
  if (r.objective) j["objective"] = *r.objective;
  j["nu_x"] = r.nu_x;
  j["nu_y"] = r.nu_y;
  j["iterations"] = r.iterations;
  j["width_doublings"] = r.width_doublings;
  if (r.radius_halvings) j["radius_halvings"] = *r.radius_halvings;
  if (r.bracket_steps) j["bracket_steps"] = *r.bracket_steps;
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

inline ResultFile ParseResult(const Json& j) {
  using namespace io_internal;
  ResultFile r;
  r.mode = Field(j, "mode", "$").get<std::string>();
  r.status = Field(j, "status", "$").get<std::string>();
  r.converged = Field(j, "converged", "$").get<bool>();
  r.radius = Number(Field(j, "radius", "$"), "radius");
  r.center = ReadVector(Field(j, "center", "$"), -1, "center");
  const Index d = r.center.size();
  const Json& w = Field(j, "witnesses", "$");
  r.witnesses = w.empty() ? Matrix(d, 0) : ReadPoints(w, d, "witnesses");
  if (j.contains("slacks")) r.slacks = ReadVector(j["slacks"], -1, "slacks");
  if (j.contains("objective")) r.objective = Number(j["objective"], "objective");
  r.nu_x = Number(Field(j, "nu_x", "$"), "nu_x");
  r.nu_y = Number(Field(j, "nu_y", "$"), "nu_y");
  r.iterations = Field(j, "iterations", "$").get<std::int64_t>();
  r.width_doublings = Field(j, "width_doublings", "$").get<std::int64_t>();
  if (j.contains("radius_halvings")) r.radius_halvings = j["radius_halvings"].get<std::int64_t>();
  if (j.contains("bracket_steps")) r.bracket_steps = j["bracket_steps"].get<std::int64_t>();
  r.wall_time_ms = Number(Field(j, "wall_time_ms", "$"), "wall_time_ms");
  return r;
}

}  // namespace sibgame
