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

// Seeded instance generation. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard. The standard distributions are not, so
// doubles are formed from the top 53 bits of each draw and integers by
// rejection; the same seed gives the same instance on every platform.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sibgame/bodies.hpp"
#include "sibgame/eja.hpp"

namespace sibgame {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform on {lo, ..., hi}.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("UniformInt: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  // Standard normal by Box-Muller (one value per call).
  double Normal() {
    double u1;
    do {
      u1 = Uniform();
    } while (u1 <= 0.0);
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vector UniformVector(Index d, double lo, double hi) {
    Vector v(d);
    for (Index j = 0; j < d; ++j) v[j] = Uniform(lo, hi);
    return v;
  }

  Vector UnitVector(Index d) {
    Vector v(d);
    double norm = 0.0;
    do {
      for (Index j = 0; j < d; ++j) v[j] = Normal();
      norm = v.norm();
    } while (norm < 1e-12);
    return v / norm;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

enum class BodyKind { kPolytope, kReducedPolytope, kAabb, kBall, kEllipsoid };

inline BodyKind ParseBodyKind(const std::string& s) {
  if (s == "polytope") return BodyKind::kPolytope;
  if (s == "reduced_polytope") return BodyKind::kReducedPolytope;
  if (s == "aabb") return BodyKind::kAabb;
  if (s == "ball") return BodyKind::kBall;
  if (s == "ellipsoid") return BodyKind::kEllipsoid;
  throw std::invalid_argument("unknown body kind '" + s + "'");
}

inline const char* BodyKindName(BodyKind k) {
  switch (k) {
    case BodyKind::kPolytope: return "polytope";
    case BodyKind::kReducedPolytope: return "reduced_polytope";
    case BodyKind::kAabb: return "aabb";
    case BodyKind::kBall: return "ball";
    case BodyKind::kEllipsoid: return "ellipsoid";
  }
  return "unknown";
}

// Ranges for generated bodies. Centers are uniform in the cube
// [-center_range, center_range]^d; `size` scales the extent of each body.
struct GenParams {
  double center_range = 10.0;
  double min_size = 0.1;
  double max_size = 2.0;
};

// One body of the given kind around `center`:
//   polytope / reduced polytope: m points center + U[-1,1]^d * s,
//     nu ~ U[1/m, 1];
//   aabb: half-widths U[min_size, max_size] per axis;
//   ball: radius U[min_size, max_size];
//   ellipsoid: Sigma = A^T A / d + I / max_size^2 with A ~ U[-1,1]^{dxd},
//     which keeps every semi-axis at most max_size.
inline ConvexBody GenerateBody(Rng& rng, BodyKind kind, Index d, Index m, const Vector& center,
                               const GenParams& params = {}) {
  switch (kind) {
    case BodyKind::kPolytope:
    case BodyKind::kReducedPolytope: {
      if (m < 1) throw std::invalid_argument("generate: m must be >= 1");
      const double s = rng.Uniform(params.min_size, params.max_size);
      Matrix pts(d, m);
      for (Index j = 0; j < m; ++j) pts.col(j) = center + s * rng.UniformVector(d, -1.0, 1.0);
      if (kind == BodyKind::kPolytope) return Polytope(std::move(pts));
      const double nu = rng.Uniform(1.0 / static_cast<double>(m), 1.0);
      return ReducedPolytope(std::move(pts), std::max(nu, 1.0 / static_cast<double>(m)));
    }
    case BodyKind::kAabb: {
      Vector half(d);
      for (Index j = 0; j < d; ++j) half[j] = rng.Uniform(params.min_size, params.max_size);
      return Aabb(center - half, center + half);
    }
    case BodyKind::kBall:
      return Ball(center, rng.Uniform(params.min_size, params.max_size));
    case BodyKind::kEllipsoid: {
      Matrix a(d, d);
      for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) a(i, j) = rng.Uniform(-1.0, 1.0);
      }
      Matrix sigma = a.transpose() * a / static_cast<double>(d) +
                     Matrix::Identity(d, d) / (params.max_size * params.max_size);
      sigma = 0.5 * (sigma + sigma.transpose());
      return Ellipsoid(center, std::move(sigma));
    }
  }
  throw std::invalid_argument("generate: unknown kind");
}

inline std::vector<ConvexBody> GenerateBodies(Rng& rng, BodyKind kind, Index n, Index d, Index m,
                                              const GenParams& params = {}) {
  if (n < 1 || d < 1) throw std::invalid_argument("generate: n and d must be >= 1");
  std::vector<ConvexBody> bodies;
  bodies.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Vector c = rng.UniformVector(d, -params.center_range, params.center_range);
    bodies.push_back(GenerateBody(rng, kind, d, m, c, params));
  }
  return bodies;
}

}  // namespace sibgame
