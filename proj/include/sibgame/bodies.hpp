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

// Compact convex bodies and their linear minimization oracles.
//
// Every body answers lmo(h) = argmin { h.u : u in body } exactly. Polytope
// answers also report the convex-combination coefficients of the returned
// point over the generating points, so that membership of averaged points can
// be certified without a hull-membership LP.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sibgame/eja.hpp"

namespace sibgame {

// conv{p_1, ..., p_m}; points are the columns of a d x m matrix.
class Polytope {
 public:
  explicit Polytope(Matrix points) : points_(std::move(points)) {
    if (points_.cols() < 1) throw std::invalid_argument("polytope: needs at least one point");
    if (points_.rows() < 1) throw std::invalid_argument("polytope: dimension must be >= 1");
    if (!points_.allFinite()) throw std::invalid_argument("polytope: non-finite coordinate");
  }

  Index dim() const { return points_.rows(); }
  Index size() const { return points_.cols(); }
  const Matrix& points() const { return points_; }

 private:
  Matrix points_;
};

// { V lambda : sum lambda = 1, 0 <= lambda <= nu } with 1/m <= nu <= 1.
class ReducedPolytope {
 public:
  ReducedPolytope(Matrix points, double nu) : points_(std::move(points)), nu_(nu) {
    if (points_.cols() < 1) throw std::invalid_argument("reduced_polytope: needs at least one point");
    if (points_.rows() < 1) throw std::invalid_argument("reduced_polytope: dimension must be >= 1");
    if (!points_.allFinite()) throw std::invalid_argument("reduced_polytope: non-finite coordinate");
    const double m = static_cast<double>(points_.cols());
    // 1/m is not exactly representable for most m; allow one ulp-ish of slack.
    if (!(nu_ <= 1.0) || !(nu_ * m >= 1.0 - 1e-12)) {
      throw std::invalid_argument("reduced_polytope: nu must lie in [1/m, 1]");
    }
    // Smallest k with k * nu >= 1. A plain ceil(1/nu) overshoots when 1/nu
    // rounds up past an integer.
    k_ = static_cast<Index>(std::ceil(1.0 / nu_));
    while (k_ > 1 && static_cast<double>(k_ - 1) * nu_ >= 1.0 - 1e-12) --k_;
    k_ = std::min<Index>(k_, points_.cols());
    last_weight_ = std::clamp(1.0 - nu_ * static_cast<double>(k_ - 1), 0.0, nu_);
  }

  Index dim() const { return points_.rows(); }
  Index size() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  double nu() const { return nu_; }
  Index k() const { return k_; }
  double last_weight() const { return last_weight_; }

 private:
  Matrix points_;
  double nu_;
  Index k_ = 1;
  double last_weight_ = 1.0;
};

class Aabb {
 public:
  Aabb(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.size() < 1) {
      throw std::invalid_argument("aabb: lo and hi must have the same positive length");
    }
    if (!lo_.allFinite() || !hi_.allFinite()) throw std::invalid_argument("aabb: non-finite bound");
    if ((lo_.array() > hi_.array()).any()) throw std::invalid_argument("aabb: lo must be <= hi");
  }

  Index dim() const { return lo_.size(); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }

 private:
  Vector lo_;
  Vector hi_;
};

class Ball {
 public:
  Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
    if (center_.size() < 1) throw std::invalid_argument("ball: dimension must be >= 1");
    if (!center_.allFinite()) throw std::invalid_argument("ball: non-finite center");
    if (!(radius_ >= 0.0) || !std::isfinite(radius_)) {
      throw std::invalid_argument("ball: radius must be finite and >= 0");
    }
  }

  Index dim() const { return center_.size(); }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vector center_;
  double radius_;
};

// { v : (v - c)^T Sigma (v - c) <= 1 } with Sigma symmetric positive definite.
class Ellipsoid {
 public:
  Ellipsoid(Vector center, Matrix sigma) : center_(std::move(center)), sigma_(std::move(sigma)) {
    const Index d = center_.size();
    if (d < 1) throw std::invalid_argument("ellipsoid: dimension must be >= 1");
    if (sigma_.rows() != d || sigma_.cols() != d) {
      throw std::invalid_argument("ellipsoid: sigma must be d x d");
    }
    if (!center_.allFinite() || !sigma_.allFinite()) {
      throw std::invalid_argument("ellipsoid: non-finite entry");
    }
    const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
    if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw std::invalid_argument("ellipsoid: sigma must be symmetric");
    }
    Eigen::LLT<Matrix> llt(sigma_);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("ellipsoid: sigma must be positive definite");
    }
    chol_lower_ = llt.matrixL();
    sigma_inv_ = llt.solve(Matrix::Identity(d, d));
    sigma_inv_ = 0.5 * (sigma_inv_ + sigma_inv_.transpose());
    if (!sigma_inv_.allFinite() ||
        ((sigma_ * sigma_inv_) - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8) {
      throw std::invalid_argument("ellipsoid: sigma is too ill-conditioned to invert");
    }
  }

  Index dim() const { return center_.size(); }
  const Vector& center() const { return center_; }
  const Matrix& sigma() const { return sigma_; }
  const Matrix& sigma_inv() const { return sigma_inv_; }
  // Lower Cholesky factor L with Sigma = L L^T.
  const Matrix& cholesky_lower() const { return chol_lower_; }

 private:
  Vector center_;
  Matrix sigma_;
  Matrix sigma_inv_;
  Matrix chol_lower_;
};

using ConvexBody = std::variant<Polytope, ReducedPolytope, Aabb, Ball, Ellipsoid>;

inline Index BodyDim(const ConvexBody& body) {
  return std::visit([](const auto& b) { return b.dim(); }, body);
}

inline bool IsPolytopal(const ConvexBody& body) {
  return std::holds_alternative<Polytope>(body) || std::holds_alternative<ReducedPolytope>(body);
}

// Number of generating points for polytopal bodies, 0 otherwise.
inline Index GeneratorCount(const ConvexBody& body) {
  if (const auto* p = std::get_if<Polytope>(&body)) return p->size();
  if (const auto* p = std::get_if<ReducedPolytope>(&body)) return p->size();
  return 0;
}

inline const char* BodyTypeName(const ConvexBody& body) {
  static constexpr const char* kNames[] = {"polytope", "reduced_polytope", "aabb", "ball",
                                           "ellipsoid"};
  return kNames[body.index()];
}

// Throws unless the list is nonempty and dimension-homogeneous; returns d.
inline Index ValidateBodies(const std::vector<ConvexBody>& bodies) {
  if (bodies.empty()) throw std::invalid_argument("bodies: list is empty");
  const Index d = BodyDim(bodies.front());
  for (size_t i = 1; i < bodies.size(); ++i) {
    if (BodyDim(bodies[i]) != d) {
      throw std::invalid_argument("bodies[" + std::to_string(i) + "]: dimension mismatch");
    }
  }
  return d;
}

// The body moved by -w. The solvers work in a frame centered at one of the
// bodies so that exactly representable translations give identical runs.
inline ConvexBody ShiftedBy(const ConvexBody& body, const Vector& w) {
  if (const auto* b = std::get_if<Polytope>(&body)) return Polytope(b->points().colwise() - w);
  if (const auto* b = std::get_if<ReducedPolytope>(&body)) {
    return ReducedPolytope(b->points().colwise() - w, b->nu());
  }
  if (const auto* b = std::get_if<Aabb>(&body)) return Aabb(b->lo() - w, b->hi() - w);
  if (const auto* b = std::get_if<Ball>(&body)) return Ball(b->center() - w, b->radius());
  const auto& e = std::get<Ellipsoid>(body);
  return Ellipsoid(e.center() - w, e.sigma());
}

// A point read directly off the body data (no arithmetic), used as the
// origin of that frame.
inline Vector FramePoint(const ConvexBody& body) {
  if (const auto* b = std::get_if<Polytope>(&body)) return b->points().col(0);
  if (const auto* b = std::get_if<ReducedPolytope>(&body)) return b->points().col(0);
  if (const auto* b = std::get_if<Aabb>(&body)) return b->lo();
  if (const auto* b = std::get_if<Ball>(&body)) return b->center();
  return std::get<Ellipsoid>(body).center();
}

inline std::vector<ConvexBody> ShiftedBy(const std::vector<ConvexBody>& bodies, const Vector& w) {
  std::vector<ConvexBody> out;
  out.reserve(bodies.size());
  for (const auto& b : bodies) out.push_back(ShiftedBy(b, w));
  return out;
}

struct LmoResult {
  Vector point;
  double value = 0.0;
  // Convex-combination weights over the generating points (polytopal bodies
  // only; empty otherwise).
  Vector coefficients;
};

namespace internal {

// Indices of the k smallest entries of s, ordered by (value, index). Only the
// k-th smallest is placed exactly; the first k-1 are in unspecified order.
inline void SelectSmallest(const Vector& s, Index k, std::vector<Index>& order) {
  order.resize(static_cast<size_t>(s.size()));
  std::iota(order.begin(), order.end(), Index{0});
  auto less = [&s](Index a, Index b) { return s[a] < s[b] || (s[a] == s[b] && a < b); };
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), less);
}

inline double LmoImpl(const Polytope& b, const Eigen::Ref<const Vector>& h,
                      Eigen::Ref<Vector> point, Vector* coeffs) {
  Index best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < b.size(); ++j) {
    const double v = b.points().col(j).dot(h);
    if (v < best_value) {  // strict: lowest index wins ties
      best_value = v;
      best = j;
    }
  }
  point = b.points().col(best);
  if (coeffs) {
    coeffs->setZero(b.size());
    (*coeffs)[best] = 1.0;
  }
  return best_value;
}

inline double LmoImpl(const ReducedPolytope& b, const Eigen::Ref<const Vector>& h,
                      Eigen::Ref<Vector> point, Vector* coeffs) {
  thread_local Vector scores;
  thread_local std::vector<Index> order;
  scores.noalias() = b.points().transpose() * h;
  const Index k = b.k();
  SelectSmallest(scores, k, order);
  if (coeffs) coeffs->setZero(b.size());
  point.setZero();
  double value = 0.0;
  for (Index j = 0; j < k; ++j) {
    const Index idx = order[static_cast<size_t>(j)];
    const double w = (j == k - 1) ? b.last_weight() : b.nu();
    point += w * b.points().col(idx);
    value += w * scores[idx];
    if (coeffs) (*coeffs)[idx] = w;
  }
  return value;
}

inline double LmoImpl(const Aabb& b, const Eigen::Ref<const Vector>& h, Eigen::Ref<Vector> point,
                      Vector*) {
  double value = 0.0;
  for (Index j = 0; j < b.dim(); ++j) {
    point[j] = h[j] > 0.0 ? b.lo()[j] : b.hi()[j];
    value += h[j] * point[j];
  }
  return value;
}

inline double LmoImpl(const Ball& b, const Eigen::Ref<const Vector>& h, Eigen::Ref<Vector> point,
                      Vector*) {
  const double norm = h.norm();
  if (norm == 0.0) {
    point = b.center();
    return 0.0;
  }
  point = b.center() - (b.radius() / norm) * h;
  return h.dot(point);
}

inline double LmoImpl(const Ellipsoid& b, const Eigen::Ref<const Vector>& h,
                      Eigen::Ref<Vector> point, Vector*) {
  thread_local Vector w;
  w.noalias() = b.sigma_inv() * h;
  const double q = h.dot(w);
  if (!(q > 0.0)) {
    point = b.center();
    return h.dot(point);
  }
  point = b.center() - w / std::sqrt(q);
  return h.dot(point);
}

}  // namespace internal

// Writes argmin h.u into `point` and returns the minimum. `coeffs`, when
// given, receives generator weights for polytopal bodies and is left
// untouched otherwise.
inline double LmoInto(const ConvexBody& body, const Eigen::Ref<const Vector>& h,
                      Eigen::Ref<Vector> point, Vector* coeffs = nullptr) {
  return std::visit([&](const auto& b) { return internal::LmoImpl(b, h, point, coeffs); }, body);
}

inline LmoResult lmo(const ConvexBody& body, const Vector& h) {
  if (h.size() != BodyDim(body)) throw std::invalid_argument("lmo: h has the wrong length");
  LmoResult r;
  r.point.resize(h.size());
  r.value = LmoInto(body, h, r.point, IsPolytopal(body) ? &r.coefficients : nullptr);
  return r;
}

struct SupportResult {
  Index index = 0;
  Vector point;
  double value = 0.0;
};

// Maximizer of h.z over the union (equivalently the convex hull) of the
// bodies. `scratch` must have length d.
inline double SupportMaxInto(const std::vector<ConvexBody>& bodies,
                             const Eigen::Ref<const Vector>& h, Eigen::Ref<Vector> point,
                             Eigen::Ref<Vector> scratch, Index* index = nullptr) {
  thread_local Vector neg;
  neg = -h;
  double best = -std::numeric_limits<double>::infinity();
  Index best_index = 0;
  for (size_t i = 0; i < bodies.size(); ++i) {
    const double v = -LmoInto(bodies[i], neg, scratch);
    if (v > best) {
      best = v;
      best_index = static_cast<Index>(i);
      point = scratch;
    }
  }
  if (index) *index = best_index;
  return best;
}

inline SupportResult support_max(const std::vector<ConvexBody>& bodies, const Vector& h) {
  const Index d = ValidateBodies(bodies);
  if (h.size() != d) throw std::invalid_argument("support_max: h has the wrong length");
  SupportResult r;
  r.point.resize(d);
  Vector scratch(d);
  r.value = SupportMaxInto(bodies, h, r.point, scratch, &r.index);
  return r;
}

// Membership test for bodies with a closed-form description. Polytopal bodies
// need a coefficient certificate; use contains_witness for those.
inline bool contains(const ConvexBody& body, const Vector& p, double tol) {
  if (p.size() != BodyDim(body)) throw std::invalid_argument("contains: wrong point length");
  if (IsPolytopal(body)) {
    throw std::invalid_argument("contains: polytopal bodies require a coefficient certificate");
  }
  if (const auto* b = std::get_if<Aabb>(&body)) {
    return ((p - b->lo()).array() >= -tol).all() && ((b->hi() - p).array() >= -tol).all();
  }
  if (const auto* b = std::get_if<Ball>(&body)) {
    return (p - b->center()).norm() <= b->radius() + tol;
  }
  const auto& e = std::get<Ellipsoid>(body);
  const Vector w = p - e.center();
  return w.dot(e.sigma() * w) <= 1.0 + tol;
}

// Checks that `p` is in the body, using `coeffs` as the convex-combination
// certificate for polytopal bodies (ignored for the others). Coefficient
// bounds are checked to `tol`; the reconstruction to tol * max(1, |p|).
inline bool contains_witness(const ConvexBody& body, const Vector& p, const Vector& coeffs,
                             double tol) {
  if (!IsPolytopal(body)) return contains(body, p, tol);
  const Matrix* points = nullptr;
  double cap = 1.0;
  if (const auto* b = std::get_if<Polytope>(&body)) {
    points = &b->points();
  } else {
    const auto& r = std::get<ReducedPolytope>(body);
    points = &r.points();
    cap = r.nu();
  }
  if (coeffs.size() != points->cols() || p.size() != points->rows()) return false;
  if ((coeffs.array() < -tol).any() || (coeffs.array() > cap + tol).any()) return false;
  if (std::abs(coeffs.sum() - 1.0) > tol) return false;
  return ((*points) * coeffs - p).norm() <= tol * std::max(1.0, p.norm());
}

struct Representative {
  Vector point;
  Vector coefficients;  // polytopal bodies only
};

// A fixed point inside each body: the first vertex of a polytope, the
// uniform combination of a reduced polytope (its first vertex need not be
// inside when nu < 1), the box center, the ball or ellipsoid center.
inline Representative representative(const ConvexBody& body) {
  Representative r;
  if (const auto* b = std::get_if<Polytope>(&body)) {
    r.point = b->points().col(0);
    r.coefficients = Vector::Zero(b->size());
    r.coefficients[0] = 1.0;
  } else if (const auto* b = std::get_if<ReducedPolytope>(&body)) {
    const double w = 1.0 / static_cast<double>(b->size());
    r.coefficients = Vector::Constant(b->size(), w);
    r.point = b->points() * r.coefficients;
  } else if (const auto* b = std::get_if<Aabb>(&body)) {
    r.point = 0.5 * (b->lo() + b->hi());
  } else if (const auto* b = std::get_if<Ball>(&body)) {
    r.point = b->center();
  } else {
    r.point = std::get<Ellipsoid>(body).center();
  }
  return r;
}

struct RadiusBound {
  double E = 0.0;
  Vector anchor;
  std::vector<Representative> representatives;
};

// E = max_j |v_1 - v_j| over the representatives. Centering a ball of radius
// E at v_1 meets every body, so r* <= E; E is also at most the diameter of
// the union.
inline RadiusBound crude_radius_bound(const std::vector<ConvexBody>& bodies) {
  ValidateBodies(bodies);
  if (bodies.size() < 2) throw std::invalid_argument("crude_radius_bound: need n >= 2 bodies");
  RadiusBound out;
  out.representatives.reserve(bodies.size());
  for (const auto& b : bodies) out.representatives.push_back(representative(b));
  out.anchor = out.representatives.front().point;
  for (size_t j = 1; j < bodies.size(); ++j) {
    out.E = std::max(out.E, (out.representatives[j].point - out.anchor).norm());
  }
  return out;
}

}  // namespace sibgame
