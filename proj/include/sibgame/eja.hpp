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

// Euclidean Jordan algebra of the second-order cone Q^{d+1} and of the
// product cone Q^{d+1} x ... x Q^{d+1}.
//
// An element of Q^{d+1} is written (bar, head) with bar in R^d. The Jordan
// product is x o y = (x0*ybar + y0*xbar, x.y) / sqrt(2), which makes the
// identity e = (0, sqrt(2)) and gives every element the two eigenvalues
// (x0 +- |xbar|) / sqrt(2).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sibgame {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Below this norm the bar part is treated as zero and the idempotent
// direction falls back to the first standard basis vector.
inline constexpr double kZeroBarNorm = 1e-300;

struct SocElement {
  Vector bar;
  double head = 0.0;

  static SocElement Zero(Index d) { return {Vector::Zero(d), 0.0}; }
  static SocElement Identity(Index d) { return {Vector::Zero(d), kSqrt2}; }

  Index dim() const { return bar.size(); }
};

struct SocSpectrum {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Vector u;  // unit direction of the idempotents
};

// Fills `u` with the idempotent direction of (bar, .) and returns |bar|.
inline double IdempotentDirection(const Eigen::Ref<const Vector>& bar,
                                  Eigen::Ref<Vector> u) {
  const double norm = bar.norm();
  if (norm > kZeroBarNorm) {
    u = bar / norm;
  } else {
    u.setZero();
    if (u.size() > 0) u[0] = 1.0;
  }
  return norm;
}

inline SocSpectrum spectral_decompose(const Eigen::Ref<const Vector>& bar,
                                      double head) {
  SocSpectrum s;
  s.u.resize(bar.size());
  const double norm = IdempotentDirection(bar, s.u);
  s.lambda1 = (head + norm) * kInvSqrt2;
  s.lambda2 = (head - norm) * kInvSqrt2;
  return s;
}

inline SocSpectrum spectral_decompose(const SocElement& x) {
  return spectral_decompose(x.bar, x.head);
}

// The two primitive idempotents q1 = (u, 1)/sqrt(2), q2 = (-u, 1)/sqrt(2).
inline std::pair<SocElement, SocElement> idempotents(const SocSpectrum& s) {
  return {SocElement{s.u * kInvSqrt2, kInvSqrt2},
          SocElement{-s.u * kInvSqrt2, kInvSqrt2}};
}

// lambda1 * q1 + lambda2 * q2.
inline SocElement reconstruct(const SocSpectrum& s) {
  return {s.u * ((s.lambda1 - s.lambda2) * kInvSqrt2),
          (s.lambda1 + s.lambda2) * kInvSqrt2};
}

inline SocElement jordan_product(const SocElement& x, const SocElement& y) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument("jordan_product: dimension mismatch");
  }
  return {(x.head * y.bar + y.head * x.bar) * kInvSqrt2,
          (x.bar.dot(y.bar) + x.head * y.head) * kInvSqrt2};
}

// exp(lambda1) q1 + exp(lambda2) q2. Eigenvalues beyond ~709 overflow to
// +inf; callers that exponentiate accumulated sums shift them first.
inline SocElement soc_exp(const SocElement& x) {
  SocSpectrum s = spectral_decompose(x);
  s.lambda1 = std::exp(s.lambda1);
  s.lambda2 = std::exp(s.lambda2);
  return reconstruct(s);
}

inline double soc_trace(const SocElement& x) { return kSqrt2 * x.head; }

// Concatenation of n second-order-cone elements of a common dimension d.
// Block i is stored as column i of `bar` together with `head[i]`.
class ProductElement {
 public:
  ProductElement() = default;
  ProductElement(Index d, Index n) : bar_(Matrix::Zero(d, n)), head_(Vector::Zero(n)) {
    if (n < 1) throw std::invalid_argument("ProductElement: need n >= 1 blocks");
  }
  ProductElement(Matrix bar, Vector head) : bar_(std::move(bar)), head_(std::move(head)) {
    if (bar_.cols() != head_.size() || head_.size() < 1) {
      throw std::invalid_argument("ProductElement: inconsistent block layout");
    }
  }

  static ProductElement Identity(Index d, Index n) {
    ProductElement e(d, n);
    e.head_.setConstant(kSqrt2);
    return e;
  }

  static ProductElement FromBlocks(const std::vector<SocElement>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("ProductElement: no blocks");
    const Index d = blocks.front().dim();
    ProductElement x(d, static_cast<Index>(blocks.size()));
    for (Index i = 0; i < x.blocks(); ++i) x.set_block(i, blocks[static_cast<size_t>(i)]);
    return x;
  }

  Index dim() const { return bar_.rows(); }
  Index blocks() const { return head_.size(); }

  Matrix& bars() { return bar_; }
  const Matrix& bars() const { return bar_; }
  Vector& heads() { return head_; }
  const Vector& heads() const { return head_; }

  auto bar(Index i) { return bar_.col(i); }
  auto bar(Index i) const { return bar_.col(i); }
  double& head(Index i) { return head_[i]; }
  double head(Index i) const { return head_[i]; }

  SocElement block(Index i) const { return {bar_.col(i), head_[i]}; }
  void set_block(Index i, const SocElement& b) {
    if (b.dim() != dim()) throw std::invalid_argument("ProductElement: block dimension mismatch");
    bar_.col(i) = b.bar;
    head_[i] = b.head;
  }

  // Sum of all 2n eigenvalues.
  double trace() const { return kSqrt2 * head_.sum(); }

  void setZero() {
    bar_.setZero();
    head_.setZero();
  }

  bool same_shape(const ProductElement& o) const {
    return dim() == o.dim() && blocks() == o.blocks();
  }

  ProductElement& operator+=(const ProductElement& o) {
    bar_ += o.bar_;
    head_ += o.head_;
    return *this;
  }
  ProductElement& operator-=(const ProductElement& o) {
    bar_ -= o.bar_;
    head_ -= o.head_;
    return *this;
  }
  ProductElement& operator*=(double s) {
    bar_ *= s;
    head_ *= s;
    return *this;
  }
  friend ProductElement operator+(ProductElement a, const ProductElement& b) { return a += b; }
  friend ProductElement operator-(ProductElement a, const ProductElement& b) { return a -= b; }
  friend ProductElement operator*(ProductElement a, double s) { return a *= s; }
  friend ProductElement operator*(double s, ProductElement a) { return a *= s; }

 private:
  Matrix bar_;
  Vector head_;
};

inline void RequireSameShape(const ProductElement& x, const ProductElement& y,
                             const char* op) {
  if (!x.same_shape(y)) {
    throw std::invalid_argument(std::string(op) + ": (n, d) mismatch");
  }
}

inline double trace_inner(const ProductElement& x, const ProductElement& y) {
  RequireSameShape(x, y, "trace_inner");
  return (x.bars().array() * y.bars().array()).sum() + x.heads().dot(y.heads());
}

inline ProductElement jordan_product(const ProductElement& x, const ProductElement& y) {
  RequireSameShape(x, y, "jordan_product");
  ProductElement out(x.dim(), x.blocks());
  for (Index i = 0; i < x.blocks(); ++i) {
    out.bar(i) = (x.head(i) * y.bar(i) + y.head(i) * x.bar(i)) * kInvSqrt2;
    out.head(i) = (x.bar(i).dot(y.bar(i)) + x.head(i) * y.head(i)) * kInvSqrt2;
  }
  return out;
}

inline ProductElement product_exp(const ProductElement& x) {
  ProductElement out(x.dim(), x.blocks());
  for (Index i = 0; i < x.blocks(); ++i) out.set_block(i, soc_exp(x.block(i)));
  return out;
}

// All 2n eigenvalues, ordered (lambda1(x_1), lambda2(x_1), lambda1(x_2), ...).
inline std::vector<double> eigenvalues(const ProductElement& x) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(2 * x.blocks()));
  for (Index i = 0; i < x.blocks(); ++i) {
    const double norm = x.bar(i).norm();
    out.push_back((x.head(i) + norm) * kInvSqrt2);
    out.push_back((x.head(i) - norm) * kInvSqrt2);
  }
  return out;
}

inline double spectral_norm(const ProductElement& x) {
  double best = 0.0;
  for (Index i = 0; i < x.blocks(); ++i) {
    // max(|h + s|, |h - s|) = |h| + s for s >= 0
    best = std::max(best, (std::abs(x.head(i)) + x.bar(i).norm()) * kInvSqrt2);
  }
  return best;
}

inline double max_eigenvalue(const ProductElement& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.blocks(); ++i) {
    best = std::max(best, (x.head(i) + x.bar(i).norm()) * kInvSqrt2);
  }
  return best;
}

inline bool in_cone(const ProductElement& x, double tol) {
  for (Index i = 0; i < x.blocks(); ++i) {
    if (!(x.bar(i).stableNorm() <= x.head(i) + tol)) return false;
  }
  return true;
}

// The algebra interface the general game solver is written against. Only the
// product-of-SOC instantiation below is provided.
template <class A>
concept EuclideanJordanAlgebra =
    requires(const A& alg, const typename A::Element& x, double s) {
      { alg.rank() } -> std::convertible_to<Index>;
      { alg.identity() } -> std::same_as<typename A::Element>;
      { alg.exp(x) } -> std::same_as<typename A::Element>;
      { alg.trace(x) } -> std::convertible_to<double>;
      { alg.inner(x, x) } -> std::convertible_to<double>;
      { alg.eigenvalues(x) } -> std::same_as<std::vector<double>>;
      { alg.zero() } -> std::same_as<typename A::Element>;
      { alg.axpy(s, x, x) } -> std::same_as<typename A::Element>;
    };

struct ProductSocAlgebra {
  using Element = ProductElement;

  Index d = 1;
  Index n = 1;

  Index rank() const { return 2 * n; }
  Element identity() const { return ProductElement::Identity(d, n); }
  Element zero() const { return ProductElement(d, n); }
  Element exp(const Element& x) const { return product_exp(x); }
  double trace(const Element& x) const { return x.trace(); }
  double inner(const Element& x, const Element& y) const { return trace_inner(x, y); }
  std::vector<double> eigenvalues(const Element& x) const { return sibgame::eigenvalues(x); }
  // s * x + y
  Element axpy(double s, const Element& x, const Element& y) const { return x * s + y; }
};

static_assert(EuclideanJordanAlgebra<ProductSocAlgebra>);

}  // namespace sibgame
