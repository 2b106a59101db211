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

#include "sibgame/eja.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "sibgame/random.hpp"

namespace sibgame {
namespace {

// Arrow matrix of the Jordan product: L(x) y = x o y. Its extreme
// eigenvalues are the two spectral values of x, which gives an oracle that
// does not go through spectral_decompose.
Matrix Arrow(const SocElement& x) {
  const Index d = x.dim();
  Matrix m = Matrix::Identity(d + 1, d + 1) * x.head;
  m.block(0, 1, 1, d) = x.bar.transpose();
  m.block(1, 0, d, 1) = x.bar;
  return m * kInvSqrt2;
}

SocElement RandomElement(Rng& rng, Index d, double scale = 3.0) {
  return {rng.UniformVector(d, -scale, scale), rng.Uniform(-scale, scale)};
}

double MaxAbsDiff(const SocElement& a, const SocElement& b) {
  return std::max((a.bar - b.bar).cwiseAbs().maxCoeff(), std::abs(a.head - b.head));
}

double Magnitude(const SocElement& x) { return std::max(1.0, std::hypot(x.bar.norm(), x.head)); }

TEST(SpectralDecompose, IdentityHasUnitEigenvalues) {
  const auto s = spectral_decompose(SocElement::Identity(2));
  EXPECT_DOUBLE_EQ(s.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(s.lambda2, 1.0);
  EXPECT_EQ(s.u, Vector::Unit(2, 0));
}

TEST(SpectralDecompose, PythagoreanElement) {
  // Frozen from the arrow-matrix eigenvalues of (3, 4; 5).
  const auto s = spectral_decompose(SocElement{Vector{{3.0, 4.0}}, 5.0});
  EXPECT_NEAR(s.lambda1, 7.071067811865475, 1e-14);
  EXPECT_NEAR(s.lambda2, 0.0, 1e-14);
  EXPECT_NEAR(s.u[0], 0.6, 1e-15);
  EXPECT_NEAR(s.u[1], 0.8, 1e-15);
}

TEST(SpectralDecompose, PureBarElement) {
  const auto s = spectral_decompose(SocElement{Vector{{1.0, 0.0}}, 0.0});
  EXPECT_NEAR(s.lambda1, 0.7071067811865475, 1e-15);
  EXPECT_NEAR(s.lambda2, -0.7071067811865475, 1e-15);
  EXPECT_EQ(s.u, Vector::Unit(2, 0));
}

TEST(SpectralDecompose, TinyBarFallsBackToFirstBasisVector) {
  const auto s = spectral_decompose(SocElement{Vector{{1e-310, 0.0, 0.0}}, 2.0});
  EXPECT_EQ(s.u, Vector::Unit(3, 0));
  EXPECT_DOUBLE_EQ(s.lambda1, s.lambda2);
}

TEST(SpectralDecompose, MatchesArrowMatrixOnRandomElements) {
  Rng rng(11);
  for (Index d : {1, 2, 5}) {
    for (int trial = 0; trial < 200; ++trial) {
      const SocElement x = RandomElement(rng, d);
      const auto s = spectral_decompose(x);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(Arrow(x));
      EXPECT_NEAR(s.lambda1, eig.eigenvalues().maxCoeff(), 1e-12 * Magnitude(x));
      EXPECT_NEAR(s.lambda2, eig.eigenvalues().minCoeff(), 1e-12 * Magnitude(x));
      EXPECT_GE(s.lambda1, s.lambda2);
      EXPECT_NEAR(s.u.norm(), 1.0, 1e-12);
    }
  }
}

TEST(SocExp, ZeroMapsToIdentity) {
  const SocElement e = soc_exp(SocElement::Zero(3));
  EXPECT_LT(MaxAbsDiff(e, SocElement::Identity(3)), 1e-15);
}

TEST(SocExp, EigenvaluesAreExponentiated) {
  // lambda = (1, 0), u = e1 is x = (1/sqrt2, 0; 1/sqrt2). Frozen from
  // exp(1) q1 + exp(0) q2 evaluated independently.
  const SocElement x{Vector{{kInvSqrt2, 0.0}}, kInvSqrt2};
  const SocElement y = soc_exp(x);
  EXPECT_NEAR(y.bar[0], 1.2150087328930108, 1e-14);
  EXPECT_NEAR(y.bar[1], 0.0, 1e-15);
  EXPECT_NEAR(y.head, 2.6292222952661057, 1e-14);
  const auto s = spectral_decompose(y);
  EXPECT_NEAR(s.lambda1, std::exp(1.0), 1e-14);
  EXPECT_NEAR(s.lambda2, 1.0, 1e-14);
}

TEST(SocExp, IdentityMapsToScaledIdentity) {
  const auto s = spectral_decompose(soc_exp(SocElement::Identity(4)));
  EXPECT_NEAR(s.lambda1, std::exp(1.0), 1e-14);
  EXPECT_NEAR(s.lambda2, std::exp(1.0), 1e-14);
}

TEST(SocExp, StaysInConeForModerateEigenvalues) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Index d = 1 + rng.UniformInt(0, 6);
    const SocElement x = RandomElement(rng, d, 480.0);  // |lambda| < 700
    const SocElement y = soc_exp(x);
    ProductElement p(d, 1);
    p.set_block(0, y);
    // When lambda2 underflows against lambda1 the two sides agree only to
    // rounding.
    EXPECT_TRUE(in_cone(p, 1e-14 * y.head));
    EXPECT_GE(y.head, 0.0);
  }
}

TEST(TraceInner, FlatDotProduct) {
  const auto x = ProductElement::FromBlocks({SocElement{Vector{{1.0, 0.0}}, 2.0}});
  const auto y = ProductElement::FromBlocks({SocElement{Vector{{0.0, 1.0}}, 3.0}});
  EXPECT_DOUBLE_EQ(trace_inner(x, y), 6.0);
}

TEST(TraceInner, IdentityGivesTrace) {
  Rng rng(2);
  ProductElement x(3, 4);
  x.bars() = Matrix::Random(3, 4);
  x.heads() = rng.UniformVector(4, -2.0, 2.0);
  EXPECT_NEAR(trace_inner(x, ProductElement::Identity(3, 4)), x.trace(), 1e-13);
}

TEST(TraceInner, ZeroBlock) {
  ProductElement x(2, 1);
  const auto y = ProductElement::FromBlocks({SocElement{Vector{{5.0, -1.0}}, 7.0}});
  EXPECT_EQ(trace_inner(x, y), 0.0);
}

TEST(TraceInner, ShapeMismatchThrows) {
  EXPECT_THROW(trace_inner(ProductElement(2, 1), ProductElement(3, 1)), std::invalid_argument);
  EXPECT_THROW(trace_inner(ProductElement(2, 1), ProductElement(2, 2)), std::invalid_argument);
}

TEST(ProductElement, TraceIsSqrt2TimesHeadSum) {
  ProductElement x(2, 3);
  x.heads() << 1.0, -2.0, 0.5;
  EXPECT_EQ(x.trace(), kSqrt2 * (1.0 - 2.0 + 0.5));
  EXPECT_THROW(ProductElement(2, 0), std::invalid_argument);
}

TEST(SpectralNorm, Examples) {
  EXPECT_NEAR(spectral_norm(ProductElement::FromBlocks({SocElement{Vector{{3.0, 4.0}}, 5.0}})),
              7.071067811865475, 1e-14);
  EXPECT_NEAR(spectral_norm(ProductElement::Identity(3, 5)), 1.0, 1e-15);
  EXPECT_NEAR(spectral_norm(ProductElement::FromBlocks({SocElement{Vector{{1.0, 0.0}}, 0.0}})),
              0.7071067811865475, 1e-15);
}

TEST(SpectralNorm, IsANormOnSamples) {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const Index d = 1 + rng.UniformInt(0, 4);
    const Index n = 1 + rng.UniformInt(0, 4);
    ProductElement x(d, n), y(d, n);
    for (Index i = 0; i < n; ++i) {
      x.set_block(i, RandomElement(rng, d));
      y.set_block(i, RandomElement(rng, d));
    }
    const double s = rng.Uniform(-4.0, 4.0);
    const double nx = spectral_norm(x);
    EXPECT_NEAR(spectral_norm(x * s), std::abs(s) * nx, 1e-10 * std::max(1.0, nx));
    EXPECT_LE(spectral_norm(x + y), nx + spectral_norm(y) + 1e-10);
    // Agrees with the largest |eigenvalue|.
    double m = 0.0;
    for (double l : eigenvalues(x)) m = std::max(m, std::abs(l));
    EXPECT_NEAR(nx, m, 1e-12 * std::max(1.0, m));
  }
}

TEST(InCone, Examples) {
  EXPECT_TRUE(in_cone(ProductElement::Identity(2, 3), 0.0));
  const auto x = ProductElement::FromBlocks({SocElement{Vector{{1.0, 0.0}}, 0.5}});
  EXPECT_FALSE(in_cone(x, 0.0));
  EXPECT_TRUE(in_cone(x, 0.6));
  EXPECT_TRUE(in_cone(ProductElement(2, 2), 0.0));
}

TEST(Idempotents, SystemIdentitiesOnRandomElements) {
  Rng rng(21);
  for (Index d : {1, 2, 8}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto s = spectral_decompose(RandomElement(rng, d));
      const auto [q1, q2] = idempotents(s);
      EXPECT_LT(MaxAbsDiff(jordan_product(q1, q2), SocElement::Zero(d)), 1e-12);
      EXPECT_LT(MaxAbsDiff(jordan_product(q1, q1), q1), 1e-12);
      EXPECT_LT(MaxAbsDiff(jordan_product(q2, q2), q2), 1e-12);
      SocElement sum{q1.bar + q2.bar, q1.head + q2.head};
      EXPECT_LT(MaxAbsDiff(sum, SocElement::Identity(d)), 1e-12);
    }
  }
}

TEST(Reconstruct, RoundTripsRandomElements) {
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const SocElement x = RandomElement(rng, 1 + rng.UniformInt(0, 9), 50.0);
    EXPECT_LT(MaxAbsDiff(reconstruct(spectral_decompose(x)), x), 1e-10 * Magnitude(x));
  }
}

TEST(SelfDuality, ConeElementsHaveNonnegativeInnerProducts) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const Index d = 1 + rng.UniformInt(0, 5);
    const Index n = 1 + rng.UniformInt(0, 3);
    ProductElement x(d, n), y(d, n);
    for (Index i = 0; i < n; ++i) {
      // Random cone members: head >= |bar|.
      x.bar(i) = rng.UniformVector(d, -1.0, 1.0);
      x.head(i) = x.bar(i).norm() + rng.Uniform(0.0, 0.1);
      y.bar(i) = rng.UniformVector(d, -1.0, 1.0);
      y.head(i) = y.bar(i).norm() + rng.Uniform(0.0, 0.1);
    }
    ASSERT_TRUE(in_cone(x, 0.0));
    ASSERT_TRUE(in_cone(y, 0.0));
    EXPECT_GE(trace_inner(x, y), -1e-14);
  }
}

TEST(ProductSocAlgebra, SatisfiesInterface) {
  ProductSocAlgebra alg{3, 4};
  EXPECT_EQ(alg.rank(), 8);
  EXPECT_NEAR(alg.trace(alg.identity()), 8.0, 1e-13);
  const auto z = alg.exp(alg.zero());
  EXPECT_NEAR(alg.inner(z, alg.identity()), 8.0, 1e-13);
  EXPECT_EQ(alg.eigenvalues(alg.identity()).size(), 8u);
}

}  // namespace
}  // namespace sibgame
