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

// Smallest intersecting ball: min_z max_i dist(z, body_i).
//
// The problem is posed as the cone game with min-player x = (z, v_1..v_n),
// z in the hull of the bodies and v_i in body i, and payoff
// f(x) = x_i (v_i - z, 0). Its value is r*/sqrt(2). The driver wraps the
// game solver in two restart loops: the width estimate doubles whenever an
// oracle payoff exceeds it, and the radius guess r (which sets the additive
// accuracy eps * r / sqrt(2)) halves until the averaged iterates pass the
// relative duality-gap test (nu_x - nu_y) / nu_y <= eps.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sibgame/bodies.hpp"
#include "sibgame/eja.hpp"
#include "sibgame/parallel.hpp"
#include "sibgame/scg_mwu.hpp"

namespace sibgame {

// Min-player point of the hard game. `coefficients[i]` certifies v_i for
// polytopal bodies and is empty for the others.
struct SibPoint {
  Vector z;
  Matrix v;  // d x n, column i is v_i
  std::vector<Vector> coefficients;
};

inline void blend(SibPoint& mean, const SibPoint& x, double w) {
  mean.z += w * (x.z - mean.z);
  mean.v += w * (x.v - mean.v);
  for (size_t i = 0; i < mean.coefficients.size(); ++i) {
    if (mean.coefficients[i].size() > 0) {
      mean.coefficients[i] += w * (x.coefficients[i] - mean.coefficients[i]);
    }
  }
}

// Writes the hard-game best response to y into `x`, fills `payoff` with f(x)
// and returns f(x).y. Shared by the hard and soft games.
class BlockOracle {
 public:
  explicit BlockOracle(const std::vector<ConvexBody>& bodies, WorkerPool* pool = nullptr)
      : bodies_(&bodies), pool_(pool) {
    d_ = ValidateBodies(bodies);
    n_ = static_cast<Index>(bodies.size());
    scratch_.resize(d_);
    h_.resize(d_);
  }

  Index dim() const { return d_; }
  Index blocks() const { return n_; }
  const std::vector<ConvexBody>& bodies() const { return *bodies_; }

  void Shape(SibPoint& x) const {
    if (x.z.size() != d_) x.z.resize(d_);
    if (x.v.rows() != d_ || x.v.cols() != n_) x.v.resize(d_, n_);
    if (x.coefficients.size() != static_cast<size_t>(n_)) {
      x.coefficients.assign(static_cast<size_t>(n_), Vector());
      for (Index i = 0; i < n_; ++i) {
        x.coefficients[static_cast<size_t>(i)].setZero(GeneratorCount((*bodies_)[i]));
      }
    }
  }

  // Minimizes sum_i ybar_i.(v_i - z): each v_i by its own LMO, z by the
  // support maximum of h = sum_i ybar_i. Returns the minimum.
  double Respond(const ProductElement& y, SibPoint& x) {
    Shape(x);
    auto lmo_block = [&](std::int64_t i) {
      const auto& body = (*bodies_)[static_cast<size_t>(i)];
      Vector* coeffs = IsPolytopal(body) ? &x.coefficients[static_cast<size_t>(i)] : nullptr;
      LmoInto(body, y.bar(i), x.v.col(i), coeffs);
    };
    if (pool_ && pool_->threads() > 1) {
      pool_->ParallelFor(n_, lmo_block);
    } else {
      for (Index i = 0; i < n_; ++i) lmo_block(i);
    }
    h_.noalias() = y.bars().rowwise().sum();
    SupportMaxInto(*bodies_, h_, x.z, scratch_);
    return (y.bars().array() * x.v.array()).sum() - h_.dot(x.z);
  }

 private:
  const std::vector<ConvexBody>* bodies_;
  WorkerPool* pool_;
  Index d_ = 0;
  Index n_ = 0;
  Vector scratch_;
  Vector h_;
};

class SibGame {
 public:
  using Point = SibPoint;

  explicit SibGame(const std::vector<ConvexBody>& bodies, WorkerPool* pool = nullptr)
      : oracle_(bodies, pool) {}

  void BestResponse(const ProductElement& y, OracleResponse<SibPoint>& out) {
    oracle_.Respond(y, out.x);
    FillPayoff(out.x, out.payoff);
    out.oracle_value = trace_inner(out.payoff, y);
  }

  ProductElement Payoff(const SibPoint& x) const {
    ProductElement p;
    FillPayoff(x, p);
    return p;
  }

 private:
  void FillPayoff(const SibPoint& x, ProductElement& p) const {
    if (p.dim() != oracle_.dim() || p.blocks() != oracle_.blocks()) {
      p = ProductElement(oracle_.dim(), oracle_.blocks());
    }
    p.bars() = x.v.colwise() - x.z;
    p.heads().setZero();
  }

  BlockOracle oracle_;
};

static_assert(GameProblem<SibGame>);

inline OracleResponse<SibPoint> sib_oracle(const std::vector<ConvexBody>& bodies,
                                           const ProductElement& y) {
  SibGame game(bodies);
  OracleResponse<SibPoint> out;
  game.BestResponse(y, out);
  return out;
}

struct SibInstance {
  std::vector<ConvexBody> bodies;
  double epsilon = 0.05;
};

enum class SolveStatus {
  kConverged,
  kDegenerate,             // the guesses fell below the floor; bodies likely intersect
  kIterationCapExhausted,  // partial result, not certified
};

inline const char* ToString(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kDegenerate: return "degenerate";
    case SolveStatus::kIterationCapExhausted: return "iteration_cap_exhausted";
  }
  return "unknown";
}

struct SolverOptions {
  std::int64_t max_iterations_cap = kDefaultIterationCap;
  int threads = 1;
};

struct SibSolution {
  SolveStatus status = SolveStatus::kConverged;
  Vector center;
  Matrix witnesses;  // d x n
  std::vector<Vector> witness_coefficients;
  double radius = 0.0;
  double nu_x = 0.0;
  double nu_y = 0.0;
  double final_guess = 0.0;  // radius guess r of the accepted run
  double final_rho = 0.0;
  int width_doublings = 0;
  int radius_halvings = 0;
  std::int64_t total_iterations = 0;

  bool converged() const { return status == SolveStatus::kConverged; }
};

inline double MaxDistance(const Vector& z, const Matrix& v) {
  return (v.colwise() - z).colwise().norm().maxCoeff();
}

inline double RadiusFloor(double E) { return std::max(1e-12, 1e-9 * E); }

inline SibSolution solve(const SibInstance& instance, const SolverOptions& options = {}) {
  const auto& bodies = instance.bodies;
  ValidateBodies(bodies);
  if (bodies.size() < 2) throw std::invalid_argument("solve: need at least two bodies");
  if (!(instance.epsilon > 0.0)) throw std::invalid_argument("solve: epsilon must be positive");
  const Index n = static_cast<Index>(bodies.size());

  const Vector origin = FramePoint(bodies.front());
  const std::vector<ConvexBody> local = ShiftedBy(bodies, origin);
  const RadiusBound bound = crude_radius_bound(local);
  const double E = bound.E;
  const double floor = RadiusFloor(E);

  // Runs in the local frame; the result is moved back on return.
  auto finish = [&](SibSolution s, SolveStatus status) {
    s.status = status;
    s.center += origin;
    s.witnesses.colwise() += origin;
    return s;
  };

  // The representatives around the anchor form a feasible fallback.
  SibSolution sol;
  sol.center = bound.anchor;
  sol.witnesses.resize(bound.anchor.size(), n);
  for (Index i = 0; i < n; ++i) {
    const auto& rep = bound.representatives[static_cast<size_t>(i)];
    sol.witnesses.col(i) = rep.point;
    sol.witness_coefficients.push_back(rep.coefficients);
  }
  sol.radius = E;
  if (!(E > floor)) return finish(std::move(sol), SolveStatus::kDegenerate);

  std::unique_ptr<WorkerPool> pool;
  if (options.threads > 1) pool = std::make_unique<WorkerPool>(options.threads);
  SibGame game(local, pool.get());
  OracleResponse<SibPoint> probe;

  double rho = 2.0 * E;
  double r = 0.5 * E;
  for (;;) {
    const double eps_game = std::min(instance.epsilon * r / kSqrt2, 2.0 * rho);
    const GameConfig config = GameConfig::Make(eps_game, rho, options.max_iterations_cap);
    auto result = solve_game(game, bound.anchor.size(), n, config);
    sol.total_iterations += result.certificate.iterations_run;
    if (result.status == GameStatus::kWidthBreach) {
      rho *= 2.0;
      ++sol.width_doublings;
      continue;
    }

    const auto& x = result.certificate.x_bar;
    const double radius = MaxDistance(x.z, x.v);
    const double nu_x = radius / kSqrt2;
    game.BestResponse(result.certificate.y_bar, probe);
    const double nu_y = probe.oracle_value;
    const bool accept = nu_y > 0.0 && (nu_x - nu_y) <= instance.epsilon * nu_y;

    if (accept || radius < sol.radius) {
      sol.center = x.z;
      sol.witnesses = x.v;
      sol.witness_coefficients = x.coefficients;
      sol.radius = radius;
      sol.nu_x = nu_x;
      sol.nu_y = nu_y;
    }
    sol.final_guess = r;
    sol.final_rho = rho;
    if (accept) return finish(std::move(sol), SolveStatus::kConverged);
    if (result.status == GameStatus::kIterationCapExhausted) {
      // Smaller guesses only lengthen the schedule further.
      return finish(std::move(sol), SolveStatus::kIterationCapExhausted);
    }
    r *= 0.5;
    ++sol.radius_halvings;
    if (r < floor) return finish(std::move(sol), SolveStatus::kDegenerate);
  }
}

}  // namespace sibgame
