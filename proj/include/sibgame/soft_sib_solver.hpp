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

// Soft-margin smallest intersecting ball:
//
//   min r + C sum_i xi_i  s.t.  |z - v_i| <= r + xi_i, v_i in body_i,
//                               r >= 0, xi >= 0.
//
// A guessed objective alpha is tested with the cone game whose min player
// is x = (z, v, xi, r) on { r + C sum xi <= alpha, 0 <= xi, r <= D } and whose
// payoff is f(x) = x_i (v_i - z, -r - xi_i). A positive best-response value
// against any iterate proves alpha < alpha*; a completed run yields a point
// with objective at most (1 + eps) alpha. The outer search keeps a bracket
// [L, U] around alpha* and shrinks it by a third per test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sibgame/bodies.hpp"
#include "sibgame/eja.hpp"
#include "sibgame/parallel.hpp"
#include "sibgame/scg_mwu.hpp"
#include "sibgame/sib_solver.hpp"

namespace sibgame {

struct XiR {
  Vector xi;
  double r = 0.0;
};

// Maximizes r / sqrt(2) + sum_i y0_i xi_i over
// { r + C sum xi <= alpha, 0 <= xi_i <= D, 0 <= r <= D }.
//
// One unit of budget buys 1/sqrt(2) through r and y0_i / C through xi_i, so
// the maximizer fills xi on I_L = { y0_i / C >= 1/sqrt(2) } in decreasing
// order of y0 (ties by index), each up to beta = min(D, alpha / C), and puts
// what is left into r. With k = ceil(alpha / (C beta)) and |I_L| >= k the
// budget runs out inside I_L and r = 0; otherwise r = alpha - |I_L| C beta.
// If alpha > D the leftover after r = D goes to the remaining xi in the same
// order.
inline XiR xi_r_suboracle(const Vector& y_heads, double C, double alpha_hat, double D) {
  if (!(C > 0.0) || !(alpha_hat > 0.0) || !(D > 0.0)) {
    throw std::invalid_argument("xi_r_suboracle: C, alpha_hat and D must be positive");
  }
  const Index n = y_heads.size();
  XiR out{Vector::Zero(n), 0.0};
  thread_local std::vector<Index> order;
  order.resize(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return y_heads[a] > y_heads[b]; });

  double budget = alpha_hat;  // in objective units r + C sum xi
  size_t pos = 0;
  auto fill_xi = [&](bool only_large) {
    for (; pos < order.size() && budget > 0.0; ++pos) {
      const Index i = order[pos];
      if (only_large && !(y_heads[i] / C >= kInvSqrt2)) break;
      const double xi = std::min(D, budget / C);
      out.xi[i] = xi;
      budget = std::max(0.0, budget - C * xi);
    }
  };
  fill_xi(true);
  if (budget > 0.0) {
    out.r = std::min(D, budget);
    budget -= out.r;
  }
  if (budget > 0.0) fill_xi(false);
  return out;
}

// Value of the (xi, r) part without the D box: alpha * max(max_i y0_i / C,
// 1/sqrt(2)).
inline double UnboxedXiRValue(const Vector& y_heads, double C, double alpha_hat) {
  return alpha_hat * std::max(y_heads.maxCoeff() / C, kInvSqrt2);
}

// Optimal r and xi for a fixed center and witnesses: with distances sorted
// decreasingly, r is the (q+1)-th largest for q = floor(1/C) (0 if q >= n)
// and xi_i = max(0, d_i - r).
inline XiR OptimalSlacks(const Vector& distances, double C) {
  const Index n = distances.size();
  XiR out{Vector::Zero(n), 0.0};
  const double q_real = std::floor(1.0 / C);
  if (q_real < static_cast<double>(n)) {
    std::vector<double> sorted(distances.data(), distances.data() + n);
    const auto q = static_cast<size_t>(q_real);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(q),
                     sorted.end(), std::greater<double>());
    out.r = sorted[q];
  }
  out.xi = (distances.array() - out.r).max(0.0);
  return out;
}

struct SoftPoint {
  SibPoint base;
  Vector xi;
  double r = 0.0;
};

inline void blend(SoftPoint& mean, const SoftPoint& x, double w) {
  blend(mean.base, x.base, w);
  mean.xi += w * (x.xi - mean.xi);
  mean.r += w * (x.r - mean.r);
}

// Best response for the singleton (l1-loss SVDD) case: v_i = p_i, z is the
// input point maximizing h.p with h = sum_i ybar_i (lowest index on ties).
inline OracleResponse<SoftPoint> svdd_oracle(const Matrix& points, const ProductElement& y,
                                             double C, double alpha_hat, double D) {
  const Index n = points.cols();
  if (n < 2) throw std::invalid_argument("svdd_oracle: need at least two points");
  if (y.blocks() != n || y.dim() != points.rows()) {
    throw std::invalid_argument("svdd_oracle: y does not match the points");
  }
  OracleResponse<SoftPoint> out;
  const Vector h = y.bars().rowwise().sum();
  Index best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    const double v = h.dot(points.col(j));
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  out.x.base.z = points.col(best);
  out.x.base.v = points;
  out.x.base.coefficients.assign(static_cast<size_t>(n), Vector::Ones(1));
  XiR s = xi_r_suboracle(y.heads(), C, alpha_hat, D);
  out.x.xi = std::move(s.xi);
  out.x.r = s.r;
  out.payoff = ProductElement(points.colwise() - out.x.base.z,
                              -(out.x.xi.array() + out.x.r).matrix());
  out.oracle_value = trace_inner(out.payoff, y);
  return out;
}

class SoftSibGame {
 public:
  using Point = SoftPoint;

  SoftSibGame(const std::vector<ConvexBody>& bodies, double C, double alpha_hat, double D,
              WorkerPool* pool = nullptr)
      : oracle_(bodies, pool), C_(C), alpha_hat_(alpha_hat), D_(D) {}

  void BestResponse(const ProductElement& y, OracleResponse<SoftPoint>& out) {
    const double geometric = oracle_.Respond(y, out.x.base);
    XiR s = xi_r_suboracle(y.heads(), C_, alpha_hat_, D_);
    out.x.xi = std::move(s.xi);
    out.x.r = s.r;
    FillPayoff(out.x, out.payoff);
    out.oracle_value = trace_inner(out.payoff, y);
    last_unboxed_value_ = geometric - UnboxedXiRValue(y.heads(), C_, alpha_hat_);
  }

  ProductElement Payoff(const SoftPoint& x) const {
    ProductElement p;
    FillPayoff(x, p);
    return p;
  }

  // Best-response value of the last query with the D box dropped. It lower
  // bounds the value over any box, so a positive value is a certificate of
  // infeasibility however D compares with the true scale.
  double last_unboxed_value() const { return last_unboxed_value_; }

 private:
  void FillPayoff(const SoftPoint& x, ProductElement& p) const {
    if (p.dim() != oracle_.dim() || p.blocks() != oracle_.blocks()) {
      p = ProductElement(oracle_.dim(), oracle_.blocks());
    }
    p.bars() = x.base.v.colwise() - x.base.z;
    p.heads() = -(x.xi.array() + x.r).matrix();
  }

  BlockOracle oracle_;
  double C_;
  double alpha_hat_;
  double D_;
  double last_unboxed_value_ = 0.0;
};

static_assert(GameProblem<SoftSibGame>);

struct SoftSibInstance {
  std::vector<ConvexBody> bodies;
  double C = 1.0;
  double epsilon = 0.05;
};

struct SoftSibSolution {
  SolveStatus status = SolveStatus::kConverged;
  Vector center;
  Matrix witnesses;
  std::vector<Vector> witness_coefficients;
  Vector slacks;
  double radius = 0.0;
  double objective = 0.0;
  double nu_x = 0.0;  // lambda_max of the payoff at the returned point, when a game produced it
  double nu_y = 0.0;  // last certified lower bound L on the optimum
  int bracket_steps = 0;
  int width_doublings = 0;
  std::int64_t total_iterations = 0;
  bool delegated_to_hard = false;
  std::vector<std::pair<double, double>> bracket_history;  // (L, U) after each step

  bool converged() const { return status == SolveStatus::kConverged; }
};

// Recomputes slacks, radius and objective for a fixed center and witnesses.
inline void PolishSoftSolution(SoftSibSolution& s, double C) {
  const Vector dist = (s.witnesses.colwise() - s.center).colwise().norm().transpose();
  XiR opt = OptimalSlacks(dist, C);
  s.slacks = std::move(opt.xi);
  s.radius = opt.r;
  s.objective = s.radius + C * s.slacks.sum();
}

// Diameter of the common axis-aligned bounding box, an upper bound on the
// diameter of the union of the bodies.
inline double BoundingDiameter(const std::vector<ConvexBody>& bodies) {
  const Index d = ValidateBodies(bodies);
  Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  Vector e = Vector::Zero(d);
  Vector p(d);
  for (const auto& body : bodies) {
    for (Index j = 0; j < d; ++j) {
      e[j] = 1.0;
      lo[j] = std::min(lo[j], LmoInto(body, e, p));
      e[j] = -1.0;
      hi[j] = std::max(hi[j], -LmoInto(body, e, p));
      e[j] = 0.0;
    }
  }
  return (hi - lo).norm();
}

enum class FtpOutcome { kFeasible, kInfeasible, kInconclusive };

struct FtpResult {
  FtpOutcome outcome = FtpOutcome::kInconclusive;
  SoftSibSolution solution;  // slacks re-optimized for the averaged center
  // The averaged point with r shifted by eps * alpha, feasible by the game
  // guarantee before any re-optimization.
  double shifted_r = 0.0;
  Vector averaged_xi;
  double box = 0.0;  // final D
  int width_doublings = 0;
  std::int64_t iterations = 0;
};

struct FtpContext {
  double box = 0.0;  // running width proxy D, carried across tests
  double certified_box = 0.0;  // a D known to cover an optimal (r, xi)
  std::unique_ptr<WorkerPool> pool;
};

inline FtpResult soft_ftp(const SoftSibInstance& instance, double alpha_hat, double eps,
                          FtpContext& ctx, const SolverOptions& options = {}) {
  const auto& bodies = instance.bodies;
  const Index d = ValidateBodies(bodies);
  const Index n = static_cast<Index>(bodies.size());
  if (!(alpha_hat > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("soft_ftp: alpha_hat and eps must be positive");
  }
  if (ctx.box <= 0.0) ctx.box = crude_radius_bound(bodies).E;
  if (ctx.certified_box <= 0.0) ctx.certified_box = BoundingDiameter(bodies);
  ctx.box = std::max(ctx.box, alpha_hat);

  FtpResult out;
  for (;;) {
    const double D = ctx.box;
    const double rho = 3.0 * D / kSqrt2;
    const double eps_game = std::min(eps * alpha_hat / kSqrt2, 2.0 * rho);
    const GameConfig config = GameConfig::Make(eps_game, rho, options.max_iterations_cap);
    SoftSibGame game(bodies, instance.C, alpha_hat, D, ctx.pool.get());
    enum class Stop { kNone, kInfeasible, kBoxTooSmall } stop = Stop::kNone;
    const GameMonitor monitor = [&](std::int64_t, double value, const ProductElement&) {
      if (!(value > 0.0)) return MonitorAction::kContinue;
      // A positive boxed value certifies alpha < alpha* only when the box holds
      // an optimal (r, xi); D >= the union diameter guarantees that.
      stop = (game.last_unboxed_value() > 0.0 || D >= ctx.certified_box) ? Stop::kInfeasible
                                                                          : Stop::kBoxTooSmall;
      return MonitorAction::kStop;
    };
    auto result = solve_game(game, d, n, config, monitor);
    out.iterations += result.certificate.iterations_run;
    if (result.status == GameStatus::kWidthBreach || stop == Stop::kBoxTooSmall) {
      ctx.box *= 2.0;
      ++out.width_doublings;
      continue;
    }
    out.box = D;
    if (stop == Stop::kInfeasible) {
      out.outcome = FtpOutcome::kInfeasible;
      return out;
    }

    const auto& x = result.certificate.x_bar;
    SoftSibSolution& s = out.solution;
    s.center = x.base.z;
    s.witnesses = x.base.v;
    s.witness_coefficients = x.base.coefficients;
    s.nu_x = max_eigenvalue(result.certificate.payoff_bar);
    out.averaged_xi = x.xi;
    out.shifted_r = x.r + eps * alpha_hat;
    PolishSoftSolution(s, instance.C);
    const double target = (1.0 + eps) * alpha_hat;
    out.outcome = s.objective <= target + 1e-9 * std::max(1.0, target)
                      ? FtpOutcome::kFeasible
                      : FtpOutcome::kInconclusive;
    return out;
  }
}

inline SoftSibSolution solve_soft(const SoftSibInstance& instance,
                                  const SolverOptions& options = {}) {
  const auto& bodies = instance.bodies;
  ValidateBodies(bodies);
  if (bodies.size() < 2) throw std::invalid_argument("solve_soft: need at least two bodies");
  if (!(instance.C > 0.0)) throw std::invalid_argument("solve_soft: C must be positive");
  if (!(instance.epsilon > 0.0)) throw std::invalid_argument("solve_soft: epsilon must be positive");
  const Index n = static_cast<Index>(bodies.size());

  if (instance.C > 1.0) {
    // Any slack costs more than growing r by the same amount, so xi = 0.
    const SibSolution hard = solve(SibInstance{bodies, instance.epsilon}, options);
    SoftSibSolution s;
    s.status = hard.status;
    s.center = hard.center;
    s.witnesses = hard.witnesses;
    s.witness_coefficients = hard.witness_coefficients;
    s.slacks = Vector::Zero(n);
    s.radius = hard.radius;
    s.objective = hard.radius;
    s.nu_x = hard.nu_x;
    s.nu_y = hard.nu_y;
    s.width_doublings = hard.width_doublings;
    s.total_iterations = hard.total_iterations;
    s.delegated_to_hard = true;
    return s;
  }

  // Work in a frame at the first body, as the hard solver does.
  const Vector origin = FramePoint(bodies.front());
  const SoftSibInstance local{ShiftedBy(bodies, origin), instance.C, instance.epsilon};
  const RadiusBound bound = crude_radius_bound(local.bodies);
  const double E = bound.E;
  const double floor = RadiusFloor(E);

  SoftSibSolution best;
  best.center = bound.anchor;
  best.witnesses.resize(bound.anchor.size(), n);
  for (Index i = 0; i < n; ++i) {
    const auto& rep = bound.representatives[static_cast<size_t>(i)];
    best.witnesses.col(i) = rep.point;
    best.witness_coefficients.push_back(rep.coefficients);
  }
  PolishSoftSolution(best, instance.C);

  FtpContext ctx;
  if (options.threads > 1) ctx.pool = std::make_unique<WorkerPool>(options.threads);
  double L = 0.0;
  double U = E;
  int steps = 0;
  int doublings = 0;
  std::int64_t iterations = 0;
  std::vector<std::pair<double, double>> history{{L, U}};
  auto finish = [&](SoftSibSolution s, SolveStatus status) {
    s.status = status;
    s.center += origin;
    s.witnesses.colwise() += origin;
    s.bracket_steps = steps;
    s.width_doublings = doublings;
    s.total_iterations = iterations;
    s.nu_y = L;
    s.bracket_history = history;
    return s;
  };

  if (!(E > floor)) return finish(std::move(best), SolveStatus::kDegenerate);

  while (U > (1.0 + instance.epsilon) * L) {
    if (L == 0.0 && U < floor) return finish(std::move(best), SolveStatus::kDegenerate);
    const double third = (U - L) / 3.0;
    const double alpha_hat = L + third;
    const double eps_tau = third / alpha_hat;
    FtpResult ftp = soft_ftp(local, alpha_hat, eps_tau, ctx, options);
    iterations += ftp.iterations;
    doublings += ftp.width_doublings;
    if (ftp.outcome == FtpOutcome::kInconclusive) {
      return finish(std::move(best), SolveStatus::kIterationCapExhausted);
    }
    if (ftp.outcome == FtpOutcome::kInfeasible) {
      L = alpha_hat;
    } else {
      U = L + 2.0 * third;
      best = std::move(ftp.solution);
    }
    ++steps;
    history.emplace_back(L, U);
  }
  return finish(std::move(best), SolveStatus::kConverged);
}

}  // namespace sibgame
