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

// Multiplicative-weights solver for symmetric cone games
//
//   min_{x in A} max_{y in B} f(x) . y
//
// where B is the spectraplex {y in K : tr(y) = 1} of a symmetric cone K and
// f is affine. The max player runs matrix-exponential style weights over the
// cone; the min player answers with best responses from an oracle. After T
// rounds the averaged pair (x~, y~) is an epsilon-Nash equilibrium provided
// every oracle payoff has spectral norm at most the declared width rho.
//
// SolveGame is the product-of-SOC specialisation written with per-block
// scalar arithmetic. SolveGameGeneral is the same scheme written against the
// EuclideanJordanAlgebra interface; it exists mainly as a cross-check.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "sibgame/eja.hpp"

namespace sibgame {

inline constexpr std::int64_t kDefaultIterationCap = 50'000'000;

struct GameConfig {
  double epsilon = 0.0;
  double rho = 0.0;
  std::int64_t max_iterations_cap = kDefaultIterationCap;
  double delta = 0.0;  // additive inexactness of the oracle

  static GameConfig Make(double epsilon, double rho,
                         std::int64_t cap = kDefaultIterationCap, double delta = 0.0) {
    GameConfig c{epsilon, rho, cap, delta};
    c.Validate();
    return c;
  }

  void Validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw std::invalid_argument("GameConfig: rho must be positive and finite");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("GameConfig: epsilon must be positive");
    if (epsilon > 2.0 * rho) {
      throw std::invalid_argument("GameConfig: epsilon must not exceed 2 * rho");
    }
    if (max_iterations_cap < 1) {
      throw std::invalid_argument("GameConfig: iteration cap must be positive");
    }
    if (!(delta >= 0.0)) throw std::invalid_argument("GameConfig: delta must be >= 0");
  }
};

struct Schedule {
  std::int64_t iterations = 0;
  double eta = 0.0;
  bool capped = false;  // the formula asked for more than the cap allows
};

// T = ceil(4 rho^2 ln(rank) / eps^2) and eta = sqrt(ln(rank) / T), with T
// clamped to the configured cap.
inline Schedule ScheduleForRank(const GameConfig& config, Index rank) {
  config.Validate();
  if (rank < 2) throw std::invalid_argument("schedule: rank must be at least 2");
  const double log_rank = std::log(static_cast<double>(rank));
  const double wanted =
      std::ceil(4.0 * config.rho * config.rho * log_rank / (config.epsilon * config.epsilon));
  Schedule s;
  if (wanted > static_cast<double>(config.max_iterations_cap)) {
    s.iterations = config.max_iterations_cap;
    s.capped = true;
  } else {
    s.iterations = std::max<std::int64_t>(1, static_cast<std::int64_t>(wanted));
  }
  s.eta = std::sqrt(log_rank / static_cast<double>(s.iterations));
  return s;
}

// Schedule for the product of n second-order cones (rank 2n).
inline Schedule schedule(const GameConfig& config, Index n) {
  if (n < 1) throw std::invalid_argument("schedule: n must be >= 1");
  return ScheduleForRank(config, 2 * n);
}

// Accumulated payoffs and the current mixed strategy of the max player.
struct MaxPlayerState {
  Matrix alpha;  // column i: running sum of the bar parts of block i
  Vector beta;   // running sum of the heads
  ProductElement y;

  static MaxPlayerState Initial(Index d, Index n) {
    MaxPlayerState s{Matrix::Zero(d, n), Vector::Zero(n), ProductElement(d, n)};
    s.y.heads().setConstant(kInvSqrt2 / static_cast<double>(n));
    return s;
  }
};

// Scratch buffers for MwuUpdate so the hot loop never allocates.
struct MwuScratch {
  Vector norms;
  Vector upper;
  Vector lower;
};

// Adds `payoff` to the accumulators and recomputes y = exp(eta/rho * S) /
// tr(exp(eta/rho * S)) blockwise. All exponents are shifted by their maximum
// before exponentiation; the normalised result is unchanged by the shift.
inline void MwuUpdate(MaxPlayerState& state, const ProductElement& payoff, double eta,
                      double rho, MwuScratch& scratch) {
  const Index n = state.beta.size();
  if (payoff.blocks() != n || payoff.dim() != state.alpha.rows()) {
    throw std::invalid_argument("mwu_update: payoff shape does not match state");
  }
  state.alpha += payoff.bars();
  state.beta += payoff.heads();

  scratch.norms.resize(n);
  scratch.upper.resize(n);
  scratch.lower.resize(n);
  const double scale = eta / (kSqrt2 * rho);
  double shift = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double norm = state.alpha.col(i).norm();
    scratch.norms[i] = norm;
    scratch.upper[i] = scale * (state.beta[i] + norm);
    scratch.lower[i] = scale * (state.beta[i] - norm);
    shift = std::max(shift, scratch.upper[i]);
  }
  double mu_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double a = std::exp(scratch.upper[i] - shift);
    const double b = std::exp(scratch.lower[i] - shift);
    scratch.upper[i] = a + b;  // mu_i
    scratch.lower[i] = a - b;  // lambda_i
    mu_sum += a + b;
  }
  const double denom = kSqrt2 * mu_sum;
  for (Index i = 0; i < n; ++i) {
    state.y.head(i) = scratch.upper[i] / denom;
    const double norm = scratch.norms[i];
    if (norm > kZeroBarNorm) {
      state.y.bar(i) = state.alpha.col(i) * (scratch.lower[i] / (denom * norm));
    } else {
      state.y.bar(i).setZero();
      state.y.bar(i)[0] = scratch.lower[i] / denom;
    }
  }
}

inline MaxPlayerState mwu_update(MaxPlayerState state, const ProductElement& payoff,
                                 double eta, double rho) {
  MwuScratch scratch;
  MwuUpdate(state, payoff, eta, rho, scratch);
  return state;
}

template <class X>
struct OracleResponse {
  X x;
  ProductElement payoff;  // f(x)
  double oracle_value = 0.0;  // f(x) . y at query time
};

// Running means of min-player points. Point types outside this namespace
// provide their own `blend` found by argument-dependent lookup.
inline void blend(double& mean, double x, double w) { mean += w * (x - mean); }
inline void blend(Vector& mean, const Vector& x, double w) { mean += w * (x - mean); }
inline void blend(Matrix& mean, const Matrix& x, double w) { mean += w * (x - mean); }

template <class P>
concept GameProblem = requires(P& p, const P& cp, const ProductElement& y,
                               OracleResponse<typename P::Point>& out,
                               const typename P::Point& x, typename P::Point& mean) {
  p.BestResponse(y, out);
  { cp.Payoff(x) } -> std::same_as<ProductElement>;
  blend(mean, x, 0.5);
};

enum class GameStatus {
  kCompleted,
  kEarlyTermination,
  kWidthBreach,
  kIterationCapExhausted,
};

inline const char* ToString(GameStatus s) {
  switch (s) {
    case GameStatus::kCompleted: return "completed";
    case GameStatus::kEarlyTermination: return "early_termination";
    case GameStatus::kWidthBreach: return "width_breach";
    case GameStatus::kIterationCapExhausted: return "iteration_cap_exhausted";
  }
  return "unknown";
}

enum class MonitorAction { kContinue, kStop };

using GameMonitor =
    std::function<MonitorAction(std::int64_t t, double oracle_value, const ProductElement& payoff)>;

template <class X>
struct NashCertificate {
  X x_bar;
  ProductElement y_bar;
  ProductElement payoff_bar;  // f(x_bar)
  std::int64_t iterations_run = 0;
  double mean_oracle_value = 0.0;
  // lambda_max(f(x_bar)) - mean oracle value + delta. The regret bound makes
  // this at most epsilon + delta after a full schedule, and it dominates
  // max_y f(x_bar).y - min_x f(x).y_bar.
  double gap_upper_bound = 0.0;
};

template <class X>
struct GameResult {
  GameStatus status = GameStatus::kCompleted;
  Schedule schedule;
  NashCertificate<X> certificate;
  double observed_norm = 0.0;  // payoff norm that triggered a width breach
  std::int64_t stop_iteration = 0;  // iteration of an early stop or breach
};

template <GameProblem P>
GameResult<typename P::Point> solve_game(P& problem, Index d, Index n,
                                         const GameConfig& config,
                                         const GameMonitor& monitor = {}) {
  using X = typename P::Point;
  GameResult<X> result;
  result.schedule = schedule(config, n);
  const std::int64_t T = result.schedule.iterations;
  const double eta = result.schedule.eta;

  MaxPlayerState state = MaxPlayerState::Initial(d, n);
  MwuScratch scratch;
  OracleResponse<X> response;
  auto& cert = result.certificate;
  cert.y_bar = ProductElement(d, n);
  double oracle_sum = 0.0;

  auto finish = [&](GameStatus status, std::int64_t t) {
    result.status = status;
    cert.iterations_run = t;
    if (t > 0) {
      cert.mean_oracle_value = oracle_sum / static_cast<double>(t);
      cert.payoff_bar = problem.Payoff(cert.x_bar);
      cert.gap_upper_bound =
          max_eigenvalue(cert.payoff_bar) - cert.mean_oracle_value + config.delta;
    }
    return result;
  };

  for (std::int64_t t = 1; t <= T; ++t) {
    problem.BestResponse(state.y, response);
    const double w = 1.0 / static_cast<double>(t);
    if (t == 1) {
      cert.x_bar = response.x;
    } else {
      blend(cert.x_bar, response.x, w);
    }
    cert.y_bar.bars() += w * (state.y.bars() - cert.y_bar.bars());
    cert.y_bar.heads() += w * (state.y.heads() - cert.y_bar.heads());
    oracle_sum += response.oracle_value;

    if (monitor && monitor(t, response.oracle_value, response.payoff) == MonitorAction::kStop) {
      result.stop_iteration = t;
      return finish(GameStatus::kEarlyTermination, t);
    }
    const double norm = spectral_norm(response.payoff);
    if (!(norm <= config.rho)) {
      result.observed_norm = norm;
      result.stop_iteration = t;
      return finish(GameStatus::kWidthBreach, t);
    }
    MwuUpdate(state, response.payoff, eta, config.rho, scratch);
  }
  return finish(result.schedule.capped ? GameStatus::kIterationCapExhausted
                                       : GameStatus::kCompleted,
                T);
}

// The same scheme over an arbitrary algebra: y_1 = e / rank, then
// y_{t+1} = exp(eta/rho * sum f(x_s)) normalised to unit trace. No overflow
// protection; intended for short runs.
template <EuclideanJordanAlgebra A, class Oracle>
  requires requires(Oracle& o, const typename A::Element& y) {
    { o(y) } -> std::same_as<typename A::Element>;
  }
std::vector<typename A::Element> SolveGameGeneral(const A& algebra, Oracle& payoff_oracle,
                                                  const GameConfig& config) {
  const Schedule s = ScheduleForRank(config, algebra.rank());
  std::vector<typename A::Element> iterates;
  iterates.reserve(static_cast<size_t>(s.iterations));
  auto y = algebra.axpy(1.0 / static_cast<double>(algebra.rank()), algebra.identity(),
                        algebra.zero());
  auto sum = algebra.zero();
  for (std::int64_t t = 1; t <= s.iterations; ++t) {
    iterates.push_back(y);
    sum = algebra.axpy(1.0, payoff_oracle(y), sum);
    auto w = algebra.exp(algebra.axpy(s.eta / config.rho, sum, algebra.zero()));
    y = algebra.axpy(1.0 / algebra.trace(w), w, algebra.zero());
  }
  return iterates;
}

}  // namespace sibgame
