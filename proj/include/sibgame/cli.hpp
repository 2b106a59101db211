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

// The `sibgame` command line: solve, validate and gen subcommands. The
// command functions take their streams as arguments so tests can drive them
// in-process.

#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "sibgame/instance_io.hpp"
#include "sibgame/random.hpp"
#include "sibgame/sib_solver.hpp"
#include "sibgame/soft_sib_solver.hpp"

namespace sibgame {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitDegenerate = 2;
inline constexpr int kExitCapExhausted = 3;

struct SolveFlags {
  std::optional<double> epsilon;
  std::optional<std::string> mode;
  std::optional<double> C;
  std::optional<std::int64_t> max_iters;
  std::string output = "-";
  int threads = 1;
};

struct GenFlags {
  std::string kind;
  std::int64_t n = 5;
  std::int64_t d = 2;
  std::int64_t m = 4;
  std::uint64_t seed = 0;
  std::string out = "-";
};

namespace cli_internal {

inline void WriteJson(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot open for writing");
  f << text;
}

// Instance-level checks beyond per-body validity.
inline void CheckSolvable(const InstanceFile& f) {
  if (f.bodies.size() < 2) {
    throw InputError("bodies: need at least two bodies, got " + std::to_string(f.bodies.size()));
  }
  if (f.mode == "soft" && !f.C) throw InputError("C: required when mode is \"soft\"");
}

inline int ExitCodeFor(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return kExitOk;
    case SolveStatus::kDegenerate: return kExitDegenerate;
    case SolveStatus::kIterationCapExhausted: return kExitCapExhausted;
  }
  return kExitInputError;
}

}  // namespace cli_internal

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const InstanceFile f = LoadInstance(path);
    cli_internal::CheckSolvable(f);
    out << "ok: " << f.bodies.size() << " bodies in dimension " << f.dimension << "\n";
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

inline int cmd_solve(const std::string& path, const SolveFlags& flags, std::ostream& out,
                     std::ostream& err) {
  InstanceFile f;
  try {
    f = LoadInstance(path);
    if (flags.mode) {
      if (*flags.mode != "hard" && *flags.mode != "soft") {
        throw InputError("--mode: expected hard or soft, got '" + *flags.mode + "'");
      }
      f.mode = *flags.mode;
    }
    if (flags.epsilon) {
      if (!(*flags.epsilon > 0.0)) throw InputError("--epsilon: must be positive");
      f.epsilon = *flags.epsilon;
    }
    if (flags.C) {
      if (!(*flags.C > 0.0)) throw InputError("--C: must be positive");
      f.C = *flags.C;
    }
    if (flags.max_iters && *flags.max_iters < 1) throw InputError("--max-iters: must be >= 1");
    if (flags.threads < 1) throw InputError("--threads: must be >= 1");
    cli_internal::CheckSolvable(f);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  SolverOptions options;
  if (flags.max_iters) options.max_iterations_cap = *flags.max_iters;
  options.threads = flags.threads;

  ResultFile r;
  r.mode = f.mode;
  SolveStatus status;
  const auto start = std::chrono::steady_clock::now();
  if (f.mode == "hard") {
    const SibSolution s = solve(SibInstance{f.bodies, f.epsilon}, options);
    status = s.status;
    r.radius = s.radius;
    r.center = s.center;
    r.witnesses = s.witnesses;
    r.nu_x = s.nu_x;
    r.nu_y = s.nu_y;
    r.iterations = s.total_iterations;
    r.width_doublings = s.width_doublings;
    r.radius_halvings = s.radius_halvings;
  } else {
    const SoftSibSolution s = solve_soft(SoftSibInstance{f.bodies, *f.C, f.epsilon}, options);
    status = s.status;
    r.radius = s.radius;
    r.center = s.center;
    r.witnesses = s.witnesses;
    r.slacks = s.slacks;
    r.objective = s.objective;
    r.nu_x = s.nu_x;
    r.nu_y = s.nu_y;
    r.iterations = s.total_iterations;
    r.width_doublings = s.width_doublings;
    r.bracket_steps = s.bracket_steps;
  }
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.status = ToString(status);
  r.converged = status == SolveStatus::kConverged;

  try {
    cli_internal::WriteJson(EmitResult(r), flags.output, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (status == SolveStatus::kDegenerate) {
    err << "degenerate instance: the bodies appear to share a common point\n";
  } else if (status == SolveStatus::kIterationCapExhausted) {
    err << "iteration cap exhausted; the emitted result is not certified\n";
  }
  return cli_internal::ExitCodeFor(status);
}

inline int cmd_gen(const GenFlags& flags, std::ostream& out, std::ostream& err) {
  try {
    const BodyKind kind = ParseBodyKind(flags.kind);
    if (flags.n < 1 || flags.d < 1 || flags.m < 1) {
      throw std::invalid_argument("n, d and m must be >= 1");
    }
    Rng rng(flags.seed);
    InstanceFile f;
    f.dimension = flags.d;
    f.bodies = GenerateBodies(rng, kind, flags.n, flags.d, flags.m);
    cli_internal::WriteJson(EmitInstance(f), flags.out, out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

inline int RunCli(int argc, char** argv, std::ostream& out = std::cout,
                  std::ostream& err = std::cerr) {
  CLI::App app{"Smallest intersecting ball solver"};
  app.footer(
      "Exit codes: 0 success, 1 parse or validation error, 2 degenerate instance\n"
      "(bodies share a point), 3 iteration cap exhausted (partial result emitted\n"
      "with \"converged\": false).");
  app.require_subcommand(1);

  std::string solve_path;
  SolveFlags solve_flags;
  double eps = 0.0, c = 0.0;
  std::string mode;
  std::int64_t max_iters = 0;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("instance", solve_path, "Instance JSON file")->required();
  auto* eps_opt = solve_cmd->add_option("--epsilon", eps, "Relative accuracy");
  auto* mode_opt = solve_cmd->add_option("--mode", mode, "hard or soft");
  auto* c_opt = solve_cmd->add_option("--C", c, "Slack penalty (soft mode)");
  auto* iters_opt = solve_cmd->add_option("--max-iters", max_iters, "Iteration cap per game run");
  solve_cmd->add_option("--output", solve_flags.output, "Result path, - for stdout");
  solve_cmd->add_option("--threads", solve_flags.threads, "Threads for per-body oracle calls");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check an instance file");
  validate_cmd->add_option("instance", validate_path, "Instance JSON file")->required();

  GenFlags gen_flags;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance (mt19937_64)");
  gen_cmd->add_option("kind", gen_flags.kind,
                      "polytope, reduced_polytope, aabb, ball or ellipsoid")
      ->required();
  gen_cmd->add_option("--n", gen_flags.n, "Number of bodies");
  gen_cmd->add_option("--d", gen_flags.d, "Dimension");
  gen_cmd->add_option("--m", gen_flags.m, "Points per polytope");
  gen_cmd->add_option("--seed", gen_flags.seed, "PRNG seed");
  gen_cmd->add_option("--out", gen_flags.out, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (*solve_cmd) {
    if (*eps_opt) solve_flags.epsilon = eps;
    if (*mode_opt) solve_flags.mode = mode;
    if (*c_opt) solve_flags.C = c;
    if (*iters_opt) solve_flags.max_iters = max_iters;
    return cmd_solve(solve_path, solve_flags, out, err);
  }
  if (*validate_cmd) return cmd_validate(validate_path, out, err);
  return cmd_gen(gen_flags, out, err);
}

}  // namespace sibgame
