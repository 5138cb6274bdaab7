// Copyright 2026 The ozo Authors.
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

#include "ozo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ozo/error.hpp"

namespace ozo {

namespace {

std::uint64_t fevals_after(std::uint64_t k, std::size_t ell,
                           FevalConvention convention) {
  const std::uint64_t per_iter =
      convention == FevalConvention::kCached ? ell : ell + 1;
  return 1 + k * per_iter;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string_view to_string(Mode m) noexcept {
  return m == Mode::kFiniteDifference ? "fd" : "exact";
}

std::string_view to_string(FevalConvention c) noexcept {
  return c == FevalConvention::kCached ? "cached" : "recount";
}

std::string_view to_string(RunStatus s) noexcept {
  return s == RunStatus::kCompleted ? "completed" : "diverged";
}

Vector step_fd(std::span<const double> x, double fx, double alpha, double h,
               const DirectionMatrix& p, Objective& f) {
  const SurrogateGradient g = surrogate_gradient(f, x, p, h, fx);
  const Vector dir = p.apply(g.values);
  Vector next(x.begin(), x.end());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] -= alpha * dir[i];
  return next;
}

Vector step_exact(std::span<const double> x, double alpha,
                  const DirectionMatrix& p, const GradientFn& gradient) {
  const Vector grad = gradient(x);
  const Vector dir = p.apply(projected_gradient(grad, p));
  Vector next(x.begin(), x.end());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] -= alpha * dir[i];
  return next;
}

void validate(const RunConfig& config) {
  auto bad = [](const std::string& field, const std::string& why) {
    fail(ErrorCode::kConfig, field + ": " + why);
  };
  if (config.dim == 0) bad("dim", "must be positive");
  if (!config.objective) bad("objective", "missing evaluation function");
  if (config.x0.size() != config.dim)
    bad("x0", "has length " + std::to_string(config.x0.size()) +
                  ", expected " + std::to_string(config.dim));
  if (!all_finite(config.x0)) bad("x0", "contains non-finite entries");
  if (config.ell == 0 || config.ell > config.dim)
    bad("ell", "need 1 <= ell <= d (got " + std::to_string(config.ell) + ")");
  if (config.sampler == SamplerKind::kHadamard && !is_power_of_two(config.dim))
    bad("sampler", "hadamard needs d to be a power of two (d=" +
                       std::to_string(config.dim) + ")");
  validate(config.schedule);
  if (config.diagnostics && !config.diagnostics->gradient)
    bad("diagnostics", "needs an analytic gradient");

  if (config.mode == Mode::kFiniteDifference) {
    if (!(h_upper(config.schedule) > 0.0))
      bad("schedule.h", "finite differences need h > 0");
    const std::uint64_t first = fevals_after(1, config.ell, config.convention);
    if (config.budget < first)
      bad("budget", "must allow one iteration (>= " + std::to_string(first) +
                        " evaluations)");
  } else {
    if (!config.gradient) bad("gradient", "exact mode needs an analytic gradient");
    if (config.budget < 1) bad("budget", "must allow at least one iteration");
  }
}

RunRecord run(const RunConfig& config) {
  validate(config);

  const bool fd = config.mode == Mode::kFiniteDifference;
  const bool recount = config.convention == FevalConvention::kRecount;
  Objective objective(config.dim, config.objective);
  Sampler sampler(config.sampler, config.dim, config.ell, config.seed,
                  config.coordinate_signs);

  RunRecord rec;
  rec.has_diagnostics = config.diagnostics.has_value();
  Vector x = config.x0;
  // f(x₀) is always charged in finite-difference mode.
  double fx = fd ? objective(x) : objective.peek(x);
  rec.rows.push_back({0, 1, fx, fx});

  auto diverge = [&](std::uint64_t k, const std::string& why) {
    rec.status = RunStatus::kDiverged;
    std::ostringstream os;
    os << "diverged at k=" << k << ": " << why;
    rec.message = os.str();
  };

  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t fevals = fevals_after(k, config.ell, config.convention);
    if (fd ? fevals > config.budget : k > config.budget) break;

    const double alpha = alpha_at(config.schedule, k);
    const double h = fd ? h_at(config.schedule, k) : 0.0;
    if (fd && !(h > 0.0)) {
      rec.message = "stopped at k=" + std::to_string(k) + ": h_k underflowed to 0";
      break;
    }

    const DirectionMatrix p = sampler.next();
    TraceRow row;
    row.k = k;
    row.fevals = fevals;
    row.alpha = alpha;
    row.h = h;

    Vector next;
    try {
      if (config.diagnostics) {
        const Vector pg = projected_gradient(config.diagnostics->gradient(x), p);
        row.pg_norm2 = norm2_squared(pg);
      }
      next = fd ? step_fd(x, fx, alpha, h, p, objective)
                : step_exact(x, alpha, p, config.gradient);
      if (!all_finite(next)) {
        diverge(k, "non-finite iterate");
        break;
      }
      const double f_next = (fd && recount) ? objective(next) : objective.peek(next);
      if (std::abs(f_next) > kDivergenceThreshold) {
        diverge(k, "|f| exceeded 1e150");
        break;
      }
      row.f = f_next;
    } catch (const DivergedEvaluation& e) {
      diverge(k, e.what());
      break;
    }

    row.best_f = std::min(rec.rows.back().best_f, row.f);
    if (config.diagnostics) {
      const auto& dg = *config.diagnostics;
      row.qd_lhs = row.f - fx;
      row.qd_rhs = -(dg.w * alpha / 2.0) * row.pg_norm2 + dg.C * alpha * h * h;
    }
    rec.rows.push_back(row);
    x = std::move(next);
    fx = row.f;
  }

  rec.oracle_calls = objective.eval_count();
  if (config.keep_final_x) rec.final_x = std::move(x);
  return rec;
}

}  // namespace ozo
