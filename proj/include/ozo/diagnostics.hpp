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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ozo/linalg.hpp"
#include "ozo/optimizer.hpp"
#include "ozo/samplers.hpp"
#include "ozo/schedules.hpp"

namespace ozo {

struct BoundRow {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs − lhs
};

/// One-sided inequality lhs ≤ rhs checked with tolerance 1e-9·(1 + |rhs|).
struct BoundReport {
  std::string name;
  std::vector<BoundRow> rows;
  std::size_t violations = 0;
  double worst_relative_violation = 0.0;  // max (lhs − rhs)/(1 + |rhs|), may be < 0

  void add(double lhs, double rhs);
  bool ok() const noexcept { return violations == 0; }
};

inline constexpr double kBoundTolerance = 1e-9;

/// ‖∇_{(P,h)}f(x) − Pᵀ∇f(x)‖ ≤ λ·d·h / (2√ℓ). Costs ℓ+1 evaluations of `f`.
BoundRow surrogate_error_check(const ObjectiveFn& f, std::span<const double> x,
                      const DirectionMatrix& p, double h,
                      std::span<const double> analytic_grad, double lambda);

/// Checks f_{k+1} − f_k ≤ −(wα_k/2)‖P_kᵀ∇f_k‖² + Cα_k h_k² on every step of a
/// trace recorded with diagnostics. The second report is the weaker
/// f_{k+1} − f_k ≤ Cα_k h_k².
struct QuasiDescentReports {
  BoundReport full;
  BoundReport weak;
};
QuasiDescentReports quasi_descent_check(const RunRecord& trace,
                                        const RegimeConstants& constants);

/// Asymptotic floor 2Cᾱh̄²/(w·α·γ) of the expected gap for h_k ≤ h̄.
/// `alpha` is the lower step bound. Throws kUnavailable without γ.
double error_region_bound(const RegimeConstants& constants, double alpha,
                          double h_bar);

enum class RateModel { kPower, kLinearLog };

struct RateFit {
  RateModel model = RateModel::kPower;
  double slope = 0.0;        // d log(gap) / d log k, or d log(gap) / dk
  double rate = 0.0;         // exponent (power) or contraction factor e^slope
  double intercept = 0.0;
  double r_squared = 0.0;
  std::uint64_t k_first = 0;  // fit window, inclusive
  std::uint64_t k_last = 0;
  bool truncated_at_floor = false;
  std::size_t points = 0;
};

/// Least squares of log(gap) on log k (power) or k (linear_log).
/// gaps[i] pairs with ks[i]. With `window_first/last` unset the window is
/// the tail half; it is cut before the first gap below 1e2·ε·|gap₀|.
/// Throws kContract when fewer than two usable points remain.
RateFit fit_rate(std::span<const std::uint64_t> ks, std::span<const double> gaps,
                 RateModel model);
RateFit fit_rate_window(std::span<const std::uint64_t> ks,
                        std::span<const double> gaps, RateModel model,
                        std::size_t first, std::size_t last);

/// Per-row ensemble mean of f − f* across replicate traces of equal shape.
/// Rows beyond the shortest trace are dropped.
struct EnsembleMean {
  std::vector<std::uint64_t> k;
  std::vector<std::uint64_t> fevals;
  std::vector<double> mean_gap;
  std::vector<double> mean_best_gap;
  std::vector<double> stderr_gap;
  std::size_t replicates = 0;
};
EnsembleMean ensemble_mean(std::span<const RunRecord> traces, double f_star);

}  // namespace ozo
