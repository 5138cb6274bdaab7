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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ozo/linalg.hpp"
#include "ozo/oracle.hpp"
#include "ozo/samplers.hpp"
#include "ozo/schedules.hpp"

namespace ozo {

enum class Mode {
  kFiniteDifference,   // forward differences along P_k
  kExactDirectional,   // x − α P Pᵀ ∇f(x), needs an analytic gradient
};

/// How the `fevals` column is charged.
///  kCached:  1 + kℓ. The value f(x_k) recorded for iterate k is an unmetered
///            readout that the next iteration reuses as its base value.
///  kRecount: 1 + k(ℓ+1). Every base value is charged, ℓ+1 per iteration.
enum class FevalConvention { kCached, kRecount };

std::string_view to_string(Mode m) noexcept;
std::string_view to_string(FevalConvention c) noexcept;

/// Analytic side channel for per-iteration diagnostics. Never metered.
struct DiagnosticsSpec {
  GradientFn gradient;
  double w = 1.0;  // quasi-descent weights from derive_constants
  double C = 0.0;
};

struct RunConfig {
  std::size_t dim = 0;
  ObjectiveFn objective;
  GradientFn gradient;  // required in kExactDirectional
  SamplerKind sampler = SamplerKind::kCoordinate;
  std::size_t ell = 1;
  std::uint64_t seed = 0;
  bool coordinate_signs = true;
  ScheduleSpec schedule{ConstantAlpha{1e-3}, ConstantH{1e-7}};
  Mode mode = Mode::kFiniteDifference;
  FevalConvention convention = FevalConvention::kCached;
  /// Oracle calls (FiniteDifference) or iterations (ExactDirectional).
  std::uint64_t budget = 0;
  Vector x0;
  double f_star = 0.0;  // subtracted for the gap columns when known
  std::optional<DiagnosticsSpec> diagnostics;
  bool keep_final_x = true;
};

struct TraceRow {
  std::uint64_t k = 0;
  std::uint64_t fevals = 0;
  double f = 0.0;
  double best_f = 0.0;
  double alpha = 0.0;  // parameters of the step that produced x_k (0 at k=0)
  double h = 0.0;
  // Diagnostics for the step x_{k−1} → x_k.
  double pg_norm2 = 0.0;  // ‖P_{k−1}ᵀ∇f(x_{k−1})‖²
  double qd_lhs = 0.0;    // f_k − f_{k−1}
  double qd_rhs = 0.0;    // −(wα/2)·pg_norm2 + Cαh²
};

enum class RunStatus { kCompleted, kDiverged };

std::string_view to_string(RunStatus s) noexcept;

struct RunRecord {
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::kCompleted;
  std::string message;  // divergence details
  bool has_diagnostics = false;
  Vector final_x;
  std::uint64_t oracle_calls = 0;  // every metered call actually made
};

/// One step of the finite-difference method:
///   x_{k+1} = x_k − α_k · P · ∇_{(P,h_k)} f(x_k).
/// `fx` is the cached f(x_k); exactly ℓ metered calls are made.
Vector step_fd(std::span<const double> x, double fx, double alpha, double h,
               const DirectionMatrix& p, Objective& f);

/// x_{k+1} = x_k − α_k · P Pᵀ ∇f(x_k).
Vector step_exact(std::span<const double> x, double alpha,
                  const DirectionMatrix& p, const GradientFn& gradient);

/// Threshold on |f| past which a run is declared diverged.
inline constexpr double kDivergenceThreshold = 1e150;

void validate(const RunConfig& config);

/// Runs until the budget is exhausted or the iterates diverge. Divergence is
/// reported through RunRecord::status with the partial trace kept.
RunRecord run(const RunConfig& config);

}  // namespace ozo
