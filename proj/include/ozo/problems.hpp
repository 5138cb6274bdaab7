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
#include <span>
#include <string_view>

#include "ozo/linalg.hpp"
#include "ozo/oracle.hpp"
#include "ozo/schedules.hpp"

namespace ozo {

enum class ProblemKind { kConvexPL, kNonConvexPL };

std::string_view to_string(ProblemKind kind) noexcept;
std::optional<ProblemKind> parse_problem_kind(std::string_view tag) noexcept;

/// Test objective with analytic gradient and exact constants.
///
///   ConvexPL:     f(x) = ‖Ax‖²
///   NonConvexPL:  f(x) = ‖Ax‖² + 3 sin²(cᵀx),  A symmetric, Ac = c
///
/// Both have f* = 0, attained at x = 0.
struct ProblemInstance {
  ProblemKind kind = ProblemKind::kConvexPL;
  std::size_t d = 0;
  std::size_t n = 0;
  Matrix a;
  Vector c;              // empty for ConvexPL
  double lambda = 0.0;   // Lipschitz constant of ∇f
  double gamma = 0.0;    // PL constant
  double f_star = 0.0;
  std::uint64_t seed = 0;

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;

  ObjectiveFn objective() const;
  GradientFn gradient_fn() const;
  ProblemClass problem_class() const;
};

/// f = ‖Ax‖² for a given A; λ = 2σ_max², γ = 4σ₊² (smallest nonzero σ).
ProblemInstance quadratic_from_matrix(Matrix a);

/// Gaussian A with its smallest singular values zeroed, rescaled to λ.
ProblemInstance make_convex_pl(std::size_t d, std::size_t n,
                               double lambda_target,
                               std::size_t rank_deficiency,
                               std::uint64_t seed);

/// f = ‖Ax‖² + 3 sin²(cᵀx) for symmetric A with Ac = c.
/// λ is the exact sup of the Hessian norm; γ follows from splitting x along
/// u = c/‖c‖ and its complement, with the 1-D part minimized numerically.
ProblemInstance nonconvex_from_parts(Matrix a, Vector c);

ProblemInstance make_nonconvex_pl(std::size_t d, std::size_t n,
                                  double lambda_target, std::uint64_t seed);

struct PlEstimate {
  double gamma = 0.0;
  bool certified = false;     // grid-backed search (d <= 5); else sampled
  bool pl_violation = false;  // ratio below 1e-12 found: construction bug
  Vector argmin;
};

/// Searches [−10,10]^d for the smallest ‖∇f(x)‖²/(f(x) − f*).
/// Throws ErrorCode::kContract for a ConvexPL instance.
PlEstimate pl_constant_nonconvex(const ProblemInstance& instance,
                                 std::uint64_t seed,
                                 std::size_t random_samples = 100000);

/// Seeded x₀ with iid U[−1,1] entries, scaled so that ‖Ax₀‖² = d.
Vector initial_point(const ProblemInstance& instance, std::uint64_t seed);

}  // namespace ozo
