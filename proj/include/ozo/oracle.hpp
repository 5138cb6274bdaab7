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
#include <functional>
#include <optional>
#include <span>

#include "ozo/linalg.hpp"
#include "ozo/samplers.hpp"

namespace ozo {

using ObjectiveFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<Vector(std::span<const double>)>;

/// Zeroth-order oracle: a blackbox f plus a counter of metered calls.
///
/// `operator()` is the metered path used by the algorithm. `peek` evaluates
/// without metering and exists for trace readouts and diagnostics that the
/// caller has decided not to charge (see FevalConvention).
class Objective {
 public:
  Objective(std::size_t dim, ObjectiveFn fn);

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t eval_count() const noexcept { return count_; }

  /// Metered evaluation. Throws DivergedEvaluation on a non-finite value.
  double operator()(std::span<const double> x);
  double peek(std::span<const double> x) const;

 private:
  std::size_t dim_;
  ObjectiveFn fn_;
  std::uint64_t count_ = 0;
};

/// Forward differences of f along the columns of P.
struct SurrogateGradient {
  Vector values;  // length ℓ
  double h = 0.0;
};

/// [g]_j = (f(x + h p_j) − f(x)) / h. Costs ℓ metered calls when `fx` is the
/// cached base value, ℓ+1 otherwise.
SurrogateGradient surrogate_gradient(Objective& f, std::span<const double> x,
                                     const DirectionMatrix& p, double h,
                                     std::optional<double> fx = std::nullopt);

/// Pᵀ∇f(x), the h → 0 limit of the surrogate.
Vector projected_gradient(std::span<const double> grad,
                          const DirectionMatrix& p);

}  // namespace ozo
