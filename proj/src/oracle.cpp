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

#include "ozo/oracle.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ozo/error.hpp"

namespace ozo {

Objective::Objective(std::size_t dim, ObjectiveFn fn)
    : dim_(dim), fn_(std::move(fn)) {
  require(dim > 0, "Objective: dimension must be positive");
  require(static_cast<bool>(fn_), "Objective: empty evaluation function");
}

double Objective::operator()(std::span<const double> x) {
  ++count_;
  return peek(x);
}

double Objective::peek(std::span<const double> x) const {
  require(x.size() == dim_, "Objective: point has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_));
  const double v = fn_(x);
  if (!std::isfinite(v))
    throw DivergedEvaluation("objective returned a non-finite value",
                             Vector(x.begin(), x.end()));
  return v;
}

SurrogateGradient surrogate_gradient(Objective& f, std::span<const double> x,
                                     const DirectionMatrix& p, double h,
                                     std::optional<double> fx) {
  require(h > 0.0, "surrogate_gradient: h must be positive");
  require(x.size() == p.dim() && x.size() == f.dim(),
          "surrogate_gradient: dimension mismatch");
  const double base = fx ? *fx : f(x);
  SurrogateGradient g{Vector(p.ell()), h};
  Vector probe(x.begin(), x.end());
  for (std::size_t j = 0; j < p.ell(); ++j) {
    auto col = p.column(j);
    for (std::size_t i = 0; i < probe.size(); ++i) probe[i] = x[i] + h * col[i];
    g.values[j] = (f(probe) - base) / h;
  }
  return g;
}

Vector projected_gradient(std::span<const double> grad,
                          const DirectionMatrix& p) {
  require(grad.size() == p.dim(), "projected_gradient: gradient has length " +
                                      std::to_string(grad.size()) +
                                      ", expected " + std::to_string(p.dim()));
  return p.apply_transpose(grad);
}

}  // namespace ozo
