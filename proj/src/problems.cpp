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

#include "ozo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ozo/error.hpp"
#include "ozo/rng.hpp"

namespace ozo {

namespace {

constexpr double kSineWeight = 3.0;

Matrix gram(const Matrix& a) {  // AᵀA
  const Matrix at = a.transpose();
  return at * a;
}

// Spectral norm of a symmetric matrix.
double sym_norm(const Matrix& m) {
  const auto eig = sym_eig(m);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

// inf_{t>0} g'(t)²/g(t) for g(t) = e·t² + 3 sin²(κt).
double min_ratio_1d(double e, double kappa) {
  auto ratio = [&](double t) {
    const double g = e * t * t + kSineWeight * std::sin(kappa * t) * std::sin(kappa * t);
    const double dg = 2.0 * e * t + kSineWeight * kappa * std::sin(2.0 * kappa * t);
    return dg * dg / g;
  };
  // Beyond t_max the quadratic term dominates and the ratio approaches 4e.
  const double t_max = 100.0 / std::sqrt(e) + 100.0;
  constexpr int kGrid = 200000;
  const double step = t_max / kGrid;
  double best = std::numeric_limits<double>::infinity();
  double best_t = step;
  for (int i = 1; i <= kGrid; ++i) {
    const double t = step * i;
    const double r = ratio(t);
    if (r < best) {
      best = r;
      best_t = t;
    }
  }
  // Golden-section refinement inside the bracketing grid cell.
  double lo = std::max(best_t - step, 1e-9 * step);
  double hi = best_t + step;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = ratio(x1);
  double f2 = ratio(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = ratio(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = ratio(x2);
    }
  }
  return std::min({best, f1, f2});
}

}  // namespace

std::string_view to_string(ProblemKind kind) noexcept {
  return kind == ProblemKind::kConvexPL ? "convex_pl" : "nonconvex_pl";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view tag) noexcept {
  if (tag == "convex_pl") return ProblemKind::kConvexPL;
  if (tag == "nonconvex_pl") return ProblemKind::kNonConvexPL;
  return std::nullopt;
}

double ProblemInstance::value(std::span<const double> x) const {
  const Vector ax = a * x;
  double f = norm2_squared(ax);
  if (kind == ProblemKind::kNonConvexPL) {
    const double s = std::sin(dot(c, x));
    f += kSineWeight * s * s;
  }
  return f;
}

Vector ProblemInstance::gradient(std::span<const double> x) const {
  const Vector ax = a * x;
  Vector g = transpose_times(a, ax);
  for (double& gi : g) gi *= 2.0;
  if (kind == ProblemKind::kNonConvexPL) {
    const double w = kSineWeight * std::sin(2.0 * dot(c, x));
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += w * c[i];
  }
  return g;
}

ObjectiveFn ProblemInstance::objective() const {
  return [p = *this](std::span<const double> x) { return p.value(x); };
}

GradientFn ProblemInstance::gradient_fn() const {
  return [p = *this](std::span<const double> x) { return p.gradient(x); };
}

ProblemClass ProblemInstance::problem_class() const {
  return {kind == ProblemKind::kConvexPL, gamma > 0.0};
}

ProblemInstance quadratic_from_matrix(Matrix a) {
  require(!a.empty(), "quadratic_from_matrix: empty matrix");
  require(a.all_finite(), "quadratic_from_matrix: non-finite entries");
  const auto eig = sym_eig(gram(a));
  const double top = std::max(eig.values.front(), 0.0);
  double smallest_nonzero = 0.0;
  for (auto it = eig.values.rbegin(); it != eig.values.rend(); ++it) {
    if (*it > 1e-10 * top) {
      smallest_nonzero = *it;
      break;
    }
  }
  ProblemInstance p;
  p.kind = ProblemKind::kConvexPL;
  p.n = a.rows();
  p.d = a.cols();
  p.a = std::move(a);
  p.lambda = 2.0 * top;
  p.gamma = 4.0 * smallest_nonzero;
  return p;
}

ProblemInstance make_convex_pl(std::size_t d, std::size_t n,
                               double lambda_target,
                               std::size_t rank_deficiency,
                               std::uint64_t seed) {
  if (d == 0 || n == 0)
    fail(ErrorCode::kConfig, "problem: d and n must be positive");
  if (!(lambda_target > 0.0))
    fail(ErrorCode::kConfig, "problem.lambda: must be positive");
  const std::size_t rank_max = std::min(n, d);
  if (rank_deficiency < 1 || rank_deficiency >= rank_max)
    fail(ErrorCode::kConfig,
         "problem.rank_deficiency: need 1 <= rank_deficiency < min(n, d)");

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, d);
  for (double& x : g.data()) x = normal(rng);

  // A = G·V_r·V_rᵀ keeps the top r right singular directions, which is
  // U·Σ·Vᵀ with the remaining singular values set to zero.
  const auto eig = sym_eig(gram(g));
  const std::size_t keep = rank_max - rank_deficiency;
  Matrix proj(d, d);
  for (std::size_t k = 0; k < keep; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        proj(i, j) += eig.vectors(i, k) * eig.vectors(j, k);
  Matrix a = g * proj;
  a *= std::sqrt(lambda_target / (2.0 * eig.values.front()));

  ProblemInstance p = quadratic_from_matrix(std::move(a));
  p.lambda = lambda_target;
  p.seed = seed;
  return p;
}

ProblemInstance nonconvex_from_parts(Matrix a, Vector c) {
  require(a.rows() == a.cols(), "nonconvex_from_parts: A must be square");
  require(c.size() == a.rows(), "nonconvex_from_parts: c has wrong length");
  const double kappa = norm2(c);
  require(kappa > 0.0, "nonconvex_from_parts: c must be nonzero");
  const Vector ac = a * c;
  for (std::size_t i = 0; i < c.size(); ++i)
    require(std::abs(ac[i] - c[i]) <= 1e-10 * std::max(1.0, kappa),
            "nonconvex_from_parts: need Ac = c");

  const std::size_t d = a.rows();
  const auto eig = sym_eig(a);  // also enforces symmetry

  // Hessian 2A² + 6cos(2cᵀx)·ccᵀ; its norm is convex in the cosine, so the
  // sup sits at cos = ±1.
  const Matrix a2 = a * a;
  Matrix plus = a2;
  plus *= 2.0;
  Matrix minus = plus;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      plus(i, j) += 2.0 * kSineWeight * c[i] * c[j];
      minus(i, j) -= 2.0 * kSineWeight * c[i] * c[j];
    }
  const double lambda = std::max(sym_norm(plus), sym_norm(minus));

  // Split x = t·u + y with u = c/‖c‖: f = g(t) + ‖Ay‖², and ‖∇f‖² =
  // g'(t)² + 4‖A²y‖². γ = min(inf g'²/g, 4·min nonzero eigenvalue of A² on u⊥).
  std::size_t u_index = 0;
  double best_align = -1.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double align = std::abs(dot(eig.vectors.col(k), c)) / kappa;
    if (align > best_align) {
      best_align = align;
      u_index = k;
    }
  }
  double top2 = 0.0;
  for (double v : eig.values) top2 = std::max(top2, v * v);
  double min_nonzero2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d; ++k) {
    if (k == u_index) continue;
    const double s2 = eig.values[k] * eig.values[k];
    if (s2 > 1e-10 * top2) min_nonzero2 = std::min(min_nonzero2, s2);
  }
  const double rho = min_ratio_1d(1.0, kappa);
  // Margin absorbs the residual of the 1-D refinement.
  const double gamma = std::min(rho, 4.0 * min_nonzero2) * (1.0 - 1e-6);

  ProblemInstance p;
  p.kind = ProblemKind::kNonConvexPL;
  p.d = d;
  p.n = d;
  p.a = std::move(a);
  p.c = std::move(c);
  p.lambda = lambda;
  p.gamma = gamma;
  return p;
}

ProblemInstance make_nonconvex_pl(std::size_t d, std::size_t n,
                                  double lambda_target, std::uint64_t seed) {
  if (d == 0) fail(ErrorCode::kConfig, "problem.d: must be positive");
  if (n != d)
    fail(ErrorCode::kConfig,
         "problem.n: nonconvex_pl needs n = d so that Ac = c is an "
         "eigenvector condition");
  if (!(lambda_target > 2.0))
    fail(ErrorCode::kConfig,
         "problem.lambda: nonconvex_pl needs lambda > 2 (the quadratic "
         "curvature along c alone is 2)");

  // Sine weight along u: 2 + 6κ² ≤ λ, with κ ≤ 1 so the 1-D profile has no
  // spurious stationary points.
  const double kappa2 = std::min(1.0, (lambda_target - 2.0) / 6.0);
  if (d < 3 && lambda_target > 2.0 + 6.0 * kappa2 + 1e-12)
    fail(ErrorCode::kConfig,
         "problem.lambda: with d < 3 nonconvex_pl reaches at most lambda = 8");

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> spread(0.1, 1.0);

  Matrix z(d, d);
  for (double& x : z.data()) x = normal(rng);
  const Matrix u = qr_positive_diagonal(z).q;

  // Spectrum: 1 on u, 0 on the last axis, √(λ/2) on the second, the rest
  // spread below it.
  Vector spectrum(d, 0.0);
  spectrum[0] = 1.0;
  if (d >= 3) {
    const double s_max = std::sqrt(lambda_target / 2.0);
    spectrum[1] = s_max;
    for (std::size_t i = 2; i + 1 < d; ++i) spectrum[i] = s_max * spread(rng);
  }

  Matrix a(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (spectrum[k] == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        a(i, j) += spectrum[k] * u(i, k) * u(j, k);
  }
  // Exact symmetry for the eigen-solver.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));

  Vector c = u.col(0);
  for (double& ci : c) ci *= std::sqrt(kappa2);

  ProblemInstance p = nonconvex_from_parts(std::move(a), std::move(c));
  p.seed = seed;
  return p;
}

PlEstimate pl_constant_nonconvex(const ProblemInstance& instance,
                                 std::uint64_t seed,
                                 std::size_t random_samples) {
  require(instance.kind == ProblemKind::kNonConvexPL,
          "pl_constant_nonconvex: instance is not nonconvex_pl");
  const std::size_t d = instance.d;
  constexpr double kBox = 10.0;

  PlEstimate best;
  best.gamma = std::numeric_limits<double>::infinity();
  Vector x(d);
  auto consider = [&](std::span<const double> pt) {
    const double gap = instance.value(pt) - instance.f_star;
    if (!(gap > 1e-14)) return;
    const double r = norm2_squared(instance.gradient(pt)) / gap;
    if (r < best.gamma) {
      best.gamma = r;
      best.argmin.assign(pt.begin(), pt.end());
    }
  };

  best.certified = d <= 5;
  if (best.certified) {
    const auto per_axis = static_cast<std::size_t>(
        std::max(3.0, std::floor(std::pow(2.0e5, 1.0 / static_cast<double>(d)))));
    std::vector<std::size_t> idx(d, 0);
    while (true) {
      for (std::size_t i = 0; i < d; ++i)
        x[i] = -kBox + 2.0 * kBox * static_cast<double>(idx[i]) /
                           static_cast<double>(per_axis - 1);
      consider(x);
      std::size_t i = 0;
      while (i < d && ++idx[i] == per_axis) idx[i++] = 0;
      if (i == d) break;
    }
  }

  Rng rng(seed);
  for (std::size_t s = 0; s < random_samples; ++s) {
    for (double& xi : x) xi = kBox * (2.0 * rng.uniform01() - 1.0);
    consider(x);
  }

  // Pattern search from the incumbent.
  if (!best.argmin.empty()) {
    Vector cur = best.argmin;
    double step = 2.0 * kBox / 64.0;
    while (step > 1e-10) {
      bool improved = false;
      for (std::size_t i = 0; i < d; ++i) {
        for (double dir : {-1.0, 1.0}) {
          Vector trial = cur;
          trial[i] = std::clamp(trial[i] + dir * step, -kBox, kBox);
          const double before = best.gamma;
          consider(trial);
          if (best.gamma < before) {
            cur = trial;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  best.pl_violation = best.gamma < 1e-12;
  return best;
}

Vector initial_point(const ProblemInstance& instance, std::uint64_t seed) {
  Rng rng(seed);
  Vector x(instance.d);
  for (double& xi : x) xi = 2.0 * rng.uniform01() - 1.0;
  const double q = norm2_squared(instance.a * x);
  if (q > 0.0) {
    const double s = std::sqrt(static_cast<double>(instance.d) / q);
    for (double& xi : x) xi *= s;
  }
  return x;
}

}  // namespace ozo
