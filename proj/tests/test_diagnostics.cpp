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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ozo/diagnostics.hpp"
#include "ozo/error.hpp"
#include "ozo/problems.hpp"
#include "ozo/rng.hpp"

using namespace ozo;

namespace {

DirectionMatrix single_column(std::initializer_list<double> col) {
  DirectionMatrix p(col.size(), 1);
  std::size_t i = 0;
  for (double v : col) p.column(0)[i++] = v;
  return p;
}

}  // namespace

TEST_CASE("bound report tolerance") {
  BoundReport r;
  r.add(1.0, 1.0);
  r.add(1.0 + 1e-10, 1.0);
  CHECK(r.ok());
  r.add(1.0 + 1e-8, 1.0);
  CHECK(r.violations == 1);
  CHECK(r.worst_relative_violation == doctest::Approx(0.5e-8));
}

TEST_CASE("surrogate error bound: linear objective has zero error") {
  const Vector c{1, 2, 3};
  const ObjectiveFn f = [&](std::span<const double> x) { return dot(c, x); };
  Rng rng(1);
  const auto p = sample_haar(3, 2, rng);
  const auto row = surrogate_error_check(f, Vector{1, 1, 1}, p, 0.1, c, 1.0);
  CHECK(row.lhs < 1e-12);
  CHECK(row.lhs <= row.rhs);
}

TEST_CASE("surrogate error bound is tight for the squared norm") {
  const ObjectiveFn f = [](std::span<const double> x) { return norm2_squared(x); };
  const auto p = single_column({std::sqrt(2.0), 0.0});
  for (double h : {0.5, 1e-2, 1e-4}) {
    const Vector x{0.3, -1.2};
    const Vector grad{2 * x[0], 2 * x[1]};
    const auto row = surrogate_error_check(f, x, p, h, grad, 2.0);
    CHECK(row.rhs == doctest::Approx(2 * h).epsilon(1e-15));
    CHECK(std::abs(row.lhs - row.rhs) <= 1e-9 * (1 + row.rhs));
  }
}

TEST_CASE("surrogate error bound on random quadratics") {
  BoundReport rep;
  Rng rng(3);
  for (int inst = 0; inst < 5; ++inst) {
    const auto pr = make_convex_pl(8, 6, 10.0, 1, 100 + inst);
    Sampler s(SamplerKind::kHaar, 8, 3, 200 + inst);
    for (int t = 0; t < 100; ++t) {
      Vector x(8);
      for (auto& v : x) v = 2 * rng.uniform01() - 1;
      const double h = std::pow(10.0, -4 * rng.uniform01());
      const auto row = surrogate_error_check(pr.objective(), x, s.next(), h, pr.gradient(x), pr.lambda);
      rep.add(row.lhs, row.rhs);
    }
  }
  CHECK(rep.ok());
}

TEST_CASE("quasi-descent with h = 0 is plain descent") {
  const auto pr = make_convex_pl(6, 6, 10.0, 1, 9);
  RunConfig cfg;
  cfg.dim = 6;
  cfg.objective = pr.objective();
  cfg.gradient = pr.gradient_fn();
  cfg.ell = 2;
  cfg.mode = Mode::kExactDirectional;
  cfg.budget = 300;
  cfg.x0 = initial_point(pr, 1);
  const auto c = derive_constants(pr.lambda, pr.gamma, 6, 2, 0.9 * 2 / (6 * pr.lambda));
  cfg.schedule = {ConstantAlpha{c.alpha_bar}, ConstantH{0.0}};
  cfg.diagnostics = DiagnosticsSpec{pr.gradient_fn(), c.w, c.C};
  const auto rec = run(cfg);
  const auto rep = quasi_descent_check(rec, c);
  CHECK(rep.full.ok());
  CHECK(rep.weak.ok());
  CHECK(rep.full.rows.size() == 300);
  for (const auto& row : rep.full.rows) CHECK(row.rhs <= 0.0);
}

TEST_CASE("quasi-descent with fixed h on a nonconvex problem") {
  const auto pr = make_nonconvex_pl(10, 10, 50.0, 2);
  for (std::size_t ell : {1u, 4u, 10u}) {
    const auto c = derive_constants(pr.lambda, pr.gamma, 10, ell,
                                    1.5 * ell / (10 * pr.lambda));
    RunConfig cfg;
    cfg.dim = 10;
    cfg.objective = pr.objective();
    cfg.ell = ell;
    cfg.sampler = SamplerKind::kHaar;
    cfg.budget = 2000;
    cfg.x0 = initial_point(pr, 4);
    cfg.schedule = {ConstantAlpha{c.alpha_bar}, ConstantH{1e-3}};
    cfg.diagnostics = DiagnosticsSpec{pr.gradient_fn(), c.w, c.C};
    const auto rep = quasi_descent_check(run(cfg), c);
    CHECK(rep.full.ok());
  }
}

TEST_CASE("quasi-descent needs diagnostics") {
  RunRecord rec;
  const auto c = derive_constants(1.0, std::nullopt, 1, 1, 0.5);
  CHECK_THROWS_AS(quasi_descent_check(rec, c), Error);
}

TEST_CASE("error region bound") {
  const auto c = derive_constants(4.0, 0.5, 5, 1, 0.05);
  CHECK(error_region_bound(c, 0.05, 0.0) == 0.0);
  const double b1 = error_region_bound(c, 0.05, 1e-2);
  CHECK(error_region_bound(c, 0.05, 2e-2) == doctest::Approx(4 * b1));
  CHECK(b1 == doctest::Approx(2 * c.C * 0.05 * 1e-4 / (c.w * 0.05 * 0.5)));
  const auto no_gamma = derive_constants(4.0, std::nullopt, 5, 1, 0.05);
  try {
    error_region_bound(no_gamma, 0.05, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnavailable);
  }
}

TEST_CASE("rate fits on synthetic traces") {
  std::vector<std::uint64_t> ks;
  std::vector<double> power, geo;
  for (std::uint64_t k = 1; k <= 200; ++k) {
    ks.push_back(k);
    power.push_back(7.0 / (static_cast<double>(k) * static_cast<double>(k)));
    geo.push_back(3.0 * std::pow(0.9, static_cast<double>(k)));
  }
  const auto pf = fit_rate(ks, power, RateModel::kPower);
  CHECK(std::abs(pf.rate + 2.0) < 1e-6);
  CHECK(pf.r_squared == doctest::Approx(1.0));
  const auto lf = fit_rate(ks, geo, RateModel::kLinearLog);
  CHECK(std::abs(lf.rate - 0.9) < 1e-6);
  CHECK_FALSE(lf.truncated_at_floor);

  const auto w = fit_rate_window(ks, geo, RateModel::kLinearLog, 10, 20);
  CHECK(w.k_first == 11);
  CHECK(w.k_last == 21);
  CHECK(std::abs(w.rate - 0.9) < 1e-9);
}

TEST_CASE("rate fit stops at the rounding floor") {
  std::vector<std::uint64_t> ks;
  std::vector<double> gaps;
  for (std::uint64_t k = 0; k < 600; ++k) {
    ks.push_back(k);
    gaps.push_back(std::max(std::pow(0.9, static_cast<double>(k)), 1e-16));
  }
  const auto f = fit_rate(ks, gaps, RateModel::kLinearLog);
  CHECK(f.truncated_at_floor);
  CHECK(std::abs(f.rate - 0.9) < 1e-9);
}

TEST_CASE("ensemble mean") {
  RunRecord a, b;
  a.rows = {{0, 1, 4.0, 4.0}, {1, 2, 2.0, 2.0}};
  b.rows = {{0, 1, 2.0, 2.0}, {1, 2, 3.0, 2.0}, {2, 3, 1.0, 1.0}};
  const RunRecord both[] = {a, b};
  const auto m = ensemble_mean(both, 1.0);
  CHECK(m.replicates == 2);
  CHECK(m.k.size() == 2);
  CHECK(m.mean_gap == std::vector<double>{2.0, 1.5});
  CHECK(m.mean_best_gap == std::vector<double>{2.0, 1.0});
  CHECK(m.stderr_gap[0] == doctest::Approx(1.0));
}
