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

#include "ozo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ozo/error.hpp"
#include "ozo/oracle.hpp"

namespace ozo {

void BoundReport::add(double lhs, double rhs) {
  rows.push_back({lhs, rhs, rhs - lhs});
  const double rel = (lhs - rhs) / (1.0 + std::abs(rhs));
  if (rows.size() == 1 || rel > worst_relative_violation)
    worst_relative_violation = rel;
  if (lhs > rhs + kBoundTolerance * (1.0 + std::abs(rhs))) ++violations;
}

BoundRow surrogate_error_check(const ObjectiveFn& f, std::span<const double> x,
                      const DirectionMatrix& p, double h,
                      std::span<const double> analytic_grad, double lambda) {
  Objective obj(x.size(), f);
  const SurrogateGradient s = surrogate_gradient(obj, x, p, h);
  const Vector exact = projected_gradient(analytic_grad, p);
  double err2 = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    const double e = s.values[j] - exact[j];
    err2 += e * e;
  }
  BoundRow row;
  row.lhs = std::sqrt(err2);
  row.rhs = lambda * static_cast<double>(p.dim()) * h /
            (2.0 * std::sqrt(static_cast<double>(p.ell())));
  row.slack = row.rhs - row.lhs;
  return row;
}

QuasiDescentReports quasi_descent_check(const RunRecord& trace,
                                        const RegimeConstants& constants) {
  require(trace.has_diagnostics,
          "quasi_descent_check: trace was recorded without diagnostics");
  QuasiDescentReports out;
  out.full.name = "quasi_descent";
  out.weak.name = "quasi_descent_weak";
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    const TraceRow& r = trace.rows[i];
    const double lhs = r.f - trace.rows[i - 1].f;
    const double err = constants.C * r.alpha * r.h * r.h;
    out.full.add(lhs, -(constants.w * r.alpha / 2.0) * r.pg_norm2 + err);
    out.weak.add(lhs, err);
  }
  return out;
}

double error_region_bound(const RegimeConstants& constants, double alpha,
                          double h_bar) {
  if (!constants.gamma)
    fail(ErrorCode::kUnavailable,
         "error_region_bound: PL constant gamma unknown for this problem");
  require(alpha > 0.0, "error_region_bound: alpha must be positive");
  return 2.0 * constants.C * constants.alpha_bar * h_bar * h_bar /
         (constants.w * alpha * *constants.gamma);
}

RateFit fit_rate_window(std::span<const std::uint64_t> ks,
                        std::span<const double> gaps, RateModel model,
                        std::size_t first, std::size_t last) {
  require(ks.size() == gaps.size(), "fit_rate: ks and gaps differ in length");
  require(first <= last && last < ks.size(), "fit_rate: bad window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  RateFit fit;
  fit.model = model;
  for (std::size_t i = first; i <= last; ++i) {
    if (!(gaps[i] > 0.0)) continue;
    if (model == RateModel::kPower && ks[i] == 0) continue;
    const double xv = model == RateModel::kPower
                          ? std::log(static_cast<double>(ks[i]))
                          : static_cast<double>(ks[i]);
    const double yv = std::log(gaps[i]);
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
    syy += yv * yv;
    ++n;
  }
  require(n >= 2, "fit_rate: fewer than two usable points in the window");
  const double nn = static_cast<double>(n);
  const double cov = sxy - sx * sy / nn;
  const double varx = sxx - sx * sx / nn;
  const double vary = syy - sy * sy / nn;
  require(varx > 0.0, "fit_rate: degenerate abscissae");
  fit.slope = cov / varx;
  fit.intercept = (sy - fit.slope * sx) / nn;
  fit.r_squared = vary > 0.0 ? (cov * cov) / (varx * vary) : 1.0;
  fit.rate = model == RateModel::kPower ? fit.slope : std::exp(fit.slope);
  fit.k_first = ks[first];
  fit.k_last = ks[last];
  fit.points = n;
  return fit;
}

RateFit fit_rate(std::span<const std::uint64_t> ks, std::span<const double> gaps,
                 RateModel model) {
  require(ks.size() == gaps.size() && !gaps.empty(),
          "fit_rate: need matching, non-empty inputs");
  const double floor =
      1e2 * std::numeric_limits<double>::epsilon() * std::abs(gaps.front());
  std::size_t usable = gaps.size();
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (!(gaps[i] > floor)) {
      usable = i;
      break;
    }
  }
  require(usable >= 2, "fit_rate: gap reaches the rounding floor immediately");
  const std::size_t first = usable / 2;
  RateFit fit = fit_rate_window(ks, gaps, model, first, usable - 1);
  fit.truncated_at_floor = usable < gaps.size();
  return fit;
}

EnsembleMean ensemble_mean(std::span<const RunRecord> traces, double f_star) {
  require(!traces.empty(), "ensemble_mean: no traces");
  std::size_t rows = std::numeric_limits<std::size_t>::max();
  for (const auto& t : traces) rows = std::min(rows, t.rows.size());
  EnsembleMean m;
  m.replicates = traces.size();
  const double n = static_cast<double>(traces.size());
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0, s2 = 0, sb = 0;
    for (const auto& t : traces) {
      const double g = t.rows[i].f - f_star;
      s += g;
      s2 += g * g;
      sb += t.rows[i].best_f - f_star;
    }
    const double mean = s / n;
    const double var = traces.size() > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1)) : 0.0;
    m.k.push_back(traces.front().rows[i].k);
    m.fevals.push_back(traces.front().rows[i].fevals);
    m.mean_gap.push_back(mean);
    m.mean_best_gap.push_back(sb / n);
    m.stderr_gap.push_back(std::sqrt(var / n));
  }
  return m;
}

}  // namespace ozo
