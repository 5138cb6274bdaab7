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

#include "ozo/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ozo/error.hpp"

namespace ozo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void config_check(bool ok, const std::string& field, const std::string& why) {
  if (!ok) fail(ErrorCode::kConfig, "schedule." + field + ": " + why);
}

// Relative slack used when comparing a step size against 1/Λ or 2/Λ, so that
// α = ℓ/(dλ) computed in floating point still counts as α = 1/Λ.
constexpr double kBoundarySlack = 1e-12;

}  // namespace

void validate(const ScheduleSpec& spec) {
  std::visit(overloaded{
                 [](const ConstantAlpha& a) {
                   config_check(a.alpha > 0.0 && std::isfinite(a.alpha),
                                "alpha.alpha", "must be positive");
                 },
                 [](const PowerAlpha& a) {
                   config_check(a.alpha > 0.0 && std::isfinite(a.alpha),
                                "alpha.alpha", "must be positive");
                   config_check(a.s >= 0.0, "alpha.s", "must be >= 0");
                 },
             },
             spec.alpha);
  std::visit(overloaded{
                 [](const ConstantH& h) {
                   config_check(h.h >= 0.0 && std::isfinite(h.h), "h.h",
                                "must be >= 0");
                 },
                 [](const PowerH& h) {
                   config_check(h.h >= 0.0 && std::isfinite(h.h), "h.h",
                                "must be >= 0");
                   config_check(h.r > 0.0, "h.r", "must be > 0");
                 },
                 [](const ExpDecayH& h) {
                   config_check(h.eta > 0.0 && h.eta < 1.0, "h.eta",
                                "must lie in (0, 1)");
                   config_check(h.r > 0.0, "h.r", "must be > 0");
                   config_check(h.scale > 0.0, "h.scale", "must be > 0");
                 },
             },
             spec.h);
}

double alpha_at(const ScheduleSpec& spec, std::uint64_t k) {
  require(k >= 1, "alpha_at: iterations are counted from k = 1");
  return std::visit(
      overloaded{
          [](const ConstantAlpha& a) { return a.alpha; },
          [k](const PowerAlpha& a) {
            return a.alpha / std::pow(static_cast<double>(k), a.s);
          },
      },
      spec.alpha);
}

double h_at(const ScheduleSpec& spec, std::uint64_t k) {
  require(k >= 1, "h_at: iterations are counted from k = 1");
  const double kk = static_cast<double>(k);
  return std::visit(
      overloaded{
          [](const ConstantH& h) { return h.h; },
          [kk](const PowerH& h) { return h.h / std::pow(kk, h.r); },
          [kk](const ExpDecayH& h) {
            // Evaluated in log space: η^k underflows long before the ratio.
            return h.scale *
                   std::exp(0.5 * (kk * std::log(h.eta) - h.r * std::log(kk)));
          },
      },
      spec.h);
}

double alpha_upper(const ScheduleSpec& spec) {
  return std::visit([](const auto& a) { return a.alpha; }, spec.alpha);
}

double alpha_lower(const ScheduleSpec& spec) {
  return std::visit(overloaded{
                        [](const ConstantAlpha& a) { return a.alpha; },
                        [](const PowerAlpha& a) { return a.s == 0.0 ? a.alpha : 0.0; },
                    },
                    spec.alpha);
}

double h_upper(const ScheduleSpec& spec) { return h_at(spec, 1); }

RegimeConstants derive_constants(double lambda, std::optional<double> gamma,
                                 std::size_t d, std::size_t ell,
                                 double alpha_bar,
                                 std::optional<double> alpha_lower,
                                 std::optional<double> w_override) {
  require(lambda > 0.0, "derive_constants: lambda must be positive");
  require(d >= 1 && ell >= 1 && ell <= d,
          "derive_constants: need 1 <= ell <= d");
  require(alpha_bar > 0.0, "derive_constants: alpha_bar must be positive");
  if (gamma) require(*gamma > 0.0, "derive_constants: gamma must be positive");

  RegimeConstants c;
  c.lambda = lambda;
  c.gamma = gamma;
  c.d = d;
  c.ell = ell;
  c.alpha_bar = alpha_bar;
  c.alpha_lower = alpha_lower.value_or(alpha_bar);
  c.Lambda = lambda * static_cast<double>(d) / static_cast<double>(ell);

  const double la = c.Lambda * alpha_bar;
  if (la >= 2.0 * (1.0 - kBoundarySlack)) {
    std::ostringstream os;
    os.precision(17);
    os << "step size " << alpha_bar << " is not below the stability bound 2/Lambda = "
       << 2.0 / c.Lambda;
    fail(ErrorCode::kInfeasible, os.str());
  }

  const double ell_d = static_cast<double>(ell);
  const bool simple = la <= 1.0 + kBoundarySlack;
  if (w_override) {
    const double w = *w_override;
    if (!(w > 0.0 && w <= 1.0 && w < 2.0 - la))
      fail(ErrorCode::kConfig,
           "w override must satisfy 0 < w <= 1 and w < 2 - Lambda*alpha_bar");
    c.w = w;
    c.C = ell_d * c.Lambda * c.Lambda / (8.0 * std::min(1.0, 2.0 - la - w));
  } else if (simple) {
    c.w = 1.0;
    c.C = ell_d * c.Lambda * c.Lambda / 8.0;
  } else {
    c.w = (2.0 - la) / 2.0;
    c.C = ell_d * c.Lambda * c.Lambda / (8.0 * std::min(1.0, 2.0 - la - c.w));
  }
  if (gamma) c.eta = 1.0 - c.w * c.alpha_lower * (*gamma) / 2.0;
  return c;
}

double linear_rate_error_constant(const RegimeConstants& c) {
  if (!c.eta)
    fail(ErrorCode::kUnavailable,
         "linear-rate error constant needs the PL constant gamma");
  return c.C * c.alpha_bar / (1.0 - *c.eta);
}

StoppingRule stopping_rule_pl(double epsilon, double f0_gap, double c1,
                              double eta) {
  if (!(eta > 0.0 && eta < 1.0))
    fail(ErrorCode::kInfeasible,
         "stopping_rule_pl: eta must lie in (0, 1) for a PL contraction");
  const double total = f0_gap + c1;
  require(epsilon > 0.0 && epsilon <= total,
          "stopping_rule_pl: need 0 < epsilon <= f0_gap + C1");
  const double ratio = std::log(epsilon / total) / std::log(eta);
  // Absorb rounding so that ln η / ln η gives exactly one iteration.
  const double k = std::ceil(ratio - 1e-12 * std::max(1.0, ratio));
  const auto iterations = static_cast<std::uint64_t>(std::max(0.0, k));
  return {iterations, std::pow(eta, static_cast<double>(iterations) / 2.0)};
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::kUnclassified: return "unclassified";
    case Regime::kT1_i: return "T1-i";
    case Regime::kT1_ii: return "T1-ii";
    case Regime::kT1_iii: return "T1-iii";
    case Regime::kT1_iv: return "T1-iv";
    case Regime::kT2_i: return "T2-i'";
    case Regime::kT2_ii: return "T2-ii'";
    case Regime::kT2_iii: return "T2-iii'";
    case Regime::kT2_iv: return "T2-iv'";
  }
  return "unclassified";
}

Regime classify_regime(const ScheduleSpec& spec, const RegimeConstants& c,
                       ProblemClass problem, bool exact_directional) {
  const auto* const_alpha = std::get_if<ConstantAlpha>(&spec.alpha);
  const auto* power_alpha = std::get_if<PowerAlpha>(&spec.alpha);
  const auto* const_h = std::get_if<ConstantH>(&spec.h);
  const auto* power_h = std::get_if<PowerH>(&spec.h);
  const auto* exp_h = std::get_if<ExpDecayH>(&spec.h);
  const double Lam = c.Lambda;

  auto below = [Lam](double alpha, double factor) {
    return alpha > 0.0 && alpha * Lam < factor;
  };

  if (problem.pl && c.gamma) {
    if (const_alpha && below(const_alpha->alpha, 2.0)) {
      if (exact_directional) return Regime::kT2_iv;
      if (const_h && const_h->h > 0.0) return Regime::kT2_i;
      if (power_h && power_h->r > 0.0 && power_h->h > 0.0) return Regime::kT2_ii;
      if (exp_h && exp_h->r > 1.0 && c.eta &&
          std::abs(exp_h->eta - *c.eta) <= 1e-9 * *c.eta)
        return Regime::kT2_iii;
    }
  }
  if (problem.convex) {
    if (exact_directional) {
      if (const_alpha && below(const_alpha->alpha, 2.0)) return Regime::kT1_iv;
      return Regime::kUnclassified;
    }
    if (const_alpha && below(const_alpha->alpha, 1.0)) {
      if (const_h && const_h->h > 0.0) return Regime::kT1_i;
      if (power_h && power_h->r > 1.0 && power_h->h > 0.0) return Regime::kT1_iii;
    }
    if (power_alpha && power_alpha->s == 1.0 && below(power_alpha->alpha, 1.0) &&
        power_h && power_h->r > 0.0 && power_h->h > 0.0)
      return Regime::kT1_ii;
  }
  return Regime::kUnclassified;
}

}  // namespace ozo
