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
#include <variant>

namespace ozo {

// Step-size laws. Iterations are counted from k = 1.
struct ConstantAlpha {
  double alpha;
};
struct PowerAlpha {
  double alpha;
  double s;  // α_k = α / k^s
};
using AlphaLaw = std::variant<ConstantAlpha, PowerAlpha>;

// Discretization laws.
struct ConstantH {
  double h;
};
struct PowerH {
  double h;
  double r;  // h_k = h / k^r
};
struct ExpDecayH {
  double eta;
  double r;
  double scale = 1.0;  // h_k = scale · sqrt(η^k / k^r)
};
using HLaw = std::variant<ConstantH, PowerH, ExpDecayH>;

struct ScheduleSpec {
  AlphaLaw alpha;
  HLaw h;
};

/// Throws ErrorCode::kConfig naming the offending field.
void validate(const ScheduleSpec& spec);

double alpha_at(const ScheduleSpec& spec, std::uint64_t k);
double h_at(const ScheduleSpec& spec, std::uint64_t k);

/// sup_k α_k and inf_k α_k (the latter 0 for decaying laws).
double alpha_upper(const ScheduleSpec& spec);
double alpha_lower(const ScheduleSpec& spec);
/// sup_k h_k.
double h_upper(const ScheduleSpec& spec);

struct RegimeConstants {
  double lambda = 0.0;
  std::optional<double> gamma;
  std::size_t d = 0;
  std::size_t ell = 0;
  double alpha_bar = 0.0;
  double alpha_lower = 0.0;
  double Lambda = 0.0;  // λ·d/ℓ
  double w = 1.0;
  double C = 0.0;                // ℓΛ² / (8·min(1, 2 − Λᾱ − w))
  std::optional<double> eta;     // 1 − w·α·γ/2, when γ is known
};

/// Constants of the quasi-descent estimate and the PL rates.
///
/// w defaults to 1 when ᾱ ≤ 1/Λ and to the midpoint (2 − Λᾱ)/2 otherwise;
/// `w_override` must lie in (0, min(1, 2 − Λᾱ)). `alpha_lower` is the step
/// lower bound used in η; it defaults to ᾱ (constant step).
/// Throws ErrorCode::kInfeasible when ᾱ ≥ 2/Λ.
RegimeConstants derive_constants(double lambda, std::optional<double> gamma,
                                 std::size_t d, std::size_t ell,
                                 double alpha_bar,
                                 std::optional<double> alpha_lower = std::nullopt,
                                 std::optional<double> w_override = std::nullopt);

/// C₁ of the linear-with-error rate: C·ᾱ/(1 − η).
double linear_rate_error_constant(const RegimeConstants& c);

struct StoppingRule {
  std::uint64_t iterations;  // K
  double h_bar;              // η^{K/2}
};

/// K = ceil(ln(ε/(f₀ − f* + C₁)) / ln η), h̄ = η^{K/2}.
StoppingRule stopping_rule_pl(double epsilon, double f0_gap, double c1,
                              double eta);

enum class Regime {
  kUnclassified,
  kT1_i,
  kT1_ii,
  kT1_iii,
  kT1_iv,
  kT2_i,
  kT2_ii,
  kT2_iii,
  kT2_iv,
};

std::string_view to_string(Regime r) noexcept;

struct ProblemClass {
  bool convex = false;
  bool pl = false;
};

/// Maps a schedule to the convergence regime whose hypotheses it satisfies
/// literally. PL regimes take precedence when the problem is PL; convex
/// regimes are tried next. `exact_directional` selects the h = 0 recursion.
Regime classify_regime(const ScheduleSpec& spec, const RegimeConstants& c,
                       ProblemClass problem, bool exact_directional);

}  // namespace ozo
