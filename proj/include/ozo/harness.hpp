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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ozo/diagnostics.hpp"
#include "ozo/optimizer.hpp"
#include "ozo/problems.hpp"
#include "ozo/samplers.hpp"
#include "ozo/schedules.hpp"

namespace ozo::harness {

enum class Scale { kDesk, kPaper };

std::optional<Scale> parse_scale(std::string_view s) noexcept;
std::string_view to_string(Scale s) noexcept;

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kConvexPL;
  std::size_t d = 20;
  std::size_t n = 20;
  double lambda = 100.0;
  std::size_t rank_deficiency = 1;
  std::uint64_t seed = 1;
};

/// α law in config terms. Exactly one of `alpha` (absolute) or `factor`
/// (α = factor/Λ = factor·ℓ/(dλ), resolved per ℓ) is set.
struct AlphaSpec {
  enum class Law { kConstant, kPower } law = Law::kConstant;
  std::optional<double> alpha;
  std::optional<double> factor;
  double s = 0.0;
};

struct HSpec {
  enum class Law { kConstant, kPower, kExpDecay } law = Law::kConstant;
  double h = 1e-7;
  double r = 1.0;
  std::optional<double> eta;  // expdecay; defaults to the derived η
  double scale = 1.0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string preset;  // empty when built from scratch
  Scale scale = Scale::kDesk;
  ProblemSpec problem;
  std::vector<std::size_t> ells{1};
  std::vector<double> h_sweep;  // optional sweep over the base h value
  SamplerKind sampler = SamplerKind::kCoordinate;
  bool coordinate_signs = true;
  Mode mode = Mode::kFiniteDifference;
  FevalConvention convention = FevalConvention::kCached;
  AlphaSpec alpha{AlphaSpec::Law::kConstant, std::nullopt, 1.0, 0.0};
  HSpec h;
  std::optional<double> w_override;
  std::size_t replicates = 10;
  std::uint64_t master_seed = 2024;
  std::optional<std::uint64_t> x0_seed;  // defaults to master_seed
  std::uint64_t budget = 3000;
  std::string out_dir = "out";
  bool diagnostics = true;
  bool write_final_x = false;
};

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& presets();

/// Preset as a fully resolved config at the given scale.
/// Throws ErrorCode::kConfig for an unknown name.
ExperimentConfig preset_config(std::string_view name, Scale scale);

/// Parses a TOML experiment description. `source` names the input in errors.
ExperimentConfig parse_config(std::string_view toml_text, Scale scale,
                              std::string_view source = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path, Scale scale);

/// Throws ErrorCode::kConfig naming the first invalid field.
void validate(const ExperimentConfig& config);

/// One (ℓ, h) combination of the sweep.
struct Variant {
  std::size_t ell = 1;
  std::size_t h_index = 0;   // position in h_sweep (0 without a sweep)
  ScheduleSpec schedule;
  std::optional<RegimeConstants> constants;
  std::string constants_error;  // why constants are absent
  Regime regime = Regime::kUnclassified;
  std::optional<double> error_region;
  std::optional<double> c1;
  std::string file_stem;  // "l5" or "l5_h1"
};

struct Plan {
  ProblemInstance problem;
  bool gamma_empirical = false;
  Vector x0;
  std::vector<Variant> variants;
};

/// Builds the problem, x₀, and per-variant schedules/constants.
Plan plan_experiment(const ExperimentConfig& config);

/// JSON document with the derived constants (what `ozo check` prints).
std::string describe(const ExperimentConfig& config, const Plan& plan);

std::uint64_t replicate_seed(std::uint64_t master, std::size_t ell,
                             std::size_t h_index, std::size_t replicate);

struct VariantResult {
  const Variant* variant = nullptr;
  std::vector<RunRecord> runs;
  std::vector<std::uint64_t> seeds;
  EnsembleMean mean;
  std::optional<RateFit> power_fit;
  std::optional<RateFit> linear_fit;
  std::optional<QuasiDescentReports> bounds;  // aggregated across replicates
  std::size_t divergences = 0;
};

struct ExperimentResult {
  Plan plan;
  std::vector<VariantResult> variants;
  std::filesystem::path summary_path;
};

struct RunOptions {
  std::size_t threads = 1;
  bool write_files = true;
};

/// Runs every (variant, replicate) task on a pool of `threads` workers and
/// writes traces, ensemble means and summary.json under config.out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options = {});

/// `k,fevals,f,best_f,alpha,h[,pg_norm2,qd_lhs,qd_rhs]`, LF line endings,
/// shortest round-trip floats. Throws kContract for an empty trace.
std::string format_trace_csv(const RunRecord& record, bool diagnostics);
std::string format_mean_csv(const EnsembleMean& mean,
                            std::span<const RunRecord> runs);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace ozo::harness
