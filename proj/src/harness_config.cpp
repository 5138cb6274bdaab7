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

// Experiment configuration: TOML parsing, validation, and the figure presets.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "ozo/error.hpp"
#include "ozo/harness.hpp"

namespace ozo::harness {

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  fail(ErrorCode::kConfig, field + ": " + why);
}

// Preset schedule shapes, shared by the figure families.
enum class Shape { kLeft, kCenter, kRight, kRightFast };

void apply_shape(ExperimentConfig& c, Shape shape) {
  c.alpha = {AlphaSpec::Law::kConstant, std::nullopt, 1.0, 0.0};
  switch (shape) {
    case Shape::kLeft:
      c.h = {HSpec::Law::kConstant, 1e-7, 0.0, std::nullopt, 1.0};
      break;
    case Shape::kCenter:
      c.h = {HSpec::Law::kPower, 1e-7, 1e-4, std::nullopt, 1.0};
      break;
    case Shape::kRight:
      c.alpha = {AlphaSpec::Law::kPower, std::nullopt, 1.0, 0.5};
      c.h = {HSpec::Law::kPower, 1e-7, 1e-4, std::nullopt, 1.0};
      break;
    case Shape::kRightFast:
      c.alpha = {AlphaSpec::Law::kPower, std::nullopt, 1.0, 0.5};
      c.h = {HSpec::Law::kPower, 1e-7, 1.0001, std::nullopt, 1.0};
      break;
  }
}

void apply_main_scale(ExperimentConfig& c, Scale scale) {
  if (scale == Scale::kDesk) {
    c.problem.d = c.problem.n = 20;
    c.budget = 3000;
    c.ells = {1, 5, 20};
  } else {
    c.problem.d = c.problem.n = 100;
    c.budget = 15000;
    c.ells = {1, 10, 50, 100};
  }
}

struct PresetDef {
  PresetInfo info;
  ProblemKind kind;
  Shape shape;
  int family;  // 1..4
};

const std::vector<PresetDef>& preset_defs() {
  static const std::vector<PresetDef> defs = {
      {{"fig1-left", "convex PL, alpha = l/(d*lambda), h = 1e-7"},
       ProblemKind::kConvexPL, Shape::kLeft, 1},
      {{"fig1-center", "convex PL, alpha = l/(d*lambda), h = 1e-7/k^0.0001"},
       ProblemKind::kConvexPL, Shape::kCenter, 1},
      {{"fig1-right", "convex PL, alpha = l/(d*lambda*sqrt(k)), h = 1e-7/k^0.0001"},
       ProblemKind::kConvexPL, Shape::kRight, 1},
      {{"fig2-left", "nonconvex PL, alpha = l/(d*lambda), h = 1e-7"},
       ProblemKind::kNonConvexPL, Shape::kLeft, 2},
      {{"fig2-center", "nonconvex PL, alpha = l/(d*lambda), h = 1e-7/k^0.0001"},
       ProblemKind::kNonConvexPL, Shape::kCenter, 2},
      {{"fig2-right", "nonconvex PL, alpha = l/(d*lambda*sqrt(k)), h = 1e-7/k^0.0001"},
       ProblemKind::kNonConvexPL, Shape::kRight, 2},
      {{"fig3-left", "100 restarts from one x0, l in {1, d}, h = 1e-7"},
       ProblemKind::kNonConvexPL, Shape::kLeft, 3},
      {{"fig3-center", "100 restarts from one x0, l in {1, d}, h = 1e-7/k^0.0001"},
       ProblemKind::kNonConvexPL, Shape::kCenter, 3},
      {{"fig3-right", "100 restarts, alpha = l/(d*lambda*sqrt(k)), h = 1e-7/k^1.0001"},
       ProblemKind::kNonConvexPL, Shape::kRightFast, 3},
      {{"fig4-left", "convex PL, d=5, l=1, lambda=4, fixed h in {1e-1..1e-4}"},
       ProblemKind::kConvexPL, Shape::kLeft, 4},
      {{"fig4-center", "nonconvex PL, d=5, l=1, lambda=4, fixed h in {1e-1..1e-4}"},
       ProblemKind::kNonConvexPL, Shape::kLeft, 4},
      {{"fig4-right", "nonconvex PL, d=5, l=1, lambda=4, h_k = 1e-5/k, 100 runs"},
       ProblemKind::kNonConvexPL, Shape::kCenter, 4},
  };
  return defs;
}

// ---- TOML helpers -------------------------------------------------------

std::string path_of(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

void reject_unknown(const toml::table& t, std::string_view prefix,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : t) {
    const std::string_view key = k.str();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      config_error(path_of(prefix, key), "unknown key (allowed: " + list + ")");
    }
  }
}

std::optional<double> get_double(const toml::table& t, std::string_view prefix,
                                 std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (auto d = n->value_exact<double>()) return *d;
  if (auto i = n->value_exact<std::int64_t>()) return static_cast<double>(*i);
  config_error(path_of(prefix, key), "expected a number");
}

std::optional<std::uint64_t> get_uint(const toml::table& t, std::string_view prefix,
                                      std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (auto i = n->value_exact<std::int64_t>()) {
    if (*i < 0) config_error(path_of(prefix, key), "must be non-negative");
    return static_cast<std::uint64_t>(*i);
  }
  config_error(path_of(prefix, key), "expected a non-negative integer");
}

std::optional<std::string> get_string(const toml::table& t, std::string_view prefix,
                                      std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (auto s = n->value_exact<std::string>()) return *s;
  config_error(path_of(prefix, key), "expected a string");
}

std::optional<bool> get_bool(const toml::table& t, std::string_view prefix,
                             std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (auto b = n->value_exact<bool>()) return *b;
  config_error(path_of(prefix, key), "expected true or false");
}

const toml::table* get_table(const toml::table& t, std::string_view prefix,
                             std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (const auto* tt = n->as_table()) return tt;
  config_error(path_of(prefix, key), "expected a table");
}

std::optional<std::vector<std::size_t>> get_size_list(const toml::table& t,
                                                      std::string_view prefix,
                                                      std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  const auto* arr = n->as_array();
  if (!arr) config_error(path_of(prefix, key), "expected an array of integers");
  std::vector<std::size_t> out;
  for (const auto& e : *arr) {
    auto i = e.value_exact<std::int64_t>();
    if (!i || *i < 1)
      config_error(path_of(prefix, key), "entries must be positive integers");
    out.push_back(static_cast<std::size_t>(*i));
  }
  return out;
}

std::optional<std::vector<double>> get_double_list(const toml::table& t,
                                                   std::string_view prefix,
                                                   std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  const auto* arr = n->as_array();
  if (!arr) config_error(path_of(prefix, key), "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : *arr) {
    if (auto d = e.value_exact<double>())
      out.push_back(*d);
    else if (auto i = e.value_exact<std::int64_t>())
      out.push_back(static_cast<double>(*i));
    else
      config_error(path_of(prefix, key), "entries must be numbers");
  }
  return out;
}

void read_alpha(const toml::table& t, AlphaSpec& a) {
  constexpr std::string_view p = "schedule.alpha";
  reject_unknown(t, p, {"law", "alpha", "factor", "s"});
  if (auto law = get_string(t, p, "law")) {
    if (*law == "constant")
      a.law = AlphaSpec::Law::kConstant;
    else if (*law == "power")
      a.law = AlphaSpec::Law::kPower;
    else
      config_error("schedule.alpha.law",
                   "unknown law '" + *law + "' (valid: constant|power)");
  }
  const auto alpha = get_double(t, p, "alpha");
  const auto factor = get_double(t, p, "factor");
  if (alpha && factor)
    config_error("schedule.alpha", "give either 'alpha' or 'factor', not both");
  if (alpha) {
    a.alpha = alpha;
    a.factor.reset();
  }
  if (factor) {
    a.factor = factor;
    a.alpha.reset();
  }
  if (auto s = get_double(t, p, "s")) a.s = *s;
  if (a.law == AlphaSpec::Law::kConstant) a.s = 0.0;
}

void read_h(const toml::table& t, HSpec& h) {
  constexpr std::string_view p = "schedule.h";
  reject_unknown(t, p, {"law", "h", "r", "eta", "scale"});
  if (auto law = get_string(t, p, "law")) {
    if (*law == "constant")
      h.law = HSpec::Law::kConstant;
    else if (*law == "power")
      h.law = HSpec::Law::kPower;
    else if (*law == "expdecay")
      h.law = HSpec::Law::kExpDecay;
    else
      config_error("schedule.h.law",
                   "unknown law '" + *law + "' (valid: constant|power|expdecay)");
  }
  if (auto v = get_double(t, p, "h")) h.h = *v;
  if (auto v = get_double(t, p, "r")) h.r = *v;
  if (auto v = get_double(t, p, "eta")) h.eta = *v;
  if (auto v = get_double(t, p, "scale")) h.scale = *v;
}

void read_scale_table(const toml::table& t, std::string_view prefix,
                      ExperimentConfig& c) {
  reject_unknown(t, prefix, {"d", "n", "budget", "ell", "replicates"});
  const auto d = get_uint(t, prefix, "d");
  const auto n = get_uint(t, prefix, "n");
  if (d) c.problem.d = *d;
  if (n)
    c.problem.n = *n;
  else if (d)
    c.problem.n = *d;
  if (auto b = get_uint(t, prefix, "budget")) c.budget = *b;
  if (auto l = get_size_list(t, prefix, "ell")) c.ells = *l;
  if (auto r = get_uint(t, prefix, "replicates")) c.replicates = *r;
}

}  // namespace

std::optional<Scale> parse_scale(std::string_view s) noexcept {
  if (s == "desk") return Scale::kDesk;
  if (s == "paper") return Scale::kPaper;
  return std::nullopt;
}

std::string_view to_string(Scale s) noexcept {
  return s == Scale::kDesk ? "desk" : "paper";
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> infos = [] {
    std::vector<PresetInfo> v;
    for (const auto& d : preset_defs()) v.push_back(d.info);
    return v;
  }();
  return infos;
}

ExperimentConfig preset_config(std::string_view name, Scale scale) {
  const auto& defs = preset_defs();
  const auto it = std::find_if(defs.begin(), defs.end(),
                               [&](const PresetDef& d) { return d.info.name == name; });
  if (it == defs.end())
    config_error("preset", "unknown preset '" + std::string(name) +
                               "' (run `ozo presets` for the list)");

  ExperimentConfig c;
  c.name = it->info.name;
  c.preset = it->info.name;
  c.scale = scale;
  c.problem.kind = it->kind;
  c.problem.lambda = 100.0;
  c.problem.rank_deficiency = 1;
  c.problem.seed = 7;
  c.sampler = SamplerKind::kCoordinate;
  c.replicates = 10;
  c.master_seed = 2024;
  c.out_dir = "out/" + c.name;
  apply_shape(c, it->shape);

  switch (it->family) {
    case 1:
    case 2:
      apply_main_scale(c, scale);
      break;
    case 3:
      apply_main_scale(c, scale);
      c.ells = {1, c.problem.d};
      c.replicates = 100;
      break;
    case 4:
      c.problem.d = c.problem.n = 5;
      c.problem.lambda = 4.0;
      c.ells = {1};
      c.budget = scale == Scale::kDesk ? 2000 : 5000;
      if (it->info.name == "fig4-right") {
        c.h = {HSpec::Law::kPower, 1e-5, 1.0, std::nullopt, 1.0};
        c.replicates = 100;
      } else {
        c.h_sweep = {1e-1, 1e-2, 1e-3, 1e-4};
      }
      break;
  }
  return c;
}

ExperimentConfig parse_config(std::string_view toml_text, Scale scale,
                              std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "parse error at line " << e.source().begin.line << ": " << e.description();
    fail(ErrorCode::kConfig, std::string(source) + ": " + os.str());
  }

  reject_unknown(root, "",
                 {"name", "preset", "replicates", "seed", "x0_seed", "sampler",
                  "coordinate_signs", "mode", "fevals", "diagnostics", "out",
                  "budget", "write_final_x", "problem", "sweep", "schedule",
                  "scale"});

  ExperimentConfig c;
  c.scale = scale;
  if (auto preset = get_string(root, "", "preset")) c = preset_config(*preset, scale);

  if (auto v = get_string(root, "", "name")) c.name = *v;
  if (auto v = get_uint(root, "", "replicates")) c.replicates = *v;
  if (auto v = get_uint(root, "", "seed")) c.master_seed = *v;
  if (auto v = get_uint(root, "", "x0_seed")) c.x0_seed = *v;
  if (auto v = get_uint(root, "", "budget")) c.budget = *v;
  if (auto v = get_string(root, "", "sampler")) {
    const auto kind = parse_sampler_kind(*v);
    if (!kind)
      config_error("sampler", "unknown tag '" + *v + "' (valid: " +
                                  std::string(sampler_tags()) + ")");
    c.sampler = *kind;
  }
  if (auto v = get_bool(root, "", "coordinate_signs")) c.coordinate_signs = *v;
  if (auto v = get_string(root, "", "mode")) {
    if (*v == "fd")
      c.mode = Mode::kFiniteDifference;
    else if (*v == "exact")
      c.mode = Mode::kExactDirectional;
    else
      config_error("mode", "unknown mode '" + *v + "' (valid: fd|exact)");
  }
  if (auto v = get_string(root, "", "fevals")) {
    if (*v == "cached")
      c.convention = FevalConvention::kCached;
    else if (*v == "recount")
      c.convention = FevalConvention::kRecount;
    else
      config_error("fevals", "unknown convention '" + *v + "' (valid: cached|recount)");
  }
  if (auto v = get_bool(root, "", "diagnostics")) c.diagnostics = *v;
  if (auto v = get_bool(root, "", "write_final_x")) c.write_final_x = *v;
  if (auto v = get_string(root, "", "out")) c.out_dir = *v;

  if (const auto* p = get_table(root, "", "problem")) {
    reject_unknown(*p, "problem", {"kind", "d", "n", "lambda", "rank_deficiency", "seed"});
    if (auto v = get_string(*p, "problem", "kind")) {
      const auto kind = parse_problem_kind(*v);
      if (!kind)
        config_error("problem.kind",
                     "unknown kind '" + *v + "' (valid: convex_pl|nonconvex_pl)");
      c.problem.kind = *kind;
    }
    const auto d = get_uint(*p, "problem", "d");
    const auto n = get_uint(*p, "problem", "n");
    if (d) c.problem.d = *d;
    if (n)
      c.problem.n = *n;
    else if (d)
      c.problem.n = *d;
    if (auto v = get_double(*p, "problem", "lambda")) c.problem.lambda = *v;
    if (auto v = get_uint(*p, "problem", "rank_deficiency")) c.problem.rank_deficiency = *v;
    if (auto v = get_uint(*p, "problem", "seed")) c.problem.seed = *v;
  }

  if (const auto* s = get_table(root, "", "sweep")) {
    reject_unknown(*s, "sweep", {"ell", "h"});
    if (auto v = get_size_list(*s, "sweep", "ell")) c.ells = *v;
    if (auto v = get_double_list(*s, "sweep", "h")) c.h_sweep = *v;
  }

  if (const auto* s = get_table(root, "", "schedule")) {
    reject_unknown(*s, "schedule", {"alpha", "h", "w"});
    if (const auto* a = get_table(*s, "schedule", "alpha")) read_alpha(*a, c.alpha);
    if (const auto* h = get_table(*s, "schedule", "h")) read_h(*h, c.h);
    if (auto w = get_double(*s, "schedule", "w")) c.w_override = *w;
  }

  if (const auto* sc = get_table(root, "", "scale")) {
    reject_unknown(*sc, "scale", {"desk", "paper"});
    const std::string key(to_string(scale));
    if (const auto* t = get_table(*sc, "scale", key)) read_scale_table(*t, "scale." + key, c);
    const std::string other = scale == Scale::kDesk ? "paper" : "desk";
    if (const auto* t = get_table(*sc, "scale", other)) {
      ExperimentConfig scratch;  // validate keys of the inactive scale too
      read_scale_table(*t, "scale." + other, scratch);
    }
  }

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, Scale scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), scale, path.string());
}

void validate(const ExperimentConfig& c) {
  if (c.name.empty() || c.name.find('/') != std::string::npos)
    config_error("name", "must be non-empty and contain no '/'");
  const auto& p = c.problem;
  if (p.d == 0) config_error("problem.d", "must be positive");
  if (p.n == 0) config_error("problem.n", "must be positive");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
    config_error("problem.lambda", "must be positive");
  if (p.kind == ProblemKind::kConvexPL) {
    if (p.rank_deficiency < 1 || p.rank_deficiency >= std::min(p.n, p.d))
      config_error("problem.rank_deficiency", "need 1 <= rank_deficiency < min(n, d)");
  } else {
    if (p.n != p.d) config_error("problem.n", "nonconvex_pl needs n = d");
    if (!(p.lambda > 2.0)) config_error("problem.lambda", "nonconvex_pl needs lambda > 2");
    if (p.d < 3 && p.lambda > 8.0)
      config_error("problem.lambda", "nonconvex_pl with d < 3 allows lambda <= 8");
  }

  if (c.ells.empty()) config_error("sweep.ell", "must list at least one value");
  for (std::size_t ell : c.ells)
    if (ell < 1 || ell > p.d)
      config_error("sweep.ell", "value " + std::to_string(ell) +
                                    " outside 1..d (d=" + std::to_string(p.d) + ")");
  if (std::set<std::size_t>(c.ells.begin(), c.ells.end()).size() != c.ells.size())
    config_error("sweep.ell", "values must be distinct");
  if (c.sampler == SamplerKind::kHadamard && !is_power_of_two(p.d))
    config_error("sampler", "hadamard needs d to be a power of two (d=" +
                                std::to_string(p.d) + ")");

  const auto& a = c.alpha;
  if (a.alpha.has_value() == a.factor.has_value())
    config_error("schedule.alpha", "give exactly one of 'alpha' or 'factor'");
  const double a_val = a.alpha ? *a.alpha : *a.factor;
  if (!(a_val > 0.0) || !std::isfinite(a_val))
    config_error(a.alpha ? "schedule.alpha.alpha" : "schedule.alpha.factor",
                 "must be positive");
  if (a.law == AlphaSpec::Law::kPower && !(a.s >= 0.0))
    config_error("schedule.alpha.s", "must be >= 0");

  const bool fd = c.mode == Mode::kFiniteDifference;
  const auto& h = c.h;
  if (h.law == HSpec::Law::kExpDecay) {
    if (!c.h_sweep.empty())
      config_error("sweep.h", "cannot sweep h with the expdecay law");
    if (h.eta && !(*h.eta > 0.0 && *h.eta < 1.0))
      config_error("schedule.h.eta", "must lie in (0, 1)");
    if (!(h.scale > 0.0)) config_error("schedule.h.scale", "must be positive");
  } else {
    if (fd && !(h.h > 0.0) && c.h_sweep.empty())
      config_error("schedule.h.h", "finite differences need h > 0");
    if (h.h < 0.0) config_error("schedule.h.h", "must be >= 0");
  }
  if (h.law != HSpec::Law::kConstant && !(h.r > 0.0))
    config_error("schedule.h.r", "must be positive");
  for (double v : c.h_sweep)
    if (!(v > 0.0) || !std::isfinite(v)) config_error("sweep.h", "values must be positive");
  if (c.w_override && !(*c.w_override > 0.0 && *c.w_override <= 1.0))
    config_error("schedule.w", "must lie in (0, 1]");

  if (c.replicates < 1) config_error("replicates", "must be >= 1");
  if (fd) {
    const std::size_t max_ell = *std::max_element(c.ells.begin(), c.ells.end());
    const std::uint64_t need =
        1 + max_ell + (c.convention == FevalConvention::kRecount ? 1 : 0);
    if (c.budget < need)
      config_error("budget", "must allow one iteration for every ell (>= " +
                                 std::to_string(need) + ")");
  } else if (c.budget < 1) {
    config_error("budget", "must allow at least one iteration");
  }
  if (c.out_dir.empty()) config_error("out", "must be non-empty");
}

}  // namespace ozo::harness
