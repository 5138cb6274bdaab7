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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ozo/error.hpp"
#include "ozo/harness.hpp"

using namespace ozo;
using namespace ozo::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ozo_harness_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const char* kTop = R"(
name = "small"
replicates = 3
seed = 5
budget = 200
)";

const char* kTables = R"(
[problem]
kind = "convex_pl"
d = 6
lambda = 10.0
[sweep]
ell = [1, 3]
[schedule]
alpha = { law = "constant", factor = 0.9 }
h = { law = "constant", h = 1e-4 }
)";

// Small config with extra top-level keys and table text appended.
std::string small(const std::string& top = "", const std::string& tail = "") {
  return std::string(kTop) + top + "\n" + kTables + tail;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, Scale::kDesk);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("format_double round trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-7) == "1e-07");
  CHECK(format_double(2.0) == "2");
  for (double v : {1.0 / 3.0, 123456.789e10, 5e-324})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("csv schema") {
  RunRecord rec;
  rec.rows.push_back({0, 1, 2.5, 2.5});
  CHECK(format_trace_csv(rec, false) == "k,fevals,f,best_f,alpha,h\n0,1,2.5,2.5,0,0\n");
  rec.has_diagnostics = true;
  CHECK(format_trace_csv(rec, true) ==
        "k,fevals,f,best_f,alpha,h,pg_norm2,qd_lhs,qd_rhs\n0,1,2.5,2.5,0,0,0,0,0\n");
  CHECK(format_trace_csv(rec, false).find("pg_norm2") == std::string::npos);
  CHECK_THROWS_AS(format_trace_csv(RunRecord{}, false), Error);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(small(), Scale::kDesk);
  CHECK(c.name == "small");
  CHECK(c.problem.d == 6);
  CHECK(c.problem.n == 6);
  CHECK(c.ells == std::vector<std::size_t>{1, 3});
  CHECK(*c.alpha.factor == 0.9);
  CHECK_FALSE(c.alpha.alpha.has_value());
  CHECK(c.h.h == 1e-4);
  CHECK(c.budget == 200);
  CHECK(c.replicates == 3);
  CHECK(c.master_seed == 5);
}

TEST_CASE("scale tables override the active scale only") {
  const std::string text =
      small("", "[scale.desk]\nd = 8\n[scale.paper]\nd = 16\nbudget = 900\n");
  CHECK(parse_config(text, Scale::kDesk).problem.d == 8);
  const auto paper = parse_config(text, Scale::kPaper);
  CHECK(paper.problem.d == 16);
  CHECK(paper.budget == 900);
}

TEST_CASE("validation messages name the field") {
  std::string msg = config_error(small("sampler = \"gauss\""));
  CHECK(starts_with(msg, "sampler:"));
  CHECK(msg.find("coordinate|haar|hadamard") != std::string::npos);

  auto replace = [](std::string s, const std::string& from, const std::string& to) {
    return s.replace(s.find(from), from.size(), to);
  };
  CHECK(starts_with(config_error(replace(small(), "replicates = 3", "replicates = 0")),
                    "replicates"));
  CHECK(starts_with(config_error(small("mode = \"fast\"")), "mode"));
  CHECK(starts_with(config_error(small("colour = 1")), "colour"));
  CHECK(starts_with(config_error(small("sampler = \"hadamard\"")), "sampler"));
  CHECK(starts_with(config_error(replace(small(), "budget = 200", "budget = 2")), "budget"));
  CHECK(starts_with(config_error(small("", "[scale.desk]\nell = [7]\n")), "sweep.ell"));
  CHECK(starts_with(config_error(small("", "[scale.desk]\nfoo = 1\n")), "scale.desk.foo"));
  CHECK(starts_with(config_error(small("preset = \"fig9\"")), "preset"));
  CHECK(starts_with(config_error("name = 'x'\n[problem]\nkind = 'nonconvex_pl'\nd = 4\nn = 5\n"),
                    "problem.n"));
  CHECK(starts_with(config_error("name = 'x'\n[schedule]\nalpha = {alpha = 1.0, factor = 2.0}\n"),
                    "schedule.alpha"));
  CHECK(starts_with(config_error("name = 'x'\n[schedule]\nh = {law = 'cubic'}\n"),
                    "schedule.h.law"));
  msg = config_error("name = [");
  CHECK(msg.find("parse error") != std::string::npos);
}

TEST_CASE("presets resolve at both scales") {
  CHECK(presets().size() == 12);
  for (const auto& p : presets()) {
    for (Scale s : {Scale::kDesk, Scale::kPaper}) {
      const auto c = preset_config(p.name, s);
      CHECK_NOTHROW(validate(c));
      CHECK(c.preset == p.name);
    }
  }
  const auto f1 = preset_config("fig1-left", Scale::kDesk);
  CHECK(f1.problem.d == 20);
  CHECK(f1.budget == 3000);
  CHECK(f1.replicates == 10);
  const auto f1p = preset_config("fig1-left", Scale::kPaper);
  CHECK(f1p.problem.d == 100);
  CHECK(f1p.budget == 15000);
  const auto f4 = preset_config("fig4-right", Scale::kDesk);
  CHECK(f4.problem.d == 5);
  CHECK(f4.problem.lambda == 4.0);
  CHECK(f4.h.r == 1.0);
  CHECK(f4.h.h == 1e-5);
  CHECK(preset_config("fig3-left", Scale::kDesk).replicates == 100);
  CHECK_THROWS_AS(preset_config("nope", Scale::kDesk), Error);
}

TEST_CASE("a config file can start from a preset") {
  const auto c = parse_config("preset = \"fig2-center\"\nreplicates = 2\n", Scale::kDesk);
  CHECK(c.problem.kind == ProblemKind::kNonConvexPL);
  CHECK(c.replicates == 2);
  CHECK(c.h.law == HSpec::Law::kPower);
}

TEST_CASE("plan derives per-variant constants") {
  const auto c = parse_config(small(), Scale::kDesk);
  const auto plan = plan_experiment(c);
  REQUIRE(plan.variants.size() == 2);
  for (const auto& v : plan.variants) {
    REQUIRE(v.constants.has_value());
    const double Lambda = plan.problem.lambda * 6 / static_cast<double>(v.ell);
    CHECK(v.constants->Lambda == doctest::Approx(Lambda));
    CHECK(std::get<ConstantAlpha>(v.schedule.alpha).alpha == doctest::Approx(0.9 / Lambda));
    CHECK(v.regime == Regime::kT2_i);
    CHECK(v.error_region.has_value());
  }
  const auto j = nlohmann::json::parse(describe(c, plan));
  CHECK(j["variants"][1]["regime"] == "T2-i'");
  CHECK(j["variants"][0]["constants"]["w"] == 1.0);
}

TEST_CASE("infeasible step sizes are reported, not fatal") {
  const auto c = parse_config(
      small("", "").replace(small().find("factor = 0.9"), 12, "factor = 2.5"), Scale::kDesk);
  const auto plan = plan_experiment(c);
  for (const auto& v : plan.variants) {
    CHECK_FALSE(v.constants.has_value());
    CHECK(v.constants_error.find("2/Lambda") != std::string::npos);
    CHECK(v.regime == Regime::kUnclassified);
  }
}

TEST_CASE("expdecay takes the derived eta") {
  const auto c = parse_config(
      "name = 'e'\nbudget = 50\n[problem]\nd = 4\nlambda = 4.0\n[sweep]\nell = [2]\n"
      "[schedule]\nalpha = {factor = 1.0}\nh = {law = 'expdecay', r = 2.0}\n",
      Scale::kDesk);
  const auto plan = plan_experiment(c);
  const auto& v = plan.variants[0];
  CHECK(std::get<ExpDecayH>(v.schedule.h).eta == *v.constants->eta);
  CHECK(v.regime == Regime::kT2_iii);
}

TEST_CASE("run_experiment writes traces, means and a summary") {
  auto c = parse_config(small(), Scale::kDesk);
  const fs::path dir = scratch("files");
  c.out_dir = dir.string();
  const auto res = run_experiment(c, {2, true});
  CHECK(res.summary_path == dir / "summary.json");
  std::size_t traces = 0;
  for (const auto& e : fs::directory_iterator(dir))
    traces += e.path().filename().string().rfind("trace_", 0) == 0;
  CHECK(traces == 6);
  CHECK(fs::exists(dir / "trace_l3_r002.csv"));
  CHECK(fs::exists(dir / "mean_l1.csv"));

  const auto sidecar = nlohmann::json::parse(slurp(dir / "mean_l1.json"));
  CHECK(sidecar["replicates"] == 3);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  REQUIRE(summary["results"].size() == 2);
  const auto& r0 = summary["results"][0];
  CHECK(r0["runs"].size() == 3);
  CHECK(r0["bounds"]["quasi_descent"]["violations"] == 0);
  CHECK(summary["variants"][0]["constants"].contains("error_region"));
  CHECK(summary["variants"][0]["regime"] == "T2-i'");

  const std::string mean = slurp(dir / "mean_l1.csv");
  CHECK(starts_with(mean, "k,fevals,f,best_f,alpha,h,f_stderr,f_min,f_max\n"));

  // fevals never exceed the budget.
  for (const auto& vr : res.variants)
    for (const auto& run : vr.runs)
      for (const auto& row : run.rows) CHECK(row.fevals <= c.budget);
}

TEST_CASE("outputs are identical across thread counts and reruns") {
  auto c = parse_config(small(), Scale::kDesk);
  const fs::path a = scratch("t1"), b = scratch("t4"), d = scratch("t1b");
  c.out_dir = a.string();
  run_experiment(c, {1, true});
  c.out_dir = b.string();
  run_experiment(c, {4, true});
  c.out_dir = d.string();
  run_experiment(c, {1, true});
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename();
    if (name == "summary.json") continue;  // names its own output directory
    CHECK(slurp(a / name) == slurp(b / name));
    CHECK(slurp(a / name) == slurp(d / name));
  }
}

TEST_CASE("replicate traces do not depend on the replicate count") {
  auto c = parse_config(small(), Scale::kDesk);
  c.replicates = 2;
  const auto two = run_experiment(c, {1, false});
  c.replicates = 4;
  const auto four = run_experiment(c, {1, false});
  for (std::size_t v = 0; v < 2; ++v)
    for (std::size_t r = 0; r < 2; ++r)
      CHECK(format_trace_csv(two.variants[v].runs[r], true) ==
            format_trace_csv(four.variants[v].runs[r], true));
}

TEST_CASE("exact single replicate at l = d is deterministic") {
  const std::string text =
      "name = 'ex'\nreplicates = 1\nmode = 'exact'\nbudget = 100\n"
      "[problem]\nd = 5\nlambda = 4.0\n[sweep]\nell = [5]\n"
      "[schedule]\nalpha = {factor = 1.0}\nh = {h = 0.0}\n";
  const auto c = parse_config(text, Scale::kDesk);
  const auto a = run_experiment(c, {1, false});
  const auto b = run_experiment(c, {3, false});
  CHECK(a.variants.size() == 1);
  CHECK(a.variants[0].runs.size() == 1);
  CHECK(format_trace_csv(a.variants[0].runs[0], true) ==
        format_trace_csv(b.variants[0].runs[0], true));
  CHECK(a.plan.variants[0].regime == Regime::kT2_iv);
}

TEST_CASE("divergence is recorded in the summary") {
  auto c = parse_config(small(), Scale::kDesk);
  c.alpha.factor = 3.0;  // l = d makes this plain gradient descent past 2/lambda
  c.ells = {6};
  c.mode = Mode::kExactDirectional;
  c.budget = 3000;
  const fs::path dir = scratch("div");
  c.out_dir = dir.string();
  const auto res = run_experiment(c, {2, true});
  CHECK(res.variants[0].divergences == 3);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["results"][0]["runs"][0]["status"] == "diverged");
  CHECK(summary["variants"][0]["constants"]["available"] == false);
}

TEST_CASE("unwritable output directory is an I/O error") {
  auto c = parse_config(small(), Scale::kDesk);
  const fs::path blocker = scratch("blocker");
  write_text_file(blocker, "x");
  c.out_dir = (blocker / "sub").string();
  try {
    run_experiment(c, {1, true});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
    CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
  }
  fs::remove(blocker);
}

TEST_CASE("checked-in configs match the built-in presets") {
  for (const auto& p : presets()) {
    const fs::path file = fs::path(OZO_SOURCE_DIR) / "configs" / (p.name + ".toml");
    REQUIRE(fs::exists(file));
    for (Scale s : {Scale::kDesk, Scale::kPaper}) {
      INFO(p.name, " ", to_string(s));
      const auto a = load_config(file, s);
      const auto b = preset_config(p.name, s);
      CHECK(a.name == b.name);
      CHECK(a.problem.kind == b.problem.kind);
      CHECK(a.problem.d == b.problem.d);
      CHECK(a.problem.n == b.problem.n);
      CHECK(a.problem.lambda == b.problem.lambda);
      CHECK(a.problem.rank_deficiency == b.problem.rank_deficiency);
      CHECK(a.problem.seed == b.problem.seed);
      CHECK(a.ells == b.ells);
      CHECK(a.h_sweep == b.h_sweep);
      CHECK(a.sampler == b.sampler);
      CHECK(a.alpha.law == b.alpha.law);
      CHECK(a.alpha.factor == b.alpha.factor);
      CHECK(a.alpha.alpha == b.alpha.alpha);
      CHECK(a.alpha.s == b.alpha.s);
      CHECK(a.h.law == b.h.law);
      CHECK(a.h.h == b.h.h);
      if (a.h.law != HSpec::Law::kConstant) CHECK(a.h.r == b.h.r);
      CHECK(a.replicates == b.replicates);
      CHECK(a.master_seed == b.master_seed);
      CHECK(a.budget == b.budget);
      CHECK(a.out_dir == b.out_dir);
    }
  }
}
