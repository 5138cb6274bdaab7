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


// Exercises the shared library strictly through the C header.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "ozo/ozo.h"

namespace {

struct Counter {
  int calls = 0;
};

double sphere(const double* x, size_t dim, void* user) {
  ++static_cast<Counter*>(user)->calls;
  double s = 0;
  for (size_t i = 0; i < dim; ++i) s += x[i] * x[i];
  return s;
}

void sphere_grad(const double* x, size_t dim, double* g, void*) {
  for (size_t i = 0; i < dim; ++i) g[i] = 2 * x[i];
}

double nan_objective(const double*, size_t, void*) { return std::nan(""); }

std::string take(char* s) {
  std::string out(s);
  ozo_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(ozo_version()) > 0);
  CHECK(std::string(ozo_status_string(OZO_ERR_CONFIG)) == "config error");
  CHECK(std::string(ozo_status_string(OZO_OK)) == "ok");
}

TEST_CASE("presets list") {
  char* json = nullptr;
  REQUIRE(ozo_presets_list(&json) == OZO_OK);
  const std::string s = take(json);
  CHECK(s.find("fig1-left") != std::string::npos);
  CHECK(s.find("fig4-right") != std::string::npos);
}

TEST_CASE("null arguments are rejected") {
  CHECK(ozo_presets_list(nullptr) == OZO_ERR_NULL_ARGUMENT);
  CHECK(std::string(ozo_last_error()).find("NULL") != std::string::npos);
  CHECK(ozo_run(nullptr, nullptr) == OZO_ERR_NULL_ARGUMENT);
}

TEST_CASE("unknown sampler tag lists the valid tags") {
  ozo_sampler* s = nullptr;
  CHECK(ozo_sampler_create("gauss", 4, 2, 1, &s) == OZO_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::string(ozo_last_error()).find("coordinate|haar|hadamard") != std::string::npos);
}

TEST_CASE("sampler output is orthogonal with squared norms d/l") {
  ozo_sampler* s = nullptr;
  REQUIRE(ozo_sampler_create("hadamard", 8, 2, 3, &s) == OZO_OK);
  std::vector<double> p(16);
  REQUIRE(ozo_sampler_next(s, p.data()) == OZO_OK);
  double n0 = 0, n1 = 0, cross = 0;
  for (int i = 0; i < 8; ++i) {
    n0 += p[i] * p[i];
    n1 += p[8 + i] * p[8 + i];
    cross += p[i] * p[8 + i];
  }
  CHECK(n0 == doctest::Approx(4.0));
  CHECK(n1 == doctest::Approx(4.0));
  CHECK(std::abs(cross) < 1e-12);
  ozo_sampler_free(s);
  CHECK(ozo_sampler_create("hadamard", 6, 2, 3, &s) == OZO_ERR_CONFIG);
}

TEST_CASE("problems") {
  ozo_problem* p = nullptr;
  REQUIRE(ozo_problem_create_nonconvex_pl(1, 8.0, 1, &p) == OZO_OK);
  CHECK(ozo_problem_dim(p) == 1);
  CHECK(ozo_problem_lambda(p) == doctest::Approx(8.0));
  CHECK(ozo_problem_gamma(p) > 0.0);
  const double zero = 0.0;
  double v = 1.0, g = 1.0;
  CHECK(ozo_problem_value(p, &zero, &v) == OZO_OK);
  CHECK(ozo_problem_gradient(p, &zero, &g) == OZO_OK);
  CHECK(v == 0.0);
  CHECK(g == 0.0);
  ozo_problem_free(p);

  CHECK(ozo_problem_create_convex_pl(4, 4, 10.0, 0, 1, &p) == OZO_ERR_CONFIG);
}

TEST_CASE("single run through callbacks") {
  Counter counter;
  ozo_run_config* cfg = nullptr;
  REQUIRE(ozo_run_config_create(3, &cfg) == OZO_OK);
  const double x0[] = {1.0, -1.0, 0.5};
  REQUIRE(ozo_run_config_set_x0(cfg, x0, 3) == OZO_OK);
  REQUIRE(ozo_run_config_set_objective(cfg, sphere, &counter) == OZO_OK);
  REQUIRE(ozo_run_config_set_gradient(cfg, sphere_grad, nullptr) == OZO_OK);
  REQUIRE(ozo_run_config_set_sampler(cfg, "haar", 1, 9) == OZO_OK);
  REQUIRE(ozo_run_config_set_alpha_constant(cfg, 0.1) == OZO_OK);
  REQUIRE(ozo_run_config_set_h_constant(cfg, 1e-6) == OZO_OK);
  REQUIRE(ozo_run_config_set_budget(cfg, 101) == OZO_OK);
  REQUIRE(ozo_run_config_set_diagnostics(cfg, 1.0, 2.0) == OZO_OK);
  CHECK(ozo_run_config_set_mode(cfg, "warp") == OZO_ERR_CONFIG);
  CHECK(ozo_run_config_set_x0(cfg, x0, 2) == OZO_ERR_CONFIG);

  ozo_trace* t = nullptr;
  REQUIRE(ozo_run(cfg, &t) == OZO_OK);
  CHECK(ozo_trace_rows(t) == 101);
  CHECK(ozo_trace_oracle_calls(t) == 101);
  CHECK(counter.calls >= 101);
  CHECK_FALSE(ozo_trace_diverged(t));
  ozo_trace_row first{}, last{};
  REQUIRE(ozo_trace_row_at(t, 0, &first) == OZO_OK);
  REQUIRE(ozo_trace_row_at(t, 100, &last) == OZO_OK);
  CHECK(first.f == doctest::Approx(2.25));
  CHECK(last.fevals == 101);
  CHECK(last.f < first.f);
  CHECK(ozo_trace_row_at(t, 101, &last) == OZO_ERR_CONTRACT);
  double xf[3];
  CHECK(ozo_trace_final_x(t, xf, 3) == OZO_OK);

  const auto path = std::filesystem::temp_directory_path() / "ozo_capi_trace.csv";
  CHECK(ozo_trace_write_csv(t, path.string().c_str()) == OZO_OK);
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);
  ozo_trace_free(t);
  ozo_run_config_free(cfg);
}

TEST_CASE("a non-finite objective yields a diverged trace") {
  ozo_problem* p = nullptr;
  REQUIRE(ozo_problem_create_convex_pl(4, 4, 10.0, 1, 2, &p) == OZO_OK);
  ozo_run_config* cfg = nullptr;
  REQUIRE(ozo_run_config_create(4, &cfg) == OZO_OK);
  std::vector<double> x0(4);
  REQUIRE(ozo_problem_initial_point(p, 1, x0.data()) == OZO_OK);
  REQUIRE(ozo_run_config_set_problem(cfg, p) == OZO_OK);
  ozo_problem_free(p);  // the config keeps its own copy
  REQUIRE(ozo_run_config_set_x0(cfg, x0.data(), 4) == OZO_OK);
  REQUIRE(ozo_run_config_set_sampler(cfg, "coordinate", 4, 1) == OZO_OK);
  REQUIRE(ozo_run_config_set_alpha_constant(cfg, 0.5) == OZO_OK);
  REQUIRE(ozo_run_config_set_mode(cfg, "exact") == OZO_OK);
  REQUIRE(ozo_run_config_set_budget(cfg, 4000) == OZO_OK);
  ozo_trace* t = nullptr;
  REQUIRE(ozo_run(cfg, &t) == OZO_OK);
  CHECK(ozo_trace_diverged(t));
  CHECK(std::string(ozo_trace_message(t)).find("diverged") != std::string::npos);
  ozo_trace_free(t);

  REQUIRE(ozo_run_config_set_objective(cfg, nan_objective, nullptr) == OZO_OK);
  CHECK(ozo_run(cfg, &t) == OZO_ERR_DIVERGED);
  ozo_run_config_free(cfg);
}

TEST_CASE("experiments from a string") {
  const char* toml =
      "name = 'capi'\nreplicates = 2\nbudget = 60\n"
      "[problem]\nd = 4\nlambda = 4.0\n[sweep]\nell = [1, 4]\n"
      "[schedule]\nalpha = {factor = 1.0}\nh = {h = 1e-3}\n";
  ozo_experiment* e = nullptr;
  REQUIRE(ozo_experiment_from_string(toml, "desk", &e) == OZO_OK);
  char* json = nullptr;
  REQUIRE(ozo_experiment_describe(e, &json) == OZO_OK);
  CHECK(take(json).find("\"Lambda\"") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "ozo_capi_experiment";
  std::filesystem::remove_all(dir);
  REQUIRE(ozo_experiment_set_output_dir(e, dir.string().c_str()) == OZO_OK);
  REQUIRE(ozo_experiment_set_threads(e, 2) == OZO_OK);
  REQUIRE(ozo_experiment_set_seed(e, 77) == OZO_OK);
  char* summary = nullptr;
  REQUIRE(ozo_experiment_run(e, &summary) == OZO_OK);
  CHECK(std::filesystem::exists(take(summary)));
  CHECK(std::filesystem::exists(dir / "trace_l4_r001.csv"));
  ozo_experiment_free(e);

  CHECK(ozo_experiment_from_string("name = 'x'\nsampler = 'gauss'\n", nullptr, &e) ==
        OZO_ERR_CONFIG);
  CHECK(ozo_experiment_from_string("name = 'x'\n", "huge", &e) == OZO_ERR_CONFIG);
  CHECK(ozo_experiment_load("/nonexistent/cfg.toml", nullptr, &e) == OZO_ERR_IO);
  CHECK(ozo_experiment_from_preset("fig1-left", "paper", &e) == OZO_OK);
  ozo_experiment_free(e);
}
