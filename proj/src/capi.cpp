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


#include "ozo/ozo.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "json.hpp"
#include "ozo/error.hpp"
#include "ozo/harness.hpp"
#include "ozo/optimizer.hpp"
#include "ozo/problems.hpp"
#include "ozo/samplers.hpp"

struct ozo_experiment {
  ozo::harness::ExperimentConfig config;
  std::size_t threads = 1;
};

struct ozo_problem {
  ozo::ProblemInstance instance;
};

struct ozo_sampler {
  std::unique_ptr<ozo::Sampler> sampler;
};

struct ozo_run_config {
  ozo::RunConfig config;
  std::shared_ptr<ozo::ProblemInstance> problem;  // keeps captured state alive
  std::optional<std::pair<double, double>> diagnostics;  // (w, C)
};

struct ozo_trace {
  ozo::RunRecord record;
};

namespace {

thread_local std::string g_last_error;

ozo_status status_of(ozo::ErrorCode code) {
  switch (code) {
    case ozo::ErrorCode::kConfig: return OZO_ERR_CONFIG;
    case ozo::ErrorCode::kContract: return OZO_ERR_CONTRACT;
    case ozo::ErrorCode::kDegenerateInput: return OZO_ERR_DEGENERATE;
    case ozo::ErrorCode::kDiverged: return OZO_ERR_DIVERGED;
    case ozo::ErrorCode::kInfeasible: return OZO_ERR_INFEASIBLE;
    case ozo::ErrorCode::kUnavailable: return OZO_ERR_UNAVAILABLE;
    case ozo::ErrorCode::kIo: return OZO_ERR_IO;
    case ozo::ErrorCode::kInternal: return OZO_ERR_INTERNAL;
  }
  return OZO_ERR_INTERNAL;
}

ozo_status set_error(ozo_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
ozo_status guarded(F&& body) {
  try {
    body();
    return OZO_OK;
  } catch (const ozo::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(OZO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(OZO_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(OZO_ERR_INTERNAL, "unknown exception");
  }
}

#define OZO_CHECK_ARG(p)                                             \
  do {                                                               \
    if ((p) == nullptr)                                              \
      return set_error(OZO_ERR_NULL_ARGUMENT, #p " must not be NULL"); \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ozo::harness::Scale scale_of(const char* scale) {
  if (scale == nullptr) return ozo::harness::Scale::kDesk;
  const auto s = ozo::harness::parse_scale(scale);
  if (!s) ozo::fail(ozo::ErrorCode::kConfig,
                    std::string("scale: unknown '") + scale + "' (valid: desk|paper)");
  return *s;
}

}  // namespace

extern "C" {

const char* ozo_version(void) { return "0.1.0"; }

const char* ozo_last_error(void) { return g_last_error.c_str(); }

const char* ozo_status_string(ozo_status status) {
  switch (status) {
    case OZO_OK: return "ok";
    case OZO_ERR_CONFIG: return "config error";
    case OZO_ERR_CONTRACT: return "contract violation";
    case OZO_ERR_DEGENERATE: return "degenerate input";
    case OZO_ERR_DIVERGED: return "diverged";
    case OZO_ERR_INFEASIBLE: return "infeasible parameters";
    case OZO_ERR_UNAVAILABLE: return "unavailable";
    case OZO_ERR_IO: return "i/o error";
    case OZO_ERR_INTERNAL: return "internal error";
    case OZO_ERR_NULL_ARGUMENT: return "null argument";
  }
  return "unknown status";
}

void ozo_string_free(char* s) { std::free(s); }

ozo_status ozo_presets_list(char** out_json) {
  OZO_CHECK_ARG(out_json);
  return guarded([&] {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& p : ozo::harness::presets())
      j.push_back({{"name", p.name}, {"description", p.description}});
    *out_json = dup_string(j.dump());
  });
}

// ---- experiments ---------------------------------------------------------

ozo_status ozo_experiment_load(const char* path, const char* scale, ozo_experiment** out) {
  OZO_CHECK_ARG(path);
  OZO_CHECK_ARG(out);
  return guarded([&] {
    auto e = std::make_unique<ozo_experiment>();
    e->config = ozo::harness::load_config(path, scale_of(scale));
    *out = e.release();
  });
}

ozo_status ozo_experiment_from_string(const char* toml, const char* scale,
                                      ozo_experiment** out) {
  OZO_CHECK_ARG(toml);
  OZO_CHECK_ARG(out);
  return guarded([&] {
    auto e = std::make_unique<ozo_experiment>();
    e->config = ozo::harness::parse_config(toml, scale_of(scale));
    *out = e.release();
  });
}

ozo_status ozo_experiment_from_preset(const char* name, const char* scale,
                                      ozo_experiment** out) {
  OZO_CHECK_ARG(name);
  OZO_CHECK_ARG(out);
  return guarded([&] {
    auto e = std::make_unique<ozo_experiment>();
    e->config = ozo::harness::preset_config(name, scale_of(scale));
    ozo::harness::validate(e->config);
    *out = e.release();
  });
}

ozo_status ozo_experiment_set_seed(ozo_experiment* e, uint64_t seed) {
  OZO_CHECK_ARG(e);
  e->config.master_seed = seed;
  return OZO_OK;
}

ozo_status ozo_experiment_set_output_dir(ozo_experiment* e, const char* dir) {
  OZO_CHECK_ARG(e);
  OZO_CHECK_ARG(dir);
  if (*dir == '\0') return set_error(OZO_ERR_CONFIG, "out: must be non-empty");
  return guarded([&] { e->config.out_dir = dir; });
}

ozo_status ozo_experiment_set_threads(ozo_experiment* e, size_t threads) {
  OZO_CHECK_ARG(e);
  e->threads = threads;
  return OZO_OK;
}

ozo_status ozo_experiment_describe(const ozo_experiment* e, char** out_json) {
  OZO_CHECK_ARG(e);
  OZO_CHECK_ARG(out_json);
  return guarded([&] {
    const auto plan = ozo::harness::plan_experiment(e->config);
    *out_json = dup_string(ozo::harness::describe(e->config, plan));
  });
}

ozo_status ozo_experiment_run(ozo_experiment* e, char** out_summary_path) {
  OZO_CHECK_ARG(e);
  return guarded([&] {
    ozo::harness::RunOptions opts;
    opts.threads = e->threads;
    const auto res = ozo::harness::run_experiment(e->config, opts);
    if (out_summary_path) *out_summary_path = dup_string(res.summary_path.string());
  });
}

void ozo_experiment_free(ozo_experiment* e) { delete e; }

// ---- problems ------------------------------------------------------------

ozo_status ozo_problem_create_convex_pl(size_t d, size_t n, double lambda,
                                       size_t rank_deficiency, uint64_t seed,
                                       ozo_problem** out) {
  OZO_CHECK_ARG(out);
  return guarded([&] {
    auto p = std::make_unique<ozo_problem>();
    p->instance = ozo::make_convex_pl(d, n, lambda, rank_deficiency, seed);
    *out = p.release();
  });
}

ozo_status ozo_problem_create_nonconvex_pl(size_t d, double lambda, uint64_t seed,
                                          ozo_problem** out) {
  OZO_CHECK_ARG(out);
  return guarded([&] {
    auto p = std::make_unique<ozo_problem>();
    p->instance = ozo::make_nonconvex_pl(d, d, lambda, seed);
    *out = p.release();
  });
}

size_t ozo_problem_dim(const ozo_problem* p) { return p ? p->instance.d : 0; }
double ozo_problem_lambda(const ozo_problem* p) { return p ? p->instance.lambda : 0.0; }
double ozo_problem_gamma(const ozo_problem* p) { return p ? p->instance.gamma : 0.0; }

ozo_status ozo_problem_value(const ozo_problem* p, const double* x, double* out) {
  OZO_CHECK_ARG(p);
  OZO_CHECK_ARG(x);
  OZO_CHECK_ARG(out);
  return guarded([&] { *out = p->instance.value({x, p->instance.d}); });
}

ozo_status ozo_problem_gradient(const ozo_problem* p, const double* x, double* out_grad) {
  OZO_CHECK_ARG(p);
  OZO_CHECK_ARG(x);
  OZO_CHECK_ARG(out_grad);
  return guarded([&] {
    const auto g = p->instance.gradient({x, p->instance.d});
    std::copy(g.begin(), g.end(), out_grad);
  });
}

ozo_status ozo_problem_initial_point(const ozo_problem* p, uint64_t seed, double* out_x) {
  OZO_CHECK_ARG(p);
  OZO_CHECK_ARG(out_x);
  return guarded([&] {
    const auto x = ozo::initial_point(p->instance, seed);
    std::copy(x.begin(), x.end(), out_x);
  });
}

void ozo_problem_free(ozo_problem* p) { delete p; }

// ---- samplers ------------------------------------------------------------

ozo_status ozo_sampler_create(const char* tag, size_t d, size_t ell, uint64_t seed,
                              ozo_sampler** out) {
  OZO_CHECK_ARG(tag);
  OZO_CHECK_ARG(out);
  return guarded([&] {
    const auto kind = ozo::parse_sampler_kind(tag);
    if (!kind)
      ozo::fail(ozo::ErrorCode::kConfig, std::string("sampler: unknown tag '") + tag +
                                             "' (valid: " +
                                             std::string(ozo::sampler_tags()) + ")");
    auto s = std::make_unique<ozo_sampler>();
    s->sampler = std::make_unique<ozo::Sampler>(*kind, d, ell, seed);
    *out = s.release();
  });
}

ozo_status ozo_sampler_next(ozo_sampler* s, double* out) {
  OZO_CHECK_ARG(s);
  OZO_CHECK_ARG(out);
  return guarded([&] {
    const auto p = s->sampler->next();
    for (std::size_t j = 0; j < p.ell(); ++j) {
      const auto col = p.column(j);
      std::copy(col.begin(), col.end(), out + j * p.dim());
    }
  });
}

void ozo_sampler_free(ozo_sampler* s) { delete s; }

// ---- runs ----------------------------------------------------------------

ozo_status ozo_run_config_create(size_t dim, ozo_run_config** out) {
  OZO_CHECK_ARG(out);
  if (dim == 0) return set_error(OZO_ERR_CONFIG, "dim: must be positive");
  return guarded([&] {
    auto c = std::make_unique<ozo_run_config>();
    c->config.dim = dim;
    c->config.x0.assign(dim, 0.0);
    *out = c.release();
  });
}

ozo_status ozo_run_config_set_objective(ozo_run_config* c, ozo_objective_fn fn, void* user) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(fn);
  return guarded([&] {
    c->config.objective = [fn, user](std::span<const double> x) {
      return fn(x.data(), x.size(), user);
    };
  });
}

ozo_status ozo_run_config_set_gradient(ozo_run_config* c, ozo_gradient_fn fn, void* user) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(fn);
  return guarded([&] {
    c->config.gradient = [fn, user](std::span<const double> x) {
      ozo::Vector g(x.size());
      fn(x.data(), x.size(), g.data(), user);
      return g;
    };
  });
}

ozo_status ozo_run_config_set_problem(ozo_run_config* c, const ozo_problem* p) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(p);
  if (p->instance.d != c->config.dim)
    return set_error(OZO_ERR_CONFIG, "problem: dimension differs from the run config");
  return guarded([&] {
    c->problem = std::make_shared<ozo::ProblemInstance>(p->instance);
    c->config.objective = c->problem->objective();
    c->config.gradient = c->problem->gradient_fn();
    c->config.f_star = c->problem->f_star;
  });
}

ozo_status ozo_run_config_set_sampler(ozo_run_config* c, const char* tag, size_t ell,
                                      uint64_t seed) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(tag);
  const auto kind = ozo::parse_sampler_kind(tag);
  if (!kind)
    return set_error(OZO_ERR_CONFIG, std::string("sampler: unknown tag '") + tag +
                                         "' (valid: " + std::string(ozo::sampler_tags()) +
                                         ")");
  c->config.sampler = *kind;
  c->config.ell = ell;
  c->config.seed = seed;
  return OZO_OK;
}

ozo_status ozo_run_config_set_alpha_constant(ozo_run_config* c, double alpha) {
  OZO_CHECK_ARG(c);
  c->config.schedule.alpha = ozo::ConstantAlpha{alpha};
  return OZO_OK;
}

ozo_status ozo_run_config_set_alpha_power(ozo_run_config* c, double alpha, double s) {
  OZO_CHECK_ARG(c);
  c->config.schedule.alpha = ozo::PowerAlpha{alpha, s};
  return OZO_OK;
}

ozo_status ozo_run_config_set_h_constant(ozo_run_config* c, double h) {
  OZO_CHECK_ARG(c);
  c->config.schedule.h = ozo::ConstantH{h};
  return OZO_OK;
}

ozo_status ozo_run_config_set_h_power(ozo_run_config* c, double h, double r) {
  OZO_CHECK_ARG(c);
  c->config.schedule.h = ozo::PowerH{h, r};
  return OZO_OK;
}

ozo_status ozo_run_config_set_h_expdecay(ozo_run_config* c, double eta, double r,
                                         double scale) {
  OZO_CHECK_ARG(c);
  c->config.schedule.h = ozo::ExpDecayH{eta, r, scale};
  return OZO_OK;
}

ozo_status ozo_run_config_set_mode(ozo_run_config* c, const char* mode) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(mode);
  const std::string m(mode);
  if (m == "fd")
    c->config.mode = ozo::Mode::kFiniteDifference;
  else if (m == "exact")
    c->config.mode = ozo::Mode::kExactDirectional;
  else
    return set_error(OZO_ERR_CONFIG, "mode: unknown '" + m + "' (valid: fd|exact)");
  return OZO_OK;
}

ozo_status ozo_run_config_set_fevals(ozo_run_config* c, const char* convention) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(convention);
  const std::string m(convention);
  if (m == "cached")
    c->config.convention = ozo::FevalConvention::kCached;
  else if (m == "recount")
    c->config.convention = ozo::FevalConvention::kRecount;
  else
    return set_error(OZO_ERR_CONFIG,
                     "fevals: unknown '" + m + "' (valid: cached|recount)");
  return OZO_OK;
}

ozo_status ozo_run_config_set_budget(ozo_run_config* c, uint64_t budget) {
  OZO_CHECK_ARG(c);
  c->config.budget = budget;
  return OZO_OK;
}

ozo_status ozo_run_config_set_x0(ozo_run_config* c, const double* x0, size_t dim) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(x0);
  if (dim != c->config.dim)
    return set_error(OZO_ERR_CONFIG, "x0: length differs from the run config dimension");
  return guarded([&] { c->config.x0.assign(x0, x0 + dim); });
}

ozo_status ozo_run_config_set_diagnostics(ozo_run_config* c, double w, double C) {
  OZO_CHECK_ARG(c);
  c->diagnostics = std::make_pair(w, C);
  return OZO_OK;
}

void ozo_run_config_free(ozo_run_config* c) { delete c; }

ozo_status ozo_run(const ozo_run_config* c, ozo_trace** out) {
  OZO_CHECK_ARG(c);
  OZO_CHECK_ARG(out);
  return guarded([&] {
    ozo::RunConfig cfg = c->config;
    if (c->diagnostics) {
      if (!cfg.gradient)
        ozo::fail(ozo::ErrorCode::kConfig, "diagnostics: needs a gradient callback");
      cfg.diagnostics = ozo::DiagnosticsSpec{cfg.gradient, c->diagnostics->first,
                                             c->diagnostics->second};
    }
    auto t = std::make_unique<ozo_trace>();
    t->record = ozo::run(cfg);
    *out = t.release();
  });
}

size_t ozo_trace_rows(const ozo_trace* t) { return t ? t->record.rows.size() : 0; }

ozo_status ozo_trace_row_at(const ozo_trace* t, size_t i, ozo_trace_row* out) {
  OZO_CHECK_ARG(t);
  OZO_CHECK_ARG(out);
  if (i >= t->record.rows.size())
    return set_error(OZO_ERR_CONTRACT, "row index out of range");
  const auto& r = t->record.rows[i];
  *out = {r.k, r.fevals, r.f, r.best_f, r.alpha, r.h, r.pg_norm2, r.qd_lhs, r.qd_rhs};
  return OZO_OK;
}

int ozo_trace_diverged(const ozo_trace* t) {
  return t && t->record.status == ozo::RunStatus::kDiverged ? 1 : 0;
}

const char* ozo_trace_message(const ozo_trace* t) {
  return t ? t->record.message.c_str() : "";
}

uint64_t ozo_trace_oracle_calls(const ozo_trace* t) {
  return t ? t->record.oracle_calls : 0;
}

ozo_status ozo_trace_final_x(const ozo_trace* t, double* out, size_t dim) {
  OZO_CHECK_ARG(t);
  OZO_CHECK_ARG(out);
  if (t->record.final_x.size() != dim)
    return set_error(OZO_ERR_CONTRACT, "final_x: dimension mismatch or not recorded");
  std::copy(t->record.final_x.begin(), t->record.final_x.end(), out);
  return OZO_OK;
}

ozo_status ozo_trace_write_csv(const ozo_trace* t, const char* path) {
  OZO_CHECK_ARG(t);
  OZO_CHECK_ARG(path);
  return guarded([&] {
    ozo::harness::write_text_file(path, ozo::harness::format_trace_csv(t->record, true));
  });
}

void ozo_trace_free(ozo_trace* t) { delete t; }

}  // extern "C"
