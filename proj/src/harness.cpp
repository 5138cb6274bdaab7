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


#include "ozo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ozo/error.hpp"
#include "ozo/rng.hpp"

namespace ozo::harness {

namespace {

using Json = nlohmann::ordered_json;

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json schedule_json(const ScheduleSpec& s) {
  Json a, h;
  if (const auto* c = std::get_if<ConstantAlpha>(&s.alpha)) {
    a = {{"law", "constant"}, {"alpha", c->alpha}};
  } else {
    const auto& p = std::get<PowerAlpha>(s.alpha);
    a = {{"law", "power"}, {"alpha", p.alpha}, {"s", p.s}};
  }
  if (const auto* c = std::get_if<ConstantH>(&s.h)) {
    h = {{"law", "constant"}, {"h", c->h}};
  } else if (const auto* p = std::get_if<PowerH>(&s.h)) {
    h = {{"law", "power"}, {"h", p->h}, {"r", p->r}};
  } else {
    const auto& e = std::get<ExpDecayH>(s.h);
    h = {{"law", "expdecay"}, {"eta", e.eta}, {"r", e.r}, {"scale", e.scale}};
  }
  return {{"alpha", a}, {"h", h}};
}

Json constants_json(const Variant& v) {
  if (!v.constants) return Json{{"available", false}, {"reason", v.constants_error}};
  const auto& c = *v.constants;
  return {{"available", true},
          {"Lambda", c.Lambda},
          {"alpha_bar", c.alpha_bar},
          {"alpha_lower", c.alpha_lower},
          {"w", c.w},
          {"C", c.C},
          {"eta", optional_json(c.eta)},
          {"c1", optional_json(v.c1)},
          {"error_region", optional_json(v.error_region)}};
}

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["preset"] = c.preset;
  j["scale"] = std::string(to_string(c.scale));
  j["problem"] = {{"kind", std::string(to_string(c.problem.kind))},
                  {"d", c.problem.d},
                  {"n", c.problem.n},
                  {"lambda", c.problem.lambda},
                  {"rank_deficiency", c.problem.rank_deficiency},
                  {"seed", c.problem.seed}};
  j["ell"] = c.ells;
  j["h_sweep"] = c.h_sweep;
  j["sampler"] = std::string(to_string(c.sampler));
  j["coordinate_signs"] = c.coordinate_signs;
  j["mode"] = std::string(to_string(c.mode));
  j["fevals"] = std::string(to_string(c.convention));
  j["replicates"] = c.replicates;
  j["seed"] = c.master_seed;
  j["x0_seed"] = c.x0_seed.value_or(c.master_seed);
  j["budget"] = c.budget;
  j["w"] = optional_json(c.w_override);
  return j;
}

Json plan_json(const ExperimentConfig& config, const Plan& plan) {
  Json j;
  j["config"] = config_json(config);
  j["problem"] = {{"lambda", plan.problem.lambda},
                  {"gamma", plan.problem.gamma},
                  {"gamma_empirical", plan.gamma_empirical},
                  {"f_star", plan.problem.f_star},
                  {"f0", plan.problem.value(plan.x0)}};
  Json vs = Json::array();
  for (const auto& v : plan.variants) {
    vs.push_back({{"ell", v.ell},
                  {"h_index", v.h_index},
                  {"file_stem", v.file_stem},
                  {"schedule", schedule_json(v.schedule)},
                  {"regime", std::string(to_string(v.regime))},
                  {"constants", constants_json(v)}});
  }
  j["variants"] = vs;
  return j;
}

std::string pad3(std::size_t i) {
  std::string s = std::to_string(i);
  return s.size() >= 3 ? s : std::string(3 - s.size(), '0') + s;
}

Json fit_json(const std::optional<RateFit>& f) {
  if (!f) return nullptr;
  return {{"slope", f->slope},         {"rate", f->rate},
          {"intercept", f->intercept}, {"r_squared", f->r_squared},
          {"k_first", f->k_first},     {"k_last", f->k_last},
          {"points", f->points},       {"truncated_at_floor", f->truncated_at_floor}};
}

Json report_json(const BoundReport& r) {
  return {{"violations", r.violations},
          {"worst_relative_violation", r.worst_relative_violation}};
}

void merge_report(BoundReport& into, const BoundReport& from, bool first) {
  into.violations += from.violations;
  if (first || from.worst_relative_violation > into.worst_relative_violation)
    into.worst_relative_violation = from.worst_relative_violation;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t ell,
                             std::size_t h_index, std::size_t replicate) {
  return derive_seed(derive_seed(derive_seed(master, ell), h_index), replicate);
}

Plan plan_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto& ps = config.problem;
  Plan plan;
  plan.problem = ps.kind == ProblemKind::kConvexPL
                     ? make_convex_pl(ps.d, ps.n, ps.lambda, ps.rank_deficiency, ps.seed)
                     : make_nonconvex_pl(ps.d, ps.n, ps.lambda, ps.seed);
  plan.x0 = initial_point(plan.problem, config.x0_seed.value_or(config.master_seed));

  const ProblemInstance& pr = plan.problem;
  const double d = static_cast<double>(pr.d);
  const bool exact = config.mode == Mode::kExactDirectional;
  const std::size_t n_h = std::max<std::size_t>(1, config.h_sweep.size());

  for (std::size_t hi = 0; hi < n_h; ++hi) {
    for (std::size_t ell : config.ells) {
      Variant v;
      v.ell = ell;
      v.h_index = hi;
      v.file_stem = "l" + std::to_string(ell);
      if (!config.h_sweep.empty()) v.file_stem += "_h" + std::to_string(hi);

      const auto& as = config.alpha;
      const double a0 =
          as.alpha ? *as.alpha : *as.factor * static_cast<double>(ell) / (d * pr.lambda);
      if (as.law == AlphaSpec::Law::kConstant)
        v.schedule.alpha = ConstantAlpha{a0};
      else
        v.schedule.alpha = PowerAlpha{a0, as.s};

      // Constants depend on the α law only; h is placed afterwards.
      v.schedule.h = ConstantH{1.0};
      const double a_hi = alpha_upper(v.schedule);
      const double a_lo = alpha_lower(v.schedule);
      try {
        auto c = derive_constants(pr.lambda, pr.gamma, pr.d, ell, a_hi,
                                  a_lo > 0.0 ? std::optional<double>(a_lo) : std::nullopt,
                                  config.w_override);
        if (!(a_lo > 0.0)) {
          c.alpha_lower = 0.0;
          c.eta.reset();
        }
        v.constants = c;
      } catch (const Error& e) {
        v.constants_error = e.what();
      }

      const double base_h = config.h_sweep.empty() ? config.h.h : config.h_sweep[hi];
      switch (config.h.law) {
        case HSpec::Law::kConstant:
          v.schedule.h = ConstantH{base_h};
          break;
        case HSpec::Law::kPower:
          v.schedule.h = PowerH{base_h, config.h.r};
          break;
        case HSpec::Law::kExpDecay: {
          std::optional<double> eta = config.h.eta;
          if (!eta && v.constants) eta = v.constants->eta;
          if (!eta)
            fail(ErrorCode::kConfig,
                 "schedule.h.eta: needed for expdecay when the contraction factor "
                 "cannot be derived (ell=" + std::to_string(ell) + ")");
          v.schedule.h = ExpDecayH{*eta, config.h.r, config.h.scale};
          break;
        }
      }

      if (v.constants) {
        const auto& c = *v.constants;
        v.regime = classify_regime(v.schedule, c, pr.problem_class(), exact);
        if (c.eta) {
          v.c1 = linear_rate_error_constant(c);
          v.error_region = error_region_bound(c, c.alpha_lower, exact ? 0.0 : h_upper(v.schedule));
        }
      }
      plan.variants.push_back(std::move(v));
    }
  }
  return plan;
}

std::string describe(const ExperimentConfig& config, const Plan& plan) {
  return plan_json(config, plan).dump(2) + "\n";
}

std::string format_trace_csv(const RunRecord& record, bool diagnostics) {
  require(!record.rows.empty(), "format_trace_csv: empty trace");
  const bool diag = diagnostics && record.has_diagnostics;
  std::string out = "k,fevals,f,best_f,alpha,h";
  if (diag) out += ",pg_norm2,qd_lhs,qd_rhs";
  out += '\n';
  for (const auto& r : record.rows) {
    out += std::to_string(r.k) + ',' + std::to_string(r.fevals) + ',' +
           format_double(r.f) + ',' + format_double(r.best_f) + ',' +
           format_double(r.alpha) + ',' + format_double(r.h);
    if (diag)
      out += ',' + format_double(r.pg_norm2) + ',' + format_double(r.qd_lhs) + ',' +
             format_double(r.qd_rhs);
    out += '\n';
  }
  return out;
}

std::string format_mean_csv(const EnsembleMean& mean, std::span<const RunRecord> runs) {
  require(!runs.empty(), "format_mean_csv: no runs");
  std::string out = "k,fevals,f,best_f,alpha,h,f_stderr,f_min,f_max\n";
  const auto& first = runs.front().rows;
  for (std::size_t i = 0; i < mean.k.size(); ++i) {
    double lo = first[i].f, hi = first[i].f;
    for (const auto& r : runs) {
      lo = std::min(lo, r.rows[i].f);
      hi = std::max(hi, r.rows[i].f);
    }
    out += std::to_string(mean.k[i]) + ',' + std::to_string(mean.fevals[i]) + ',' +
           format_double(mean.mean_gap[i]) + ',' + format_double(mean.mean_best_gap[i]) +
           ',' + format_double(first[i].alpha) + ',' + format_double(first[i].h) + ',' +
           format_double(mean.stderr_gap[i]) + ',' + format_double(lo) + ',' +
           format_double(hi) + '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) fail(ErrorCode::kIo, "cannot create directory " + path.parent_path().string() +
                                   ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentResult result;
  result.plan = plan_experiment(config);
  const Plan& plan = result.plan;
  const ProblemInstance& pr = plan.problem;
  const std::size_t n_var = plan.variants.size();
  const std::size_t reps = config.replicates;

  result.variants.resize(n_var);
  for (std::size_t vi = 0; vi < n_var; ++vi) {
    auto& vr = result.variants[vi];
    vr.variant = &plan.variants[vi];
    vr.runs.resize(reps);
    for (std::size_t r = 0; r < reps; ++r)
      vr.seeds.push_back(replicate_seed(config.master_seed, vr.variant->ell,
                                        vr.variant->h_index, r));
  }

  const std::size_t n_tasks = n_var * reps;
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= n_tasks) return;
      {
        std::lock_guard lock(err_mu);
        if (first_error) return;
      }
      const std::size_t vi = t / reps, r = t % reps;
      auto& vr = result.variants[vi];
      const Variant& v = *vr.variant;
      try {
        RunConfig rc;
        rc.dim = pr.d;
        rc.objective = pr.objective();
        rc.gradient = pr.gradient_fn();
        rc.sampler = config.sampler;
        rc.ell = v.ell;
        rc.seed = vr.seeds[r];
        rc.coordinate_signs = config.coordinate_signs;
        rc.schedule = v.schedule;
        rc.mode = config.mode;
        rc.convention = config.convention;
        rc.budget = config.budget;
        rc.x0 = plan.x0;
        rc.f_star = pr.f_star;
        rc.keep_final_x = config.write_final_x;
        if (config.diagnostics && v.constants)
          rc.diagnostics = DiagnosticsSpec{pr.gradient_fn(), v.constants->w, v.constants->C};
        vr.runs[r] = run(rc);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::size_t threads = options.threads == 0
                            ? std::max(1u, std::thread::hardware_concurrency())
                            : options.threads;
  threads = std::min(threads, std::max<std::size_t>(1, n_tasks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  for (auto& vr : result.variants) {
    std::vector<RunRecord> completed;
    for (const auto& r : vr.runs) {
      if (r.status == RunStatus::kDiverged)
        ++vr.divergences;
      else
        completed.push_back(r);
    }
    const std::span<const RunRecord> pool =
        completed.empty() ? std::span<const RunRecord>(vr.runs) : completed;
    vr.mean = ensemble_mean(pool, pr.f_star);
    try {
      vr.power_fit = fit_rate(vr.mean.k, vr.mean.mean_gap, RateModel::kPower);
    } catch (const Error&) {
    }
    try {
      vr.linear_fit = fit_rate(vr.mean.k, vr.mean.mean_gap, RateModel::kLinearLog);
    } catch (const Error&) {
    }
    if (vr.variant->constants) {
      bool first = true;
      QuasiDescentReports agg;
      agg.full.name = "quasi_descent";
      agg.weak.name = "quasi_descent_weak";
      for (const auto& r : vr.runs) {
        if (!r.has_diagnostics) continue;
        const auto rep = quasi_descent_check(r, *vr.variant->constants);
        merge_report(agg.full, rep.full, first);
        merge_report(agg.weak, rep.weak, first);
        first = false;
      }
      if (!first) vr.bounds = std::move(agg);
    }
  }

  if (!options.write_files) return result;

  const std::filesystem::path out_dir(config.out_dir);
  Json summary = plan_json(config, plan);
  Json results = Json::array();
  for (const auto& vr : result.variants) {
    const Variant& v = *vr.variant;
    Json traces = Json::array();
    Json statuses = Json::array();
    for (std::size_t r = 0; r < vr.runs.size(); ++r) {
      const auto& run = vr.runs[r];
      const std::string file = "trace_" + v.file_stem + "_r" + pad3(r) + ".csv";
      write_text_file(out_dir / file, format_trace_csv(run, config.diagnostics));
      traces.push_back(file);
      Json st = {{"seed", vr.seeds[r]},
                 {"status", std::string(to_string(run.status))},
                 {"message", run.message},
                 {"oracle_calls", run.oracle_calls},
                 {"final_gap", run.rows.back().f - pr.f_star}};
      if (config.write_final_x) st["final_x"] = run.final_x;
      statuses.push_back(st);
    }
    std::vector<RunRecord> pool_runs;
    for (const auto& r : vr.runs)
      if (vr.divergences == vr.runs.size() || r.status != RunStatus::kDiverged)
        pool_runs.push_back(r);
    const std::string mean_file = "mean_" + v.file_stem + ".csv";
    write_text_file(out_dir / mean_file, format_mean_csv(vr.mean, pool_runs));
    Json sidecar = {{"experiment", config.name},
                    {"ell", v.ell},
                    {"h_index", v.h_index},
                    {"replicates", vr.mean.replicates},
                    {"divergences", vr.divergences},
                    {"traces", traces}};
    write_text_file(out_dir / ("mean_" + v.file_stem + ".json"), sidecar.dump(2) + "\n");

    Json bounds = nullptr;
    if (vr.bounds)
      bounds = {{"quasi_descent", report_json(vr.bounds->full)},
                {"quasi_descent_weak", report_json(vr.bounds->weak)}};
    results.push_back({{"ell", v.ell},
                       {"h_index", v.h_index},
                       {"mean_file", mean_file},
                       {"final_mean_gap", vr.mean.mean_gap.back()},
                       {"divergences", vr.divergences},
                       {"power_fit", fit_json(vr.power_fit)},
                       {"linear_fit", fit_json(vr.linear_fit)},
                       {"bounds", bounds},
                       {"runs", statuses}});
  }
  summary["results"] = results;
  result.summary_path = out_dir / "summary.json";
  write_text_file(result.summary_path, summary.dump(2) + "\n");
  return result;
}

}  // namespace ozo::harness
