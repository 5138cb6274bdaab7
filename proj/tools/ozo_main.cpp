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


// ozo command-line driver. Talks to the library only through ozo.h.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ozo/ozo.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitOther = 1;

int exit_code(ozo_status s) {
  switch (s) {
    case OZO_OK:
      return kExitOk;
    case OZO_ERR_IO:
      return kExitIo;
    case OZO_ERR_CONFIG:
    case OZO_ERR_CONTRACT:
    case OZO_ERR_INFEASIBLE:
    case OZO_ERR_DEGENERATE:
    case OZO_ERR_UNAVAILABLE:
    case OZO_ERR_NULL_ARGUMENT:
      return kExitConfig;
    default:
      return kExitOther;
  }
}

int report(ozo_status s) {
  std::cerr << "ozo: " << ozo_status_string(s) << ": " << ozo_last_error() << "\n";
  return exit_code(s);
}

struct Source {
  std::string config;
  std::string preset;
  std::string scale = "desk";
};

void add_source_options(CLI::App* cmd, Source& src) {
  auto* cfg = cmd->add_option("--config", src.config, "experiment file (TOML)");
  auto* pre = cmd->add_option("--preset", src.preset, "built-in preset name");
  cfg->excludes(pre);
  cmd->add_option("--scale", src.scale, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
}

ozo_status open_experiment(const Source& src, ozo_experiment** exp) {
  if (!src.config.empty())
    return ozo_experiment_load(src.config.c_str(), src.scale.c_str(), exp);
  return ozo_experiment_from_preset(src.preset.c_str(), src.scale.c_str(), exp);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ozo: zeroth-order optimization with orthogonal random directions"};
  app.set_version_flag("--version", std::string(ozo_version()));
  app.require_subcommand(1);

  Source run_src;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::size_t threads = 1;
  auto* run_cmd = app.add_subcommand("run", "run an experiment and write traces");
  add_source_options(run_cmd, run_src);
  run_cmd->add_option("--seed", seed, "master seed (overrides the config)");
  run_cmd->add_option("--out", out_dir, "output directory (overrides the config)");
  run_cmd->add_option("--threads", threads, "worker threads, 0 = all cores");

  auto* presets_cmd = app.add_subcommand("presets", "list built-in figure presets");

  Source check_src;
  auto* check_cmd =
      app.add_subcommand("check", "validate a config and print derived constants");
  add_source_options(check_cmd, check_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (presets_cmd->parsed()) {
    char* json = nullptr;
    if (ozo_status s = ozo_presets_list(&json); s != OZO_OK) return report(s);
    std::cout << json << "\n";
    ozo_string_free(json);
    return kExitOk;
  }

  Source& src = run_cmd->parsed() ? run_src : check_src;
  if (src.config.empty() && src.preset.empty()) {
    std::cerr << "ozo: one of --config or --preset is required\n";
    return kExitConfig;
  }

  ozo_experiment* exp = nullptr;
  if (ozo_status s = open_experiment(src, &exp); s != OZO_OK) return report(s);

  int rc = kExitOk;
  if (check_cmd->parsed()) {
    char* json = nullptr;
    if (ozo_status s = ozo_experiment_describe(exp, &json); s != OZO_OK) {
      rc = report(s);
    } else {
      std::cout << json;
      ozo_string_free(json);
    }
  } else {
    ozo_status s = OZO_OK;
    if (seed) s = ozo_experiment_set_seed(exp, *seed);
    if (s == OZO_OK && !out_dir.empty()) s = ozo_experiment_set_output_dir(exp, out_dir.c_str());
    if (s == OZO_OK) s = ozo_experiment_set_threads(exp, threads);
    char* summary = nullptr;
    if (s == OZO_OK) s = ozo_experiment_run(exp, &summary);
    if (s != OZO_OK) {
      rc = report(s);
    } else {
      std::cout << "summary: " << summary << "\n";
      ozo_string_free(summary);
    }
  }
  ozo_experiment_free(exp);
  return rc;
}
