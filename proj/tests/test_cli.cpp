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


// Drives the installed command-line tool as a subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result ozo(const std::string& args) {
  const std::string cmd = std::string(OZO_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("ozo_cli_" + name + ".toml");
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall =
    "name = 'cli'\nreplicates = 2\nbudget = 80\n"
    "[problem]\nd = 4\nlambda = 4.0\n[sweep]\nell = [1, 2]\n"
    "[schedule]\nalpha = {factor = 1.0}\nh = {h = 1e-3}\n";

}  // namespace

TEST_CASE("presets command") {
  const auto r = ozo("presets");
  CHECK(r.code == 0);
  CHECK(r.output.find("fig3-right") != std::string::npos);
}

TEST_CASE("check prints derived constants") {
  const auto r = ozo("check --config " + write_config("ok", kSmall).string());
  CHECK(r.code == 0);
  CHECK(r.output.find("\"Lambda\"") != std::string::npos);
  CHECK(r.output.find("\"regime\"") != std::string::npos);

  const auto p = ozo("check --config " + (fs::path(OZO_SOURCE_DIR) / "configs/fig2-left.toml").string() +
                     " --scale paper");
  CHECK(p.code == 0);
  CHECK(p.output.find("\"d\": 100") != std::string::npos);
}

TEST_CASE("unknown sampler exits 2 and lists the tags") {
  const auto cfg = write_config("gauss", std::string("sampler = 'gauss'\n") + kSmall);
  const auto r = ozo("run --config " + cfg.string());
  CHECK(r.code == 2);
  CHECK(r.output.find("sampler") != std::string::npos);
  CHECK(r.output.find("coordinate|haar|hadamard") != std::string::npos);
}

TEST_CASE("other config errors exit 2") {
  CHECK(ozo("run").code == 2);
  CHECK(ozo("frobnicate").code == 2);
  CHECK(ozo("run --preset nope").code == 2);
  CHECK(ozo("check --config " + write_config("bad", "name = [").string()).code == 2);
  CHECK(ozo("run --preset fig1-left --scale huge").code == 2);
}

TEST_CASE("i/o errors exit 3") {
  CHECK(ozo("check --config /nonexistent/x.toml").code == 3);
  const fs::path blocker = fs::temp_directory_path() / "ozo_cli_blocker";
  std::ofstream(blocker) << "x";
  const auto r = ozo("run --config " + write_config("io", kSmall).string() + " --out " +
                     (blocker / "sub").string());
  CHECK(r.code == 3);
  CHECK(r.output.find(blocker.string()) != std::string::npos);
  fs::remove(blocker);
}

TEST_CASE("run writes outputs and is deterministic across thread counts") {
  const auto cfg = write_config("run", kSmall);
  const fs::path a = fs::temp_directory_path() / "ozo_cli_a";
  const fs::path b = fs::temp_directory_path() / "ozo_cli_b";
  fs::remove_all(a);
  fs::remove_all(b);
  auto r = ozo("run --config " + cfg.string() + " --out " + a.string() + " --threads 1 --seed 3");
  REQUIRE(r.code == 0);
  CHECK(r.output.find("summary.json") != std::string::npos);
  r = ozo("run --config " + cfg.string() + " --out " + b.string() + " --threads 4 --seed 3");
  REQUIRE(r.code == 0);
  CHECK(slurp(a / "trace_l2_r001.csv") == slurp(b / "trace_l2_r001.csv"));
  CHECK(slurp(a / "mean_l1.csv") == slurp(b / "mean_l1.csv"));

  const fs::path c = fs::temp_directory_path() / "ozo_cli_c";
  fs::remove_all(c);
  r = ozo("run --config " + cfg.string() + " --out " + c.string() + " --seed 4");
  REQUIRE(r.code == 0);
  CHECK(slurp(a / "trace_l2_r001.csv") != slurp(c / "trace_l2_r001.csv"));
}

TEST_CASE("divergence is a result, not a failure") {
  const auto cfg = write_config(
      "div",
      "name = 'div'\nreplicates = 1\nbudget = 4000\nmode = 'exact'\n"
      "[problem]\nd = 4\nlambda = 4.0\n[sweep]\nell = [4]\n"
      "[schedule]\nalpha = {factor = 3.0}\nh = {h = 1e-3}\n");
  const fs::path out = fs::temp_directory_path() / "ozo_cli_div";
  fs::remove_all(out);
  const auto r = ozo("run --config " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 0);
  CHECK(slurp(out / "summary.json").find("\"diverged\"") != std::string::npos);
}
