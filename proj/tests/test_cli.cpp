// Copyright 2026 The evcorner Authors
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
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evcorner/simulator.hpp"

namespace fs = std::filesystem;
using namespace evcorner;

namespace {

const fs::path kDir = fs::temp_directory_path() / "evcorner_test_cli";

int run(const std::string& args, const std::string& out_name = "stdout.txt") {
  fs::create_directories(kDir);
  const std::string cmd = "cd '" + kDir.string() + "' && '" EVCORNER_CLI_PATH "' " + args +
                          " > '" + (kDir / out_name).string() + "' 2> '" +
                          (kDir / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small scene so the whole pipeline runs in a few seconds.
void write_small_scene() {
  Scene s;
  s.name = "small";
  s.geometry = {80, 60};
  s.layout.rows = 3;
  s.layout.cols = 4;
  s.layout.square = 12;
  s.pattern = build_pattern(s.layout);
  s.trajectory = Trajectory({{0, 8, 8, 0, 1, 0, 0}, {400000, 24, 16, 0.1, 1, 0, 0}},
                            {24, 18});
  s.duration = 400000;
  save_scene(s, kDir / "small.json");
}

}  // namespace

TEST_CASE("help lists subcommands, flags and defaults") {
  CHECK(run("--help") == 0);
  const std::string top = slurp(kDir / "stdout.txt");
  for (const char* sub : {"simulate", "train", "detect", "track", "eval", "bench", "figure"}) {
    CHECK(top.find(sub) != std::string::npos);
  }
  CHECK(run("train --help") == 0);
  const std::string train = slurp(kDir / "stdout.txt");
  CHECK(train.find("--trees") != std::string::npos);
  CHECK(train.find("--max-depth") != std::string::npos);
  CHECK(train.find("--min-samples") != std::string::npos);
  CHECK(train.find("--seed") != std::string::npos);
  CHECK(train.find("[10]") != std::string::npos);
  CHECK(train.find("[50]") != std::string::npos);
  CHECK(run("detect --help") == 0);
  const std::string detect = slurp(kDir / "stdout.txt");
  CHECK(detect.find("--radius") != std::string::npos);
  CHECK(detect.find("[6]") != std::string::npos);
  CHECK(detect.find("--patch-size") != std::string::npos);
  CHECK(detect.find("[8]") != std::string::npos);
  CHECK(run("track --help") == 0);
  const std::string trk = slurp(kDir / "stdout.txt");
  CHECK(trk.find("[3]") != std::string::npos);
  CHECK(trk.find("[10000]") != std::string::npos);
}

TEST_CASE("usage and file errors have distinct exit codes") {
  CHECK(run("") == 2);
  CHECK(run("detect --bogus") == 2);
  CHECK(run("simulate --preset nope") == 2);
  CHECK(run("track --corners missing.csv --out t.csv") == 5);
  std::ofstream(kDir / "bad.csv") << "1,2,3,9\n";
  std::ofstream(kDir / "bad_model.txt") << "not a model\n";
  CHECK(run("detect --events bad.csv --model bad_model.txt") == 9);
  std::ofstream(kDir / "unordered.csv") << "1,1,10,1\n1,1,5,1\n";
  std::ofstream(kDir / "labels1.csv") << "0,1\n1,0\n";
  CHECK(run("train --events unordered.csv --labels labels1.csv --model m.txt") == 4);
  CHECK(run("train --events bad.csv --labels labels1.csv --model m.txt") == 3);
  CHECK(run("simulate") == 7);
}

TEST_CASE("figure fig3 emits identical profiles for every speed") {
  REQUIRE(run("figure fig3 --out fig3.txt") == 0);
  std::istringstream in(slurp(kDir / "fig3.txt"));
  std::vector<std::string> blocks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# speed", 0) == 0) {
      blocks.emplace_back();
      continue;
    }
    if (!blocks.empty()) blocks.back() += line + "\n";
  }
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0] == blocks[1]);
  CHECK(blocks[0] == blocks[2]);
  // Slope of r = 5 columns behind the edge's final column 62, then a plateau.
  std::vector<int> v;
  std::istringstream rows(blocks[0]);
  std::getline(rows, line);  // column header
  while (std::getline(rows, line)) v.push_back(std::stoi(line.substr(line.find(',') + 1)));
  REQUIRE(v.size() == 64);
  for (int x = 58; x <= 62; ++x) CHECK(v[x] > v[x - 1]);
  for (int x = 10; x < 57; ++x) CHECK(v[x] == v[57]);
  CHECK(run("figure fig3 --no-clamp --out fig3n.txt") == 0);
  CHECK(run("figure nope") == 2);
}

TEST_CASE("pipeline runs end to end and is reproducible") {
  write_small_scene();
  REQUIRE(run("simulate --scene small.json --prefix a") == 0);
  REQUIRE(run("simulate --scene small.json --prefix b") == 0);
  CHECK(slurp(kDir / "a.events.csv") == slurp(kDir / "b.events.csv"));
  CHECK(slurp(kDir / "a.labels.csv") == slurp(kDir / "b.labels.csv"));
  CHECK(slurp(kDir / "a.trajectory.csv") == slurp(kDir / "b.trajectory.csv"));
  CHECK(!slurp(kDir / "a.events.csv").empty());

  REQUIRE(run("train --events a.events.csv --labels a.labels.csv --model m1.txt "
              "--min-samples 20 --seed 5") == 0);
  REQUIRE(run("train --events a.events.csv --labels a.labels.csv --model m2.txt "
              "--min-samples 20 --seed 5 --threads 3") == 0);
  CHECK(slurp(kDir / "m1.txt") == slurp(kDir / "m2.txt"));

  REQUIRE(run("detect --events a.events.csv --model m1.txt --out c.csv "
              "--dump-surface surface.txt") == 0);
  CHECK(slurp(kDir / "surface.txt").rfind("# channel -1\n", 0) == 0);
  CHECK(run("detect --events a.events.csv --model m1.txt --patch-size 7") == 7);
  REQUIRE(run("track --corners c.csv --out t.csv") == 0);
  REQUIRE(run("eval --tracks t.csv --trajectory a.trajectory.csv --out r1.txt") == 0);
  REQUIRE(run("eval --tracks t.csv --trajectory a.trajectory.csv --out r2.txt") == 0);
  const std::string report = slurp(kDir / "r1.txt");
  CHECK(report == slurp(kDir / "r2.txt"));
  CHECK(report.find("dt_ms,mean_error_px,n_pairs,n_tracks,valid_pct\n25.0000,") !=
        std::string::npos);
  CHECK(run("eval --tracks t.csv --gt-h") == 7);
  CHECK(run("eval --tracks t.csv --trajectory a.trajectory.csv --gt-h --dt-grid 50") == 0);

  REQUIRE(run("bench --model m1.txt --events a.events.csv --repeats 1") == 0);
  CHECK(slurp(kDir / "stdout.txt").find("\"rate_mev_s\"") != std::string::npos);
  REQUIRE(run("figure roc --events a.events.csv --labels a.labels.csv --model m1.txt "
              "--out roc.csv") == 0);
  CHECK(slurp(kDir / "roc.csv").rfind("threshold,detections", 0) == 0);
  REQUIRE(run("figure fig4 --preset checkerboard-translate --time-us 100000 --out fig4.txt") == 0);
  const std::string fig4 = slurp(kDir / "fig4.txt");
  CHECK(fig4.find("# patch sits") != std::string::npos);
  CHECK(fig4.find("# patch sorted") != std::string::npos);
}
