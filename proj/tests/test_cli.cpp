// Copyright 2026 The flatmetric Authors
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

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "flatmetric/io.hpp"

namespace fm = flatmetric;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::filesystem::path work_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("flateval_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const auto out_path = work_dir() / ("out" + std::to_string(counter));
  const auto err_path = work_dir() / ("err" + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string(FLATEVAL_BIN) + " " + args + " >" +
                          out_path.string() + " 2>" + err_path.string();
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  CliResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::string write_input(const std::string& name, const std::string& text) {
  const auto path = work_dir() / name;
  fm::write_text_file(path.string(), text);
  return path.string();
}

}  // namespace

TEST_CASE("help exits zero and lists the subcommands") {
  const auto r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("evaluate") != std::string::npos);
  CHECK(r.out.find("surface") != std::string::npos);
  CHECK(r.out.find("toy") != std::string::npos);
}

TEST_CASE("missing subcommand and unknown flags are usage errors") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("evaluate --nope a b").exit_code == 1);
  CHECK(run_cli("evaluate a b --format xml").exit_code == 1);
}

TEST_CASE("evaluate on identical files reports a perfect score") {
  const std::string text =
      "frame,x,y\n1,0,0\n1,100,100\n2,50,50\n";
  const auto gt = write_input("eval_gt.csv", text);
  const auto r = run_cli("evaluate " + gt + " " + gt);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("flat=0.000") != std::string::npos);
  CHECK(r.out.find("eff=100.000") != std::string::npos);
  CHECK(r.out.find("J=100.000") != std::string::npos);
  CHECK(r.out.find("rmse=0.000") != std::string::npos);
}

TEST_CASE("evaluate writes json and csv reports") {
  const std::string text = "frame,x,y\n1,0,0\n1,100,100\n2,50,50\n";
  const auto gt = write_input("rep_gt.csv", text);
  const auto json_path = (work_dir() / "report.json").string();
  const auto csv_path = (work_dir() / "report.csv").string();

  const auto rj = run_cli("evaluate " + gt + " " + gt + " --output " +
                          json_path + " --format json");
  REQUIRE(rj.exit_code == 0);
  const auto doc = nlohmann::json::parse(slurp(json_path));
  CHECK(doc.at("aggregate").at("tp") == 3);
  CHECK(doc.at("aggregate").at("jaccard") == 100.0);
  CHECK(doc.at("frames").size() == 2);

  const auto rc = run_cli("evaluate " + gt + " " + gt + " --output " +
                          csv_path + " --format csv");
  REQUIRE(rc.exit_code == 0);
  const std::string csv = slurp(csv_path);
  CHECK(csv.rfind("frame,flat_metric_nm,", 0) == 0);
  CHECK(csv.find("\naggregate,") != std::string::npos);
}

TEST_CASE("malformed input is reported with its line number") {
  const auto gt = write_input("bad_gt.csv", "frame,x,y\n1,0,0\n");
  const auto det = write_input("bad_det.csv", "frame,x,y\n1,0,0\n1,bad,2\n");
  const auto r = run_cli("evaluate " + gt + " " + det);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find(":3:") != std::string::npos);
}

TEST_CASE("missing files exit with the data error code") {
  const auto gt = write_input("only_gt.csv", "frame,x,y\n1,0,0\n");
  CHECK(run_cli("evaluate " + gt + " /no/such/file.csv").exit_code == 2);
}

TEST_CASE("flat subcommand prints the counting-measure distance") {
  const auto a = write_input("flat_a.csv", "frame,x,y\n1,0,0\n");
  const auto b = write_input("flat_b.csv", "frame,x,y\n1,3,4\n");
  const auto r = run_cli("flat " + a + " " + b + " --lambda 3");
  CHECK(r.exit_code == 0);
  // One unit of mass moved across distance 5 (< 2 * lambda).
  CHECK(r.out.find("flat=5.000000") != std::string::npos);
  CHECK(r.out.find("moves=1") != std::string::npos);

  const auto rj = run_cli("flat " + a + " " + b + " --lambda 3 --json");
  REQUIRE(rj.exit_code == 0);
  const auto doc = nlohmann::json::parse(rj.out);
  CHECK_THAT(doc.at("flat_metric").get<double>(),
             Catch::Matchers::WithinAbs(5.0, 1e-9));
  CHECK(doc.at("decomposition").at("moves").size() == 1);
}

TEST_CASE("surface output is identical for every worker count") {
  const auto p1 = (work_dir() / "s1.csv").string();
  const auto p3 = (work_dir() / "s3.csv").string();
  const std::string base =
      "surface --grid 3x3 --trials 2 --points 6 --side 100 --seed 7";
  REQUIRE(run_cli(base + " --workers 1 --output " + p1).exit_code == 0);
  REQUIRE(run_cli(base + " --workers 3 --output " + p3).exit_code == 0);
  const std::string s1 = slurp(p1);
  CHECK(s1 == slurp(p3));
  // Header plus one row per cell.
  CHECK(std::count(s1.begin(), s1.end(), '\n') == 10);
  CHECK(run_cli("surface --grid 0x3").exit_code == 1);
}

TEST_CASE("surface defaults to the 51x51 grid") {
  const auto r = run_cli("surface --trials 1 --points 4 --side 50 --seed 1");
  REQUIRE(r.exit_code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 51 * 51 + 1);
}

TEST_CASE("toy writes the worked-example files") {
  const auto prefix = (work_dir() / "toy").string();
  const auto r = run_cli("toy --n 15 --seed 0 --output " + prefix);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("n_gt=15") != std::string::npos);
  CHECK(r.out.find("n_det=13") != std::string::npos);

  const auto gt = fm::parse_localizations(prefix + "_gt.csv");
  CHECK(gt.total_points() == 15);
  const auto det = fm::parse_localizations(prefix + "_det.csv");
  CHECK(det.total_points() == 13);
  const auto doc = nlohmann::json::parse(slurp(prefix + ".json"));
  CHECK(doc.at("n_gt") == 15);
  CHECK(doc.at("flat_metric").get<double>() > 0.0);
  CHECK(slurp(prefix + "_moves.csv")
            .rfind("gt_index,det_index,mass,distance,cost", 0) == 0);
  CHECK(slurp(prefix + "_events.csv").rfind("kind,atom,mass,cost", 0) == 0);
}
