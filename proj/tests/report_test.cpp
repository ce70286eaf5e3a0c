// Copyright 2026 The diophlab Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "diophlab/parallel.hpp"
#include "diophlab/report.hpp"

namespace diophlab::cli {
namespace {

RunConfig config(const std::string& sub, std::map<std::string, std::string> params, Format f = Format::json) {
  RunConfig c;
  c.subcommand = sub;
  c.params = std::move(params);
  c.format = f;
  return c;
}

// One small configuration per subcommand.
std::vector<RunConfig> samples() {
  return {
      config("measure-1d", {{"q", "2"}, {"rho", "1/10"}}),
      config("area-2d", {{"q", "3,-4"}, {"rho", "1/7"}}),
      config("intersect-2d", {{"q", "1,-2"}, {"qprime", "2,5"}, {"rho", "1/10"}, {"rhoprime", "1/10"}}),
      config("shells", {{"k", "12"}}),
      config("totient-sum", {{"n", "1000"}}),
      config("dirichlet", {{"alpha", "13/30"}, {"n", "20"}}),
      config("count", {{"alpha", "1/3"}, {"psi", "invsqrt:1/2"}, {"n", "3000"}}),
      config("union-growth", {{"psi", "recip:1/4"}}),
      config("bc-bound", {{"family", "random"}, {"n", "12"}, {"ladder", "3,6,12"}}),
      config("quasi-const", {{"family", "dyadic"}, {"n", "8"}}),
      config("ubiquity", {{"ladder", "5,10,40"}}),
      config("svolume", {{"v", "3"}, {"s", "1/2"}, {"q0", "16"}, {"q1", "32"}}),
      config("critical-s", {{"v", "3"}, {"qmax", "1024"}}),
      config("boxcount", {{"v", "3"}, {"ladder", "4,8,16,32"}}),
      config("formulas", {{"m", "2"}, {"n", "1"}, {"v", "3"}}),
  };
}

TEST(Registry, CoversEverySubcommand) {
  std::vector<std::string> names;
  for (const auto& s : subcommands()) names.push_back(s.name);
  const std::vector<std::string> expected{"measure-1d", "area-2d",      "intersect-2d", "shells",  "totient-sum",
                                          "dirichlet",  "count",        "union-growth", "bc-bound", "quasi-const",
                                          "ubiquity",   "svolume",      "critical-s",   "boxcount", "formulas"};
  EXPECT_EQ(names, expected);
  EXPECT_EQ(samples().size(), expected.size());
}

TEST(Report, Examples) {
  EXPECT_EQ(run(samples()[2]).doc["results"]["area"], "1/25");
  const auto f = run(samples()[14]).doc["results"];
  EXPECT_EQ(f["jb_dimension"], "7/4");
  EXPECT_EQ(f["gamma"], "3/4");
  EXPECT_EQ(f["lower_bound"], "7/4");
  EXPECT_EQ(run(samples()[0]).doc["results"]["measure"], "1/5");
  const std::string plot = emit_plotdata(run(config("union-growth", {{"psi", "recip:1/4"}, {"ladder", "1,2"}})));
  EXPECT_NE(plot.find("\n1 0.5\n2 0.625\n"), std::string::npos);
  EXPECT_EQ(plot.front(), '#');
}

TEST(Report, JsonRoundTripIsByteIdentical) {
  for (const auto& c : samples()) {
    const std::string text = run(c).to_json();
    EXPECT_EQ(Json::parse(text).dump(2) + "\n", text) << c.subcommand;
  }
}

TEST(Report, EqualConfigsGiveEqualBytesAcrossThreadCounts) {
  for (const auto& c : samples()) {
    set_thread_count(1);
    const std::string a = run(c).to_json();
    set_thread_count(8);
    const std::string b = run(c).to_json();
    const std::string again = run(c).to_json();
    EXPECT_EQ(a, b) << c.subcommand;
    EXPECT_EQ(b, again) << c.subcommand;
  }
  set_thread_count(0);
}

void check_exact_fields(const Json& obj, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    const std::string dec_key = key + "_decimal";
    if (!obj.contains(dec_key)) continue;
    const Rational r = Rational::parse(value.get<std::string>());
    EXPECT_EQ(r.to_string(), value.get<std::string>()) << where << "." << key;
    EXPECT_EQ(r.to_decimal(), obj[dec_key].get<std::string>()) << where << "." << key;
  }
}

TEST(Report, ExactFieldsReparse) {
  for (const auto& c : samples()) {
    const auto doc = run(c).doc;
    check_exact_fields(doc["results"], c.subcommand);
    if (doc.contains("series"))
      for (const auto& pt : doc["series"]["points"]) check_exact_fields(pt, c.subcommand);
  }
}

TEST(Report, ConfigEmbedsResolvedDefaultsAndSeed) {
  RunConfig c = config("union-growth", {{"psi", "recip:1/4"}});
  c.seed = 77;
  const auto doc = run(c).doc;
  EXPECT_EQ(doc["config"]["params"]["ladder"], "1,2,5,25,100,400");
  EXPECT_EQ(doc["config"]["seed"], 77u);
  EXPECT_FALSE(doc.contains("wall_clock"));
}

TEST(Report, SeedChangesRandomFamilyOnly) {
  RunConfig a = config("bc-bound", {{"family", "random"}, {"n", "10"}});
  RunConfig b = a;
  b.seed = 2;
  EXPECT_NE(run(a).doc["results"], run(b).doc["results"]);
  RunConfig d = config("bc-bound", {{"family", "dyadic"}, {"n", "10"}});
  RunConfig e = d;
  e.seed = 2;
  EXPECT_EQ(run(d).doc["results"], run(e).doc["results"]);
}

TEST(Csv, HeaderMatchesDocumentedColumns) {
  for (auto c : samples()) {
    c.format = Format::csv;
    const auto report = run(c);
    const std::string csv = emit_csv(report);
    const Subcommand& sub = find_subcommand(c.subcommand);
    std::string header;
    for (std::size_t i = 0; i < sub.csv_columns.size(); ++i) header += (i ? "," : "") + sub.csv_columns[i];
    EXPECT_EQ(csv.substr(0, csv.find("\r\n")), header) << c.subcommand;
    EXPECT_NE(csv_help(sub).find(header), std::string::npos);
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) ++lines;
    const std::size_t rows = sub.series ? report.doc["series"]["points"].size() : 1;
    EXPECT_EQ(lines, rows + 1) << c.subcommand;
  }
}

TEST(Csv, QuotesPerRfc4180) {
  // q "3,-4" contains a comma.
  const std::string csv = emit_csv(run(config("area-2d", {{"q", "3,-4"}, {"rho", "1/7"}})));
  EXPECT_NE(csv.find("\r\n\"3,-4\",1/7,2/7,"), std::string::npos) << csv;
  EXPECT_EQ(detail::csv_cell(Json("a\"b")), "\"a\"\"b\"");
  EXPECT_EQ(detail::csv_cell(Json("plain")), "plain");
}

TEST(Plotdata, Series) {
  const auto box = emit_plotdata(run(samples()[13]));
  std::istringstream in(box);
  std::string line;
  int points = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double x = 0, y = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf %lf", &x, &y), 2) << line;
    ++points;
  }
  EXPECT_EQ(points, 4);
  EXPECT_THROW(emit_plotdata(run(samples()[14])), UsageError);
}

TEST(Validation, Errors) {
  EXPECT_THROW(run(config("nope", {})), UsageError);
  EXPECT_THROW(run(config("measure-1d", {{"q", "2"}, {"rho", "x/3"}})), UsageError);
  EXPECT_THROW(run(config("measure-1d", {{"q", "2"}})), UsageError);
  EXPECT_THROW(run(config("measure-1d", {{"q", "2"}, {"rho", "1/3"}, {"bogus", "1"}})), UsageError);
  EXPECT_THROW(run(config("dirichlet", {{"alpha", "3/2"}, {"n", "5"}})), UsageError);
  EXPECT_THROW(run(config("boxcount", {{"v", "3"}, {"ladder", "64"}})), UsageError);
  EXPECT_THROW(run(config("critical-s", {{"v", "3"}, {"qmax", "100"}})), UsageError);
  EXPECT_THROW(run(config("quasi-const", {{"family", "b1d"}, {"n", "5"}})), UsageError);
  EXPECT_THROW(parse_format("xml"), UsageError);
}

// ---------------------------------------------------------------------------
// The installed binary

struct Outcome {
  int code;
  std::string out;
};

Outcome cli(const std::string& args) {
  const std::string path = ::testing::TempDir() + "diophlab_cli_out.txt";
  const std::string cmd = std::string(DIOPHLAB_CLI_PATH) + " " + args + " > " + path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(cli("measure-1d --q 2 --rho 1/10").code, 0);
  EXPECT_EQ(cli("no-such-command").code, 2);
  EXPECT_EQ(cli("measure-1d --q 2 --rho 1/0").code, 2);
  EXPECT_EQ(cli("measure-1d --q two --rho 1/10").code, 2);
  EXPECT_EQ(cli("dirichlet --alpha 3/2 --n 5").code, 2);
  EXPECT_EQ(cli("formulas --m 2 --n 1 --v 3 --format plotdata").code, 2);
  EXPECT_EQ(cli("formulas --m 2 --n 1 --v 3 --format yaml").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Binary, MatchesInProcessRun) {
  const auto res = cli("intersect-2d --q 1,-2 --qprime 2,5 --rho 1/10 --rhoprime 1/10");
  ASSERT_EQ(res.code, 0);
  EXPECT_EQ(res.out, run(samples()[2]).to_json());
  EXPECT_EQ(Json::parse(res.out)["results"]["area"], "1/25");
  const auto threaded = cli("--threads 8 intersect-2d --q 1,-2 --qprime 2,5 --rho 1/10 --rhoprime 1/10");
  EXPECT_EQ(threaded.out, res.out);
}

TEST(Binary, WritesOutputFileAndSummary) {
  const std::string path = ::testing::TempDir() + "diophlab_formulas.csv";
  const auto res = cli("formulas --m 2 --n 1 --v 3 --format csv -o " + path);
  ASSERT_EQ(res.code, 0);
  EXPECT_NE(res.out.find("written to"), std::string::npos);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("7/4"), std::string::npos);
}

}  // namespace
}  // namespace diophlab::cli
