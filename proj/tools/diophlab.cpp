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

// diophlab command-line tool: one experiment per invocation.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "diophlab/parallel.hpp"
#include "diophlab/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace diophlab;
  CLI::App app{"diophlab: exact experiments on Diophantine approximation sets"};
  app.fallthrough();
  app.require_subcommand(1);
  app.footer("Rationals are read and written as n/d strings. DIOPHLAB_THREADS caps the worker count.\n"
             "Exit codes: 0 success, 2 invalid input, 3 internal failure.");

  std::uint64_t seed = 1;
  std::string format = "json";
  std::string output = "-";
  unsigned threads = 0;
  app.add_option("--seed", seed, "seed for randomised families")->capture_default_str();
  app.add_option("--format", format, "json | csv | plotdata")->capture_default_str();
  app.add_option("--output,-o", output, "report path, - for standard output")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0: DIOPHLAB_THREADS or hardware)");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> apps;
  for (const auto& sub : cli::subcommands()) {
    CLI::App* s = app.add_subcommand(sub.name, sub.summary);
    s->footer(cli::csv_help(sub));
    for (const auto& p : sub.params) {
      std::string help = p.help;
      if (!p.default_value.empty()) help += " [default: " + p.default_value + "]";
      s->add_option("--" + p.name, values[sub.name][p.name], help);
    }
    apps[sub.name] = s;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "diophlab: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    cli::RunConfig config;
    for (const auto& [name, s] : apps) {
      if (!s->parsed()) continue;
      config.subcommand = name;
      for (const auto& [key, value] : values[name])
        if (s->count("--" + key) > 0) config.params[key] = value;
    }
    config.seed = seed;
    config.format = cli::parse_format(format);
    config.output = output;
    if (threads > 0) set_thread_count(threads);

    const auto start = std::chrono::steady_clock::now();
    const cli::ExperimentReport report = cli::run(config);
    const std::string text = cli::emit(report, config.format);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostream* summary = &std::cout;
    if (output == "-") {
      std::cout << text;
      summary = &std::cerr;
    } else {
      std::ofstream file(output, std::ios::binary);
      if (!file) {
        std::cerr << "diophlab: cannot write " << output << "\n";
        return kExitUsage;
      }
      file << text;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    *summary << "diophlab " << config.subcommand << ": " << cli::format_name(config.format) << " report"
             << (output == "-" ? std::string() : " written to " + output) << " in " << buf << " s\n";
    return 0;
  } catch (const cli::UsageError& e) {
    std::cerr << "diophlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "diophlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "diophlab: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
