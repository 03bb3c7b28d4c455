// Copyright 2026 The Authors.
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


#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "infogather/errors.h"
#include "infogather/experiments.h"
#include "infogather/metrics.h"
#include "infogather/scenario.h"

namespace {

using infogather::Algorithm;
using infogather::CdOrdering;
using infogather::ConfigError;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string FormatNumber(double v) {
  std::ostringstream out;
  out.precision(9);
  out << v;
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot information gathering planner and benchmarks"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  std::optional<uint64_t> seed;

  std::string algo = "dls";
  std::string cd_order = "index";
  bool no_lazy = false;
  bool no_warm = false;
  double alpha = 1.0;
  CLI::App* plan = app.add_subcommand("plan", "Plan once from the initial state");
  plan->add_option("--scenario", scenario, "Scenario file or preset name")
      ->required();
  plan->add_option("--algo", algo)->check(CLI::IsMember({"dls", "cls", "cd"}));
  plan->add_option("--cd-order", cd_order)
      ->check(CLI::IsMember({"index", "reverse", "weight-asc", "weight-desc"}));
  plan->add_flag("--no-lazy", no_lazy);
  plan->add_flag("--no-warm-start", no_warm);
  plan->add_option("--alpha", alpha);
  plan->add_option("--seed", seed);
  plan->add_option("--out", out, "CSV path; stdout when omitted");

  CLI::App* track = app.add_subcommand("track", "Run a tracking mission");
  track->add_option("--scenario", scenario)->required();
  track->add_option("--seed", seed);
  track->add_option("--out", out);

  infogather::SphereOptions sphere_opts;
  std::string sphere_scenario = "sphere-bench";
  CLI::App* sphere = app.add_subcommand("sphere", "Antipodal sphere swap");
  sphere->add_option("--scenario", sphere_scenario);
  sphere->add_option("--robots", sphere_opts.robots);
  sphere->add_option("--beta", sphere_opts.beta);
  sphere->add_option("--trials", sphere_opts.trials);
  sphere->add_option("--seed", sphere_opts.seed);
  sphere->add_option("--out", out);

  infogather::BenchNetOptions net_opts;
  CLI::App* bench = app.add_subcommand("bench-net", "Planner variants over a delayed network");
  bench->add_option("--robots", net_opts.robots);
  bench->add_option("--delay-ms", net_opts.delay_ms);
  bench->add_option("--trials", net_opts.trials);
  bench->add_option("--seed", net_opts.seed);
  bench->add_option("--out", out);

  std::string preset_name;
  CLI::App* dump = app.add_subcommand("dump-scenario", "Print a preset as JSON");
  dump->add_option("name", preset_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    infogather::RunOutput result;
    infogather::RunInfo info;
    if (*plan) {
      infogather::ScenarioConfig config = infogather::LoadScenario(scenario);
      if (seed) config.seed = *seed;
      infogather::PlannerVariant variant;
      variant.algorithm = algo == "cls"  ? Algorithm::kCls
                          : algo == "cd" ? Algorithm::kCd
                                         : Algorithm::kDls;
      variant.options.lazy = !no_lazy;
      variant.options.warm_start = !no_warm;
      variant.options.alpha = alpha;
      variant.cd_order = cd_order == "reverse"       ? CdOrdering::kReverseIndex
                         : cd_order == "weight-asc"  ? CdOrdering::kWeightAscending
                         : cd_order == "weight-desc" ? CdOrdering::kWeightDescending
                                                     : CdOrdering::kIndex;
      if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
      result = infogather::RunPlan(config, variant);
      info = {"plan scenario=" + config.name + " variant=" + variant.Name() +
                  " alpha=" + FormatNumber(alpha),
              config.seed, infogather::ConfigHash(config)};
    } else if (*track) {
      infogather::ScenarioConfig config = infogather::LoadScenario(scenario);
      if (seed) config.seed = *seed;
      result = infogather::RunTrackingSim(config);
      info = {"track scenario=" + config.name, config.seed,
              infogather::ConfigHash(config)};
    } else if (*sphere) {
      infogather::ScenarioConfig config =
          infogather::LoadScenario(sphere_scenario);
      result = infogather::RunSphereBenchmark(config, sphere_opts);
      info = {"sphere robots=" + std::to_string(sphere_opts.robots) +
                  " beta=" + FormatNumber(sphere_opts.beta) +
                  " trials=" + std::to_string(sphere_opts.trials),
              sphere_opts.seed, infogather::ConfigHash(config)};
    } else if (*bench) {
      result = infogather::RunBenchNet(net_opts);
      info = {"bench-net robots=" + std::to_string(net_opts.robots) +
                  " delay_ms=" + FormatNumber(net_opts.delay_ms) +
                  " trials=" + std::to_string(net_opts.trials),
              net_opts.seed,
              infogather::ConfigHash(infogather::Preset("hil-net-bench"))};
    } else {
      std::cout << infogather::ScenarioToJson(infogather::Preset(preset_name));
      return 0;
    }
    infogather::WriteResults(out, result.table, info, result.summary);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
