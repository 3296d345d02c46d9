/* Copyright 2026 The dlperf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlperf/workflows.hpp"

namespace {

// Exit codes: 0 success, 1 usage/config error, 2 validation threshold
// exceeded, 3 internal invariant violation.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitThreshold = 2;
constexpr int kExitInternal = 3;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw dlperf::InvalidInput("cannot write: " + path);
  out << content;
}

std::vector<int> parse_scale_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(std::stoi(cur));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  flush();
  return out;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(std::stod(cur));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  flush();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dlperf: iteration-time, speedup and scaling-efficiency "
               "models for data-parallel synchronous SGD training"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scale_list;
  std::string format = "table";
  std::string dimension;
  std::string values_list;
  std::string reference_path;
  std::string hidden_path;
  std::string trace_out;
  std::vector<std::string> validate_configs;
  std::optional<double> max_rel_error;
  int iters = 50;
  int seed = 0;  // accepted for interface stability; the pipeline is
                 // deterministic and never consumes it

  auto* estimate = app.add_subcommand("estimate",
                                      "closed-form iteration time and speedup");
  estimate->add_option("--config", config_path, "scenario config (JSON)")
      ->required();
  estimate->add_option("--scale", scale_list, "GPU counts, e.g. 1,2,4");
  estimate->add_option("--format", format)->check(CLI::IsMember({"table", "csv"}));
  estimate->add_option("--seed", seed, "ignored (deterministic)");

  auto* simulate = app.add_subcommand("simulate",
                                      "discrete-event schedule of iterations");
  simulate->add_option("--config", config_path, "scenario config (JSON)")
      ->required();
  simulate->add_option("--iters", iters, "iterations to simulate (>= 2)");
  simulate->add_option("--trace-out", trace_out, "write final-iteration CSV");
  simulate->add_option("--format", format)
      ->check(CLI::IsMember({"table", "csv"}));
  simulate->add_option("--seed", seed, "ignored (deterministic)");

  auto* sweep = app.add_subcommand("sweep", "one-dimensional parameter sweep");
  sweep->add_option("--config", config_path, "scenario config (JSON)")
      ->required();
  sweep->add_option("--dimension", dimension, "gpus|b_net|batch|efficiency")
      ->required();
  sweep->add_option("--values", values_list, "comma-separated values")
      ->required();
  sweep->add_option("--seed", seed, "ignored (deterministic)");

  auto* validate = app.add_subcommand("validate",
                                      "model predictions vs reference tables");
  validate->add_option("--reference", reference_path, "reference CSV")
      ->required();
  validate->add_option("--hidden-flags", hidden_path, "hidden-flag CSV");
  validate->add_option("--config", validate_configs,
                       "scenario configs for closed-form vs schedule rows");
  validate->add_option("--max-rel-error", max_rel_error,
                       "fail (exit 2) when any compared row exceeds this");
  validate->add_option("--format", format)
      ->check(CLI::IsMember({"table", "csv"}));
  validate->add_option("--seed", seed, "ignored (deterministic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (estimate->parsed()) {
      const dlperf::ScenarioConfig cfg = dlperf::load_config(config_path);
      const std::vector<int> scales = parse_scale_list(scale_list);
      const dlperf::EstimateResult result = dlperf::run_estimate(cfg, scales);
      std::cout << (format == "csv" ? dlperf::render_estimate_csv(result)
                                    : dlperf::render_estimate_table(result));
    } else if (simulate->parsed()) {
      const dlperf::ScenarioConfig cfg = dlperf::load_config(config_path);
      const dlperf::SimulateResult result = dlperf::run_simulate(cfg, iters);
      if (!trace_out.empty()) {
        write_file(trace_out, dlperf::trace_to_csv(result.final_trace));
      }
      if (format == "csv") {
        std::cout << dlperf::trace_to_csv(result.final_trace);
      } else {
        std::cout << dlperf::render_simulate_table(result);
      }
    } else if (sweep->parsed()) {
      const dlperf::ScenarioConfig cfg = dlperf::load_config(config_path);
      const auto rows = dlperf::run_sweep(
          cfg, dlperf::parse_dimension(dimension),
          parse_value_list(values_list));
      std::cout << dlperf::render_sweep_csv(rows, dimension);
    } else if (validate->parsed()) {
      std::vector<dlperf::ScenarioConfig> cfgs;
      for (const auto& path : validate_configs) {
        cfgs.push_back(dlperf::load_config(path));
      }
      const dlperf::ValidationReport report =
          dlperf::run_validate(reference_path, hidden_path, cfgs);
      std::cout << (format == "csv" ? dlperf::render_validation_csv(report)
                                    : dlperf::render_validation_table(report));
      if (max_rel_error && report.max_rel_error > *max_rel_error) {
        std::cerr << "E_THRESHOLD max relative error "
                  << report.max_rel_error << " exceeds " << *max_rel_error
                  << "\n";
        return kExitThreshold;
      }
    }
  } catch (const dlperf::InvalidInput& e) {
    std::cerr << "E_CONFIG " << e.what() << "\n";
    return kExitUsage;
  } catch (const dlperf::InternalError& e) {
    std::cerr << "E_INTERNAL " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "E_CONFIG " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
