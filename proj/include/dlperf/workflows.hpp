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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlperf/analytic.hpp"
#include "dlperf/config.hpp"
#include "dlperf/data.hpp"
#include "dlperf/sim.hpp"

namespace dlperf {

// Workflow results are plain values so the CLI and the tests share one code
// path; rendering to table/CSV is separate and timestamp-free, so identical
// inputs give byte-identical output.

struct EstimateRow {
  int n_g = 1;
  double t_io = 0.0;
  double t_comm = 0.0;
  IterationEstimate estimate;
  SpeedupReport speedup;
  std::vector<BottleneckEntry> bottlenecks;
  // Filled when the closed form and the event schedule are both computed
  // (partially-exposed overlap): the two values and their difference.
  std::optional<double> sim_makespan;
  std::optional<double> closed_form_gap;
};

struct EstimateResult {
  std::vector<EstimateRow> rows;
};

struct SimulateResult {
  double mean_iter_time = 0.0;
  std::vector<double> per_iteration;
  SimTrace final_trace;
  double exposed = 0.0;
  double hidden = 0.0;
};

struct SweepRow {
  double value = 0.0;
  double iter_time = 0.0;
  double speedup = 0.0;
  double efficiency = 0.0;
  double exposed_comm = 0.0;
};

enum class SweepDimension { gpus, b_net, batch, efficiency };

// Evaluate the configured scenario at each scale (config scales unless
// overridden). Overlap-aware estimation requires layers; an irregular
// overlap pattern raises InvalidInput directing to `simulate`.
EstimateResult run_estimate(const ScenarioConfig& config,
                            const std::vector<int>& scale_override = {});

// Event-schedule simulation of the configured scenario at the given scale
// (defaults to the last configured scale).
SimulateResult run_simulate(const ScenarioConfig& config, int n_iters,
                            std::optional<int> scale = std::nullopt);

// One estimate per value along the chosen dimension; all other parameters
// held fixed; rows in input order.
std::vector<SweepRow> run_sweep(const ScenarioConfig& config,
                                SweepDimension dimension,
                                const std::vector<double>& values);

// Model-vs-measurement validation over the bundled reference data. For every
// record with a phase breakdown the iteration time is predicted under the
// framework's pipelining policy; for multi-GPU/multi-node records t_comm is
// predicted with the communication model. Any supplied config whose layers
// classify as partially-exposed contributes a closed-form-vs-schedule row.
ValidationReport run_validate(const std::string& reference_path,
                              const std::string& hidden_flags_path,
                              const std::vector<ScenarioConfig>& configs = {});

SweepDimension parse_dimension(const std::string& name);

// Rendering. CSV output is machine-readable and stable.
std::string render_estimate_table(const EstimateResult& result);
std::string render_estimate_csv(const EstimateResult& result);
std::string render_simulate_table(const SimulateResult& result);
std::string render_sweep_csv(const std::vector<SweepRow>& rows,
                             const std::string& dimension_name);
std::string render_validation_table(const ValidationReport& report);
std::string render_validation_csv(const ValidationReport& report);

}  // namespace dlperf
