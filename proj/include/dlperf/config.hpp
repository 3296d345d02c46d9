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

#include "dlperf/comm.hpp"
#include "dlperf/core.hpp"

namespace dlperf {

// A scale point to evaluate, with optional measured overrides. Absent values
// are derived from the workload, policy, and comm model.
struct ScaleEntry {
  int n_g = 1;
  std::optional<double> t_io;
  std::optional<double> t_comm;
};

// One scenario: everything a CLI command needs. Parsed from a JSON file
// carrying a schema_version key (current version: 1). Bandwidths in the file
// are given in GiB/s, sizes in bytes, durations in seconds.
struct ScenarioConfig {
  std::string name;  // defaults to the file stem
  ClusterSpec cluster;
  WorkloadSpec workload;
  OverlapPolicy policy;
  std::optional<PhaseProfile> phases;
  std::optional<LayerProfile> layers;
  CommModelSpec comm;
  std::vector<ScaleEntry> scales;
};

inline constexpr int kConfigSchemaVersion = 1;

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& name);

// Structural validation of the assembled config (at least one of
// phases/layers, scale entries sane, nested types valid).
std::vector<Violation> validate(const ScenarioConfig& config);

}  // namespace dlperf
