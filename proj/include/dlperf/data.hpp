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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlperf/core.hpp"

namespace dlperf {

// One measured value with its reported standard deviation. Std-devs are
// carried for display only; they do not enter error metrics.
struct Measurement {
  double mean = 0.0;
  double std_dev = 0.0;
};

// All measurements for one (framework, network, scale) cell group.
// An absent metric means the source reports no value; it is never 0.
struct ReferenceRecord {
  std::string framework;
  std::string network;
  int gpus = 1;
  int nodes = 1;
  std::map<std::string, Measurement> metrics;  // keyed t_io, t_h2d, ... t_iter
  std::optional<bool> hidden;                  // comm hidden behind backward?

  std::string scenario_id() const;  // "<framework>/<network>/<gpus>g<nodes>n"
  std::optional<Measurement> metric(const std::string& name) const;
};

// CSV schema (header required): framework,network,gpus,nodes,metric,mean_s,std_s
// metric in {t_io,t_h2d,t_f,t_b,t_u,t_comm,t_iter}; blank mean = absent;
// lines starting with '#' are comments. Rows sharing a scenario merge into
// one record. Malformed rows raise InvalidInput naming line and column.
std::vector<ReferenceRecord> load_reference(const std::string& path);

// Companion file for hidden flags: framework,network,gpus,nodes,hidden with
// hidden in {yes,no}. Attaches flags to already-loaded records (records not
// present yet are created).
void load_hidden_flags(const std::string& path,
                       std::vector<ReferenceRecord>& records);

// Serialize records back to the reference CSV schema (deterministic order).
std::string reference_to_csv(const std::vector<ReferenceRecord>& records);

struct Prediction {
  std::string scenario_id;
  std::string metric;  // which reference metric this predicts
  double seconds = 0.0;
  std::string notes;
};

struct ValidationRow {
  std::string scenario_id;
  std::string metric;
  double predicted = 0.0;
  std::optional<double> measured;
  double abs_error = 0.0;  // valid when measured present
  double rel_error = 0.0;  // |predicted - measured| / measured, measured > 0
  std::string notes;

  bool has_reference() const { return measured.has_value(); }
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  double mean_rel_error = 0.0;  // over rows with a reference
  double max_rel_error = 0.0;
  int compared = 0;
  int no_reference = 0;
};

// Join predictions with reference records. A prediction whose scenario id
// resolves to no record raises InvalidInput; one whose record lacks the
// predicted metric becomes a "no reference" row excluded from aggregates.
ValidationReport validate_model(const std::vector<ReferenceRecord>& records,
                                const std::vector<Prediction>& predictions);

// Framework pipelining presets and per-network workload defaults used by the
// bundled validation workflow.
bool known_framework(const std::string& name);
bool known_network(const std::string& name);
OverlapPolicy framework_policy(const std::string& framework);
WorkloadSpec network_workload(const std::string& network);

}  // namespace dlperf
