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

#include "dlperf/core.hpp"

namespace dlperf {

enum class CommMethod { allreduce_ring, parameter_server, measured };

// Communication-time model used to fill t_comm inputs when measurements are
// absent. Bandwidth comes from the ClusterSpec: PCIe (pinned) inside a node,
// the network link across nodes.
struct CommModelSpec {
  CommMethod method = CommMethod::measured;
  double efficiency = 1.0;  // effective link utilization, (0,1]
  double latency = 0.0;     // seconds per hop
};

// Ring all-reduce: 2(p-1)/p of the gradient crosses the slowest link, at
// B * efficiency effective bandwidth, plus 2(p-1) latency hops. p = 1 is 0.
double allreduce_time(double grad_bytes, int p, double bandwidth,
                      double latency, double efficiency);

// Parameter server: p workers push and pull through one server link.
double ps_time(double grad_bytes, int p, double b_server, double latency);

// Fill per-layer t_comm from per-layer gradient sizes. The measured method
// passes existing values through unchanged; the model methods require
// grad_bytes on every layer.
LayerProfile layer_comm_times(const LayerProfile& layers,
                              const CommModelSpec& spec,
                              const ClusterSpec& cluster, int p);

const char* to_string(CommMethod method);

}  // namespace dlperf
