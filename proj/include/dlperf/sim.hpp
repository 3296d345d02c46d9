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

#include <string>
#include <vector>

#include "dlperf/core.hpp"

namespace dlperf {

// Deterministic discrete-event schedule of S-SGD iterations over four
// resources: a serial reader (io), the GPU stream (h2d + forward + backward,
// in that order, backward layer L down to 1 contiguously), one serialized
// gradient channel (comm, FIFO by backward completion), and an unbounded
// update resource.

enum class EventKind {
  io_start,
  io_end,
  h2d_start,
  h2d_end,
  forward_start,
  forward_end,
  backward_start,
  backward_end,
  comm_start,
  comm_end,
  update_start,
  update_end,
};

struct SimEvent {
  EventKind kind;
  int layer = 0;  // 1-based; 0 for non-layer events
  double time = 0.0;
  int iteration = 0;
};

struct SimTrace {
  std::vector<SimEvent> events;
  double makespan = 0.0;
  double comm_span_start = 0.0;
  double comm_span_end = 0.0;
  double exposed_comm = 0.0;
  double hidden_comm = 0.0;
};

// Front-of-iteration phase inputs; backward/comm/update come per layer.
struct IterationInputs {
  double t_io = 0.0;
  double t_h2d = 0.0;
  double t_f = 0.0;
};

struct SteadyStateResult {
  double mean = 0.0;                  // over iterations 2..n (first excluded)
  std::vector<double> per_iteration;  // completion deltas, all n iterations
  SimTrace final_trace;
};

// One cold-start iteration from virtual time 0.
SimTrace simulate_iteration(const IterationInputs& front,
                            const LayerProfile& layers,
                            const OverlapPolicy& policy);

// n_iters >= 2 consecutive iterations; the first is warm-up and excluded
// from the mean.
SteadyStateResult steady_state_iter_time(const IterationInputs& front,
                                         const LayerProfile& layers,
                                         const OverlapPolicy& policy,
                                         int n_iters);

// Channel-busy time that does not overlap forward/backward busy time,
// recomputed from the trace's events by interval intersection.
double exposed_comm(const SimTrace& trace);

// Ordered CSV export: iteration,kind,layer,time_s.
std::string trace_to_csv(const SimTrace& trace);

const char* to_string(EventKind kind);

}  // namespace dlperf
