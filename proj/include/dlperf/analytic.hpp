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

enum class EstimateMode { sequential, pipelined_io, overlapped };

// One named contribution to an iteration-time estimate. Names follow the
// canonical phase sequence: io, h2d, forward, backward, comm, update.
struct PhaseTerm {
  std::string name;
  double seconds = 0.0;
};

// Closed-form iteration-time estimate. `terms` hold the exposed (critical
// path) contribution of each phase; `total` is re-derivable from them under
// the mode's formula.
struct IterationEstimate {
  EstimateMode mode = EstimateMode::sequential;
  double total = 0.0;
  std::vector<PhaseTerm> terms;
  double exposed_comm = 0.0;
  double hidden_comm = 0.0;
  bool io_hidden = false;  // pipelined_io: t_io fully covered by the rest
};

struct SpeedupReport {
  enum class Formula {
    sequential_comm,              // serialized communication model
    overlapped_fully_hidden,      // comm hidden behind backward, tail only
    overlapped_partially_exposed  // comm exposed from a threshold layer on
  };
  double speedup = 0.0;
  double efficiency = 0.0;  // speedup / n_g, exactly
  int n_g = 1;
  Formula formula = Formula::sequential_comm;
};

struct LinkEfficiency {
  double value = 0.0;  // ratio; 1.0 == link fully utilized
  bool exceeds_link_capacity = false;
};

struct BottleneckEntry {
  std::string phase;
  double seconds = 0.0;
  double share = 0.0;  // of the estimate's total
};

// Sequential iteration: every phase on the critical path.
IterationEstimate iter_time_sequential(const PhaseProfile& phases);

// I/O pipelined with compute: total = max{t_gpu + t_comm, t_io}.
IterationEstimate iter_time_pipelined_io(const PhaseProfile& phases);

// Time to read one node's mini-batch from the system cache.
double io_time(double samples_per_gpu, int n_g, double sample_bytes,
               double b_cache);

// Host-to-device copy time for the given memory kind.
double h2d_time(double bytes, MemoryKind memory, const ClusterSpec& cluster);

// Classify a layer profile against the two overlap templates. Fully hidden:
// t_comm(i) <= t_b(i-1) for all i in 2..L. Partially exposed: the condition
// holds for i < C and fails for all i >= C, some 2 <= C <= L. Anything else
// is irregular. An L=1 profile is fully hidden (conditions vacuous).
OverlapCase classify_overlap(const LayerProfile& layers);

// Iteration time when gradient aggregation is pipelined with backward
// propagation, using the closed forms for the two regular overlap patterns.
// Throws InvalidInput for an irregular profile (use the simulator there).
IterationEstimate iter_time_overlapped(double t_io, double t_h2d, double t_f,
                                       const LayerProfile& layers);

// Speedup with communication on the critical path:
//   S = N_g (t_io_1 + t_gpu) / (t_io_ng + t_gpu + t_comm).
SpeedupReport speedup_sequential_comm(const ScalingScenario& scenario);

// Speedup when aggregation overlaps backward: same numerator, denominator is
// the overlapped iteration time at scale. Requires multi.layers; throws on
// an irregular classification.
SpeedupReport speedup_overlapped(const ScalingScenario& scenario, double t_h2d,
                                 double t_f);

// Effective link utilization of an aggregation step: wire_bytes / (t * B).
// A value > 1 signals an inconsistent measurement and is flagged, not raised.
LinkEfficiency allreduce_efficiency(double wire_bytes, double t_comm,
                                    double b_net);

// Phases of an estimate sorted by descending exposed time; zero-valued terms
// are dropped; ties keep the canonical phase order. Shares sum to 1.
std::vector<BottleneckEntry> rank_bottlenecks(const IterationEstimate& e);

const char* to_string(EstimateMode mode);
const char* to_string(SpeedupReport::Formula formula);

}  // namespace dlperf
