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

#include "dlperf/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace dlperf {

namespace {

double sum_terms(const std::vector<PhaseTerm>& terms) {
  double s = 0.0;
  for (const auto& t : terms) s += t.seconds;
  return s;
}

}  // namespace

IterationEstimate iter_time_sequential(const PhaseProfile& phases) {
  ensure_valid(validate(phases), "iter_time_sequential");
  IterationEstimate e;
  e.mode = EstimateMode::sequential;
  e.terms = {{"io", phases.t_io},     {"h2d", phases.t_h2d},
             {"forward", phases.t_f}, {"backward", phases.t_b},
             {"comm", phases.t_comm}, {"update", phases.t_u}};
  e.total = sum_terms(e.terms);
  e.exposed_comm = phases.t_comm;
  return e;
}

IterationEstimate iter_time_pipelined_io(const PhaseProfile& phases) {
  ensure_valid(validate(phases), "iter_time_pipelined_io");
  const double rest = phases.t_gpu() + phases.t_comm;
  IterationEstimate e;
  e.mode = EstimateMode::pipelined_io;
  e.io_hidden = phases.t_io <= rest;
  // The io term carries only the exposed residual so that the terms always
  // sum to the total.
  const double io_exposed = e.io_hidden ? 0.0 : phases.t_io - rest;
  e.terms = {{"io", io_exposed},      {"h2d", phases.t_h2d},
             {"forward", phases.t_f}, {"backward", phases.t_b},
             {"comm", phases.t_comm}, {"update", phases.t_u}};
  e.total = std::max(rest, phases.t_io);
  e.exposed_comm = phases.t_comm;
  return e;
}

double io_time(double samples_per_gpu, int n_g, double sample_bytes,
               double b_cache) {
  if (!(b_cache > 0.0) || !std::isfinite(b_cache)) {
    throw InvalidInput("io_time: cache bandwidth must be > 0");
  }
  if (samples_per_gpu < 0.0 || n_g < 1 || sample_bytes < 0.0) {
    throw InvalidInput("io_time: negative batch geometry");
  }
  return samples_per_gpu * static_cast<double>(n_g) * sample_bytes / b_cache;
}

double h2d_time(double bytes, MemoryKind memory, const ClusterSpec& cluster) {
  const double bw = memory == MemoryKind::pinned ? cluster.b_pcie_pinned
                                                 : cluster.b_pcie_pageable;
  if (!(bw > 0.0) || !std::isfinite(bw)) {
    throw InvalidInput("h2d_time: PCIe bandwidth must be > 0");
  }
  if (bytes < 0.0) throw InvalidInput("h2d_time: negative transfer size");
  return bytes / bw;
}

OverlapCase classify_overlap(const LayerProfile& layers) {
  ensure_valid(validate_layer_profile(layers), "classify_overlap");
  const auto& ls = layers.layers;
  const int l_count = static_cast<int>(ls.size());

  // hidden[i] for layer index i (2..L): t_comm(i) <= t_b(i-1).
  // Fully hidden when all hold (vacuously for L=1, preferred over a formally
  // vacuous threshold at C = L+1).
  int first_exposed = 0;  // smallest i with the condition violated
  bool all_hidden = true;
  bool tail_exposed = true;  // every i >= first_exposed violated
  for (int i = 2; i <= l_count; ++i) {
    const bool hidden = ls[i - 1].t_comm <= ls[i - 2].t_b;
    if (!hidden) {
      all_hidden = false;
      if (first_exposed == 0) first_exposed = i;
    } else if (first_exposed != 0) {
      tail_exposed = false;
    }
  }

  OverlapCase c;
  if (all_hidden) {
    c.kind = OverlapCase::Kind::fully_hidden;
  } else if (tail_exposed) {
    c.kind = OverlapCase::Kind::partially_exposed;
    c.threshold_layer = first_exposed;
  } else {
    c.kind = OverlapCase::Kind::irregular;
  }
  return c;
}

IterationEstimate iter_time_overlapped(double t_io, double t_h2d, double t_f,
                                       const LayerProfile& layers) {
  if (t_io < 0.0 || t_h2d < 0.0 || t_f < 0.0) {
    throw InvalidInput("iter_time_overlapped: negative phase duration");
  }
  const OverlapCase oc = classify_overlap(layers);
  if (!oc.closed_form_applies()) {
    throw InvalidInput(
        "iter_time_overlapped: irregular overlap pattern; the closed forms "
        "do not cover it, use the simulator");
  }
  const auto& ls = layers.layers;
  const double total_comm = layers.sum_t_comm();

  IterationEstimate e;
  e.mode = EstimateMode::overlapped;
  double backward_on_path = 0.0;
  double comm_exposed = ls[0].t_comm;  // the tail transfer is never hidden
  if (oc.kind == OverlapCase::Kind::fully_hidden) {
    backward_on_path = layers.sum_t_b();
  } else {
    const int c = oc.threshold_layer;
    for (int i = 1; i <= c - 1; ++i) backward_on_path += ls[i - 1].t_b;
    for (int i = c; i <= static_cast<int>(ls.size()); ++i) {
      comm_exposed += ls[i - 1].t_comm;
    }
  }
  e.terms = {{"io", t_io},
             {"h2d", t_h2d},
             {"forward", t_f},
             {"backward", backward_on_path},
             {"comm", comm_exposed},
             {"update", ls[0].t_u}};
  e.total = sum_terms(e.terms);
  e.exposed_comm = comm_exposed;
  e.hidden_comm = total_comm - comm_exposed;
  return e;
}

SpeedupReport speedup_sequential_comm(const ScalingScenario& scenario) {
  ensure_valid(validate(scenario), "speedup_sequential_comm");
  const double t_gpu = scenario.single.phases.t_gpu();
  const double denom = scenario.multi.t_io_ng + t_gpu + scenario.multi.t_comm;
  if (!(denom > 0.0)) {
    throw InvalidInput("speedup_sequential_comm: zero denominator");
  }
  SpeedupReport r;
  r.n_g = scenario.multi.n_g;
  r.formula = SpeedupReport::Formula::sequential_comm;
  r.speedup = static_cast<double>(r.n_g) * (scenario.single.t_io_1 + t_gpu) /
              denom;
  r.efficiency = r.speedup / static_cast<double>(r.n_g);
  return r;
}

SpeedupReport speedup_overlapped(const ScalingScenario& scenario, double t_h2d,
                                 double t_f) {
  ensure_valid(validate(scenario), "speedup_overlapped");
  if (!scenario.multi.layers) {
    throw InvalidInput("speedup_overlapped: multi.layers required");
  }
  const IterationEstimate denom_est = iter_time_overlapped(
      scenario.multi.t_io_ng, t_h2d, t_f, *scenario.multi.layers);
  if (!(denom_est.total > 0.0)) {
    throw InvalidInput("speedup_overlapped: zero denominator");
  }
  const OverlapCase oc = classify_overlap(*scenario.multi.layers);
  const double t_gpu = scenario.single.phases.t_gpu();
  SpeedupReport r;
  r.n_g = scenario.multi.n_g;
  r.formula = oc.kind == OverlapCase::Kind::fully_hidden
                  ? SpeedupReport::Formula::overlapped_fully_hidden
                  : SpeedupReport::Formula::overlapped_partially_exposed;
  r.speedup = static_cast<double>(r.n_g) * (scenario.single.t_io_1 + t_gpu) /
              denom_est.total;
  r.efficiency = r.speedup / static_cast<double>(r.n_g);
  return r;
}

LinkEfficiency allreduce_efficiency(double wire_bytes, double t_comm,
                                    double b_net) {
  if (!(t_comm > 0.0)) {
    throw InvalidInput("allreduce_efficiency: t_comm must be > 0");
  }
  if (!(b_net > 0.0)) {
    throw InvalidInput("allreduce_efficiency: bandwidth must be > 0");
  }
  if (wire_bytes < 0.0) {
    throw InvalidInput("allreduce_efficiency: negative byte count");
  }
  LinkEfficiency e;
  e.value = wire_bytes / (t_comm * b_net);
  e.exceeds_link_capacity = e.value > 1.0;
  return e;
}

std::vector<BottleneckEntry> rank_bottlenecks(const IterationEstimate& e) {
  std::vector<BottleneckEntry> out;
  double total = 0.0;
  for (const auto& t : e.terms) total += t.seconds;
  if (total <= 0.0) return out;
  for (const auto& t : e.terms) {
    if (t.seconds > 0.0) out.push_back({t.name, t.seconds, t.seconds / total});
  }
  // Stable sort keeps the canonical phase order on ties.
  std::stable_sort(out.begin(), out.end(),
                   [](const BottleneckEntry& a, const BottleneckEntry& b) {
                     return a.seconds > b.seconds;
                   });
  return out;
}

const char* to_string(EstimateMode mode) {
  switch (mode) {
    case EstimateMode::sequential: return "sequential";
    case EstimateMode::pipelined_io: return "pipelined_io";
    case EstimateMode::overlapped: return "overlapped";
  }
  return "?";
}

const char* to_string(SpeedupReport::Formula formula) {
  switch (formula) {
    case SpeedupReport::Formula::sequential_comm: return "sequential_comm";
    case SpeedupReport::Formula::overlapped_fully_hidden:
      return "overlapped_fully_hidden";
    case SpeedupReport::Formula::overlapped_partially_exposed:
      return "overlapped_partially_exposed";
  }
  return "?";
}

}  // namespace dlperf
