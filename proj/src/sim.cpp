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

#include "dlperf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

namespace dlperf {

namespace {

// One iteration's fully resolved timestamps. Layer vectors are indexed
// 0..L-1 for layers 1..L.
struct IterSchedule {
  double io_s = 0, io_e = 0;
  double h2d_s = 0, h2d_e = 0;
  double f_s = 0, f_e = 0;
  std::vector<double> b_s, b_e;  // backward
  std::vector<double> c_s, c_e;  // comm
  std::vector<double> u_s, u_e;  // update
  double channel_end = 0;        // comm channel free time after this iteration
  double done = 0;               // completion of every event
};

int resource_rank(EventKind k) {
  switch (k) {
    case EventKind::io_start:
    case EventKind::io_end: return 0;
    case EventKind::h2d_start:
    case EventKind::h2d_end: return 1;
    case EventKind::forward_start:
    case EventKind::forward_end:
    case EventKind::backward_start:
    case EventKind::backward_end: return 2;
    case EventKind::comm_start:
    case EventKind::comm_end: return 3;
    case EventKind::update_start:
    case EventKind::update_end: return 4;
  }
  return 5;
}

void check_inputs(const IterationInputs& front, const LayerProfile& layers,
                  const OverlapPolicy& policy) {
  if (front.t_io < 0 || front.t_h2d < 0 || front.t_f < 0 ||
      !std::isfinite(front.t_io + front.t_h2d + front.t_f)) {
    throw InvalidInput("simulate: negative or non-finite phase duration");
  }
  ensure_valid(validate_layer_profile(layers), "simulate: layers");
  ensure_valid(validate(policy), "simulate: policy");
}

std::vector<IterSchedule> run_schedule(const IterationInputs& front,
                                       const LayerProfile& layers,
                                       const OverlapPolicy& policy,
                                       int n_iters) {
  const int l_count = static_cast<int>(layers.size());
  const bool prefetch = policy.io_prefetch != IoPrefetch::none;
  const int depth = std::max(policy.prefetch_depth, 1);

  std::vector<IterSchedule> sched(n_iters);
  for (int k = 0; k < n_iters; ++k) {
    IterSchedule& it = sched[k];
    it.b_s.resize(l_count);
    it.b_e.resize(l_count);
    it.c_s.resize(l_count);
    it.c_e.resize(l_count);
    it.u_s.resize(l_count);
    it.u_e.resize(l_count);

    // Reader: serial; a prefetching reader runs ahead as soon as a host
    // buffer slot frees, which happens when that slot's batch starts its h2d
    // transfer. Without prefetch the read blocks on the previous iteration.
    if (k == 0) {
      it.io_s = 0.0;
    } else if (!prefetch) {
      it.io_s = sched[k - 1].done;
    } else {
      const double slot_free = k >= depth ? sched[k - depth].h2d_s : 0.0;
      it.io_s = std::max(sched[k - 1].io_e, slot_free);
    }
    it.io_e = it.io_s + front.t_io;

    // GPU stream: h2d, forward, backward L..1, back to back. The next
    // iteration cannot begin its transfer before the previous one fully
    // completes (synchronous update semantics).
    it.h2d_s = std::max(it.io_e, k > 0 ? sched[k - 1].done : 0.0);
    it.h2d_e = it.h2d_s + front.t_h2d;
    it.f_s = it.h2d_e;
    it.f_e = it.f_s + front.t_f;
    double t = it.f_e;
    for (int i = l_count - 1; i >= 0; --i) {
      it.b_s[i] = t;
      it.b_e[i] = t + layers.layers[i].t_b;
      t = it.b_e[i];
    }

    // Gradient channel: single resource, FIFO in backward-completion order.
    // Without overlap every transfer waits for backward to finish entirely.
    double channel_free = k > 0 ? sched[k - 1].channel_end : 0.0;
    for (int i = l_count - 1; i >= 0; --i) {
      const double release = policy.comm_overlap ? it.b_e[i] : it.b_e[0];
      it.c_s[i] = std::max(channel_free, release);
      it.c_e[i] = it.c_s[i] + layers.layers[i].t_comm;
      channel_free = it.c_e[i];
    }
    it.channel_end = channel_free;

    // Updates: unbounded resource, immediately after each layer's comm.
    it.done = it.b_e[0];
    for (int i = 0; i < l_count; ++i) {
      it.u_s[i] = it.c_e[i];
      it.u_e[i] = it.u_s[i] + layers.layers[i].t_u;
      it.done = std::max(it.done, it.u_e[i]);
    }
  }
  return sched;
}

// Total intersection of [s,e) with a set of disjoint intervals.
double overlap_with(double s, double e,
                    const std::vector<std::pair<double, double>>& intervals) {
  double acc = 0.0;
  for (const auto& [is, ie] : intervals) {
    acc += std::max(0.0, std::min(e, ie) - std::max(s, is));
  }
  return acc;
}

SimTrace build_trace(const IterSchedule& it, const LayerProfile& layers,
                     int iteration) {
  const int l_count = static_cast<int>(layers.size());
  SimTrace trace;
  auto emit = [&](EventKind kind, int layer, double time) {
    trace.events.push_back({kind, layer, time, iteration});
  };
  emit(EventKind::io_start, 0, it.io_s);
  emit(EventKind::io_end, 0, it.io_e);
  emit(EventKind::h2d_start, 0, it.h2d_s);
  emit(EventKind::h2d_end, 0, it.h2d_e);
  emit(EventKind::forward_start, 0, it.f_s);
  emit(EventKind::forward_end, 0, it.f_e);
  for (int i = l_count - 1; i >= 0; --i) {
    emit(EventKind::backward_start, i + 1, it.b_s[i]);
    emit(EventKind::backward_end, i + 1, it.b_e[i]);
  }
  for (int i = l_count - 1; i >= 0; --i) {
    emit(EventKind::comm_start, i + 1, it.c_s[i]);
    emit(EventKind::comm_end, i + 1, it.c_e[i]);
  }
  for (int i = l_count - 1; i >= 0; --i) {
    emit(EventKind::update_start, i + 1, it.u_s[i]);
    emit(EventKind::update_end, i + 1, it.u_e[i]);
  }
  // Deterministic order: time, then resource, then layer index descending;
  // emission order (start before end) breaks the remaining ties.
  std::stable_sort(trace.events.begin(), trace.events.end(),
                   [](const SimEvent& a, const SimEvent& b) {
                     if (a.time != b.time) return a.time < b.time;
                     const int ra = resource_rank(a.kind);
                     const int rb = resource_rank(b.kind);
                     if (ra != rb) return ra < rb;
                     return a.layer > b.layer;
                   });

  trace.makespan = it.done;
  trace.comm_span_start = l_count > 0 ? it.c_s[l_count - 1] : 0.0;
  trace.comm_span_end = l_count > 0 ? it.c_e[0] : 0.0;

  std::vector<std::pair<double, double>> compute = {{it.f_s, it.f_e}};
  for (int i = 0; i < l_count; ++i) compute.emplace_back(it.b_s[i], it.b_e[i]);
  double total_comm = 0.0;
  double hidden = 0.0;
  for (int i = 0; i < l_count; ++i) {
    total_comm += it.c_e[i] - it.c_s[i];
    hidden += overlap_with(it.c_s[i], it.c_e[i], compute);
  }
  trace.hidden_comm = hidden;
  trace.exposed_comm = total_comm - hidden;
  return trace;
}

}  // namespace

SimTrace simulate_iteration(const IterationInputs& front,
                            const LayerProfile& layers,
                            const OverlapPolicy& policy) {
  check_inputs(front, layers, policy);
  const auto sched = run_schedule(front, layers, policy, 1);
  return build_trace(sched[0], layers, 0);
}

SteadyStateResult steady_state_iter_time(const IterationInputs& front,
                                         const LayerProfile& layers,
                                         const OverlapPolicy& policy,
                                         int n_iters) {
  if (n_iters < 2) {
    throw InvalidInput("steady_state_iter_time: n_iters must be >= 2");
  }
  check_inputs(front, layers, policy);
  const auto sched = run_schedule(front, layers, policy, n_iters);

  SteadyStateResult r;
  r.per_iteration.reserve(n_iters);
  double prev_done = 0.0;
  for (const auto& it : sched) {
    r.per_iteration.push_back(it.done - prev_done);
    prev_done = it.done;
  }
  double sum = 0.0;
  for (int k = 1; k < n_iters; ++k) sum += r.per_iteration[k];
  r.mean = sum / static_cast<double>(n_iters - 1);
  r.final_trace = build_trace(sched[n_iters - 1], layers, n_iters - 1);
  return r;
}

double exposed_comm(const SimTrace& trace) {
  std::vector<std::pair<double, double>> compute;
  std::vector<std::pair<double, double>> comm;
  // Pair start/end events per (iteration, layer) key.
  std::map<std::pair<int, int>, double> open_compute;
  std::map<std::pair<int, int>, double> open_comm;
  for (const auto& ev : trace.events) {
    const std::pair<int, int> key{ev.iteration, ev.layer};
    switch (ev.kind) {
      case EventKind::forward_start:
      case EventKind::backward_start:
        open_compute[{ev.iteration, ev.kind == EventKind::forward_start
                                        ? -1
                                        : ev.layer}] = ev.time;
        break;
      case EventKind::forward_end:
      case EventKind::backward_end: {
        const std::pair<int, int> k{ev.iteration,
                                    ev.kind == EventKind::forward_end
                                        ? -1
                                        : ev.layer};
        auto found = open_compute.find(k);
        if (found == open_compute.end()) {
          throw InvalidInput("exposed_comm: malformed trace (unmatched end)");
        }
        compute.emplace_back(found->second, ev.time);
        open_compute.erase(found);
        break;
      }
      case EventKind::comm_start:
        open_comm[key] = ev.time;
        break;
      case EventKind::comm_end: {
        auto found = open_comm.find(key);
        if (found == open_comm.end()) {
          throw InvalidInput("exposed_comm: malformed trace (unmatched end)");
        }
        comm.emplace_back(found->second, ev.time);
        open_comm.erase(found);
        break;
      }
      default:
        break;
    }
  }
  if (!open_compute.empty() || !open_comm.empty()) {
    throw InvalidInput("exposed_comm: malformed trace (unmatched start)");
  }
  double exposed = 0.0;
  for (const auto& [s, e] : comm) {
    exposed += (e - s) - overlap_with(s, e, compute);
  }
  return exposed;
}

std::string trace_to_csv(const SimTrace& trace) {
  std::string out = "iteration,kind,layer,time_s\n";
  char buf[160];
  for (const auto& ev : trace.events) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%d,%.12g\n", ev.iteration,
                  to_string(ev.kind), ev.layer, ev.time);
    out += buf;
  }
  return out;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::io_start: return "io_start";
    case EventKind::io_end: return "io_end";
    case EventKind::h2d_start: return "h2d_start";
    case EventKind::h2d_end: return "h2d_end";
    case EventKind::forward_start: return "forward_start";
    case EventKind::forward_end: return "forward_end";
    case EventKind::backward_start: return "backward_start";
    case EventKind::backward_end: return "backward_end";
    case EventKind::comm_start: return "comm_start";
    case EventKind::comm_end: return "comm_end";
    case EventKind::update_start: return "update_start";
    case EventKind::update_end: return "update_end";
  }
  return "?";
}

}  // namespace dlperf
