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

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlperf {

// Byte units are binary throughout: bandwidths quoted as "GB/s" in vendor
// specs are treated as GiB/s (1 GB/s == 1024 MiB/s). The measured reference
// arithmetic (588 MB batch / 3.5x1024 MB/s cache) only reconciles this way.
inline constexpr double kMiB = 1024.0 * 1024.0;
inline constexpr double kGiB = 1024.0 * kMiB;

inline constexpr double gib_per_s(double v) { return v * kGiB; }
inline constexpr double mib(double v) { return v * kMiB; }

// Thrown when an operation's inputs violate its preconditions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an internal consistency check fails (a bug, not bad input).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A single structural-validation finding. Violations are data, not failures.
struct Violation {
  std::string path;     // field path, e.g. "layers[2].t_comm"
  std::string message;  // human-readable description
};

// Per-iteration phase durations in seconds, measured or modeled.
// t_comm is 0 for a single GPU.
struct PhaseProfile {
  double t_io = 0.0;
  double t_h2d = 0.0;
  double t_f = 0.0;
  double t_b = 0.0;
  double t_u = 0.0;
  double t_comm = 0.0;

  // Derived, never stored: time spent on the GPU proper.
  double t_gpu() const { return t_h2d + t_f + t_b + t_u; }
};

// One learnable layer's backward/communication/update costs. Layer index is
// positional: layers[0] is layer 1 (the first learnable layer, last to finish
// backward propagation), layers[L-1] is layer L.
struct LayerRecord {
  double t_b = 0.0;
  double t_comm = 0.0;
  double t_u = 0.0;
  std::optional<double> grad_bytes;
};

struct LayerProfile {
  std::vector<LayerRecord> layers;

  std::size_t size() const { return layers.size(); }
  double sum_t_b() const;
  double sum_t_comm() const;
};

// Cluster geometry and link bandwidths (bytes/second) / latencies (seconds).
struct ClusterSpec {
  int nodes = 1;
  int gpus_per_node = 1;
  double b_cache = gib_per_s(3.5);
  double b_disk = gib_per_s(0.5);
  double b_pcie_pinned = gib_per_s(11.4);
  double b_pcie_pageable = gib_per_s(8.7);
  double b_net = gib_per_s(7.0);  // 56 Gbps InfiniBand
  double net_latency = 0.0;
  double intra_latency = 0.0;

  int total_gpus() const { return nodes * gpus_per_node; }
};

// Per-replica workload: mini-batch geometry and model gradient size.
struct WorkloadSpec {
  double per_gpu_batch = 0.0;  // samples per GPU per iteration
  double sample_bytes = 0.0;
  double total_grad_bytes = 0.0;  // per model replica

  // Bytes one node must read per iteration under weak scaling.
  double minibatch_bytes(int n_g) const {
    return per_gpu_batch * static_cast<double>(n_g) * sample_bytes;
  }
};

enum class IoPrefetch { gpu_buffered, host_buffered, limited_buffer, none };
enum class MemoryKind { pinned, pageable };

// A framework's pipelining behavior.
struct OverlapPolicy {
  IoPrefetch io_prefetch = IoPrefetch::host_buffered;
  int prefetch_depth = 1;  // mini-batches the reader may run ahead; 0 iff none
  bool comm_overlap = true;
  MemoryKind h2d_memory = MemoryKind::pinned;
  double buffer_bytes = 0.0;  // limited_buffer capacity; 0 = unlimited
};

// Overlap classification of a layer profile: communication either fully
// hidden by backward computation, exposed from a threshold layer onward, or
// neither pattern.
struct OverlapCase {
  enum class Kind { fully_hidden, partially_exposed, irregular };
  Kind kind = Kind::fully_hidden;
  int threshold_layer = 0;  // C, valid when partially_exposed; 2 <= C <= L

  bool closed_form_applies() const { return kind != Kind::irregular; }
};

// Inputs for a speedup computation: the single-GPU baseline and one
// multi-GPU configuration.
struct ScalingScenario {
  struct Single {
    double t_io_1 = 0.0;
    PhaseProfile phases;  // t_io field unused here; t_io_1 is authoritative
  };
  struct Multi {
    int n_g = 1;
    double t_io_ng = 0.0;
    double t_comm = 0.0;
    std::optional<LayerProfile> layers;
  };
  Single single;
  Multi multi;
};

// Structural validation. Each function returns every violation found.
std::vector<Violation> validate(const PhaseProfile& p);
std::vector<Violation> validate(const ClusterSpec& c);
std::vector<Violation> validate(const WorkloadSpec& w);
std::vector<Violation> validate(const OverlapPolicy& p);
std::vector<Violation> validate(const ScalingScenario& s);

// Layer-profile validation; when an aggregate PhaseProfile for the same
// scenario is supplied, the per-layer backward sum must match its t_b
// (1e-9 relative).
std::vector<Violation> validate_layer_profile(const LayerProfile& layers,
                                              const PhaseProfile* phases = nullptr);

// Throws InvalidInput listing all violations; no-op when the list is empty.
void ensure_valid(const std::vector<Violation>& violations,
                  const std::string& what);

// limited_buffer reverts to blocking I/O when the per-node mini-batch does
// not fit the buffer.
OverlapPolicy effective_policy(const OverlapPolicy& policy,
                               double minibatch_bytes);

}  // namespace dlperf
