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

#include "dlperf/core.hpp"

#include <cmath>
#include <sstream>

namespace dlperf {

namespace {

bool bad_duration(double v) { return !std::isfinite(v) || v < 0.0; }

void check_duration(std::vector<Violation>& out, const std::string& path,
                    double v) {
  if (bad_duration(v)) {
    out.push_back({path, "duration must be finite and >= 0"});
  }
}

void check_positive(std::vector<Violation>& out, const std::string& path,
                    double v) {
  if (!std::isfinite(v) || v <= 0.0) {
    out.push_back({path, "must be finite and > 0"});
  }
}

}  // namespace

double LayerProfile::sum_t_b() const {
  double s = 0.0;
  for (const auto& l : layers) s += l.t_b;
  return s;
}

double LayerProfile::sum_t_comm() const {
  double s = 0.0;
  for (const auto& l : layers) s += l.t_comm;
  return s;
}

std::vector<Violation> validate(const PhaseProfile& p) {
  std::vector<Violation> v;
  check_duration(v, "t_io", p.t_io);
  check_duration(v, "t_h2d", p.t_h2d);
  check_duration(v, "t_f", p.t_f);
  check_duration(v, "t_b", p.t_b);
  check_duration(v, "t_u", p.t_u);
  check_duration(v, "t_comm", p.t_comm);
  return v;
}

std::vector<Violation> validate(const ClusterSpec& c) {
  std::vector<Violation> v;
  if (c.nodes < 1) v.push_back({"nodes", "must be >= 1"});
  if (c.gpus_per_node < 1) v.push_back({"gpus_per_node", "must be >= 1"});
  check_positive(v, "b_cache", c.b_cache);
  check_positive(v, "b_disk", c.b_disk);
  check_positive(v, "b_pcie_pinned", c.b_pcie_pinned);
  check_positive(v, "b_pcie_pageable", c.b_pcie_pageable);
  check_positive(v, "b_net", c.b_net);
  check_duration(v, "net_latency", c.net_latency);
  check_duration(v, "intra_latency", c.intra_latency);
  return v;
}

std::vector<Violation> validate(const WorkloadSpec& w) {
  std::vector<Violation> v;
  if (!std::isfinite(w.per_gpu_batch) || w.per_gpu_batch < 0.0) {
    v.push_back({"per_gpu_batch", "must be finite and >= 0"});
  }
  check_positive(v, "sample_bytes", w.sample_bytes);
  if (!std::isfinite(w.total_grad_bytes) || w.total_grad_bytes < 0.0) {
    v.push_back({"total_grad_bytes", "must be finite and >= 0"});
  }
  return v;
}

std::vector<Violation> validate(const OverlapPolicy& p) {
  std::vector<Violation> v;
  if (p.prefetch_depth < 0) {
    v.push_back({"prefetch_depth", "must be >= 0"});
  }
  const bool none = p.io_prefetch == IoPrefetch::none;
  if (none != (p.prefetch_depth == 0)) {
    v.push_back({"prefetch_depth", "must be 0 iff io_prefetch is none"});
  }
  if (!std::isfinite(p.buffer_bytes) || p.buffer_bytes < 0.0) {
    v.push_back({"buffer_bytes", "must be finite and >= 0"});
  }
  return v;
}

std::vector<Violation> validate(const ScalingScenario& s) {
  std::vector<Violation> v;
  check_duration(v, "single.t_io_1", s.single.t_io_1);
  for (auto& pv : validate(s.single.phases)) {
    v.push_back({"single.phases." + pv.path, pv.message});
  }
  if (s.multi.n_g < 1) v.push_back({"multi.n_g", "must be >= 1"});
  check_duration(v, "multi.t_io_ng", s.multi.t_io_ng);
  check_duration(v, "multi.t_comm", s.multi.t_comm);
  if (s.multi.layers) {
    for (auto& lv : validate_layer_profile(*s.multi.layers)) {
      v.push_back({"multi.layers." + lv.path, lv.message});
    }
  }
  return v;
}

std::vector<Violation> validate_layer_profile(const LayerProfile& layers,
                                              const PhaseProfile* phases) {
  std::vector<Violation> v;
  if (layers.layers.empty()) {
    v.push_back({"layers", "must contain at least one layer"});
    return v;
  }
  for (std::size_t i = 0; i < layers.layers.size(); ++i) {
    const auto& l = layers.layers[i];
    const std::string base = "layers[" + std::to_string(i + 1) + "]";
    if (bad_duration(l.t_b)) {
      v.push_back({base + ".t_b",
                   "negative duration at layer " + std::to_string(i + 1)});
    }
    if (bad_duration(l.t_comm)) {
      v.push_back({base + ".t_comm",
                   "negative duration at layer " + std::to_string(i + 1)});
    }
    if (bad_duration(l.t_u)) {
      v.push_back({base + ".t_u",
                   "negative duration at layer " + std::to_string(i + 1)});
    }
    if (l.grad_bytes && (!std::isfinite(*l.grad_bytes) || *l.grad_bytes < 0)) {
      v.push_back({base + ".grad_bytes", "must be finite and >= 0"});
    }
  }
  if (phases != nullptr && v.empty()) {
    const double sum = layers.sum_t_b();
    const double agg = phases->t_b;
    const double scale = std::max(std::abs(sum), std::abs(agg));
    if (std::abs(sum - agg) > 1e-9 * std::max(scale, 1.0)) {
      std::ostringstream msg;
      msg << "layer backward sum " << sum << " != aggregate " << agg;
      v.push_back({"layers.t_b", msg.str()});
    }
  }
  return v;
}

void ensure_valid(const std::vector<Violation>& violations,
                  const std::string& what) {
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << what << ": ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) msg << "; ";
    msg << violations[i].path << ": " << violations[i].message;
  }
  throw InvalidInput(msg.str());
}

OverlapPolicy effective_policy(const OverlapPolicy& policy,
                               double minibatch_bytes) {
  OverlapPolicy p = policy;
  if (p.io_prefetch == IoPrefetch::limited_buffer && p.buffer_bytes > 0.0 &&
      minibatch_bytes > p.buffer_bytes) {
    p.io_prefetch = IoPrefetch::none;
    p.prefetch_depth = 0;
  }
  return p;
}

}  // namespace dlperf
