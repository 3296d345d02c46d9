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

#include "dlperf/comm.hpp"

#include <cmath>

namespace dlperf {

namespace {

void check_common(double grad_bytes, int p, double bandwidth, double latency) {
  if (grad_bytes < 0.0 || !std::isfinite(grad_bytes)) {
    throw InvalidInput("comm: gradient size must be finite and >= 0");
  }
  if (p < 1) throw InvalidInput("comm: participant count must be >= 1");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidInput("comm: bandwidth must be > 0");
  }
  if (latency < 0.0 || !std::isfinite(latency)) {
    throw InvalidInput("comm: latency must be finite and >= 0");
  }
}

}  // namespace

double allreduce_time(double grad_bytes, int p, double bandwidth,
                      double latency, double efficiency) {
  check_common(grad_bytes, p, bandwidth, latency);
  if (!(efficiency > 0.0) || efficiency > 1.0) {
    throw InvalidInput("allreduce_time: efficiency must be in (0, 1]");
  }
  if (p == 1) return 0.0;
  const double pd = static_cast<double>(p);
  const double wire_bytes = 2.0 * (pd - 1.0) / pd * grad_bytes;
  return wire_bytes / (bandwidth * efficiency) + 2.0 * (pd - 1.0) * latency;
}

double ps_time(double grad_bytes, int p, double b_server, double latency) {
  check_common(grad_bytes, p, b_server, latency);
  return 2.0 * static_cast<double>(p) * grad_bytes / b_server + 2.0 * latency;
}

LayerProfile layer_comm_times(const LayerProfile& layers,
                              const CommModelSpec& spec,
                              const ClusterSpec& cluster, int p) {
  ensure_valid(validate_layer_profile(layers), "layer_comm_times");
  if (spec.method == CommMethod::measured) return layers;

  const bool intra = p <= cluster.gpus_per_node;
  const double bandwidth = intra ? cluster.b_pcie_pinned : cluster.b_net;
  LayerProfile out = layers;
  for (std::size_t i = 0; i < out.layers.size(); ++i) {
    auto& l = out.layers[i];
    if (!l.grad_bytes) {
      throw InvalidInput("layer_comm_times: layer " + std::to_string(i + 1) +
                         " has no gradient size");
    }
    switch (spec.method) {
      case CommMethod::allreduce_ring:
        l.t_comm = allreduce_time(*l.grad_bytes, p, bandwidth, spec.latency,
                                  spec.efficiency);
        break;
      case CommMethod::parameter_server:
        l.t_comm = ps_time(*l.grad_bytes, p, bandwidth, spec.latency);
        break;
      case CommMethod::measured:
        break;
    }
  }
  return out;
}

const char* to_string(CommMethod method) {
  switch (method) {
    case CommMethod::allreduce_ring: return "allreduce_ring";
    case CommMethod::parameter_server: return "parameter_server";
    case CommMethod::measured: return "measured";
  }
  return "?";
}

}  // namespace dlperf
