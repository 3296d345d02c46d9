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

#include "dlperf/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dlperf {

namespace {

using nlohmann::json;

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<double>();
}

IoPrefetch parse_prefetch(const std::string& s) {
  if (s == "gpu_buffered") return IoPrefetch::gpu_buffered;
  if (s == "host_buffered") return IoPrefetch::host_buffered;
  if (s == "limited_buffer") return IoPrefetch::limited_buffer;
  if (s == "none") return IoPrefetch::none;
  throw InvalidInput("config: unknown io_prefetch: " + s);
}

MemoryKind parse_memory(const std::string& s) {
  if (s == "pinned") return MemoryKind::pinned;
  if (s == "pageable") return MemoryKind::pageable;
  throw InvalidInput("config: unknown h2d_memory: " + s);
}

CommMethod parse_method(const std::string& s) {
  if (s == "allreduce_ring") return CommMethod::allreduce_ring;
  if (s == "parameter_server") return CommMethod::parameter_server;
  if (s == "measured") return CommMethod::measured;
  throw InvalidInput("config: unknown comm method: " + s);
}

ClusterSpec parse_cluster(const json& obj) {
  ClusterSpec c;
  c.nodes = static_cast<int>(get_number(obj, "nodes", c.nodes));
  c.gpus_per_node =
      static_cast<int>(get_number(obj, "gpus_per_node", c.gpus_per_node));
  c.b_cache = gib_per_s(get_number(obj, "b_cache_gib_s", c.b_cache / kGiB));
  c.b_disk = gib_per_s(get_number(obj, "b_disk_gib_s", c.b_disk / kGiB));
  c.b_pcie_pinned =
      gib_per_s(get_number(obj, "b_pcie_pinned_gib_s", c.b_pcie_pinned / kGiB));
  c.b_pcie_pageable = gib_per_s(
      get_number(obj, "b_pcie_pageable_gib_s", c.b_pcie_pageable / kGiB));
  c.b_net = gib_per_s(get_number(obj, "b_net_gib_s", c.b_net / kGiB));
  c.net_latency = get_number(obj, "net_latency_s", c.net_latency);
  c.intra_latency = get_number(obj, "intra_latency_s", c.intra_latency);
  return c;
}

WorkloadSpec parse_workload(const json& obj) {
  WorkloadSpec w;
  w.per_gpu_batch = get_number(obj, "per_gpu_batch", 0.0);
  w.sample_bytes = get_number(obj, "sample_bytes", 0.0);
  w.total_grad_bytes = get_number(obj, "total_grad_bytes", 0.0);
  return w;
}

OverlapPolicy parse_policy(const json& obj) {
  OverlapPolicy p;
  if (obj.contains("io_prefetch")) {
    p.io_prefetch = parse_prefetch(obj.at("io_prefetch").get<std::string>());
  }
  p.prefetch_depth = static_cast<int>(
      get_number(obj, "prefetch_depth",
                 p.io_prefetch == IoPrefetch::none ? 0 : p.prefetch_depth));
  if (obj.contains("comm_overlap")) {
    p.comm_overlap = obj.at("comm_overlap").get<bool>();
  }
  if (obj.contains("h2d_memory")) {
    p.h2d_memory = parse_memory(obj.at("h2d_memory").get<std::string>());
  }
  p.buffer_bytes = get_number(obj, "buffer_bytes", 0.0);
  return p;
}

PhaseProfile parse_phases(const json& obj) {
  PhaseProfile p;
  p.t_io = get_number(obj, "t_io", 0.0);
  p.t_h2d = get_number(obj, "t_h2d", 0.0);
  p.t_f = get_number(obj, "t_f", 0.0);
  p.t_b = get_number(obj, "t_b", 0.0);
  p.t_u = get_number(obj, "t_u", 0.0);
  p.t_comm = get_number(obj, "t_comm", 0.0);
  return p;
}

LayerProfile parse_layers(const json& arr) {
  LayerProfile lp;
  for (const auto& item : arr) {
    LayerRecord l;
    l.t_b = get_number(item, "t_b", 0.0);
    l.t_comm = get_number(item, "t_comm", 0.0);
    l.t_u = get_number(item, "t_u", 0.0);
    if (item.contains("grad_bytes")) {
      l.grad_bytes = item.at("grad_bytes").get<double>();
    }
    lp.layers.push_back(l);
  }
  return lp;
}

CommModelSpec parse_comm(const json& obj) {
  CommModelSpec c;
  if (obj.contains("method")) {
    c.method = parse_method(obj.at("method").get<std::string>());
  }
  c.efficiency = get_number(obj, "efficiency", 1.0);
  c.latency = get_number(obj, "latency_s", 0.0);
  return c;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& name) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidInput("config " + name + ": " + e.what());
  }
  if (!root.contains("schema_version") ||
      root.at("schema_version").get<int>() != kConfigSchemaVersion) {
    throw InvalidInput("config " + name + ": schema_version must be " +
                       std::to_string(kConfigSchemaVersion));
  }
  ScenarioConfig cfg;
  cfg.name = name;
  try {
    if (root.contains("cluster")) cfg.cluster = parse_cluster(root["cluster"]);
    if (root.contains("workload")) {
      cfg.workload = parse_workload(root["workload"]);
    }
    if (root.contains("policy")) cfg.policy = parse_policy(root["policy"]);
    if (root.contains("phases")) cfg.phases = parse_phases(root["phases"]);
    if (root.contains("layers")) cfg.layers = parse_layers(root["layers"]);
    if (root.contains("comm")) cfg.comm = parse_comm(root["comm"]);
    if (root.contains("scales")) {
      for (const auto& item : root["scales"]) {
        ScaleEntry e;
        if (item.is_number()) {
          e.n_g = item.get<int>();
        } else {
          e.n_g = item.at("n_g").get<int>();
          if (item.contains("t_io")) e.t_io = item.at("t_io").get<double>();
          if (item.contains("t_comm")) {
            e.t_comm = item.at("t_comm").get<double>();
          }
        }
        cfg.scales.push_back(e);
      }
    }
  } catch (const json::exception& e) {
    throw InvalidInput("config " + name + ": " + e.what());
  }
  ensure_valid(validate(cfg), "config " + name);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_config(text.str(), name);
}

std::vector<Violation> validate(const ScenarioConfig& config) {
  std::vector<Violation> v;
  for (auto& cv : validate(config.cluster)) {
    v.push_back({"cluster." + cv.path, cv.message});
  }
  for (auto& pv : validate(config.policy)) {
    v.push_back({"policy." + pv.path, pv.message});
  }
  if (config.phases) {
    for (auto& pv : validate(*config.phases)) {
      v.push_back({"phases." + pv.path, pv.message});
    }
  }
  if (config.layers) {
    const PhaseProfile* phases =
        config.phases ? &*config.phases : nullptr;
    for (auto& lv : validate_layer_profile(*config.layers, phases)) {
      v.push_back({lv.path, lv.message});
    }
  }
  if (!config.phases && !config.layers) {
    v.push_back({"phases", "at least one of phases/layers is required"});
  }
  if (!(config.comm.efficiency > 0.0) || config.comm.efficiency > 1.0) {
    v.push_back({"comm.efficiency", "must be in (0, 1]"});
  }
  if (config.comm.latency < 0.0) {
    v.push_back({"comm.latency_s", "must be >= 0"});
  }
  for (std::size_t i = 0; i < config.scales.size(); ++i) {
    const auto& e = config.scales[i];
    const std::string base = "scales[" + std::to_string(i) + "]";
    if (e.n_g < 1) v.push_back({base + ".n_g", "must be >= 1"});
    if (e.t_io && *e.t_io < 0) v.push_back({base + ".t_io", "must be >= 0"});
    if (e.t_comm && *e.t_comm < 0) {
      v.push_back({base + ".t_comm", "must be >= 0"});
    }
  }
  return v;
}

}  // namespace dlperf
