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

#include "dlperf/workflows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dlperf/comm.hpp"

namespace dlperf {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct ResolvedScale {
  double t_io = 0.0;
  double t_comm = 0.0;
  std::optional<LayerProfile> layers;
};

const ScaleEntry* find_scale_entry(const ScenarioConfig& config, int n_g) {
  for (const auto& e : config.scales) {
    if (e.n_g == n_g) return &e;
  }
  return nullptr;
}

double comm_bandwidth(const ScenarioConfig& config, int n_g) {
  return n_g <= config.cluster.gpus_per_node ? config.cluster.b_pcie_pinned
                                             : config.cluster.b_net;
}

// Fill t_io / t_comm / per-layer comm for one scale point, preferring
// measured overrides from the config over the models.
ResolvedScale resolve_scale(const ScenarioConfig& config, int n_g) {
  ResolvedScale r;
  const ScaleEntry* entry = find_scale_entry(config, n_g);

  if (entry != nullptr && entry->t_io) {
    r.t_io = *entry->t_io;
  } else if (config.workload.sample_bytes > 0.0 &&
             config.workload.per_gpu_batch > 0.0) {
    const int node_gpus = std::min(n_g, config.cluster.gpus_per_node);
    r.t_io = io_time(config.workload.per_gpu_batch, node_gpus,
                     config.workload.sample_bytes, config.cluster.b_cache);
  } else if (config.phases) {
    r.t_io = config.phases->t_io;
  }

  if (n_g == 1) {
    r.t_comm = 0.0;
  } else if (entry != nullptr && entry->t_comm) {
    r.t_comm = *entry->t_comm;
  } else {
    switch (config.comm.method) {
      case CommMethod::measured:
        if (config.layers && config.layers->sum_t_comm() > 0.0) {
          r.t_comm = config.layers->sum_t_comm();
        } else if (config.phases && config.phases->t_comm > 0.0) {
          r.t_comm = config.phases->t_comm;
        } else {
          throw InvalidInput(
              "scale " + std::to_string(n_g) +
              ": measured comm method needs a t_comm override or a nonzero "
              "phases.t_comm");
        }
        break;
      case CommMethod::allreduce_ring:
        r.t_comm = allreduce_time(config.workload.total_grad_bytes, n_g,
                                  comm_bandwidth(config, n_g),
                                  config.comm.latency, config.comm.efficiency);
        break;
      case CommMethod::parameter_server:
        r.t_comm = ps_time(config.workload.total_grad_bytes, n_g,
                           comm_bandwidth(config, n_g), config.comm.latency);
        break;
    }
  }

  if (config.layers) {
    LayerProfile scaled = *config.layers;
    if (n_g == 1) {
      for (auto& l : scaled.layers) l.t_comm = 0.0;
    } else if (config.comm.method != CommMethod::measured) {
      CommModelSpec spec = config.comm;
      scaled = layer_comm_times(scaled, spec, config.cluster, n_g);
    }
    r.layers = std::move(scaled);
  }
  return r;
}

std::vector<int> scales_to_run(const ScenarioConfig& config,
                               const std::vector<int>& scale_override) {
  if (!scale_override.empty()) return scale_override;
  std::vector<int> out;
  for (const auto& e : config.scales) out.push_back(e.n_g);
  if (out.empty()) out.push_back(config.cluster.total_gpus());
  return out;
}

EstimateRow estimate_at_scale(const ScenarioConfig& config, int n_g,
                              double t_io_1) {
  const ResolvedScale at = resolve_scale(config, n_g);
  const double t_h2d = config.phases ? config.phases->t_h2d : 0.0;
  const double t_f = config.phases ? config.phases->t_f : 0.0;
  const OverlapPolicy policy = effective_policy(
      config.policy,
      config.workload.minibatch_bytes(
          std::min(n_g, config.cluster.gpus_per_node)));

  EstimateRow row;
  row.n_g = n_g;
  row.t_io = at.t_io;
  row.t_comm = at.t_comm;

  ScalingScenario scenario;
  scenario.single.t_io_1 = t_io_1;
  if (config.phases) {
    scenario.single.phases = *config.phases;
  } else if (config.layers) {
    scenario.single.phases.t_h2d = t_h2d;
    scenario.single.phases.t_f = t_f;
    scenario.single.phases.t_b = config.layers->sum_t_b();
    scenario.single.phases.t_u = config.layers->layers.front().t_u;
  }
  scenario.multi.n_g = n_g;
  scenario.multi.t_io_ng = at.t_io;
  scenario.multi.t_comm = at.t_comm;

  if (policy.comm_overlap && at.layers) {
    const OverlapCase oc = classify_overlap(*at.layers);
    if (!oc.closed_form_applies()) {
      throw InvalidInput(
          "scale " + std::to_string(n_g) +
          ": irregular overlap pattern, the closed forms do not apply; run "
          "`dlperf simulate` on this config instead");
    }
    row.estimate = iter_time_overlapped(at.t_io, t_h2d, t_f, *at.layers);
    scenario.multi.layers = at.layers;
    row.speedup = speedup_overlapped(scenario, t_h2d, t_f);
    if (oc.kind == OverlapCase::Kind::partially_exposed) {
      const SimTrace trace = simulate_iteration({at.t_io, t_h2d, t_f},
                                                *at.layers, policy);
      row.sim_makespan = trace.makespan;
      row.closed_form_gap = trace.makespan - row.estimate.total;
    }
  } else {
    if (!config.phases) {
      throw InvalidInput(
          "estimate without comm overlap needs an aggregate phases block");
    }
    PhaseProfile p = *config.phases;
    p.t_io = at.t_io;
    p.t_comm = at.t_comm;
    row.estimate = policy.io_prefetch == IoPrefetch::none
                       ? iter_time_sequential(p)
                       : iter_time_pipelined_io(p);
    row.speedup = speedup_sequential_comm(scenario);
  }
  row.bottlenecks = rank_bottlenecks(row.estimate);
  return row;
}

}  // namespace

EstimateResult run_estimate(const ScenarioConfig& config,
                            const std::vector<int>& scale_override) {
  ensure_valid(validate(config), "run_estimate");
  const std::vector<int> scales = scales_to_run(config, scale_override);
  const double t_io_1 = resolve_scale(config, 1).t_io;
  EstimateResult result;
  for (int n_g : scales) {
    result.rows.push_back(estimate_at_scale(config, n_g, t_io_1));
  }
  return result;
}

SimulateResult run_simulate(const ScenarioConfig& config, int n_iters,
                            std::optional<int> scale) {
  ensure_valid(validate(config), "run_simulate");
  if (!config.layers) {
    throw InvalidInput("simulate needs a per-layer profile (layers block)");
  }
  const std::vector<int> scales = scales_to_run(config, {});
  const int n_g = scale.value_or(scales.back());
  const ResolvedScale at = resolve_scale(config, n_g);
  const double t_h2d = config.phases ? config.phases->t_h2d : 0.0;
  const double t_f = config.phases ? config.phases->t_f : 0.0;
  const OverlapPolicy policy = effective_policy(
      config.policy,
      config.workload.minibatch_bytes(
          std::min(n_g, config.cluster.gpus_per_node)));

  const SteadyStateResult steady = steady_state_iter_time(
      {at.t_io, t_h2d, t_f}, *at.layers, policy, n_iters);
  SimulateResult r;
  r.mean_iter_time = steady.mean;
  r.per_iteration = steady.per_iteration;
  r.final_trace = steady.final_trace;
  r.exposed = steady.final_trace.exposed_comm;
  r.hidden = steady.final_trace.hidden_comm;
  return r;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& config,
                                SweepDimension dimension,
                                const std::vector<double>& values) {
  ensure_valid(validate(config), "run_sweep");
  if (values.empty()) throw InvalidInput("sweep: empty values list");

  const std::vector<int> scales = scales_to_run(config, {});
  const int fixed_ng = scales.back();

  std::vector<SweepRow> rows;
  for (double value : values) {
    ScenarioConfig cfg = config;
    int n_g = fixed_ng;
    switch (dimension) {
      case SweepDimension::gpus: {
        const double rounded = std::round(value);
        if (rounded < 1 || rounded != value) {
          throw InvalidInput("sweep: gpus values must be positive integers");
        }
        n_g = static_cast<int>(rounded);
        break;
      }
      case SweepDimension::b_net:
        if (!(value > 0)) throw InvalidInput("sweep: b_net must be > 0");
        cfg.cluster.b_net = gib_per_s(value);
        break;
      case SweepDimension::batch:
        if (value < 0) throw InvalidInput("sweep: batch must be >= 0");
        cfg.workload.per_gpu_batch = value;
        break;
      case SweepDimension::efficiency:
        if (!(value > 0) || value > 1) {
          throw InvalidInput("sweep: efficiency must be in (0, 1]");
        }
        cfg.comm.efficiency = value;
        break;
    }
    const EstimateResult est = run_estimate(cfg, {n_g});
    const EstimateRow& row = est.rows.front();
    rows.push_back({value, row.estimate.total, row.speedup.speedup,
                    row.speedup.efficiency, row.estimate.exposed_comm});
  }
  return rows;
}

SweepDimension parse_dimension(const std::string& name) {
  if (name == "gpus") return SweepDimension::gpus;
  if (name == "B_net" || name == "b_net") return SweepDimension::b_net;
  if (name == "batch") return SweepDimension::batch;
  if (name == "efficiency") return SweepDimension::efficiency;
  throw InvalidInput("unknown sweep dimension: " + name);
}

ValidationReport run_validate(const std::string& reference_path,
                              const std::string& hidden_flags_path,
                              const std::vector<ScenarioConfig>& configs) {
  std::vector<ReferenceRecord> records = load_reference(reference_path);
  if (!hidden_flags_path.empty()) {
    load_hidden_flags(hidden_flags_path, records);
  }

  std::vector<Prediction> predictions;
  for (const auto& r : records) {
    const bool has_phases = r.metric("t_f").has_value() &&
                            r.metric("t_b").has_value();
    if (has_phases) {
      PhaseProfile p;
      p.t_io = r.metric("t_io").value_or(Measurement{}).mean;
      p.t_h2d = r.metric("t_h2d").value_or(Measurement{}).mean;
      p.t_f = r.metric("t_f")->mean;
      p.t_b = r.metric("t_b")->mean;
      p.t_u = r.metric("t_u").value_or(Measurement{}).mean;
      p.t_comm = r.metric("t_comm").value_or(Measurement{}).mean;

      const WorkloadSpec workload = network_workload(r.network);
      const int node_gpus = std::max(1, r.gpus / r.nodes);
      const OverlapPolicy policy = effective_policy(
          framework_policy(r.framework), workload.minibatch_bytes(node_gpus));

      Prediction pred;
      pred.scenario_id = r.scenario_id();
      pred.metric = "t_iter";
      if (policy.io_prefetch == IoPrefetch::none) {
        pred.seconds = iter_time_sequential(p).total;
        pred.notes = "sequential (blocking reads)";
      } else {
        pred.seconds = iter_time_pipelined_io(p).total;
        pred.notes = "pipelined reads";
      }
      const auto t_iter = r.metric("t_iter");
      const double phase_sum = p.t_io + p.t_h2d + p.t_f + p.t_b + p.t_comm +
                               p.t_u;
      if (t_iter && std::abs(phase_sum - t_iter->mean) > 5e-4) {
        pred.notes += "; phase sum " + fmt(phase_sum) + " vs t_iter " +
                      fmt(t_iter->mean);
      }
      predictions.push_back(std::move(pred));
    } else if (r.gpus > 1) {
      // Communication-only cells: predict t_comm with the ring model at
      // unit efficiency, intra-node over PCIe, inter-node over the network.
      const WorkloadSpec workload = network_workload(r.network);
      const ClusterSpec cluster;
      const double bandwidth =
          r.nodes == 1 ? cluster.b_pcie_pinned : cluster.b_net;
      Prediction pred;
      pred.scenario_id = r.scenario_id();
      pred.metric = "t_comm";
      pred.seconds = allreduce_time(workload.total_grad_bytes, r.gpus,
                                    bandwidth, 0.0, 1.0);
      pred.notes = "ring model at efficiency 1";
      predictions.push_back(std::move(pred));
    }
  }

  ValidationReport report = validate_model(records, predictions);

  // Closed-form vs exact-schedule rows for supplied configs whose layers
  // expose part of the communication; informational, excluded from the
  // error aggregates.
  for (const auto& cfg : configs) {
    if (!cfg.layers || !cfg.policy.comm_overlap) continue;
    const std::vector<int> scales = scales_to_run(cfg, {});
    const int n_g = scales.back();
    const ResolvedScale at = resolve_scale(cfg, n_g);
    if (!at.layers) continue;
    const OverlapCase oc = classify_overlap(*at.layers);
    if (oc.kind != OverlapCase::Kind::partially_exposed) continue;
    const double t_h2d = cfg.phases ? cfg.phases->t_h2d : 0.0;
    const double t_f = cfg.phases ? cfg.phases->t_f : 0.0;
    const IterationEstimate analytic =
        iter_time_overlapped(at.t_io, t_h2d, t_f, *at.layers);
    const SimTrace trace =
        simulate_iteration({at.t_io, t_h2d, t_f}, *at.layers, cfg.policy);
    ValidationRow row;
    row.scenario_id = "config:" + cfg.name;
    row.metric = "iter_time";
    row.predicted = analytic.total;
    row.measured = trace.makespan;
    row.abs_error = std::abs(trace.makespan - analytic.total);
    row.rel_error = trace.makespan > 0 ? row.abs_error / trace.makespan : 0.0;
    row.notes = "closed form vs event schedule (informational)";
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_estimate_table(const EstimateResult& result) {
  std::ostringstream out;
  out << "n_g  iter_time_s  speedup  efficiency  mode          formula\n";
  char buf[256];
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%-4d %-12.6g %-8.4g %-11.4g %-13s %s\n",
                  row.n_g, row.estimate.total, row.speedup.speedup,
                  row.speedup.efficiency, to_string(row.estimate.mode),
                  to_string(row.speedup.formula));
    out << buf;
  }
  for (const auto& row : result.rows) {
    out << "\nscale " << row.n_g << " breakdown (exposed seconds):\n";
    for (const auto& b : row.bottlenecks) {
      std::snprintf(buf, sizeof(buf), "  %-9s %-11.6g %5.1f%%\n",
                    b.phase.c_str(), b.seconds, 100.0 * b.share);
      out << buf;
    }
    if (row.estimate.hidden_comm > 0.0) {
      out << "  hidden comm: " << fmt(row.estimate.hidden_comm) << " s\n";
    }
    if (row.sim_makespan) {
      out << "  closed form " << fmt(row.estimate.total)
          << " s vs event schedule " << fmt(*row.sim_makespan) << " s (gap "
          << fmt(*row.closed_form_gap) << " s)\n";
    }
  }
  return out.str();
}

std::string render_estimate_csv(const EstimateResult& result) {
  std::string out =
      "n_g,iter_time_s,speedup,efficiency,mode,formula,exposed_comm_s,"
      "hidden_comm_s\n";
  char buf[256];
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%s,%s,%.9g,%.9g\n",
                  row.n_g, row.estimate.total, row.speedup.speedup,
                  row.speedup.efficiency, to_string(row.estimate.mode),
                  to_string(row.speedup.formula), row.estimate.exposed_comm,
                  row.estimate.hidden_comm);
    out += buf;
  }
  return out;
}

std::string render_simulate_table(const SimulateResult& result) {
  std::ostringstream out;
  out << "mean_iter_time_s: " << fmt(result.mean_iter_time) << "\n"
      << "final_makespan_s: " << fmt(result.final_trace.makespan) << "\n"
      << "exposed_comm_s:   " << fmt(result.exposed) << "\n"
      << "hidden_comm_s:    " << fmt(result.hidden) << "\n"
      << "comm_span_s:      [" << fmt(result.final_trace.comm_span_start)
      << ", " << fmt(result.final_trace.comm_span_end) << "]\n"
      << "iterations:       " << result.per_iteration.size() << "\n";
  return out.str();
}

std::string render_sweep_csv(const std::vector<SweepRow>& rows,
                             const std::string& dimension_name) {
  std::string out = dimension_name +
                    ",iter_time_s,speedup,efficiency,exposed_comm_s\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g\n", row.value,
                  row.iter_time, row.speedup, row.efficiency,
                  row.exposed_comm);
    out += buf;
  }
  return out;
}

std::string render_validation_table(const ValidationReport& report) {
  std::ostringstream out;
  out << "scenario                      metric   predicted  measured   "
         "rel_err  notes\n";
  char buf[512];
  for (const auto& row : report.rows) {
    if (row.has_reference()) {
      std::snprintf(buf, sizeof(buf),
                    "%-29s %-8s %-10.6g %-10.6g %6.2f%%  %s\n",
                    row.scenario_id.c_str(), row.metric.c_str(), row.predicted,
                    *row.measured, 100.0 * row.rel_error, row.notes.c_str());
    } else {
      std::snprintf(buf, sizeof(buf),
                    "%-29s %-8s %-10.6g %-10s %7s  %s\n",
                    row.scenario_id.c_str(), row.metric.c_str(), row.predicted,
                    "-", "-", row.notes.c_str());
    }
    out << buf;
  }
  out << "\ncompared: " << report.compared
      << "  no-reference: " << report.no_reference
      << "  mean rel err: " << fmt(100.0 * report.mean_rel_error)
      << "%  max rel err: " << fmt(100.0 * report.max_rel_error) << "%\n";
  return out.str();
}

std::string render_validation_csv(const ValidationReport& report) {
  std::string out =
      "scenario,metric,predicted_s,measured_s,abs_error_s,rel_error,notes\n";
  char buf[512];
  for (const auto& row : report.rows) {
    if (row.has_reference()) {
      std::snprintf(buf, sizeof(buf), "%s,%s,%.9g,%.9g,%.9g,%.9g,%s\n",
                    row.scenario_id.c_str(), row.metric.c_str(), row.predicted,
                    *row.measured, row.abs_error, row.rel_error,
                    row.notes.c_str());
    } else {
      std::snprintf(buf, sizeof(buf), "%s,%s,%.9g,,,,%s\n",
                    row.scenario_id.c_str(), row.metric.c_str(), row.predicted,
                    row.notes.c_str());
    }
    out += buf;
  }
  return out;
}

}  // namespace dlperf
