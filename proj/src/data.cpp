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

#include "dlperf/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dlperf {

namespace {

const std::set<std::string> kFrameworks = {"caffe-mpi", "cntk", "mxnet",
                                           "tensorflow"};
const std::set<std::string> kNetworks = {"alexnet", "googlenet", "resnet50"};
const std::set<std::string> kMetrics = {"t_io", "t_h2d", "t_f", "t_b",
                                        "t_u",  "t_comm", "t_iter"};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void row_error(const std::string& path, int line, int column,
                            const std::string& message) {
  std::ostringstream msg;
  msg << path << ":" << line << ": column " << column << ": " << message;
  throw InvalidInput(msg.str());
}

double parse_number(const std::string& path, int line, int column,
                    const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    row_error(path, line, column, "not a number: '" + text + "'");
  }
  if (pos != text.size() || !std::isfinite(value)) {
    row_error(path, line, column, "not a number: '" + text + "'");
  }
  return value;
}

int parse_count(const std::string& path, int line, int column,
                const std::string& text) {
  const double v = parse_number(path, line, column, text);
  if (v < 1 || v != std::floor(v)) {
    row_error(path, line, column, "expected a positive integer");
  }
  return static_cast<int>(v);
}

ReferenceRecord& find_or_create(std::vector<ReferenceRecord>& records,
                                const std::string& framework,
                                const std::string& network, int gpus,
                                int nodes) {
  for (auto& r : records) {
    if (r.framework == framework && r.network == network && r.gpus == gpus &&
        r.nodes == nodes) {
      return r;
    }
  }
  records.push_back({framework, network, gpus, nodes, {}, std::nullopt});
  return records.back();
}

struct ParsedLine {
  int line_no = 0;
  std::vector<std::string> fields;
};

std::vector<ParsedLine> read_csv(const std::string& path,
                                 const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open reference file: " + path);
  std::vector<ParsedLine> rows;
  std::string line;
  int line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      std::string got;
      for (char ch : line) {
        if (ch != '\r' && ch != ' ') got += ch;
      }
      if (got != expected_header) {
        row_error(path, line_no, 1,
                  "expected header '" + expected_header + "'");
      }
      seen_header = true;
      continue;
    }
    rows.push_back({line_no, split_csv(line)});
  }
  if (!seen_header && !rows.empty()) {
    throw InvalidInput(path + ": missing header row");
  }
  return rows;
}

}  // namespace

std::string ReferenceRecord::scenario_id() const {
  return framework + "/" + network + "/" + std::to_string(gpus) + "g" +
         std::to_string(nodes) + "n";
}

std::optional<Measurement> ReferenceRecord::metric(
    const std::string& name) const {
  auto it = metrics.find(name);
  if (it == metrics.end()) return std::nullopt;
  return it->second;
}

std::vector<ReferenceRecord> load_reference(const std::string& path) {
  const auto rows =
      read_csv(path, "framework,network,gpus,nodes,metric,mean_s,std_s");
  std::vector<ReferenceRecord> records;
  for (const auto& row : rows) {
    if (row.fields.size() != 7) {
      row_error(path, row.line_no, static_cast<int>(row.fields.size()),
                "expected 7 fields");
    }
    const std::string& framework = row.fields[0];
    const std::string& network = row.fields[1];
    if (!known_framework(framework)) {
      row_error(path, row.line_no, 1, "unknown framework: " + framework);
    }
    if (!known_network(network)) {
      row_error(path, row.line_no, 2, "unknown network: " + network);
    }
    const int gpus = parse_count(path, row.line_no, 3, row.fields[2]);
    const int nodes = parse_count(path, row.line_no, 4, row.fields[3]);
    const std::string& metric = row.fields[4];
    if (!kMetrics.count(metric)) {
      row_error(path, row.line_no, 5, "unknown metric: " + metric);
    }
    // A blank mean records an absent measurement, never zero.
    if (row.fields[5].empty()) continue;
    Measurement m;
    m.mean = parse_number(path, row.line_no, 6, row.fields[5]);
    if (!row.fields[6].empty()) {
      m.std_dev = parse_number(path, row.line_no, 7, row.fields[6]);
      if (m.std_dev < 0) row_error(path, row.line_no, 7, "std must be >= 0");
    }
    find_or_create(records, framework, network, gpus, nodes)
        .metrics[metric] = m;
  }
  return records;
}

void load_hidden_flags(const std::string& path,
                       std::vector<ReferenceRecord>& records) {
  const auto rows = read_csv(path, "framework,network,gpus,nodes,hidden");
  for (const auto& row : rows) {
    if (row.fields.size() != 5) {
      row_error(path, row.line_no, static_cast<int>(row.fields.size()),
                "expected 5 fields");
    }
    if (!known_framework(row.fields[0])) {
      row_error(path, row.line_no, 1, "unknown framework: " + row.fields[0]);
    }
    if (!known_network(row.fields[1])) {
      row_error(path, row.line_no, 2, "unknown network: " + row.fields[1]);
    }
    const int gpus = parse_count(path, row.line_no, 3, row.fields[2]);
    const int nodes = parse_count(path, row.line_no, 4, row.fields[3]);
    const std::string& flag = row.fields[4];
    if (flag != "yes" && flag != "no") {
      row_error(path, row.line_no, 5, "hidden must be yes or no");
    }
    find_or_create(records, row.fields[0], row.fields[1], gpus, nodes)
        .hidden = flag == "yes";
  }
}

std::string reference_to_csv(const std::vector<ReferenceRecord>& records) {
  std::string out = "framework,network,gpus,nodes,metric,mean_s,std_s\n";
  char buf[256];
  for (const auto& r : records) {
    for (const auto& [metric, m] : r.metrics) {
      std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%s,%.12g,%.12g\n",
                    r.framework.c_str(), r.network.c_str(), r.gpus, r.nodes,
                    metric.c_str(), m.mean, m.std_dev);
      out += buf;
    }
  }
  return out;
}

ValidationReport validate_model(const std::vector<ReferenceRecord>& records,
                                const std::vector<Prediction>& predictions) {
  ValidationReport report;
  double rel_sum = 0.0;
  for (const auto& p : predictions) {
    const ReferenceRecord* record = nullptr;
    for (const auto& r : records) {
      if (r.scenario_id() == p.scenario_id) {
        record = &r;
        break;
      }
    }
    if (record == nullptr) {
      throw InvalidInput("validate_model: unresolvable scenario id: " +
                         p.scenario_id);
    }
    ValidationRow row;
    row.scenario_id = p.scenario_id;
    row.metric = p.metric;
    row.predicted = p.seconds;
    row.notes = p.notes;
    const auto measured = record->metric(p.metric);
    if (measured) {
      row.measured = measured->mean;
      row.abs_error = std::abs(p.seconds - measured->mean);
      row.rel_error =
          measured->mean > 0.0 ? row.abs_error / measured->mean : 0.0;
      ++report.compared;
      rel_sum += row.rel_error;
      report.max_rel_error = std::max(report.max_rel_error, row.rel_error);
    } else {
      ++report.no_reference;
      if (!row.notes.empty()) row.notes += "; ";
      row.notes += "no reference";
    }
    report.rows.push_back(std::move(row));
  }
  if (report.compared > 0) {
    report.mean_rel_error = rel_sum / report.compared;
  }
  return report;
}

bool known_framework(const std::string& name) {
  return kFrameworks.count(name) > 0;
}

bool known_network(const std::string& name) { return kNetworks.count(name) > 0; }

OverlapPolicy framework_policy(const std::string& framework) {
  OverlapPolicy p;
  if (framework == "caffe-mpi") {
    // Prefetches all the way into GPU buffers; pinned host staging.
    p.io_prefetch = IoPrefetch::gpu_buffered;
    p.prefetch_depth = 1;
    p.comm_overlap = true;
    p.h2d_memory = MemoryKind::pinned;
  } else if (framework == "cntk") {
    // Limited host-side cache; falls back to blocking reads on big batches.
    // Aggregation is sequential with backward.
    p.io_prefetch = IoPrefetch::limited_buffer;
    p.prefetch_depth = 1;
    p.comm_overlap = false;
    p.h2d_memory = MemoryKind::pinned;
    p.buffer_bytes = 512.0 * kMiB;
  } else if (framework == "mxnet" || framework == "tensorflow") {
    p.io_prefetch = IoPrefetch::host_buffered;
    p.prefetch_depth = 1;
    p.comm_overlap = true;
    p.h2d_memory = MemoryKind::pageable;
  } else {
    throw InvalidInput("unknown framework: " + framework);
  }
  return p;
}

WorkloadSpec network_workload(const std::string& network) {
  WorkloadSpec w;
  w.sample_bytes = 224.0 * 224.0 * 3.0 * 4.0;  // fp32 RGB 224x224
  if (network == "alexnet") {
    w.per_gpu_batch = 1024;
    w.total_grad_bytes = 63.0 * kMiB;  // measured aggregation payload per GPU
  } else if (network == "googlenet") {
    w.per_gpu_batch = 128;
    w.total_grad_bytes = 53e6 * 4.0;  // nominal fp32 parameter size
  } else if (network == "resnet50") {
    w.per_gpu_batch = 32;
    w.total_grad_bytes = 24e6 * 4.0;  // nominal fp32 parameter size
  } else {
    throw InvalidInput("unknown network: " + network);
  }
  return w;
}

}  // namespace dlperf
