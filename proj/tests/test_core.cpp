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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "dlperf/core.hpp"

using namespace dlperf;

namespace {

LayerProfile make_layers(std::initializer_list<double> t_b,
                         std::initializer_list<double> t_comm) {
  LayerProfile lp;
  auto b = t_b.begin();
  auto c = t_comm.begin();
  for (; b != t_b.end(); ++b, ++c) {
    lp.layers.push_back({*b, *c, 0.0, std::nullopt});
  }
  return lp;
}

}  // namespace

TEST_CASE("layer profile validation: matching backward sum is ok") {
  LayerProfile lp = make_layers({0.02, 0.01, 0.03}, {0, 0, 0});
  PhaseProfile phases;
  phases.t_b = 0.06;
  CHECK(validate_layer_profile(lp, &phases).empty());
}

TEST_CASE("layer profile validation: negative duration is reported") {
  LayerProfile lp = make_layers({0.02, 0.01, 0.03}, {0.01, -0.01, 0.02});
  const auto violations = validate_layer_profile(lp);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].path == "layers[2].t_comm");
  CHECK(violations[0].message.find("layer 2") != std::string::npos);
}

TEST_CASE("layer profile validation: backward sum mismatch is reported") {
  LayerProfile lp = make_layers({0.02, 0.01, 0.03}, {0, 0, 0});
  PhaseProfile phases;
  phases.t_b = 0.07;
  const auto violations = validate_layer_profile(lp, &phases);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("0.06") != std::string::npos);
  CHECK(violations[0].message.find("0.07") != std::string::npos);
}

TEST_CASE("empty layer list is rejected") {
  LayerProfile lp;
  CHECK(!validate_layer_profile(lp).empty());
}

TEST_CASE("phase profile rejects NaN and negatives") {
  PhaseProfile ok;
  CHECK(validate(ok).empty());
  PhaseProfile nan_profile;
  nan_profile.t_f = std::numeric_limits<double>::quiet_NaN();
  CHECK(!validate(nan_profile).empty());
  PhaseProfile negative;
  negative.t_b = -1e-9;
  CHECK(!validate(negative).empty());
}

TEST_CASE("total gpu count is nodes times gpus per node") {
  ClusterSpec c;
  c.nodes = 4;
  c.gpus_per_node = 4;
  CHECK(c.total_gpus() == 16);
  c.nodes = 1;
  CHECK(c.total_gpus() == 4);
}

TEST_CASE("t_gpu accessor sums the on-device phases") {
  PhaseProfile p{0.2233, 0.0528, 0.1684, 0.2919, 0.0086, 0.0};
  CHECK(p.t_gpu() == doctest::Approx(0.5217).epsilon(1e-12));
}

TEST_CASE("minibatch bytes scale with gpus per node") {
  WorkloadSpec w{1024, 224.0 * 224.0 * 3.0 * 4.0, 0};
  CHECK(w.minibatch_bytes(1) == doctest::Approx(588.0 * kMiB));
  CHECK(w.minibatch_bytes(4) == doctest::Approx(4.0 * 588.0 * kMiB));
}

TEST_CASE("policy validation ties prefetch depth to mode") {
  OverlapPolicy p;
  p.io_prefetch = IoPrefetch::none;
  p.prefetch_depth = 1;
  CHECK(!validate(p).empty());
  p.prefetch_depth = 0;
  CHECK(validate(p).empty());
  p.io_prefetch = IoPrefetch::host_buffered;
  CHECK(!validate(p).empty());
}

TEST_CASE("limited buffer reverts to blocking when the batch does not fit") {
  OverlapPolicy p;
  p.io_prefetch = IoPrefetch::limited_buffer;
  p.prefetch_depth = 1;
  p.buffer_bytes = 512.0 * kMiB;
  const OverlapPolicy small = effective_policy(p, 73.5 * kMiB);
  CHECK(small.io_prefetch == IoPrefetch::limited_buffer);
  const OverlapPolicy big = effective_policy(p, 588.0 * kMiB);
  CHECK(big.io_prefetch == IoPrefetch::none);
  CHECK(big.prefetch_depth == 0);
}

TEST_CASE("ensure_valid throws with all violations listed") {
  PhaseProfile bad;
  bad.t_io = -1;
  bad.t_u = -1;
  CHECK_THROWS_AS(ensure_valid(validate(bad), "test"), InvalidInput);
}
