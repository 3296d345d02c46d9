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

#include <string>

#include "dlperf/config.hpp"

using namespace dlperf;

namespace {
const std::string kDataDir = DLPERF_DATA_DIR;
}

TEST_CASE("bundled configs load") {
  const ScenarioConfig cntk = load_config(kDataDir + "/configs/cntk_alexnet.json");
  CHECK(cntk.name == "cntk_alexnet");
  CHECK(cntk.cluster.gpus_per_node == 4);
  CHECK(cntk.cluster.b_cache == doctest::Approx(gib_per_s(3.5)));
  CHECK(cntk.policy.io_prefetch == IoPrefetch::limited_buffer);
  CHECK(cntk.policy.buffer_bytes == doctest::Approx(512.0 * kMiB));
  CHECK(!cntk.policy.comm_overlap);
  REQUIRE(cntk.phases.has_value());
  CHECK(cntk.phases->t_b == doctest::Approx(0.2919));
  REQUIRE(cntk.scales.size() == 3);
  CHECK(cntk.scales[2].n_g == 4);
  CHECK(*cntk.scales[2].t_comm == doctest::Approx(0.042));

  const ScenarioConfig toy = load_config(kDataDir + "/configs/case2_toy.json");
  REQUIRE(toy.layers.has_value());
  CHECK(toy.layers->size() == 3);
  CHECK(toy.layers->layers[1].t_comm == doctest::Approx(0.05));
  CHECK(toy.comm.method == CommMethod::measured);
}

TEST_CASE("cluster and comm fields default sensibly") {
  const ScenarioConfig cfg = parse_config(
      R"({"schema_version":1,"phases":{"t_f":0.1},"scales":[2,4]})", "t");
  CHECK(cfg.cluster.b_net == doctest::Approx(gib_per_s(7.0)));
  CHECK(cfg.cluster.b_pcie_pinned == doctest::Approx(gib_per_s(11.4)));
  CHECK(cfg.comm.method == CommMethod::measured);
  CHECK(cfg.comm.efficiency == 1.0);
  REQUIRE(cfg.scales.size() == 2);
  CHECK(cfg.scales[0].n_g == 2);
  CHECK(!cfg.scales[0].t_io.has_value());
  CHECK(cfg.scales[1].n_g == 4);
}

TEST_CASE("config parsing rejects bad input") {
  SUBCASE("invalid json") {
    CHECK_THROWS_AS(parse_config("{not json", "t"), InvalidInput);
  }
  SUBCASE("wrong schema version") {
    CHECK_THROWS_AS(
        parse_config(R"({"schema_version":2,"phases":{"t_f":0.1}})", "t"),
        InvalidInput);
  }
  SUBCASE("missing schema version") {
    CHECK_THROWS_AS(parse_config(R"({"phases":{"t_f":0.1}})", "t"),
                    InvalidInput);
  }
  SUBCASE("unknown prefetch mode") {
    CHECK_THROWS_AS(
        parse_config(R"({"schema_version":1,"phases":{"t_f":0.1},
                         "policy":{"io_prefetch":"speculative"}})",
                     "t"),
        InvalidInput);
  }
  SUBCASE("neither phases nor layers") {
    CHECK_THROWS_AS(parse_config(R"({"schema_version":1})", "t"),
                    InvalidInput);
  }
  SUBCASE("efficiency outside (0,1]") {
    CHECK_THROWS_AS(
        parse_config(R"({"schema_version":1,"phases":{"t_f":0.1},
                         "comm":{"method":"allreduce_ring","efficiency":1.5}})",
                     "t"),
        InvalidInput);
  }
  SUBCASE("layer sum inconsistent with phases") {
    CHECK_THROWS_AS(
        parse_config(R"({"schema_version":1,
                         "phases":{"t_f":0.1,"t_b":0.5},
                         "layers":[{"t_b":0.02},{"t_b":0.03}]})",
                     "t"),
        InvalidInput);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config("no_such_config.json"), InvalidInput);
  }
}
