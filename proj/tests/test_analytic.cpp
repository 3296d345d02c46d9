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

#include <random>

#include "dlperf/analytic.hpp"

using namespace dlperf;

namespace {

LayerProfile make_layers(std::initializer_list<double> t_b,
                         std::initializer_list<double> t_comm,
                         double t_u_1 = 0.0) {
  LayerProfile lp;
  auto b = t_b.begin();
  auto c = t_comm.begin();
  for (; b != t_b.end(); ++b, ++c) {
    lp.layers.push_back({*b, *c, 0.0, std::nullopt});
  }
  if (!lp.layers.empty()) lp.layers.front().t_u = t_u_1;
  return lp;
}

// AlexNet-1024 on CNTK, single GPU, all phases measured.
const PhaseProfile kCntkAlexnet{0.2233, 0.0528, 0.1684, 0.2919, 0.0086, 0.0};

}  // namespace

TEST_CASE("sequential iteration time sums every phase") {
  const IterationEstimate e = iter_time_sequential(kCntkAlexnet);
  CHECK(e.total == doctest::Approx(0.7450).epsilon(1e-9));
  CHECK(e.mode == EstimateMode::sequential);
  double sum = 0.0;
  for (const auto& t : e.terms) sum += t.seconds;
  CHECK(sum == doctest::Approx(e.total).epsilon(1e-12));
}

TEST_CASE("pipelined io takes the slower of reader and device") {
  PhaseProfile p = kCntkAlexnet;
  SUBCASE("device bound") {
    const IterationEstimate e = iter_time_pipelined_io(p);
    CHECK(e.total == doctest::Approx(0.5217).epsilon(1e-9));
    CHECK(e.io_hidden);
  }
  SUBCASE("reader bound") {
    p.t_io = 0.72;
    const IterationEstimate e = iter_time_pipelined_io(p);
    CHECK(e.total == doctest::Approx(0.72).epsilon(1e-12));
    CHECK(!e.io_hidden);
  }
  SUBCASE("terms always sum to the total") {
    for (double t_io : {0.0, 0.3, 0.5217, 0.72}) {
      p.t_io = t_io;
      const IterationEstimate e = iter_time_pipelined_io(p);
      double sum = 0.0;
      for (const auto& t : e.terms) sum += t.seconds;
      CHECK(sum == doctest::Approx(e.total).epsilon(1e-12));
    }
  }
}

TEST_CASE("io time follows batch bytes over cache bandwidth") {
  CHECK(io_time(1024, 1, 602112, gib_per_s(3.5)) ==
        doctest::Approx(0.164).epsilon(1e-2));
  CHECK(io_time(1024, 1, 602112, gib_per_s(3.5)) ==
        doctest::Approx(616562688.0 / gib_per_s(3.5)).epsilon(1e-12));
  CHECK(io_time(1024, 4, 602112, gib_per_s(3.5)) ==
        doctest::Approx(4.0 * 616562688.0 / gib_per_s(3.5)).epsilon(1e-12));
  CHECK_THROWS_AS(io_time(1024, 1, 602112, 0.0), InvalidInput);
}

TEST_CASE("h2d time picks the bandwidth for the memory kind") {
  ClusterSpec cluster;
  CHECK(h2d_time(616562688.0, MemoryKind::pinned, cluster) ==
        doctest::Approx(616562688.0 / gib_per_s(11.4)).epsilon(1e-12));
  CHECK(h2d_time(616562688.0, MemoryKind::pageable, cluster) ==
        doctest::Approx(616562688.0 / gib_per_s(8.7)).epsilon(1e-12));
  CHECK(h2d_time(616562688.0, MemoryKind::pinned, cluster) ==
        doctest::Approx(0.0504).epsilon(1e-3));
  CHECK(h2d_time(616562688.0, MemoryKind::pageable, cluster) ==
        doctest::Approx(0.0660).epsilon(1e-3));
}

TEST_CASE("overlap classification covers all three patterns") {
  SUBCASE("fully hidden") {
    const auto c =
        classify_overlap(make_layers({0.02, 0.03, 0.04}, {0.01, 0.015, 0.02}));
    CHECK(c.kind == OverlapCase::Kind::fully_hidden);
    CHECK(c.closed_form_applies());
  }
  SUBCASE("partially exposed with threshold 2") {
    const auto c =
        classify_overlap(make_layers({0.02, 0.01, 0.03}, {0.005, 0.05, 0.04}));
    CHECK(c.kind == OverlapCase::Kind::partially_exposed);
    CHECK(c.threshold_layer == 2);
  }
  SUBCASE("exposed only at the tail") {
    const auto c =
        classify_overlap(make_layers({0.02, 0.03, 0.04}, {0.01, 0.01, 0.05}));
    CHECK(c.kind == OverlapCase::Kind::partially_exposed);
    CHECK(c.threshold_layer == 3);
  }
  SUBCASE("irregular: hidden again after an exposed layer") {
    const auto c = classify_overlap(
        make_layers({0.02, 0.01, 0.03}, {0.005, 0.05, 0.005}));
    CHECK(c.kind == OverlapCase::Kind::irregular);
    CHECK(!c.closed_form_applies());
  }
  SUBCASE("single layer is fully hidden") {
    const auto c = classify_overlap(make_layers({0.02}, {0.5}));
    CHECK(c.kind == OverlapCase::Kind::fully_hidden);
  }
  SUBCASE("boundary equality counts as hidden") {
    const auto c =
        classify_overlap(make_layers({0.02, 0.03}, {0.01, 0.02}));
    CHECK(c.kind == OverlapCase::Kind::fully_hidden);
  }
}

TEST_CASE("overlapped iteration time, fully hidden pattern") {
  const LayerProfile lp =
      make_layers({0.02, 0.03, 0.04}, {0.01, 0.015, 0.02}, 0.001);
  const IterationEstimate e = iter_time_overlapped(0.0, 0.01, 0.1, lp);
  CHECK(e.total == doctest::Approx(0.211).epsilon(1e-12));
  CHECK(e.exposed_comm == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(e.exposed_comm + e.hidden_comm ==
        doctest::Approx(lp.sum_t_comm()).epsilon(1e-12));
}

TEST_CASE("overlapped iteration time, partially exposed pattern") {
  const LayerProfile lp =
      make_layers({0.02, 0.01, 0.03}, {0.005, 0.05, 0.04}, 0.001);
  const IterationEstimate e = iter_time_overlapped(0.0, 0.0, 0.1, lp);
  CHECK(e.total == doctest::Approx(0.216).epsilon(1e-12));
  CHECK(e.exposed_comm + e.hidden_comm ==
        doctest::Approx(lp.sum_t_comm()).epsilon(1e-12));
}

TEST_CASE("overlapped iteration time refuses irregular profiles") {
  const LayerProfile lp =
      make_layers({0.02, 0.01, 0.03}, {0.005, 0.05, 0.005});
  CHECK_THROWS_AS(iter_time_overlapped(0.0, 0.0, 0.1, lp), InvalidInput);
}

TEST_CASE("speedup with serialized communication matches the measured table") {
  ScalingScenario s;
  s.single.t_io_1 = 0.223;
  s.single.phases = PhaseProfile{0.0, 0.0528, 0.1684, 0.2919, 0.0084, 0.0};
  REQUIRE(s.single.phases.t_gpu() == doctest::Approx(0.5215).epsilon(1e-12));

  SUBCASE("two gpus") {
    s.multi = {2, 0.45, 0.0359, std::nullopt};
    const SpeedupReport r = speedup_sequential_comm(s);
    CHECK(r.speedup == doctest::Approx(1.478).epsilon(0.005 / 1.478));
    CHECK(r.efficiency == doctest::Approx(r.speedup / 2.0).epsilon(1e-15));
    CHECK(r.formula == SpeedupReport::Formula::sequential_comm);
  }
  SUBCASE("four gpus") {
    s.multi = {4, 0.72, 0.042, std::nullopt};
    const SpeedupReport r = speedup_sequential_comm(s);
    CHECK(r.speedup == doctest::Approx(2.32).epsilon(0.005 / 2.32));
    CHECK(r.efficiency == doctest::Approx(r.speedup / 4.0).epsilon(1e-15));
  }
}

TEST_CASE("overlapped speedup uses the overlapped denominator") {
  ScalingScenario s;
  s.single.t_io_1 = 0.0;

  SUBCASE("fully hidden toy") {
    s.single.phases = PhaseProfile{0.0, 0.01, 0.1, 0.09, 0.001, 0.0};
    s.multi.n_g = 2;
    s.multi.t_io_ng = 0.0;
    s.multi.layers = make_layers({0.02, 0.03, 0.04}, {0.01, 0.015, 0.02}, 0.001);
    const SpeedupReport r = speedup_overlapped(s, 0.01, 0.1);
    CHECK(r.speedup == doctest::Approx(2.0 * 0.201 / 0.211).epsilon(1e-12));
    CHECK(r.speedup == doctest::Approx(1.905).epsilon(1e-3));
    CHECK(r.formula == SpeedupReport::Formula::overlapped_fully_hidden);
  }
  SUBCASE("partially exposed toy") {
    s.single.phases = PhaseProfile{0.0, 0.0, 0.1, 0.06, 0.001, 0.0};
    s.multi.n_g = 2;
    s.multi.t_io_ng = 0.0;
    s.multi.layers = make_layers({0.02, 0.01, 0.03}, {0.005, 0.05, 0.04}, 0.001);
    const SpeedupReport r = speedup_overlapped(s, 0.0, 0.1);
    CHECK(r.speedup == doctest::Approx(2.0 * 0.161 / 0.216).epsilon(1e-12));
    CHECK(r.speedup == doctest::Approx(1.491).epsilon(1e-3));
    CHECK(r.formula ==
          SpeedupReport::Formula::overlapped_partially_exposed);
  }
  SUBCASE("irregular is refused") {
    s.single.phases = PhaseProfile{0.0, 0.0, 0.1, 0.06, 0.0, 0.0};
    s.multi.n_g = 2;
    s.multi.layers = make_layers({0.02, 0.01, 0.03}, {0.005, 0.05, 0.005});
    CHECK_THROWS_AS(speedup_overlapped(s, 0.0, 0.1), InvalidInput);
  }
}

TEST_CASE("zero communication and flat io give ideal speedup") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dur(0.001, 1.0);
  std::uniform_int_distribution<int> gpus(2, 64);
  for (int trial = 0; trial < 100; ++trial) {
    ScalingScenario s;
    s.single.t_io_1 = dur(rng);
    s.single.phases = PhaseProfile{0.0, dur(rng), dur(rng), dur(rng), dur(rng), 0.0};
    s.multi.n_g = gpus(rng);
    s.multi.t_io_ng = s.single.t_io_1;
    s.multi.t_comm = 0.0;
    const SpeedupReport r = speedup_sequential_comm(s);
    CHECK(r.speedup == doctest::Approx(double(s.multi.n_g)).epsilon(1e-12));
    CHECK(r.efficiency == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("iteration time is monotone in every phase") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> dur(0.0, 1.0);
  std::uniform_real_distribution<double> bump(1e-6, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const PhaseProfile base{dur(rng), dur(rng), dur(rng),
                            dur(rng), dur(rng), dur(rng)};
    const double seq = iter_time_sequential(base).total;
    const double pipe = iter_time_pipelined_io(base).total;
    CHECK(pipe <= seq + 1e-15);
    for (int field = 0; field < 6; ++field) {
      PhaseProfile larger = base;
      const double d = bump(rng);
      switch (field) {
        case 0: larger.t_io += d; break;
        case 1: larger.t_h2d += d; break;
        case 2: larger.t_f += d; break;
        case 3: larger.t_b += d; break;
        case 4: larger.t_u += d; break;
        case 5: larger.t_comm += d; break;
      }
      CHECK(iter_time_sequential(larger).total >= seq - 1e-15);
      CHECK(iter_time_pipelined_io(larger).total >= pipe - 1e-15);
    }
  }
}

TEST_CASE("aggregation link efficiency from the measured tables") {
  SUBCASE("eight gpus") {
    const LinkEfficiency e =
        allreduce_efficiency(8.0 * 63.0 * kMiB, 0.0906, gib_per_s(7.0));
    CHECK(100.0 * e.value == doctest::Approx(77.61).epsilon(0.05 / 77.61));
    CHECK(!e.exceeds_link_capacity);
  }
  SUBCASE("sixteen gpus") {
    const LinkEfficiency e =
        allreduce_efficiency(16.0 * 63.0 * kMiB, 0.236, gib_per_s(7.0));
    CHECK(100.0 * e.value == doctest::Approx(59.59).epsilon(0.05 / 59.59));
  }
  SUBCASE("impossible measurement is flagged, not raised") {
    const LinkEfficiency e = allreduce_efficiency(1e9, 0.01, gib_per_s(7.0));
    CHECK(e.value > 1.0);
    CHECK(e.exceeds_link_capacity);
  }
  SUBCASE("zero time or bandwidth is invalid") {
    CHECK_THROWS_AS(allreduce_efficiency(1e9, 0.0, gib_per_s(7.0)),
                    InvalidInput);
    CHECK_THROWS_AS(allreduce_efficiency(1e9, 0.01, 0.0), InvalidInput);
  }
}

TEST_CASE("bottleneck ranking drops zeros and keeps canonical tie order") {
  PhaseProfile p{0.2, 0.0, 0.1, 0.3, 0.0, 0.1};
  const auto ranked = rank_bottlenecks(iter_time_sequential(p));
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].phase == "backward");
  CHECK(ranked[1].phase == "io");
  CHECK(ranked[2].phase == "forward");
  CHECK(ranked[3].phase == "comm");
  double total_share = 0.0;
  for (const auto& b : ranked) total_share += b.share;
  CHECK(total_share == doctest::Approx(1.0).epsilon(1e-12));
}
