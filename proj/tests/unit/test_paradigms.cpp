// Copyright 2026 The vinesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/paradigms.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

using namespace vine;
using namespace vine::paradigms;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kDt = 0.01;
const ParadigmKind kAllKinds[] = {
    ParadigmKind::kFullTeleoperation, ParadigmKind::kAssistAsNeeded,
    ParadigmKind::kFixedAssistance, ParadigmKind::kManualSteeringAutonomousEversion,
    ParadigmKind::kAutonomousSteeringManualEversion, ParadigmKind::kMostlyAutonomous};

}  // namespace

TEST_CASE("paradigm tokens round trip", "[paradigms]") {
  for (auto k : kAllKinds) CHECK(parse_kind(to_token(k)) == k);
  CHECK_FALSE(parse_kind("manual"));
  CHECK(automates_growth(ParadigmKind::kManualSteeringAutonomousEversion));
  CHECK(automates_growth(ParadigmKind::kAutonomousSteeringManualEversion));
  CHECK(automates_growth(ParadigmKind::kMostlyAutonomous));
  CHECK_FALSE(automates_growth(ParadigmKind::kAssistAsNeeded));
}

TEST_CASE("default parameters are the final tuning choice", "[paradigms]") {
  const ParadigmConfig c;
  CHECK(c.f_max == 7.0);
  CHECK(c.k_fixed == 10.0);
  CHECK(c.b_fixed == 0.1);
  CHECK(c.filter_len == 50);
  CHECK(c.delta == 20.0);
  CHECK(c.th_distance == 0.03);
  CHECK(c.th_rate == 0.01);
  CHECK(c.xi_steady == 1.0);
  CHECK(c.xi_closing == 3.0);
  CHECK(c.xi_away == 1.0);
  CHECK(c.k_max == 50.0);
  CHECK_NOTHROW(c.validate());

  ParadigmConfig bad = c;
  bad.f_max = 7.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.th_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("resolve_desired examples", "[paradigms]") {
  const CartesianPoint c{0.1, 0.2, -0.5};
  CHECK(resolve_desired(ParadigmKind::kFullTeleoperation, c, {9, 9, 9}) == c);

  const CartesianPoint c2{0.1, 0.2, -0.4};
  const CartesianPoint g{0.0, 0.0, -0.7};
  CHECK(resolve_desired(ParadigmKind::kManualSteeringAutonomousEversion, c2, g) ==
        CartesianPoint(0.1, 0.2, -0.7));
  CHECK(resolve_desired(ParadigmKind::kAutonomousSteeringManualEversion, c2, g) ==
        CartesianPoint(0.0, 0.0, -0.4));
}

TEST_CASE("resolve_desired is an exact projection", "[paradigms][property]") {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const CartesianPoint c{u(rng), u(rng), u(rng)};
    const CartesianPoint g{u(rng), u(rng), u(rng)};
    for (auto k : {ParadigmKind::kFullTeleoperation, ParadigmKind::kAssistAsNeeded,
                   ParadigmKind::kFixedAssistance}) {
      REQUIRE(resolve_desired(k, c, g) == c);
    }
    const auto msae = resolve_desired(ParadigmKind::kManualSteeringAutonomousEversion, c, g);
    REQUIRE(msae.x() == c.x());
    REQUIRE(msae.y() == c.y());
    REQUIRE(msae.z() == g.z());
    const auto asme = resolve_desired(ParadigmKind::kAutonomousSteeringManualEversion, c, g);
    REQUIRE(asme.x() == g.x());
    REQUIRE(asme.y() == g.y());
    REQUIRE(asme.z() == c.z());
    REQUIRE(resolve_desired(ParadigmKind::kMostlyAutonomous, c, g) == g);
  }
}

TEST_CASE("guidance_direction examples", "[paradigms]") {
  auto d = guidance_direction({0, 0, -0.5}, {0, 0, -0.5}, 0.03);
  CHECK(d.distance == 0.0);
  CHECK(d.unit.isZero());

  d = guidance_direction({0, 0, -0.5}, {0.2, 0, -0.5}, 0.03);
  CHECK_THAT(d.distance, WithinAbs(0.2, 1e-12));
  CHECK((d.unit - CartesianPoint(1, 0, 0)).norm() < 1e-12);

  d = guidance_direction({0, 0, -0.5}, {0.02, 0, -0.5}, 0.03);
  CHECK_THAT(d.distance, WithinAbs(0.02, 1e-12));
  CHECK(d.unit.isZero());
}

TEST_CASE("holding still ramps the stiffness after the steady wait", "[paradigms]") {
  ParadigmConfig c;
  c.xi_steady = 1.0;
  c.delta = 20.0;
  const CartesianPoint dir{1, 0, 0};
  AanState s;
  GuidanceForce f;
  for (int i = 0; i < 100; ++i) std::tie(s, f) = aan_update(s, 0.2, 0.0, dir, c, kDt);
  CHECK(s.phase == AanPhase::kSteady);
  CHECK(s.k == 0.0);
  CHECK(f.magnitude == 0.0);
  for (int i = 0; i < 100; ++i) {
    const double before = s.k;
    std::tie(s, f) = aan_update(s, 0.2, 0.0, dir, c, kDt);
    REQUIRE(s.k - before <= c.delta * kDt + 1e-12);
  }
  CHECK_THAT(s.k, WithinAbs(20.0, 1e-9));
  CHECK_THAT(f.magnitude, WithinAbs(4.0, 1e-9));
  CHECK((f.direction - dir).norm() < 1e-12);
}

TEST_CASE("reaching the goal decays the stiffness without waiting", "[paradigms]") {
  ParadigmConfig c;
  AanState s{AanPhase::kSteady, 10.0, 500};
  GuidanceForce f;
  std::tie(s, f) = aan_update(s, 0.01, 0.0, CartesianPoint::Zero(), c, kDt);
  CHECK(s.phase == AanPhase::kReached);
  CHECK(s.tau == 0);
  CHECK_THAT(s.k, WithinAbs(10.0 - c.delta * kDt, 1e-12));
  CHECK(f.magnitude == 0.0);
  for (int i = 0; i < 100; ++i) std::tie(s, f) = aan_update(s, 0.01, 0.0, CartesianPoint::Zero(), c, kDt);
  CHECK(s.k == 0.0);
}

TEST_CASE("moving away grows and closing in decays after their waits", "[paradigms]") {
  ParadigmConfig c;
  const CartesianPoint dir{0, 1, 0};
  AanState s;
  GuidanceForce f;
  for (int i = 0; i < 150; ++i) std::tie(s, f) = aan_update(s, 0.3, 0.05, dir, c, kDt);
  CHECK(s.phase == AanPhase::kMovingAway);
  CHECK_THAT(s.k, WithinAbs(50 * c.delta * kDt, 1e-9));

  const double peak = s.k;
  for (int i = 0; i < 300; ++i) std::tie(s, f) = aan_update(s, 0.3, -0.05, dir, c, kDt);
  CHECK(s.phase == AanPhase::kClosingIn);
  CHECK(s.k == peak);  // xi_C = 3 s not yet elapsed
  std::tie(s, f) = aan_update(s, 0.3, -0.05, dir, c, kDt);
  CHECK(s.k < peak);
}

TEST_CASE("a perfect approach never earns assistance", "[paradigms]") {
  ParadigmConfig c;
  AanState s;
  double m = 0.3;
  double total = 0.0;
  while (m >= 0.0) {
    GuidanceForce f;
    std::tie(s, f) = aan_update(s, m, -0.05, {1, 0, 0}, c, kDt);
    total += f.magnitude;
    REQUIRE(s.k == 0.0);
    m -= 0.05 * kDt;
  }
  CHECK(total == 0.0);
}

TEST_CASE("stiffness stays within bounds and moves continuously", "[paradigms][property]") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> m(0.0, 0.5);
  std::uniform_real_distribution<double> rate(-0.05, 0.05);
  ParadigmConfig c;
  c.k_max = 30.0;
  c.xi_steady = 0.1;
  c.xi_away = 0.0;
  c.xi_closing = 0.2;
  AanState s;
  for (int i = 0; i < 20000; ++i) {
    const double before = s.k;
    GuidanceForce f;
    std::tie(s, f) = aan_update(s, m(rng), rate(rng), {0, 0, -1}, c, kDt);
    REQUIRE(s.k >= 0.0);
    REQUIRE(s.k <= c.k_max);
    REQUIRE(std::abs(s.k - before) <= c.delta * kDt + 1e-12);
  }
}

TEST_CASE("fixed assistance examples", "[paradigms]") {
  ParadigmConfig c;

  SECTION("steady state spring plus damper") {
    MovingAverage filter(c.filter_len);
    GuidanceForce f;
    for (int i = 0; i < 60; ++i) {
      f = fixed_assistance_force({0, 0, -0.5}, {0.1, 0, 0}, {0.3, 0, -0.5}, c, filter);
    }
    CHECK_THAT(f.magnitude, WithinAbs(3.01, 1e-9));
  }

  SECTION("a stiff spring saturates at the device limit") {
    c.k_fixed = 50.0;
    MovingAverage filter(c.filter_len);
    GuidanceForce f;
    for (int i = 0; i < 60; ++i) {
      f = fixed_assistance_force({0, 0, -0.5}, {0, 0, 0}, {0.2, 0, -0.5}, c, filter);
    }
    CHECK(f.magnitude == 7.0);
  }

  SECTION("inside the deadband the force vanishes") {
    MovingAverage filter(c.filter_len);
    const auto f = fixed_assistance_force({0, 0, -0.5}, {0, 0, 0}, {0.01, 0, -0.5}, c, filter);
    CHECK(f.vec.isZero());
  }

  SECTION("the filter delays a step by its window") {
    MovingAverage filter(c.filter_len);
    GuidanceForce f;
    for (int i = 0; i < 25; ++i) {
      f = fixed_assistance_force({0, 0, -0.5}, {0, 0, 0}, {0.3, 0, -0.5}, c, filter);
    }
    CHECK_THAT(f.magnitude, WithinAbs(3.0, 1e-9));  // average of a constant is the constant
    MovingAverage cold(c.filter_len);
    for (int i = 0; i < 25; ++i) cold.push(0.0);
    CHECK_THAT(cold.push(3.0), WithinAbs(3.0 / 26.0, 1e-12));
  }
}

TEST_CASE("goal-distance rate estimation", "[paradigms]") {
  MovingAverage smoother(5);
  for (int i = 0; i < 10; ++i) CHECK(estimate_goal_rate(0.2, 0.2, kDt, smoother) == 0.0);

  MovingAverage falling(5);
  double m = 0.5;
  double rate = 0.0;
  for (int i = 0; i < 5; ++i) {
    rate = estimate_goal_rate(m - 0.01, m, kDt, falling);
    m -= 0.01;
  }
  CHECK_THAT(rate, WithinAbs(-1.0, 1e-9));

  MovingAverage jitter(5);
  ParadigmConfig c;
  m = 0.2;
  for (int i = 0; i < 50; ++i) {
    const double next = m + (i % 2 == 0 ? 0.0002 : -0.0002);
    rate = estimate_goal_rate(next, m, kDt, jitter);
    m = next;
  }
  CHECK(std::abs(rate) < c.th_rate);
}

TEST_CASE("clamp_norm handles adversarial vectors", "[paradigms]") {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(clamp_norm({inf, 0, 0}, 7.0).isZero());
  CHECK(clamp_norm({nan, 1, 0}, 7.0).isZero());
  CHECK(clamp_norm({1e300, 1e300, 1e300}, 7.0).norm() <= 7.0);
  CHECK(clamp_norm({1, 2, 2}, 7.0) == CartesianPoint(1, 2, 2));
}

TEST_CASE("no paradigm ever renders more than f_max", "[paradigms][property]") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> vel(-100.0, 100.0);
  std::uniform_int_distribution<int> pick(0, 9);
  for (auto kind : kAllKinds) {
    ParadigmConfig c;
    c.kind = kind;
    c.k_max = 1e6;
    c.delta = 1e7;
    c.k_fixed = 1e4;
    c.b_fixed = 1e3;
    c.xi_steady = c.xi_away = c.xi_closing = 0.0;
    GuidanceEngine engine(c);
    for (int i = 0; i < 10000; ++i) {
      CartesianPoint ee{pos(rng), pos(rng), pos(rng)};
      CartesianPoint g{pos(rng), pos(rng), pos(rng)};
      CartesianPoint v{vel(rng), vel(rng), vel(rng)};
      if (pick(rng) == 0) g = ee * 1e8;
      if (pick(rng) == 0) v = CartesianPoint::Constant(std::numeric_limits<double>::max());
      const GuidanceForce f = engine.update(ee, v, g, kDt);
      REQUIRE(f.vec.norm() <= c.f_max);
      REQUIRE(f.magnitude <= c.f_max);
      const double dn = f.direction.norm();
      REQUIRE((dn == 0.0 || std::abs(dn - 1.0) < 1e-9));
    }
  }
}
