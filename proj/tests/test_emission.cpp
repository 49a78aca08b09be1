#include <doctest.h>

#include <cmath>
#include <random>

#include "wifiexp/emission.hpp"
#include "wifiexp/stats.hpp"

using namespace wifiexp;
using namespace wifiexp::emission;

TEST_CASE("802.11g mask has 52 equal lines") {
  const auto mask = SpectralMask::ieee80211g();
  REQUIRE(mask.active_subcarriers.size() == 52);
  double total = 0.0;
  for (std::size_t i = 0; i < mask.active_subcarriers.size(); ++i) {
    CHECK(mask.active_subcarriers[i] != 0);
    CHECK(std::abs(mask.active_subcarriers[i]) <= 26);
    CHECK(mask.relative_power[i] == doctest::Approx(1.0 / 52));
    total += mask.relative_power[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mask.fraction_in_window(2402e6, 2422e6) == doctest::Approx(1.0));
}

TEST_CASE("fraction in window matches a brute-force line count") {
  const auto mask = SpectralMask::ieee80211g();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> where(2400e6, 2424e6), width(0.0, 6e6);
  for (int trial = 0; trial < 500; ++trial) {
    const double lo = where(rng);
    const double hi = lo + width(rng);
    double expect = 0.0;
    for (std::size_t i = 0; i < mask.active_subcarriers.size(); ++i) {
      const double f = mask.line_frequency(i);
      if (f >= lo && f <= hi) expect += mask.relative_power[i];
    }
    CHECK(mask.fraction_in_window(lo, hi) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("idle timeline is periodic beacons at 1 % duty") {
  const auto t = build_idle_timeline(SignalParams{}, 360.0);
  CHECK(t.bursts().size() == 7200);
  CHECK(100.0 * t.duty_cycle() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < t.bursts().size(); ++i) {
    CHECK(t.bursts()[i].start == doctest::Approx(i * 0.05));
  }
  CHECK(t.burst_at(0.0).has_value());
  CHECK_FALSE(t.burst_at(0.0005).has_value());
  CHECK_FALSE(t.burst_at(0.01).has_value());
  CHECK(t.first_burst_ending_after(0.0004) == 0);
  CHECK(t.first_burst_ending_after(0.0005) == 1);
}

TEST_CASE("timeline construction rejects overlaps and bad durations") {
  const auto mask = SpectralMask::ieee80211g();
  CHECK_THROWS_AS(EmissionTimeline({{0.0, 1.0, -40}, {0.5, 1.0, -40}}, mask, -90, 0.3e6, 10, 0), Error);
  CHECK_THROWS_AS(EmissionTimeline({{0.0, 1.0, -40}}, mask, -90, 0.3e6, 0.5, 0), Error);
  CHECK_THROWS_AS(build_idle_timeline(SignalParams{}, -1.0), Error);
}

TEST_CASE("traffic timelines: sorted, disjoint, within window, deterministic") {
  for (auto kind : {ScenarioKind::file1, ScenarioKind::file2, ScenarioKind::file3}) {
    const auto spec = ScenarioSpec::preset(kind);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto t = build_traffic_timeline(spec, seed);
      const auto& b = t.bursts();
      for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1].end() <= b[i].start);
      CHECK(b.back().end() <= spec.measurement_duration + 1e-12);
      CHECK(t == build_traffic_timeline(spec, seed));
      const double d = draw_download_duration(spec, seed);
      CHECK(d >= spec.download_min);
      CHECK(d <= spec.download_max);
    }
    CHECK_FALSE(build_traffic_timeline(spec, 1) == build_traffic_timeline(spec, 2));
  }
}

TEST_CASE("traffic duty cycles land in the reported bands") {
  for (auto kind : {ScenarioKind::file1, ScenarioKind::file2, ScenarioKind::file3}) {
    const auto spec = ScenarioSpec::preset(kind);
    const auto band = stats::duty_cycle_expectation(spec);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const double duty = 100.0 * build_traffic_timeline(spec, seed).duty_cycle();
      CHECK(duty >= band.lo - 1e-9);
      CHECK(duty <= band.hi + 1e-9);
      CHECK(band.reported_contains(std::round(duty)));
    }
  }
}

TEST_CASE("activity timeline follows the hourly profile") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::custom;
  spec.measurement_duration = 4 * 3600.0;
  spec.activity_profile.assign(24, 0.0);
  spec.activity_profile[1] = 0.5;
  spec.activity_profile[3] = 0.2;
  const auto t = build_activity_timeline(spec, 9);
  double busy[4] = {0, 0, 0, 0};
  for (const auto& b : t.bursts()) busy[static_cast<int>(b.start / 3600.0)] += b.duration;
  CHECK(busy[0] / 3600 == doctest::Approx(0.01).epsilon(0.01));
  CHECK(busy[1] / 3600 == doctest::Approx(0.5).epsilon(0.05));
  CHECK(busy[2] / 3600 == doctest::Approx(0.01).epsilon(0.01));
  CHECK(busy[3] / 3600 == doctest::Approx(0.2).epsilon(0.05));
  CHECK(t == build_activity_timeline(spec, 9));
}

TEST_CASE("instantaneous power") {
  const auto t = build_idle_timeline(SignalParams{}, 1.0);
  const double noise20 = t.noise_power_mw(20e6);
  CHECK(mw_to_dbm(noise20) == doctest::Approx(-71.40).epsilon(1e-4));
  CHECK(instantaneous_power(t, 0.01, 2412e6, 20e6) == doctest::Approx(noise20));
  const double on = instantaneous_power(t, 0.0001, 2412e6, 20e6);
  CHECK(on == doctest::Approx(dbm_to_mw(kDefaultBurstPowerDbm) + noise20));
}

TEST_CASE("scenario validation") {
  auto spec = ScenarioSpec::preset(ScenarioKind::file2);
  spec.download_max = 10;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = ScenarioSpec::preset(ScenarioKind::file3);
  spec.measurement_duration = 200;
  CHECK_THROWS_AS(spec.validate(), Error);
  CHECK_THROWS_AS(scenario_kind_from_string("file9"), Error);
  CHECK(scenario_kind_from_string(to_string(ScenarioKind::file3)) == ScenarioKind::file3);
}

TEST_CASE("idle duty cycle equals beacon duration over period") {
  for (auto [d, p] : {std::pair{0.5e-3, 50e-3}, std::pair{1e-3, 100e-3}, std::pair{0.25e-3, 102.4e-3}}) {
    const auto t = build_idle_timeline(d, p, 60.0, -40.0, -90.0);
    const double periods = std::floor((60.0 - d) / p + 1e-9) + 1;
    CHECK(t.duty_cycle() == doctest::Approx(periods * d / 60.0).epsilon(1e-14));
  }
  CHECK(build_idle_timeline(0.5e-3, 50e-3, 360.0, -40.0, -90.0).duty_cycle() == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("instantaneous power grows with measurement bandwidth") {
  const auto t = build_traffic_timeline(ScenarioSpec::preset(ScenarioKind::file3), 4);
  for (double time : {0.0001, 0.02, 100.0, 300.0}) {
    double last = 0.0;
    for (double bw = 0.1e6; bw <= 30e6; bw *= 1.3) {
      const double p = instantaneous_power(t, time, 2413e6, bw);
      CHECK(p >= last);
      last = p;
    }
  }
}

TEST_CASE("different seeds give different download draws") {
  const auto spec = ScenarioSpec::preset(ScenarioKind::file2);
  int differing = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    if (!(build_traffic_timeline(spec, seed) == build_traffic_timeline(spec, seed + 100))) ++differing;
  }
  CHECK(differing == 10);
}
