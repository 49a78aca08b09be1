#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "wifiexp/stats.hpp"

using namespace wifiexp;
using Decimal = boost::multiprecision::cpp_dec_float_50;

TEST_CASE("dBm conversions round trip") {
  for (double dbm : {-150.0, -71.4, -43.07, 0.0, 12.5}) {
    CHECK(mw_to_dbm(dbm_to_mw(dbm)) == doctest::Approx(dbm).epsilon(1e-13));
  }
  CHECK(dbm_to_mw(0.0) == 1.0);
  CHECK(std::isinf(mw_to_dbm(0.0)));
}

TEST_CASE("compensated sum matches a 50-digit decimal sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> exponent(-12.0, -2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> values(1000);
    Decimal exact = 0;
    for (auto& v : values) {
      v = std::pow(10.0, exponent(rng));
      exact += Decimal(v);
    }
    const double got = compensated_sum(values);
    CHECK(std::abs(got - exact.convert_to<double>()) <= 1e-15 * got);
  }
}

TEST_CASE("SplitMix64 is deterministic and uniform in [0, 1)") {
  SplitMix64 a(42), b(42);
  double total = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    total += u;
  }
  CHECK(total / 10000 == doctest::Approx(0.5).epsilon(0.02));
  CHECK(hash_combine(1, 2) != hash_combine(2, 1));
}

TEST_CASE("relative error against decimal arithmetic") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> level(-120.0, 0.0);
  for (int i = 0; i < 1000; ++i) {
    const double ref = dbm_to_mw(level(rng));
    const double meas = dbm_to_mw(level(rng));
    const Decimal r(ref), m(meas);
    const Decimal exact = abs(r - m) / r * 100;
    const double got = stats::relative_error_eq2(ref, meas);
    CHECK(std::abs(got - exact.convert_to<double>()) <= 1e-10 * exact.convert_to<double>());
  }
}

TEST_CASE("relative error edge cases") {
  CHECK_THROWS_AS(stats::relative_error_eq2(0.0, 1.0), Error);
  CHECK_THROWS_AS(stats::relative_error_eq2(1.0, -1.0), Error);
  CHECK(stats::relative_error_eq2(2.0, 2.0) == 0.0);
  CHECK(stats::relative_error_eq2(1.0, 0.0) == 100.0);
  CHECK(stats::relative_error_eq2(1.0, 3.0) == 200.0);
}

TEST_CASE("percentile matches the order-statistic oracle") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist(-60.0, 8.0);
  for (int n : {1, 2, 3, 10, 361}) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = dist(rng);
    const stats::EmpiricalCdf cdf(xs);
    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    for (double q = 0.0; q <= 100.0; q += 2.5) {
      const double h = (n - 1) * q / 100.0;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const auto hi = std::min(lo + 1, sorted.size() - 1);
      const double expect = sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
      CHECK(cdf.percentile(q) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(cdf.percentile(0) == sorted.front());
    CHECK(cdf.percentile(100) == sorted.back());
  }
}

TEST_CASE("percentile is monotone in q") {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> dist(0.1);
  std::vector<double> xs(500);
  for (auto& x : xs) x = -80.0 + dist(rng);
  const stats::EmpiricalCdf cdf(xs);
  double last = cdf.percentile(0);
  for (double q = 0.5; q <= 100.0; q += 0.5) {
    const double v = cdf.percentile(q);
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("empirical CDF rejects bad input") {
  CHECK_THROWS_AS(stats::EmpiricalCdf({}).percentile(50), Error);
  CHECK_THROWS_AS(stats::EmpiricalCdf({1.0, NAN}), Error);
  CHECK_THROWS_AS(stats::EmpiricalCdf({1.0}).percentile(101), Error);
}

TEST_CASE("F survival matches Boost.Math") {
  for (double d1 : {1.0, 2.0, 10.0, 359.0}) {
    for (double d2 : {5.0, 40.0, 359.0, 718.0}) {
      boost::math::fisher_f_distribution<double> dist(d1, d2);
      for (double f : {0.1, 0.5, 0.9, 1.0, 1.2, 1.5, 2.2, 5.0, 20.0}) {
        const double expect = boost::math::cdf(boost::math::complement(dist, f));
        CHECK(stats::f_survival(f, d1, d2) == doctest::Approx(expect).epsilon(1e-9));
      }
    }
  }
  CHECK(stats::f_survival(0.0, 3, 7) == 1.0);
}

TEST_CASE("one-way ANOVA against a hand calculation") {
  const std::vector<std::vector<double>> groups{{1, 2, 3, 4}, {2, 4, 6, 8}, {5, 5, 6, 7}};
  double grand = 0;
  for (const auto& g : groups)
    for (double v : g) grand += v;
  grand /= 12;
  double ssb = 0, ssw = 0;
  for (const auto& g : groups) {
    const double m = stats::mean(g);
    ssb += g.size() * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  const double f = (ssb / 2) / (ssw / 9);
  const auto r = stats::anova_oneway(groups);
  CHECK(r.f_value == doctest::Approx(f));
  CHECK(r.dof_between == 2);
  CHECK(r.dof_within == 9);
  boost::math::fisher_f_distribution<double> dist(2, 9);
  CHECK(r.p_value == doctest::Approx(boost::math::cdf(boost::math::complement(dist, f))));
}

TEST_CASE("ANOVA degenerate inputs") {
  CHECK_THROWS_AS(stats::anova_oneway({{1, 2, 3}}), Error);
  const auto same = stats::anova_oneway({{1, 1, 1}, {1, 1, 1}});
  CHECK(same.f_value == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK_THROWS_AS(stats::anova_oneway({{1, 1, 1}, {2, 2, 2}}), Error);
}

TEST_CASE("variance ratio test") {
  const std::vector<double> wide{0, 4, 8, 12, 16}, narrow{0, 1, 2, 3, 4};
  const auto r = stats::variance_ratio_test(wide, narrow);
  CHECK(r.f_value == doctest::Approx(16.0));
  CHECK(r.dof_between == 4);
  CHECK(r.dof_within == 4);
  CHECK(r.significant());
  CHECK_FALSE(stats::variance_ratio_test(narrow, wide).significant());
}

TEST_CASE("transition percentile on a bimodal sample") {
  std::vector<double> xs;
  for (int i = 0; i < 80; ++i) xs.push_back(-71.0 - 0.01 * i);
  for (int i = 0; i < 20; ++i) xs.push_back(-45.0 + 0.01 * i);
  const stats::EmpiricalCdf cdf(xs);
  for (auto rule : {stats::TransitionRule::largest_gap, stats::TransitionRule::floor_offset}) {
    const auto t = stats::transition_percentile(cdf, {rule, 10.0});
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(80.0).epsilon(0.02));
  }
  std::vector<double> flat(100, -70.0);
  CHECK_FALSE(stats::transition_percentile(stats::EmpiricalCdf(flat)).has_value());
}

TEST_CASE("duty cycle expectation bands") {
  using emission::ScenarioKind;
  const auto f1 = stats::duty_cycle_expectation(emission::ScenarioSpec::preset(ScenarioKind::file1));
  CHECK(f1.reported_lo == 2);
  CHECK(f1.reported_hi == 3);
  const auto f2 = stats::duty_cycle_expectation(emission::ScenarioSpec::preset(ScenarioKind::file2));
  CHECK(f2.reported_lo == 15);
  CHECK(f2.reported_hi == 18);
  const auto f3 = stats::duty_cycle_expectation(emission::ScenarioSpec::preset(ScenarioKind::file3));
  CHECK(f3.reported_lo == 64);
  CHECK(f3.reported_hi == 68);
  CHECK(f3.reported_contains(66.4));
  CHECK_FALSE(f3.reported_contains(69.0));
}

TEST_CASE("time-average exposure is the linear mean") {
  std::vector<double> samples(360, -50.0);
  samples[0] = -40.0;
  const double expect = mw_to_dbm((dbm_to_mw(-40.0) + 359 * dbm_to_mw(-50.0)) / 360);
  CHECK(stats::time_average_exposure(samples) == doctest::Approx(expect));
  CHECK_THROWS_AS(stats::time_average_exposure(std::vector<double>(100, -50.0)), Error);
}

TEST_CASE("percentile table aggregates runs") {
  const std::vector<std::vector<double>> runs{{-70, -60, -50}, {-68, -58, -48}};
  const std::vector<double> ps{50, 90};
  const auto table = stats::build_percentile_table(runs, ps, "t");
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].label == "P50");
  CHECK(table.rows[0].mean_dbm == doctest::Approx(-59));
  CHECK(table.rows[0].min_dbm == doctest::Approx(-60));
  CHECK(table.rows[0].max_dbm == doctest::Approx(-58));
  CHECK(table.rows[2].label == "Max");
  CHECK(table.rows[2].max_dbm == doctest::Approx(-48));
}

TEST_CASE("mean, variance and median") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(stats::mean(xs) == 2.5);
  CHECK(stats::sample_variance(xs) == doctest::Approx(5.0 / 3.0));
  CHECK(stats::median(xs) == 2.5);
  CHECK(stats::median({3, 1, 2}) == 2);
}

TEST_CASE("relative error is scale invariant") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> level(1e-9, 1e-3), scale(1e-3, 1e3);
  for (int i = 0; i < 500; ++i) {
    const double ref = level(rng), meas = level(rng), a = scale(rng);
    CHECK(stats::relative_error_eq2(a * ref, a * meas) ==
          doctest::Approx(stats::relative_error_eq2(ref, meas)).epsilon(1e-12));
  }
}

TEST_CASE("ANOVA F is invariant under a common shift") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> dist(-60.0, 3.0);
  std::vector<std::vector<double>> groups(3, std::vector<double>(50));
  for (auto& g : groups)
    for (auto& v : g) v = dist(rng);
  const double f = stats::anova_oneway(groups).f_value;
  for (double shift : {-20.0, 0.5, 35.0}) {
    auto moved = groups;
    for (auto& g : moved)
      for (auto& v : g) v += shift;
    CHECK(stats::anova_oneway(moved).f_value == doctest::Approx(f).epsilon(1e-9));
  }
}
