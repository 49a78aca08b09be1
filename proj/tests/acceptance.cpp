// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "wifiexp/campaign.hpp"
#include "wifiexp/reference.hpp"
#include "wifiexp/stats.hpp"
#include "wifiexp/study.hpp"
#include "wifiexp/sweep.hpp"

using namespace wifiexp;
using Decimal = boost::multiprecision::cpp_dec_float_50;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

campaign::CampaignSpec shipped(const char* name) {
  auto spec = campaign::load_campaign_spec(std::filesystem::path(WIFIEXP_SOURCE_DIR) / "specs" / name);
  spec.outputs = {};
  return spec;
}

const study::ErrorReport* find_report(const campaign::CampaignReport& r, double rbw_mhz,
                                      double vbw_mhz, double swt_ms) {
  for (const auto& e : r.error_reports) {
    if (std::abs(e.config.rbw - rbw_mhz * kMHz) < 1 && std::abs(e.config.vbw - vbw_mhz * kMHz) < 1 &&
        std::abs(e.config.swt - swt_ms * 1e-3) < 1e-12) {
      return &e;
    }
  }
  return nullptr;
}

void criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> level(-120.0, -20.0);
  std::uniform_int_distribution<int> count(1, 200);
  double worst1 = 0.0, worst2 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> mw(static_cast<std::size_t>(count(rng)));
    Decimal sum = 0;
    for (auto& v : mw) {
      v = dbm_to_mw(level(rng));
      sum += Decimal(v);
    }
    const double rbw = i % 2 ? 0.3e6 : 1e6;
    const double exact = (Decimal(20e6) / Decimal(rbw) * sum / Decimal(mw.size())).convert_to<double>();
    const double got = reference::channel_power_eq1(mw, 20e6, rbw).p_channel_linear;
    worst1 = std::max(worst1, std::abs(got - exact) / exact);
  }
  for (int i = 0; i < 1000; ++i) {
    const double ref = dbm_to_mw(level(rng));
    const double meas = dbm_to_mw(level(rng));
    const Decimal r(ref), m(meas);
    const double exact = (abs(r - m) / r * 100).convert_to<double>();
    const double got = stats::relative_error_eq2(ref, meas);
    if (exact > 0) worst2 = std::max(worst2, std::abs(got - exact) / exact);
  }
  const double secs = seconds_since(t0);
  verdict(1, worst1 <= 1e-12 && worst2 <= 1e-10 && secs < 5.0,
          fmt("channel power max rel err %.3g (<= 1e-12), relative error max rel err %.3g (<= 1e-10), %.2f s",
              worst1, worst2, secs));
}

void criterion2() {
  const auto t0 = Clock::now();
  const double idle = 100.0 * emission::build_idle_timeline(emission::SignalParams{}, 360.0).duty_cycle();
  const bool idle_ok = fmt("%.2f", idle) == "1.00" && std::abs(idle - 1.0) < 1e-9;
  std::string detail = fmt("idle %.6f%%", idle);
  bool ok = idle_ok;
  using emission::ScenarioKind;
  const std::pair<ScenarioKind, std::pair<int, int>> bands[] = {
      {ScenarioKind::file1, {2, 3}}, {ScenarioKind::file2, {15, 18}}, {ScenarioKind::file3, {64, 68}}};
  for (const auto& [kind, band] : bands) {
    const auto spec = emission::ScenarioSpec::preset(kind);
    double lo = 1e9, hi = -1e9;
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const double duty = std::round(100.0 * emission::build_traffic_timeline(spec, seed).duty_cycle());
      lo = std::min(lo, duty);
      hi = std::max(hi, duty);
      if (duty >= band.first && duty <= band.second) ++inside;
    }
    ok = ok && inside == 100;
    detail += fmt("; %s %g-%g%% (%d/100 in %d-%d)", emission::to_string(kind), lo, hi, inside,
                  band.first, band.second);
  }
  const double secs = seconds_since(t0);
  verdict(2, ok && secs < 10.0, detail + fmt(", %.2f s", secs));
}

void criterion3(const campaign::CampaignReport& idle, double secs) {
  std::vector<double> means;
  std::string detail;
  bool found = true;
  for (double swt : {2.5, 10.0, 25.0, 40.0}) {
    const auto* r = find_report(idle, 0.3, 1, swt);
    if (!r) {
      found = false;
      continue;
    }
    means.push_back(r->mean_error);
    detail += fmt("%s%gms %.2f%%", detail.empty() ? "" : ", ", swt, r->mean_error);
  }
  bool ok = found && means.size() == 4 && idle.failures.empty();
  for (std::size_t i = 1; ok && i < means.size(); ++i) ok = means[i] > means[i - 1];
  ok = ok && means.front() < 15.0 && means.back() > 100.0 && secs < 300.0;
  verdict(3, ok, "mean error by SWT: " + detail + fmt(" (%.1f s)", secs));
}

void criterion4(const campaign::CampaignReport& idle) {
  bool ok = true;
  std::string detail;
  for (double swt : {2.5, 10.0}) {
    const auto* r = find_report(idle, 1, 3, swt);
    const bool under = r && r->direction == study::Direction::under;
    ok = ok && under;
    if (r) {
      detail += fmt("RBW 1/VBW 3/%gms %s (%d over, %d under, mean %.2f%%); ", swt,
                    study::to_string(r->direction), r->runs_over, r->runs_under, r->mean_error);
    } else {
      detail += fmt("RBW 1/VBW 3/%gms missing; ", swt);
    }
  }
  const auto* base = find_report(idle, 0.3, 1, 2.5);
  const bool base_ok = base && base->direction == study::Direction::over && base->runs_over >= 14;
  ok = ok && base_ok;
  if (base) {
    detail += fmt("RBW 0.3/VBW 1/2.5ms %s in %d of %zu runs", study::to_string(base->direction),
                  base->runs_over, base->e_percent.size());
  }
  verdict(4, ok, detail);
}

void criterion5(const campaign::CampaignReport& traffic, double secs) {
  const std::pair<double, double> bands[] = {{95, 99}, {80, 87}, {30, 38}};
  bool ok = traffic.failures.empty() && traffic.scenarios.size() == 3;
  std::string detail;
  for (std::size_t i = 0; i < traffic.scenarios.size() && i < 3; ++i) {
    const auto& s = traffic.scenarios[i];
    const auto& fast = s.cells.at(0);
    const auto& slow = s.cells.at(1);
    const bool complete = std::all_of(fast.transitions.begin(), fast.transitions.end(),
                                      [](const auto& t) { return t.has_value(); });
    const bool in_band = complete && fast.mean_transition >= bands[i].first &&
                         fast.mean_transition <= bands[i].second;
    const bool lower = slow.mean_transition < fast.mean_transition;
    ok = ok && in_band && lower;
    detail += fmt("%s%s 2.5ms P%.2f (band %g-%g) 10ms P%.2f", i ? "; " : "",
                  emission::to_string(s.scenario.kind), fast.mean_transition, bands[i].first,
                  bands[i].second, slow.mean_transition);
  }
  verdict(5, ok && secs < 300.0, detail + fmt(" (%.1f s)", secs));
}

void criterion6(const campaign::CampaignReport& traffic) {
  std::vector<stats::AnovaResult> rows;
  for (const auto& s : traffic.scenarios) {
    if (s.variance_ratio) rows.push_back(*s.variance_ratio);
  }
  bool ok = rows.size() == 3;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += fmt("%sfile%zu F=%.4f p=%.3g dof=(%g, %g)", i ? "; " : "", i + 1, rows[i].f_value,
                  rows[i].p_value, rows[i].dof_between, rows[i].dof_within);
    ok = ok && rows[i].dof_within == 359;
  }
  if (ok) {
    ok = rows[0].f_value > rows[1].f_value && rows[1].f_value > rows[2].f_value &&
         rows[0].p_value < rows[1].p_value && rows[1].p_value < rows[2].p_value &&
         rows[0].p_value < 0.05 && rows[2].p_value > 0.05;
  }
  verdict(6, ok, detail);
}

void criterion7(const campaign::CampaignReport& idle, const campaign::CampaignReport& traffic) {
  sweep::SweepConfig expected;
  expected.center_frequency = 2412e6;
  expected.span = 20e6;
  expected.rbw = 0.3e6;
  expected.vbw = 1e6;
  expected.swt = 2.5e-3;
  expected.swp = 501;
  expected.detector = sweep::Detector::rms;
  expected.trace_mode = sweep::TraceMode::clear_write;
  try {
    const auto got = campaign::recommend_across({idle, traffic});
    verdict(7, got == expected, "recommended " + got.label() + fmt(", span %g MHz, %d points", got.span / kMHz, got.swp));
  } catch (const Error& e) {
    verdict(7, false, std::string("no recommendation: ") + e.what());
  }
}

void criterion8() {
  const auto timeline = emission::build_idle_timeline(emission::SignalParams{}, 360.0);
  sweep::SweepConfig clear;
  sweep::SweepConfig hold;
  hold.trace_mode = sweep::TraceMode::max_hold;
  const auto starts = sweep::sweep_schedule(clear, 0.0, 360, 360.0, 77);
  sweep::AnalyzerOptions options;
  options.noise_key = 77;
  const auto clear_run = sweep::acquire_run(timeline, clear, starts, options);
  const auto hold_run = sweep::acquire_run(timeline, hold, starts, options);
  const double average = stats::time_average_exposure(clear_run.channel_power_dbm);
  const double held = hold_run.channel_power_dbm.back();

  std::vector<double> pointwise_max(static_cast<std::size_t>(clear.swp), 0.0);
  double linear_sum = 0.0;
  for (double start : starts) {
    const auto trace = sweep::run_sweep(timeline, clear, start, options);
    for (std::size_t i = 0; i < pointwise_max.size(); ++i) {
      pointwise_max[i] = std::max(pointwise_max[i], trace.powers_mw[i]);
    }
    linear_sum += dbm_to_mw(sweep::trace_channel_power(trace, 20e6, clear.rbw));
  }
  const auto frequencies = sweep::run_sweep(timeline, clear, starts.front(), options).frequencies;
  const double oracle_held =
      sweep::channel_power_from_points(frequencies, pointwise_max, clear.center_frequency, 20e6, clear.rbw);
  const double oracle_average = mw_to_dbm(linear_sum / static_cast<double>(starts.size()));
  const bool agree = std::abs(held - oracle_held) < 1e-9 && std::abs(average - oracle_average) < 1e-9;
  verdict(8, agree && held - average >= 10.0,
          fmt("max hold %.2f dBm, clear/write average %.2f dBm, inflation %.2f dB (>= 10); oracle %s",
              held, average, held - average, agree ? "agrees" : "disagrees"));
}

void criterion9() {
  const auto timeline = emission::EmissionTimeline(
      {{0.0, 20.0, -40.0}}, emission::SpectralMask::ieee80211g(), emission::kDefaultNoiseFloorDbm,
      emission::kNoiseReferenceBandwidth, 20.0, 0);
  double lo = 1e300, hi = -1e300;
  std::string detail;
  for (double rbw : {0.3, 1.0}) {
    for (double swt : {2.5, 10.0, 25.0, 40.0}) {
      sweep::SweepConfig c;
      c.rbw = rbw * kMHz;
      c.vbw = 3 * rbw * kMHz;
      c.swt = swt * 1e-3;
      const auto starts = sweep::sweep_schedule(c, 0.0, 20, 20.0, 5);
      for (double p : sweep::acquire_run(timeline, c, starts).channel_power_dbm) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
    }
  }
  verdict(9, hi - lo < 0.1, fmt("100%% duty channel power %.3f..%.3f dBm, spread %.4f dB (< 0.1)", lo, hi, hi - lo));
}

void criterion10(const campaign::CampaignReport& idle, const campaign::CampaignReport& traffic) {
  bool ok = !idle.error_reports.empty() && !traffic.scenarios.empty();
  std::size_t cells = 0;
  for (const auto& e : idle.error_reports) {
    ok = ok && e.samples_per_run == 360;
    ++cells;
  }
  for (const auto& s : traffic.scenarios) {
    for (const auto& c : s.cells) {
      for (const auto& run : c.run_samples_dbm) ok = ok && run.size() == 360;
      ++cells;
    }
  }
  verdict(10, ok, fmt("%zu six-minute cells, every run has 360 per-sweep samples", cells));
}

}  // namespace

int main() {
  try {
    criterion1();
    criterion2();

    auto t0 = Clock::now();
    const auto idle = campaign::run_campaign(shipped("phase2-idle-grid.toml"));
    const double idle_secs = seconds_since(t0);
    t0 = Clock::now();
    const auto traffic = campaign::run_campaign(shipped("phase3-traffic.toml"));
    const double traffic_secs = seconds_since(t0);
    for (const auto& f : idle.failures) std::printf("note: idle cell %s failed: %s\n", f.cell.c_str(), f.message.c_str());
    for (const auto& f : traffic.failures) std::printf("note: traffic cell %s failed: %s\n", f.cell.c_str(), f.message.c_str());

    criterion3(idle, idle_secs);
    criterion4(idle);
    criterion5(traffic, traffic_secs);
    criterion6(traffic);
    criterion7(idle, traffic);
    criterion8();
    criterion9();
    criterion10(idle, traffic);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
