#include "wifiexp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "kernel_common.hpp"

namespace wifiexp::sweep {

namespace {

constexpr double kRelTol = 1e-9;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::config_invalid, msg); }

void to_dbm(std::span<const double> mw, std::vector<double>& dbm) {
  dbm.resize(mw.size());
  std::transform(mw.begin(), mw.end(), dbm.begin(), mw_to_dbm);
}

void check_window(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                  double start) {
  if (start < 0.0 || start + config.swt > timeline.total_duration() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::window_overrun, "sweep at " + std::to_string(start) +
                                               " s does not fit inside the timeline");
  }
}

}  // namespace

const char* to_string(Detector detector) {
  switch (detector) {
    case Detector::rms: return "rms";
    case Detector::max: return "max";
    case Detector::sample: return "sample";
  }
  return "rms";
}

const char* to_string(TraceMode mode) {
  return mode == TraceMode::max_hold ? "max_hold" : "clear_write";
}

Detector detector_from_string(const std::string& name) {
  if (name == "rms") return Detector::rms;
  if (name == "max") return Detector::max;
  if (name == "sample") return Detector::sample;
  throw Error(ErrorKind::parse_error, "unknown detector '" + name + "'");
}

TraceMode trace_mode_from_string(const std::string& name) {
  if (name == "clear_write") return TraceMode::clear_write;
  if (name == "max_hold") return TraceMode::max_hold;
  throw Error(ErrorKind::parse_error, "unknown trace mode '" + name + "'");
}

SweepConfig SweepConfig::recommended() { return SweepConfig{}; }

SweepConfig SweepConfig::reference_zero_span() {
  SweepConfig c;
  c.span = 0.0;
  c.swt = 1.0;
  c.swp = 8001;
  return c;
}

void SweepConfig::validate() const {
  if (!(rbw > 0.0) || !(vbw > 0.0)) invalid("rbw and vbw must be positive");
  if (!(swt > 0.0)) invalid("swt must be positive");
  if (swp < 2) invalid("swp must be at least 2");
  if (span < 0.0) invalid("span must be nonnegative");
  if (vbw < 3.0 * rbw * (1.0 - kRelTol)) invalid("vbw must be at least 3 x rbw");
  if (span > 0.0 && !(rbw > span / (swp - 1))) {
    invalid("rbw must exceed span / (swp - 1)");
  }
  if (sweep_period < swt * (1.0 - kRelTol)) invalid("sweep_period must be at least swt");
}

double SweepConfig::point_frequency(std::size_t i) const {
  return center_frequency - span / 2.0 + static_cast<double>(i) * span / (swp - 1);
}

std::string SweepConfig::label() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "rbw%gMHz_vbw%gMHz_swt%gms_%s_%s", rbw / kMHz, vbw / kMHz,
                swt * 1e3, to_string(detector), to_string(trace_mode));
  return buf;
}

double rbw_response(double offset, double rbw) {
  const double x = offset / rbw;
  return std::exp(-4.0 * std::numbers::ln2 * x * x);
}

double mask_response(const emission::SpectralMask& mask, double frequency, double rbw) {
  double share = 0.0;
  for (std::size_t i = 0; i < mask.active_subcarriers.size(); ++i) {
    share += mask.relative_power[i] * rbw_response(mask.line_frequency(i) - frequency, rbw);
  }
  return share;
}

double detector_reduce(std::span<const double> samples_mw, Detector detector) {
  if (samples_mw.empty()) throw Error(ErrorKind::empty_input, "detector needs samples");
  switch (detector) {
    case Detector::rms:
      return compensated_sum(samples_mw) / static_cast<double>(samples_mw.size());
    case Detector::max:
      return *std::max_element(samples_mw.begin(), samples_mw.end());
    case Detector::sample:
      return samples_mw.back();
  }
  return 0.0;
}

double detector_fluctuation(Detector detector, double dof, std::uint64_t key) {
  SplitMix64 rng(key);
  switch (detector) {
    case Detector::rms: {
      const double k = std::max(dof, 1e-6);
      std::gamma_distribution<double> gamma(k, 1.0 / k);
      return gamma(rng);
    }
    case Detector::sample:
      return -std::log1p(-rng.uniform());
    case Detector::max: {
      // inverse CDF of the largest of m unit exponentials
      const double m = std::max(1.0, dof);
      return -std::log(-std::expm1(std::log(rng.uniform()) / m));
    }
  }
  return 1.0;
}

Trace trace_combine(const Trace& accumulated, const Trace& next, TraceMode mode) {
  if (accumulated.frequencies != next.frequencies || !(accumulated.config == next.config)) {
    throw Error(ErrorKind::grid_mismatch, "traces have different configs or frequency grids");
  }
  if (mode == TraceMode::clear_write) return next;
  Trace out = next;
  for (std::size_t i = 0; i < out.powers_mw.size(); ++i) {
    if (accumulated.powers_mw[i] > out.powers_mw[i]) {
      out.powers_mw[i] = accumulated.powers_mw[i];
      out.powers_dbm[i] = accumulated.powers_dbm[i];
    }
  }
  return out;
}

double channel_power_from_points(std::span<const double> frequencies,
                                 std::span<const double> powers_mw, double channel_center,
                                 double channel_bandwidth, double rbw) {
  if (!(channel_bandwidth > 0.0) || !(rbw > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "channel bandwidth and rbw must be positive");
  }
  if (frequencies.empty() || frequencies.size() != powers_mw.size()) {
    throw Error(ErrorKind::empty_input, "trace has no points");
  }
  const double half = channel_bandwidth / 2.0;
  const double tol = channel_bandwidth * 1e-9;
  if (frequencies.front() > channel_center - half + tol ||
      frequencies.back() < channel_center + half - tol) {
    throw Error(ErrorKind::channel_not_covered, "trace does not span the channel");
  }
  std::vector<double> inside;
  inside.reserve(powers_mw.size());
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (std::abs(frequencies[i] - channel_center) <= half + tol) inside.push_back(powers_mw[i]);
  }
  const double total = compensated_sum(inside);
  return mw_to_dbm(channel_bandwidth / rbw * total / static_cast<double>(inside.size()));
}

double trace_channel_power(const Trace& trace, double channel_bandwidth, double rbw) {
  return channel_power_from_points(trace.frequencies, trace.powers_mw,
                                   trace.config.center_frequency, channel_bandwidth, rbw);
}

std::vector<double> sweep_schedule(const SweepConfig& config, double first_start,
                                   std::size_t count, double window, std::uint64_t seed) {
  config.validate();
  std::vector<double> starts(count);
  const double slack = std::max(0.0, config.sweep_period - config.swt);
  for (std::size_t k = 0; k < count; ++k) {
    SplitMix64 rng(hash_combine(seed, k));
    starts[k] = first_start + static_cast<double>(k) * config.sweep_period + rng.uniform() * slack;
    if (starts[k] + config.swt > window * (1.0 + 1e-12)) {
      throw Error(ErrorKind::window_overrun, "sweep schedule exceeds the timeline window");
    }
  }
  return starts;
}

void apply_video_filter(const SweepConfig& config, std::span<double> powers_mw) {
  if (powers_mw.empty()) return;
  const double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * config.vbw * config.dwell());
  double state = powers_mw[0];
  for (double& p : powers_mw) {
    state += alpha * (p - state);
    p = state;
  }
}

Trace sweep_with(SlotKernel kernel, const emission::EmissionTimeline& timeline,
                 const SweepConfig& config, double sweep_start, const AnalyzerOptions& options) {
  config.validate();
  if (config.span <= 0.0) invalid("frequency sweep needs span > 0");
  check_window(timeline, config, sweep_start);
  Trace trace;
  trace.config = config;
  trace.sweep_start = sweep_start;
  const auto points = static_cast<std::size_t>(config.swp);
  trace.frequencies.resize(points);
  std::vector<double> responses(points);
  for (std::size_t i = 0; i < points; ++i) {
    trace.frequencies[i] = config.point_frequency(i);
    responses[i] = mask_response(timeline.mask(), trace.frequencies[i], config.rbw);
  }
  trace.powers_mw.resize(points);
  kernel(timeline, config, sweep_start, responses, trace.frequencies, options, trace.powers_mw);
  apply_video_filter(config, trace.powers_mw);
  to_dbm(trace.powers_mw, trace.powers_dbm);
  return trace;
}

ZeroSpanSeries zero_span_with(SlotKernel kernel, const emission::EmissionTimeline& timeline,
                              const SweepConfig& config, double frequency, double sweep_start,
                              const AnalyzerOptions& options) {
  config.validate();
  if (config.span != 0.0) invalid("zero-span acquisition needs span = 0");
  check_window(timeline, config, sweep_start);
  ZeroSpanSeries series;
  series.config = config;
  series.frequency = frequency;
  const auto points = static_cast<std::size_t>(config.swp);
  series.times.resize(points);
  const double step = config.swt / (config.swp - 1);
  for (std::size_t i = 0; i < points; ++i) {
    series.times[i] = sweep_start + static_cast<double>(i) * step;
  }
  const double response = mask_response(timeline.mask(), frequency, config.rbw);
  series.powers_mw.resize(points);
  kernel(timeline, config, sweep_start, std::span<const double>(&response, 1),
         std::span<const double>(&frequency, 1), options, series.powers_mw);
  apply_video_filter(config, series.powers_mw);
  to_dbm(series.powers_mw, series.powers_dbm);
  return series;
}

RunAcquisition acquire_with(SlotKernel kernel, bool parallel,
                            const emission::EmissionTimeline& timeline, const SweepConfig& config,
                            std::span<const double> sweep_starts, const AnalyzerOptions& options,
                            double channel_bandwidth) {
  config.validate();
  if (config.span <= 0.0) invalid("frequency sweep needs span > 0");
  if (sweep_starts.empty()) throw Error(ErrorKind::empty_input, "run has no sweeps");
  for (double s : sweep_starts) check_window(timeline, config, s);

  const auto points = static_cast<std::size_t>(config.swp);
  const auto sweeps = sweep_starts.size();
  std::vector<double> frequencies(points);
  std::vector<double> responses(points);
  for (std::size_t i = 0; i < points; ++i) {
    frequencies[i] = config.point_frequency(i);
    responses[i] = mask_response(timeline.mask(), frequencies[i], config.rbw);
  }

  std::vector<double> detected(sweeps * points);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (std::size_t k = 0; k < sweeps; ++k) {
    std::span<double> out(detected.data() + k * points, points);
    kernel(timeline, config, sweep_starts[k], responses, frequencies, options, out);
    apply_video_filter(config, out);
  }

  RunAcquisition run;
  run.sweep_starts.assign(sweep_starts.begin(), sweep_starts.end());
  run.channel_power_dbm.reserve(sweeps);
  std::vector<double> shown(detected.begin(), detected.begin() + static_cast<std::ptrdiff_t>(points));
  for (std::size_t k = 0; k < sweeps; ++k) {
    const double* cur = detected.data() + k * points;
    if (config.trace_mode == TraceMode::clear_write) {
      std::copy(cur, cur + points, shown.begin());
    } else {
      for (std::size_t i = 0; i < points; ++i) shown[i] = std::max(shown[i], cur[i]);
    }
    run.channel_power_dbm.push_back(channel_power_from_points(
        frequencies, shown, config.center_frequency, channel_bandwidth, config.rbw));
  }
  run.displayed.config = config;
  run.displayed.sweep_start = sweep_starts.back();
  run.displayed.frequencies = std::move(frequencies);
  run.displayed.powers_mw = std::move(shown);
  to_dbm(run.displayed.powers_mw, run.displayed.powers_dbm);
  return run;
}

Trace run_sweep(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                double sweep_start, const AnalyzerOptions& options) {
  return sweep_with(detect_slots, timeline, config, sweep_start, options);
}

ZeroSpanSeries run_zero_span(const emission::EmissionTimeline& timeline,
                             const SweepConfig& config, double frequency, double sweep_start,
                             const AnalyzerOptions& options) {
  return zero_span_with(detect_slots, timeline, config, frequency, sweep_start, options);
}

RunAcquisition acquire_run(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                           std::span<const double> sweep_starts, const AnalyzerOptions& options,
                           double channel_bandwidth) {
  return acquire_with(detect_slots, true, timeline, config, sweep_starts, options,
                      channel_bandwidth);
}

}  // namespace wifiexp::sweep
