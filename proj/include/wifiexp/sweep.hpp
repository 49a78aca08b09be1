#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wifiexp/emission.hpp"

namespace wifiexp::sweep {

enum class Detector { rms, max, sample };
enum class TraceMode { clear_write, max_hold };

const char* to_string(Detector detector);
const char* to_string(TraceMode mode);
Detector detector_from_string(const std::string& name);
TraceMode trace_mode_from_string(const std::string& name);

struct SweepConfig {
  double center_frequency = emission::kChannel1CenterHz;
  double span = 20e6;  // 0 selects zero span
  double rbw = 0.3e6;
  double vbw = 1e6;
  double swt = 2.5e-3;
  int swp = 501;
  Detector detector = Detector::rms;
  TraceMode trace_mode = TraceMode::clear_write;
  double sweep_period = 1.0;

  /// Frequency-domain setting recommended for WiFi exposure.
  static SweepConfig recommended();
  /// Time-domain setting used for the reference records.
  static SweepConfig reference_zero_span();

  void validate() const;
  double dwell() const { return swt / swp; }
  double point_frequency(std::size_t i) const;
  std::string label() const;

  bool operator==(const SweepConfig&) const = default;
};

struct Trace {
  std::vector<double> frequencies;  // Hz
  std::vector<double> powers_mw;
  std::vector<double> powers_dbm;
  double sweep_start = 0.0;
  SweepConfig config;
};

struct ZeroSpanSeries {
  double frequency = 0.0;
  std::vector<double> times;  // s, step swt / (swp - 1)
  std::vector<double> powers_mw;
  std::vector<double> powers_dbm;
  SweepConfig config;
};

struct AnalyzerOptions {
  double oversampling_hz = 1e6;
  /// Adds the detector's statistical fluctuation of the noise floor.
  bool detector_noise = true;
  std::uint64_t noise_key = 0;
};

/// Fraction of a burst's power passed by a Gaussian RBW filter tuned to f.
double mask_response(const emission::SpectralMask& mask, double frequency, double rbw);

/// Gaussian RBW power response at a frequency offset.
double rbw_response(double offset, double rbw);

double detector_reduce(std::span<const double> samples_mw, Detector detector);

/// Multiplicative noise-floor fluctuation seen by a detector after one dwell.
/// dof is the dwell-bandwidth product. Deterministic in key.
double detector_fluctuation(Detector detector, double dof, std::uint64_t key);

Trace trace_combine(const Trace& accumulated, const Trace& next, TraceMode mode);

/// Channel power integrated over the display points inside the channel, in dBm.
double trace_channel_power(const Trace& trace, double channel_bandwidth, double rbw);
double channel_power_from_points(std::span<const double> frequencies,
                                 std::span<const double> powers_mw, double channel_center,
                                 double channel_bandwidth, double rbw);

/// Sweep starts: one per sweep_period from first_start, each with a seeded
/// uniform offset in [0, sweep_period - swt) (triggering is free-running).
std::vector<double> sweep_schedule(const SweepConfig& config, double first_start,
                                   std::size_t count, double window, std::uint64_t seed);

/// Detects `out_mw.size()` consecutive dwell slots starting at `start`.
/// responses[i] is the mask response of slot i and key_frequencies[i] only
/// decorrelates detector noise; a single-element span applies to every slot.
using SlotKernel = void (*)(const emission::EmissionTimeline& timeline,
                            const SweepConfig& config, double start,
                            std::span<const double> responses,
                            std::span<const double> key_frequencies,
                            const AnalyzerOptions& options, std::span<double> out_mw);

void detect_slots(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                  double start, std::span<const double> responses,
                  std::span<const double> key_frequencies, const AnalyzerOptions& options,
                  std::span<double> out_mw);

/// First-order video filter across detected points, in place.
void apply_video_filter(const SweepConfig& config, std::span<double> powers_mw);

Trace run_sweep(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                double sweep_start, const AnalyzerOptions& options = {});
ZeroSpanSeries run_zero_span(const emission::EmissionTimeline& timeline,
                             const SweepConfig& config, double frequency, double sweep_start,
                             const AnalyzerOptions& options = {});

struct RunAcquisition {
  std::vector<double> sweep_starts;
  std::vector<double> channel_power_dbm;  // one per sweep, of the displayed trace
  Trace displayed;                        // final displayed trace
};

/// All sweeps of one run, parallel over sweeps. Max-hold accumulation is a
/// sequential reduction afterwards.
RunAcquisition acquire_run(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                           std::span<const double> sweep_starts,
                           const AnalyzerOptions& options = {},
                           double channel_bandwidth = 20e6);

/// Brute-force reference path: evaluates every oversampled instant.
namespace serial {

void detect_slots(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                  double start, std::span<const double> responses,
                  std::span<const double> key_frequencies, const AnalyzerOptions& options,
                  std::span<double> out_mw);

Trace run_sweep(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                double sweep_start, const AnalyzerOptions& options = {});
ZeroSpanSeries run_zero_span(const emission::EmissionTimeline& timeline,
                             const SweepConfig& config, double frequency, double sweep_start,
                             const AnalyzerOptions& options = {});
RunAcquisition acquire_run(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                           std::span<const double> sweep_starts,
                           const AnalyzerOptions& options = {},
                           double channel_bandwidth = 20e6);

}  // namespace serial

/// Shared driver used by both kernels.
Trace sweep_with(SlotKernel kernel, const emission::EmissionTimeline& timeline,
                 const SweepConfig& config, double sweep_start, const AnalyzerOptions& options);
ZeroSpanSeries zero_span_with(SlotKernel kernel, const emission::EmissionTimeline& timeline,
                              const SweepConfig& config, double frequency, double sweep_start,
                              const AnalyzerOptions& options);
RunAcquisition acquire_with(SlotKernel kernel, bool parallel,
                            const emission::EmissionTimeline& timeline, const SweepConfig& config,
                            std::span<const double> sweep_starts, const AnalyzerOptions& options,
                            double channel_bandwidth);

}  // namespace wifiexp::sweep
