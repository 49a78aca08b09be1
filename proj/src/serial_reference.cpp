#include <vector>

#include "kernel_common.hpp"
#include "wifiexp/sweep.hpp"

namespace wifiexp::sweep::serial {

void detect_slots(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                  double start, std::span<const double> responses,
                  std::span<const double> key_frequencies, const AnalyzerOptions& options,
                  std::span<double> out_mw) {
  const double dwell = config.dwell();
  const std::size_t n = detail::samples_per_dwell(dwell, options.oversampling_hz);
  const double step = dwell / static_cast<double>(n);
  const double noise_mw = timeline.noise_power_mw(config.rbw);
  const double dof = dwell * config.rbw;
  const std::uint64_t base = detail::sweep_noise_base(options, timeline, start);

  std::vector<double> samples(n);
  for (std::size_t i = 0; i < out_mw.size(); ++i) {
    const double slot_begin = detail::slot_start(start, dwell, i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto burst = timeline.burst_at(detail::sample_instant(slot_begin, step, j));
      samples[j] = burst ? timeline.burst_power_mw(*burst) : 0.0;
    }
    const std::uint64_t key = detail::slot_noise_key(base, detail::pick(key_frequencies, i), i);
    out_mw[i] = detector_reduce(samples, config.detector) * detail::pick(responses, i) +
                detail::noise_component(options, config.detector, noise_mw, dof, key);
  }
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
  return acquire_with(detect_slots, false, timeline, config, sweep_starts, options,
                      channel_bandwidth);
}

}  // namespace wifiexp::sweep::serial
