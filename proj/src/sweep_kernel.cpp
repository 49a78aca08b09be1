#include <algorithm>

#include "kernel_common.hpp"
#include "wifiexp/sweep.hpp"

namespace wifiexp::sweep {

namespace {

// Number of sample instants in a slot strictly before x.
std::size_t count_before(double slot_begin, double step, std::size_t n, double x) {
  const double estimate = std::ceil((x - slot_begin) / step - 0.5);
  std::size_t j = 0;
  if (estimate >= static_cast<double>(n)) {
    j = n;
  } else if (estimate > 0.0) {
    j = static_cast<std::size_t>(estimate);
  }
  while (j > 0 && detail::sample_instant(slot_begin, step, j - 1) >= x) --j;
  while (j < n && detail::sample_instant(slot_begin, step, j) < x) ++j;
  return j;
}

}  // namespace

void detect_slots(const emission::EmissionTimeline& timeline, const SweepConfig& config,
                  double start, std::span<const double> responses,
                  std::span<const double> key_frequencies, const AnalyzerOptions& options,
                  std::span<double> out_mw) {
  const auto& bursts = timeline.bursts();
  const double dwell = config.dwell();
  const std::size_t n = detail::samples_per_dwell(dwell, options.oversampling_hz);
  const double step = dwell / static_cast<double>(n);
  const double noise_mw = timeline.noise_power_mw(config.rbw);
  const double dof = dwell * config.rbw;
  const std::uint64_t base = detail::sweep_noise_base(options, timeline, start);

  std::size_t first = timeline.first_burst_ending_after(start);
  for (std::size_t i = 0; i < out_mw.size(); ++i) {
    const double slot_begin = detail::slot_start(start, dwell, i);
    const double slot_end = slot_begin + dwell;
    while (first < bursts.size() && bursts[first].end() <= slot_begin) ++first;

    double weighted = 0.0;
    double peak = 0.0;
    double last = 0.0;
    for (std::size_t k = first; k < bursts.size() && bursts[k].start < slot_end; ++k) {
      const std::size_t lo = count_before(slot_begin, step, n, bursts[k].start);
      const std::size_t hi = count_before(slot_begin, step, n, bursts[k].end());
      if (hi <= lo) continue;
      const double p = timeline.burst_power_mw(k);
      weighted += static_cast<double>(hi - lo) * p;
      peak = std::max(peak, p);
      if (hi == n) last = p;
    }

    double signal = 0.0;
    switch (config.detector) {
      case Detector::rms: signal = weighted / static_cast<double>(n); break;
      case Detector::max: signal = peak; break;
      case Detector::sample: signal = last; break;
    }
    const std::uint64_t key = detail::slot_noise_key(base, detail::pick(key_frequencies, i), i);
    out_mw[i] = signal * detail::pick(responses, i) +
                detail::noise_component(options, config.detector, noise_mw, dof, key);
  }
}

}  // namespace wifiexp::sweep
