#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include "wifiexp/sweep.hpp"

namespace wifiexp::sweep::detail {

inline std::size_t samples_per_dwell(double dwell, double oversampling_hz) {
  const double n = std::ceil(dwell * oversampling_hz - 1e-9);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

inline double slot_start(double start, double dwell, std::size_t i) {
  return start + static_cast<double>(i) * dwell;
}

inline double sample_instant(double slot_begin, double step, std::size_t j) {
  return slot_begin + (static_cast<double>(j) + 0.5) * step;
}

inline double pick(std::span<const double> values, std::size_t i) {
  return values.size() == 1 ? values[0] : values[i];
}

inline std::uint64_t sweep_noise_base(const AnalyzerOptions& options,
                                      const emission::EmissionTimeline& timeline, double start) {
  return hash_combine(hash_combine(options.noise_key, timeline.seed()), hash_double(start));
}

inline std::uint64_t slot_noise_key(std::uint64_t base, double key_frequency, std::size_t i) {
  return hash_combine(base, hash_combine(hash_double(key_frequency), i));
}

inline double noise_component(const AnalyzerOptions& options, Detector detector, double noise_mw,
                              double dof, std::uint64_t key) {
  if (!options.detector_noise) return noise_mw;
  return noise_mw * detector_fluctuation(detector, dof, key);
}

}  // namespace wifiexp::sweep::detail
