#include "wifiexp/units.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace wifiexp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_duration: return "invalid-duration";
    case ErrorKind::invalid_scenario: return "invalid-scenario";
    case ErrorKind::out_of_window: return "out-of-window";
    case ErrorKind::config_invalid: return "config-invalid";
    case ErrorKind::window_overrun: return "window-overrun";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::channel_not_covered: return "channel-not-covered";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::zero_reference: return "zero-reference";
    case ErrorKind::degenerate_group: return "degenerate-group";
    case ErrorKind::insufficient_coverage: return "insufficient-coverage";
    case ErrorKind::no_qualifying_config: return "no-qualifying-config";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (value + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
}

std::uint64_t hash_double(double value) {
  if (value == 0.0) value = 0.0;  // fold -0.0
  return mix64(std::bit_cast<std::uint64_t>(value));
}

}  // namespace wifiexp
