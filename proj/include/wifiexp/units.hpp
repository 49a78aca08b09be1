#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace wifiexp {

enum class ErrorKind {
  invalid_argument,
  invalid_duration,
  invalid_scenario,
  out_of_window,
  config_invalid,
  window_overrun,
  grid_mismatch,
  channel_not_covered,
  empty_input,
  zero_reference,
  degenerate_group,
  insufficient_coverage,
  no_qualifying_config,
  parse_error,
  io_error,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the toolkit carries a kind so callers (and the
/// campaign failure manifest) can classify it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

constexpr double kMHz = 1e6;
constexpr double kKHz = 1e3;

double dbm_to_mw(double dbm);
/// Returns -inf for zero power.
double mw_to_dbm(double mw);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

/// splitmix64 finalizer; used to derive independent stream keys.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_double(double value);

/// Counter-style generator satisfying UniformRandomBitGenerator. Cheap to
/// construct, so one can be made per (sweep, point) key.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace wifiexp
