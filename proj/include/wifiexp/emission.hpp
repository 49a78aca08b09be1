#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wifiexp/units.hpp"

namespace wifiexp::emission {

/// Burst power that puts the maxima-based reference channel power of the
/// default idle signal at -43.07 dBm. Back-solved with the default mask,
/// noise floor and the 0.3 MHz Gaussian RBW (see tests/test_reference.cpp).
constexpr double kDefaultBurstPowerDbm = -43.6009;

/// Noise power in the 0.3 MHz reference bandwidth. Chosen so a noise-only
/// channel power over 20 MHz integrates to -71.40 dBm.
constexpr double kDefaultNoiseFloorDbm = -89.6391;
constexpr double kNoiseReferenceBandwidth = 0.3e6;

constexpr double kChannel1CenterHz = 2412e6;

/// OFDM line spectrum of one 20 MHz channel. Each active subcarrier is an
/// ideal line; index 0 (the carrier) is empty.
struct SpectralMask {
  double center_frequency = kChannel1CenterHz;
  double subcarrier_spacing = 312.5e3;
  std::vector<int> active_subcarriers;
  double channel_bandwidth = 20e6;
  std::vector<double> relative_power;  // parallel to active_subcarriers, sums to 1

  static SpectralMask ieee80211g(double center_frequency = kChannel1CenterHz);

  double line_frequency(std::size_t i) const {
    return center_frequency + active_subcarriers[i] * subcarrier_spacing;
  }
  /// Share of burst power on lines inside the closed window [lo, hi].
  double fraction_in_window(double lo, double hi) const;
  void validate() const;
};

struct BurstInterval {
  double start = 0.0;     // s
  double duration = 0.0;  // s
  double total_power_dbm = 0.0;

  double end() const { return start + duration; }
};

/// Emission parameters shared by every scenario kind.
struct SignalParams {
  double beacon_duration = 0.5e-3;
  double beacon_period = 50e-3;
  double beacon_power_dbm = kDefaultBurstPowerDbm;
  double data_power_dbm = kDefaultBurstPowerDbm;
  double noise_floor_dbm = kDefaultNoiseFloorDbm;
  double noise_reference_bandwidth = kNoiseReferenceBandwidth;
  /// Fraction of each beacon period carrying data while a download runs.
  /// Capped at the gap between beacons.
  double download_occupancy = 0.99;
  /// Std-dev (dB) of per-burst log-normal power jitter; 0 disables it.
  double power_jitter_db = 0.0;
  double center_frequency = kChannel1CenterHz;
};

enum class ScenarioKind { idle, file1, file2, file3, custom };

const char* to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::idle;
  double download_min = 0.0;  // s
  double download_max = 0.0;  // s
  double traffic_start = 60.0;
  double measurement_duration = 360.0;
  /// Optional 24 hourly occupancy weights in [0, 1] for day-long runs.
  std::vector<double> activity_profile;
  SignalParams signal;

  /// File 1/2/3 download ranges of the lab downloads; idle has none.
  static ScenarioSpec preset(ScenarioKind kind);
  void validate() const;
};

/// Ground-truth emission. Immutable after construction, so one instance can
/// be shared by concurrent sweeps.
class EmissionTimeline {
 public:
  EmissionTimeline(std::vector<BurstInterval> bursts, SpectralMask mask,
                   double noise_floor_dbm, double noise_reference_bandwidth,
                   double total_duration, std::uint64_t seed);

  const std::vector<BurstInterval>& bursts() const { return bursts_; }
  const SpectralMask& mask() const { return mask_; }
  double noise_floor_dbm() const { return noise_floor_dbm_; }
  double noise_reference_bandwidth() const { return noise_reference_bandwidth_; }
  double total_duration() const { return total_duration_; }
  std::uint64_t seed() const { return seed_; }

  double burst_power_mw(std::size_t i) const { return burst_power_mw_[i]; }
  double duty_cycle() const;
  /// Noise power (mW) in a bandwidth; linear in bandwidth.
  double noise_power_mw(double bandwidth) const;
  /// Index of the first burst whose end is strictly after t.
  std::size_t first_burst_ending_after(double t) const;
  std::optional<std::size_t> burst_at(double t) const;

  bool operator==(const EmissionTimeline& other) const;

 private:
  std::vector<BurstInterval> bursts_;
  std::vector<double> burst_power_mw_;
  SpectralMask mask_;
  double noise_floor_dbm_;
  double noise_reference_bandwidth_;
  double total_duration_;
  std::uint64_t seed_;
};

EmissionTimeline build_idle_timeline(double beacon_duration, double beacon_period,
                                     double total_duration, double beacon_power_dbm,
                                     double noise_floor_dbm);
EmissionTimeline build_idle_timeline(const SignalParams& signal, double total_duration);

/// Idle beacons over the whole window plus one download starting at
/// traffic_start with a seeded uniform duration.
EmissionTimeline build_traffic_timeline(const ScenarioSpec& spec, std::uint64_t seed);

/// Download duration drawn by build_traffic_timeline for (spec, seed).
double draw_download_duration(const ScenarioSpec& spec, std::uint64_t seed);

/// Beacons plus random data bursts whose hourly occupancy follows
/// spec.activity_profile (hour index = floor(t / 3600) mod 24).
EmissionTimeline build_activity_timeline(const ScenarioSpec& spec, std::uint64_t seed);

/// Linear power (mW) seen in a rectangular window of width bandwidth around f.
double instantaneous_power(const EmissionTimeline& timeline, double t, double f,
                           double bandwidth);

}  // namespace wifiexp::emission
