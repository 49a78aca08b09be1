#include "wifiexp/emission.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace wifiexp::emission {

namespace {

constexpr double kTouchTolerance = 1e-12;  // s

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be positive (got " << value << ")";
    throw Error(ErrorKind::invalid_duration, msg.str());
  }
}

// Merges bursts that touch and share the same power; input must be sorted.
std::vector<BurstInterval> coalesce(std::vector<BurstInterval> bursts) {
  std::vector<BurstInterval> out;
  out.reserve(bursts.size());
  for (const auto& b : bursts) {
    if (b.duration <= 0.0) continue;
    if (!out.empty() && out.back().total_power_dbm == b.total_power_dbm &&
        std::abs(out.back().end() - b.start) <= kTouchTolerance) {
      out.back().duration = b.end() - out.back().start;
    } else {
      out.push_back(b);
    }
  }
  return out;
}

std::vector<BurstInterval> beacon_train(const SignalParams& s, double total_duration) {
  std::vector<BurstInterval> bursts;
  const auto count = static_cast<std::size_t>(std::ceil(total_duration / s.beacon_period - 1e-9));
  bursts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double start = static_cast<double>(k) * s.beacon_period;
    if (start >= total_duration) break;
    const double duration = std::min(s.beacon_duration, total_duration - start);
    bursts.push_back({start, duration, s.beacon_power_dbm});
  }
  return bursts;
}

// Pieces of [start, end) not covered by beacons.
void append_outside_beacons(const SignalParams& s, double start, double end, double power_dbm,
                            std::vector<BurstInterval>& out) {
  double cur = start;
  for (auto k = static_cast<std::int64_t>(std::floor(start / s.beacon_period));
       static_cast<double>(k) * s.beacon_period < end; ++k) {
    const double bs = static_cast<double>(k) * s.beacon_period;
    const double be = bs + s.beacon_duration;
    if (be <= cur) continue;
    if (bs > cur) out.push_back({cur, std::min(bs, end) - cur, power_dbm});
    cur = std::max(cur, be);
  }
  if (cur < end) out.push_back({cur, end - cur, power_dbm});
}

void apply_power_jitter(std::vector<BurstInterval>& bursts, double sigma_db, std::uint64_t seed) {
  if (sigma_db <= 0.0) return;
  std::mt19937_64 rng(hash_combine(seed, 0x6A17));
  std::normal_distribution<double> jitter(0.0, sigma_db);
  for (auto& b : bursts) b.total_power_dbm += jitter(rng);
}

EmissionTimeline finish(std::vector<BurstInterval> bursts, const SignalParams& s,
                        double total_duration, std::uint64_t seed) {
  std::sort(bursts.begin(), bursts.end(),
            [](const BurstInterval& a, const BurstInterval& b) { return a.start < b.start; });
  bursts = coalesce(std::move(bursts));
  apply_power_jitter(bursts, s.power_jitter_db, seed);
  return EmissionTimeline(std::move(bursts), SpectralMask::ieee80211g(s.center_frequency),
                          s.noise_floor_dbm, s.noise_reference_bandwidth, total_duration, seed);
}

void validate_signal(const SignalParams& s) {
  require_positive(s.beacon_duration, "beacon_duration");
  require_positive(s.beacon_period, "beacon_period");
  if (s.beacon_duration > s.beacon_period) {
    throw Error(ErrorKind::invalid_duration, "beacon_duration exceeds beacon_period");
  }
  require_positive(s.noise_reference_bandwidth, "noise_reference_bandwidth");
  if (s.download_occupancy < 0.0 || s.download_occupancy > 1.0) {
    throw Error(ErrorKind::invalid_scenario, "download_occupancy must lie in [0, 1]");
  }
  if (s.power_jitter_db < 0.0) {
    throw Error(ErrorKind::invalid_scenario, "power_jitter_db must be nonnegative");
  }
}

}  // namespace

SpectralMask SpectralMask::ieee80211g(double center_frequency) {
  SpectralMask mask;
  mask.center_frequency = center_frequency;
  for (int k = -26; k <= 26; ++k) {
    if (k != 0) mask.active_subcarriers.push_back(k);
  }
  mask.relative_power.assign(mask.active_subcarriers.size(),
                             1.0 / static_cast<double>(mask.active_subcarriers.size()));
  return mask;
}

double SpectralMask::fraction_in_window(double lo, double hi) const {
  constexpr double slack = 1e-6;  // Hz
  double share = 0.0;
  for (std::size_t i = 0; i < active_subcarriers.size(); ++i) {
    const double f = line_frequency(i);
    if (f >= lo - slack && f <= hi + slack) share += relative_power[i];
  }
  return share;
}

void SpectralMask::validate() const {
  if (!(subcarrier_spacing > 0.0) || !(channel_bandwidth > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "mask spacing and bandwidth must be positive");
  }
  if (active_subcarriers.size() != relative_power.size() || active_subcarriers.empty()) {
    throw Error(ErrorKind::invalid_argument, "mask needs one relative power per active subcarrier");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < relative_power.size(); ++i) {
    if (relative_power[i] < 0.0) throw Error(ErrorKind::invalid_argument, "negative line power");
    if (active_subcarriers[i] == 0 && relative_power[i] != 0.0) {
      throw Error(ErrorKind::invalid_argument, "subcarrier 0 must carry zero power");
    }
    sum += relative_power[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, "relative line powers must sum to 1");
  }
}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::idle: return "idle";
    case ScenarioKind::file1: return "file1";
    case ScenarioKind::file2: return "file2";
    case ScenarioKind::file3: return "file3";
    case ScenarioKind::custom: return "custom";
  }
  return "custom";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "idle") return ScenarioKind::idle;
  if (name == "file1") return ScenarioKind::file1;
  if (name == "file2") return ScenarioKind::file2;
  if (name == "file3") return ScenarioKind::file3;
  if (name == "custom") return ScenarioKind::custom;
  throw Error(ErrorKind::parse_error, "unknown scenario kind '" + name + "'");
}

ScenarioSpec ScenarioSpec::preset(ScenarioKind kind) {
  ScenarioSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ScenarioKind::file1: spec.download_min = 2.0; spec.download_max = 6.0; break;
    case ScenarioKind::file2: spec.download_min = 50.0; spec.download_max = 60.0; break;
    case ScenarioKind::file3: spec.download_min = 228.0; spec.download_max = 240.0; break;
    case ScenarioKind::idle:
    case ScenarioKind::custom: break;
  }
  return spec;
}

void ScenarioSpec::validate() const {
  validate_signal(signal);
  if (!(measurement_duration > 0.0)) {
    throw Error(ErrorKind::invalid_scenario, "measurement_duration must be positive");
  }
  if (!activity_profile.empty()) {
    if (activity_profile.size() != 24) {
      throw Error(ErrorKind::invalid_scenario, "activity_profile needs 24 hourly weights");
    }
    for (double w : activity_profile) {
      if (w < 0.0 || w > 1.0) {
        throw Error(ErrorKind::invalid_scenario, "activity weights must lie in [0, 1]");
      }
    }
  }
  if (kind == ScenarioKind::idle || !activity_profile.empty()) return;
  if (download_min < 0.0 || download_max < download_min) {
    throw Error(ErrorKind::invalid_scenario, "download range must be nonempty and nonnegative");
  }
  if (traffic_start < 0.0 || traffic_start + download_max > measurement_duration) {
    throw Error(ErrorKind::invalid_scenario, "download does not fit in the measurement window");
  }
}

EmissionTimeline::EmissionTimeline(std::vector<BurstInterval> bursts, SpectralMask mask,
                                   double noise_floor_dbm, double noise_reference_bandwidth,
                                   double total_duration, std::uint64_t seed)
    : bursts_(std::move(bursts)),
      mask_(std::move(mask)),
      noise_floor_dbm_(noise_floor_dbm),
      noise_reference_bandwidth_(noise_reference_bandwidth),
      total_duration_(total_duration),
      seed_(seed) {
  require_positive(total_duration_, "total_duration");
  require_positive(noise_reference_bandwidth_, "noise_reference_bandwidth");
  mask_.validate();
  burst_power_mw_.reserve(bursts_.size());
  double prev_end = 0.0;
  for (const auto& b : bursts_) {
    if (!(b.duration > 0.0)) throw Error(ErrorKind::invalid_duration, "burst duration must be > 0");
    if (b.start < prev_end - kTouchTolerance) {
      throw Error(ErrorKind::invalid_argument, "bursts must be sorted and non-overlapping");
    }
    if (b.start < 0.0 || b.end() > total_duration_ + kTouchTolerance) {
      throw Error(ErrorKind::out_of_window, "burst outside the timeline window");
    }
    prev_end = b.end();
    burst_power_mw_.push_back(dbm_to_mw(b.total_power_dbm));
  }
}

double EmissionTimeline::duty_cycle() const {
  std::vector<double> durations;
  durations.reserve(bursts_.size());
  for (const auto& b : bursts_) durations.push_back(b.duration);
  return compensated_sum(durations) / total_duration_;
}

double EmissionTimeline::noise_power_mw(double bandwidth) const {
  return dbm_to_mw(noise_floor_dbm_) * bandwidth / noise_reference_bandwidth_;
}

std::size_t EmissionTimeline::first_burst_ending_after(double t) const {
  auto it = std::partition_point(bursts_.begin(), bursts_.end(),
                                 [t](const BurstInterval& b) { return b.end() <= t; });
  return static_cast<std::size_t>(it - bursts_.begin());
}

std::optional<std::size_t> EmissionTimeline::burst_at(double t) const {
  const std::size_t i = first_burst_ending_after(t);
  if (i < bursts_.size() && bursts_[i].start <= t) return i;
  return std::nullopt;
}

bool EmissionTimeline::operator==(const EmissionTimeline& other) const {
  if (bursts_.size() != other.bursts_.size()) return false;
  for (std::size_t i = 0; i < bursts_.size(); ++i) {
    const auto& a = bursts_[i];
    const auto& b = other.bursts_[i];
    if (a.start != b.start || a.duration != b.duration || a.total_power_dbm != b.total_power_dbm) {
      return false;
    }
  }
  return mask_.active_subcarriers == other.mask_.active_subcarriers &&
         mask_.relative_power == other.mask_.relative_power &&
         mask_.center_frequency == other.mask_.center_frequency &&
         noise_floor_dbm_ == other.noise_floor_dbm_ &&
         noise_reference_bandwidth_ == other.noise_reference_bandwidth_ &&
         total_duration_ == other.total_duration_ && seed_ == other.seed_;
}

EmissionTimeline build_idle_timeline(double beacon_duration, double beacon_period,
                                     double total_duration, double beacon_power_dbm,
                                     double noise_floor_dbm) {
  SignalParams s;
  s.beacon_duration = beacon_duration;
  s.beacon_period = beacon_period;
  s.beacon_power_dbm = beacon_power_dbm;
  s.noise_floor_dbm = noise_floor_dbm;
  return build_idle_timeline(s, total_duration);
}

EmissionTimeline build_idle_timeline(const SignalParams& signal, double total_duration) {
  validate_signal(signal);
  require_positive(total_duration, "total_duration");
  return finish(beacon_train(signal, total_duration), signal, total_duration, 0);
}

double draw_download_duration(const ScenarioSpec& spec, std::uint64_t seed) {
  if (spec.download_max == spec.download_min) return spec.download_min;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(spec.download_min, spec.download_max);
  return dist(rng);
}

EmissionTimeline build_traffic_timeline(const ScenarioSpec& spec, std::uint64_t seed) {
  if (spec.kind == ScenarioKind::idle) {
    throw Error(ErrorKind::invalid_scenario, "idle scenario has no traffic; use build_idle_timeline");
  }
  spec.validate();
  const SignalParams& s = spec.signal;
  const double window = spec.measurement_duration;
  const double download = draw_download_duration(spec, seed);
  const double t_start = spec.traffic_start;
  const double t_end = t_start + download;
  if (t_end > window) {
    throw Error(ErrorKind::invalid_scenario, "window cannot contain the drawn download");
  }

  auto bursts = beacon_train(s, window);
  const double occupied =
      std::min(s.download_occupancy * s.beacon_period, s.beacon_period - s.beacon_duration);
  if (download > 0.0 && occupied > 0.0) {
    for (auto k = static_cast<std::int64_t>(std::floor(t_start / s.beacon_period));
         static_cast<double>(k) * s.beacon_period < t_end; ++k) {
      const double beacon_end = static_cast<double>(k) * s.beacon_period + s.beacon_duration;
      const double next_beacon = static_cast<double>(k + 1) * s.beacon_period;
      const double seg_start = std::max(t_start, beacon_end);
      const double seg_end = std::min({t_end, beacon_end + occupied, next_beacon});
      if (seg_end > seg_start) bursts.push_back({seg_start, seg_end - seg_start, s.data_power_dbm});
    }
  }
  return finish(std::move(bursts), s, window, seed);
}

EmissionTimeline build_activity_timeline(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.activity_profile.empty()) {
    throw Error(ErrorKind::invalid_scenario, "activity timeline needs an activity_profile");
  }
  const SignalParams& s = spec.signal;
  const double window = spec.measurement_duration;
  constexpr double kHour = 3600.0;
  constexpr double kMeanBurst = 0.05;  // s, one aggregated transfer

  auto bursts = beacon_train(s, window);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> unit_exp(1.0);
  double t = 0.0;
  while (t < window) {
    const auto hour = static_cast<std::size_t>(std::floor(t / kHour)) % 24;
    const double w = spec.activity_profile[hour];
    if (w <= 0.0) {
      t = (std::floor(t / kHour) + 1.0) * kHour;
      continue;
    }
    const double len = kMeanBurst * unit_exp(rng);
    const double gap = w >= 1.0 ? 0.0 : kMeanBurst * (1.0 - w) / w * unit_exp(rng);
    append_outside_beacons(s, t, std::min(t + len, window), s.data_power_dbm, bursts);
    t += len + gap;
  }
  return finish(std::move(bursts), s, window, seed);
}

double instantaneous_power(const EmissionTimeline& timeline, double t, double f,
                           double bandwidth) {
  if (t < 0.0 || t > timeline.total_duration()) {
    throw Error(ErrorKind::out_of_window, "time outside the emission timeline");
  }
  if (!(bandwidth > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "measurement bandwidth must be positive");
  }
  double power = timeline.noise_power_mw(bandwidth);
  if (auto idx = timeline.burst_at(t)) {
    power += timeline.burst_power_mw(*idx) *
             timeline.mask().fraction_in_window(f - bandwidth / 2.0, f + bandwidth / 2.0);
  }
  return power;
}

}  // namespace wifiexp::emission
