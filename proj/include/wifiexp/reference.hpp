#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wifiexp/emission.hpp"
#include "wifiexp/sweep.hpp"

namespace wifiexp::reference {

enum class ExtractionRule { max_per_record, beacon_peak_sequence };

const char* to_string(ExtractionRule rule);
ExtractionRule extraction_rule_from_string(const std::string& name);

constexpr int kGridHalfCount = 32;
constexpr double kGridStep = 312.5e3;

/// 65 frequencies center ± k * 312.5 kHz, k = 0..32, ascending.
std::vector<double> reference_grid(double center = emission::kChannel1CenterHz);

/// Level distribution of a long record sequence, binned in dB. The extremes
/// are kept exactly.
class LevelHistogram {
 public:
  explicit LevelHistogram(double lo_dbm = -160.0, double hi_dbm = 0.0, double bin_db = 1e-3);

  void add(double mw);
  std::uint64_t count() const { return count_; }
  double min_mw() const { return min_mw_; }
  double max_mw() const { return max_mw_; }
  /// Inclusive-interpolated quantile (q in percent) in dBm.
  double quantile_dbm(double q) const;

 private:
  double value_at_rank(std::uint64_t rank) const;

  double lo_dbm_;
  double bin_db_;
  std::vector<std::uint32_t> bins_;
  std::uint64_t count_ = 0;
  double min_mw_ = 0.0;
  double max_mw_ = 0.0;
};

struct FrequencyRecords {
  double frequency = 0.0;
  std::vector<double> record_max_mw;  // one per record
  double beacon_peak_sum_mw = 0.0;
  std::uint64_t beacon_peak_count = 0;
  LevelHistogram levels;
  std::vector<sweep::ZeroSpanSeries> records;  // filled only with keep_records
};

struct Phase1Options {
  double record_duration = 3600.0;
  ExtractionRule rule = ExtractionRule::max_per_record;
  bool keep_records = false;
  /// Samples this far above the noise floor count as beacon samples.
  double peak_threshold_db = 10.0;
  sweep::AnalyzerOptions analyzer;
};

struct ReferenceCampaign {
  std::vector<double> frequency_grid;
  std::vector<FrequencyRecords> per_frequency;
  double record_duration = 0.0;
  ExtractionRule extraction_rule = ExtractionRule::max_per_record;
  sweep::SweepConfig config;
  std::vector<std::string> deviations;
};

/// Back-to-back zero-span records at every grid frequency. Settings that
/// differ from the reference time-domain setup are recorded as deviations.
ReferenceCampaign run_phase1(const emission::EmissionTimeline& timeline,
                             const sweep::SweepConfig& zero_span_config,
                             const Phase1Options& options = {});

/// Per-frequency levels (mW) under the campaign's extraction rule.
std::vector<double> extract_reference_levels(const ReferenceCampaign& campaign);

struct ReferencePower {
  double p_channel_linear = 0.0;  // mW
  double p_channel_dbm = 0.0;
  std::vector<double> per_frequency_levels;  // mW
  double chbw = 20e6;
  double rbw = 0.3e6;
  std::size_t n = 0;
  /// Channel power of the per-frequency medians; the level that measured
  /// medians are compared against.
  std::optional<double> median_channel_dbm;
};

ReferencePower channel_power_eq1(std::span<const double> levels_mw, double chbw, double rbw);

/// Channel power of the per-frequency q-quantiles (q in percent), in dBm.
double reference_quantile_dbm(const ReferenceCampaign& campaign, double q,
                              double chbw = 20e6);

/// Extracted levels, their channel power, and the median channel power.
ReferencePower assess_reference(const ReferenceCampaign& campaign, double chbw = 20e6);

}  // namespace wifiexp::reference
