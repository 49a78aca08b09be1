#include "wifiexp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wifiexp::reference {

const char* to_string(ExtractionRule rule) {
  return rule == ExtractionRule::beacon_peak_sequence ? "beacon_peak_sequence" : "max_per_record";
}

ExtractionRule extraction_rule_from_string(const std::string& name) {
  if (name == "max_per_record") return ExtractionRule::max_per_record;
  if (name == "beacon_peak_sequence") return ExtractionRule::beacon_peak_sequence;
  throw Error(ErrorKind::parse_error, "unknown extraction rule '" + name + "'");
}

std::vector<double> reference_grid(double center) {
  std::vector<double> grid;
  grid.reserve(2 * kGridHalfCount + 1);
  for (int k = -kGridHalfCount; k <= kGridHalfCount; ++k) grid.push_back(center + k * kGridStep);
  return grid;
}

LevelHistogram::LevelHistogram(double lo_dbm, double hi_dbm, double bin_db)
    : lo_dbm_(lo_dbm),
      bin_db_(bin_db),
      bins_(static_cast<std::size_t>(std::ceil((hi_dbm - lo_dbm) / bin_db))) {
  if (!(hi_dbm > lo_dbm) || !(bin_db > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "histogram range must be nonempty");
  }
}

void LevelHistogram::add(double mw) {
  if (count_ == 0) {
    min_mw_ = max_mw_ = mw;
  } else {
    min_mw_ = std::min(min_mw_, mw);
    max_mw_ = std::max(max_mw_, mw);
  }
  ++count_;
  const double pos = (mw_to_dbm(mw) - lo_dbm_) / bin_db_;
  std::size_t bin = 0;
  if (pos >= static_cast<double>(bins_.size())) {
    bin = bins_.size() - 1;
  } else if (pos > 0.0) {
    bin = static_cast<std::size_t>(pos);
  }
  ++bins_[bin];
}

double LevelHistogram::value_at_rank(std::uint64_t rank) const {
  if (rank == 0) return mw_to_dbm(min_mw_);
  if (rank + 1 >= count_) return mw_to_dbm(max_mw_);
  std::uint64_t seen = 0;
  for (std::size_t b = 0; b < bins_.size(); ++b) {
    seen += bins_[b];
    if (seen > rank) {
      const double center = lo_dbm_ + (static_cast<double>(b) + 0.5) * bin_db_;
      return std::clamp(center, mw_to_dbm(min_mw_), mw_to_dbm(max_mw_));
    }
  }
  return mw_to_dbm(max_mw_);
}

double LevelHistogram::quantile_dbm(double q) const {
  if (count_ == 0) throw Error(ErrorKind::empty_input, "histogram is empty");
  if (q < 0.0 || q > 100.0) throw Error(ErrorKind::invalid_argument, "quantile outside [0, 100]");
  const double h = static_cast<double>(count_ - 1) * q / 100.0;
  const auto lo = static_cast<std::uint64_t>(std::floor(h));
  const double below = value_at_rank(lo);
  if (lo + 1 >= count_) return below;
  return below + (h - static_cast<double>(lo)) * (value_at_rank(lo + 1) - below);
}

namespace {

std::vector<std::string> deviations_from_reference(const sweep::SweepConfig& config,
                                                   double record_duration) {
  const auto expected = sweep::SweepConfig::reference_zero_span();
  std::vector<std::string> out;
  auto note = [&out](const char* field, double got, double want) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s = %g differs from the reference setting %g", field, got,
                  want);
    out.emplace_back(buf);
  };
  if (config.rbw != expected.rbw) note("rbw", config.rbw, expected.rbw);
  if (config.vbw != expected.vbw) note("vbw", config.vbw, expected.vbw);
  if (config.swt != expected.swt) note("swt", config.swt, expected.swt);
  if (config.swp != expected.swp) note("swp", config.swp, expected.swp);
  if (config.detector != expected.detector) out.emplace_back("detector is not rms");
  if (config.trace_mode != expected.trace_mode) out.emplace_back("trace mode is not clear_write");
  if (record_duration < 360.0) note("record_duration", record_duration, 360.0);
  return out;
}

}  // namespace

ReferenceCampaign run_phase1(const emission::EmissionTimeline& timeline,
                             const sweep::SweepConfig& zero_span_config,
                             const Phase1Options& options) {
  zero_span_config.validate();
  if (zero_span_config.span != 0.0) {
    throw Error(ErrorKind::config_invalid, "reference records need a zero-span config");
  }
  if (!(options.record_duration > 0.0)) {
    throw Error(ErrorKind::invalid_duration, "record_duration must be positive");
  }
  const auto records = static_cast<std::size_t>(
      std::max(1.0, std::round(options.record_duration / zero_span_config.swt)));
  if (static_cast<double>(records) * zero_span_config.swt >
      timeline.total_duration() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::window_overrun, "timeline is shorter than the record duration");
  }

  ReferenceCampaign campaign;
  campaign.frequency_grid = reference_grid(zero_span_config.center_frequency);
  campaign.record_duration = options.record_duration;
  campaign.extraction_rule = options.rule;
  campaign.config = zero_span_config;
  campaign.deviations = deviations_from_reference(zero_span_config, options.record_duration);
  campaign.per_frequency.resize(campaign.frequency_grid.size());

  const auto points = static_cast<std::size_t>(zero_span_config.swp);
  const double threshold_mw =
      timeline.noise_power_mw(zero_span_config.rbw) * dbm_to_mw(options.peak_threshold_db);
  const auto frequencies = static_cast<std::ptrdiff_t>(campaign.frequency_grid.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t fi = 0; fi < frequencies; ++fi) {
    auto& slot = campaign.per_frequency[static_cast<std::size_t>(fi)];
    const double frequency = campaign.frequency_grid[static_cast<std::size_t>(fi)];
    slot.frequency = frequency;
    slot.record_max_mw.reserve(records);
    const double response = sweep::mask_response(timeline.mask(), frequency, zero_span_config.rbw);
    std::vector<double> powers(points);
    for (std::size_t r = 0; r < records; ++r) {
      const double start = static_cast<double>(r) * zero_span_config.swt;
      sweep::detect_slots(timeline, zero_span_config, start, std::span<const double>(&response, 1),
                          std::span<const double>(&frequency, 1), options.analyzer, powers);
      sweep::apply_video_filter(zero_span_config, powers);

      double record_max = 0.0;
      double run_peak = 0.0;
      for (double p : powers) {
        slot.levels.add(p);
        record_max = std::max(record_max, p);
        if (p > threshold_mw) {
          run_peak = std::max(run_peak, p);
        } else if (run_peak > 0.0) {
          slot.beacon_peak_sum_mw += run_peak;
          ++slot.beacon_peak_count;
          run_peak = 0.0;
        }
      }
      if (run_peak > 0.0) {
        slot.beacon_peak_sum_mw += run_peak;
        ++slot.beacon_peak_count;
      }
      slot.record_max_mw.push_back(record_max);

      if (options.keep_records) {
        sweep::ZeroSpanSeries series;
        series.frequency = frequency;
        series.config = zero_span_config;
        series.times.resize(points);
        series.powers_dbm.resize(points);
        const double step = zero_span_config.swt / (zero_span_config.swp - 1);
        for (std::size_t i = 0; i < points; ++i) {
          series.times[i] = start + static_cast<double>(i) * step;
          series.powers_dbm[i] = mw_to_dbm(powers[i]);
        }
        series.powers_mw = powers;
        slot.records.push_back(std::move(series));
      }
    }
  }
  return campaign;
}

std::vector<double> extract_reference_levels(const ReferenceCampaign& campaign) {
  if (campaign.per_frequency.empty()) {
    throw Error(ErrorKind::empty_input, "campaign has no frequencies");
  }
  std::vector<double> levels;
  levels.reserve(campaign.per_frequency.size());
  for (const auto& f : campaign.per_frequency) {
    if (f.record_max_mw.empty()) throw Error(ErrorKind::empty_input, "frequency has no records");
    const double max_level = *std::max_element(f.record_max_mw.begin(), f.record_max_mw.end());
    if (campaign.extraction_rule == ExtractionRule::beacon_peak_sequence &&
        f.beacon_peak_count > 0) {
      levels.push_back(f.beacon_peak_sum_mw / static_cast<double>(f.beacon_peak_count));
    } else {
      levels.push_back(max_level);
    }
  }
  return levels;
}

ReferencePower channel_power_eq1(std::span<const double> levels_mw, double chbw, double rbw) {
  if (levels_mw.empty()) throw Error(ErrorKind::empty_input, "no per-frequency levels");
  if (!(rbw > 0.0) || !(chbw >= rbw)) {
    throw Error(ErrorKind::invalid_argument, "bandwidths must satisfy chbw >= rbw > 0");
  }
  ReferencePower out;
  out.per_frequency_levels.assign(levels_mw.begin(), levels_mw.end());
  out.chbw = chbw;
  out.rbw = rbw;
  out.n = levels_mw.size();
  out.p_channel_linear =
      chbw / rbw * compensated_sum(levels_mw) / static_cast<double>(levels_mw.size());
  out.p_channel_dbm = mw_to_dbm(out.p_channel_linear);
  return out;
}

double reference_quantile_dbm(const ReferenceCampaign& campaign, double q, double chbw) {
  if (campaign.per_frequency.empty()) {
    throw Error(ErrorKind::empty_input, "campaign has no frequencies");
  }
  std::vector<double> levels;
  levels.reserve(campaign.per_frequency.size());
  for (const auto& f : campaign.per_frequency) levels.push_back(dbm_to_mw(f.levels.quantile_dbm(q)));
  return channel_power_eq1(levels, chbw, campaign.config.rbw).p_channel_dbm;
}

ReferencePower assess_reference(const ReferenceCampaign& campaign, double chbw) {
  auto power = channel_power_eq1(extract_reference_levels(campaign), chbw, campaign.config.rbw);
  power.median_channel_dbm = reference_quantile_dbm(campaign, 50.0, chbw);
  return power;
}

}  // namespace wifiexp::reference
