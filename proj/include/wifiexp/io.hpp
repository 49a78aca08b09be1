#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wifiexp/plot.hpp"
#include "wifiexp/reference.hpp"
#include "wifiexp/stats.hpp"
#include "wifiexp/study.hpp"
#include "wifiexp/sweep.hpp"

namespace wifiexp::io {

using nlohmann::json;

json to_json(const sweep::SweepConfig& config);
sweep::SweepConfig config_from_json(const json& j);

json to_json(const emission::ScenarioSpec& spec);
emission::ScenarioSpec scenario_from_json(const json& j);

/// {p_channel_dbm, chbw_hz, rbw_hz, n, p_i_dbm[]} plus exact linear copies
/// and the median channel power.
json to_json(const reference::ReferencePower& power);
reference::ReferencePower reference_from_json(const json& j);

json to_json(const stats::AnovaResult& result);
stats::AnovaResult anova_from_json(const json& j);

json to_json(const stats::PercentileTable& table);
stats::PercentileTable percentile_table_from_json(const json& j);

json to_json(const study::ErrorReport& report);
study::ErrorReport error_report_from_json(const json& j);

/// Summary of a traffic study; raw per-sweep samples are left out.
json to_json(const study::ScenarioStudy& study);
study::ScenarioStudy scenario_study_from_json(const json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Columns frequency_hz, power_dbm, sweep_start_s; one block per trace.
std::string traces_to_csv(std::span<const sweep::Trace> traces);
std::vector<sweep::Trace> traces_from_csv(const std::string& text);

/// Columns time_s, power_dbm.
std::string zero_span_to_csv(const sweep::ZeroSpanSeries& series);
sweep::ZeroSpanSeries zero_span_from_csv(const std::string& text);

/// Columns percentile, mean_dbm, min_dbm, max_dbm.
std::string percentile_table_to_csv(const stats::PercentileTable& table);
stats::PercentileTable percentile_table_from_csv(const std::string& text);

/// Columns power_dbm, cumulative_probability.
std::string cdf_to_csv(const stats::EmpiricalCdf& cdf);
stats::EmpiricalCdf cdf_from_csv(const std::string& text);

/// Columns sweep_index, sweep_start_s, channel_power_dbm.
std::string channel_series_to_csv(std::span<const double> starts, std::span<const double> powers_dbm);

/// Shortest text that parses back to the same double.
struct ChannelSeries {
  std::vector<double> sweep_starts;
  std::vector<double> powers_dbm;
};
ChannelSeries channel_series_from_csv(const std::string& text);

std::string profile_to_csv(std::span<const plot::ProfileBucket> buckets);
std::vector<plot::ProfileBucket> profile_from_csv(const std::string& text);

std::string format_double(double value);

}  // namespace wifiexp::io
