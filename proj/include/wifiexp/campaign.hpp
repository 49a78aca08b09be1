#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wifiexp/plot.hpp"
#include "wifiexp/reference.hpp"
#include "wifiexp/study.hpp"

namespace wifiexp::campaign {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "WIFIEXP_OUT_DIR";

enum class Phase { phase1, phase2, phase3, daily };

const char* to_string(Phase phase);
Phase phase_from_string(const std::string& name);

struct OutputToggles {
  bool traces = false;
  bool cdfs = false;
  bool percentile_tables = false;
  bool anova = false;
  bool recommendation = false;
  bool plots = false;

  bool any() const { return traces || cdfs || percentile_tables || anova || recommendation || plots; }
  static OutputToggles from_names(const std::vector<std::string>& names);
  std::vector<std::string> names() const;
};

struct CampaignSpec {
  std::string name = "campaign";
  Phase phase = Phase::phase2;
  std::vector<emission::ScenarioSpec> scenarios{emission::ScenarioSpec{}};
  std::vector<sweep::SweepConfig> config_grid;
  /// Grid combinations dropped because they fail config validation.
  std::vector<std::string> skipped_configs;
  int runs_per_cell = 1;
  std::uint64_t base_seed = 1;
  OutputToggles outputs;
  std::filesystem::path output_directory;

  sweep::SweepConfig zero_span = sweep::SweepConfig::reference_zero_span();
  reference::Phase1Options phase1;
  std::optional<std::filesystem::path> reference_file;

  std::vector<double> percentiles{50, 90, 95, 99};
  stats::TransitionOptions transition{stats::TransitionRule::floor_offset, 10.0};
  double profile_bucket = 3600.0;
  bool detector_noise = true;

  void validate() const;
};

/// Relative paths inside the spec resolve against base_dir.
CampaignSpec parse_campaign_spec(const std::string& text,
                                 const std::filesystem::path& base_dir = {});
CampaignSpec load_campaign_spec(const std::filesystem::path& path);

struct Failure {
  std::string cell;
  std::string kind;
  std::string message;
};

struct CellProvenance {
  std::string cell;
  std::string scenario;
  std::string config;
  std::vector<std::uint64_t> seeds;
};

struct AnovaRow {
  std::string scenario;
  stats::AnovaResult variance_ratio;
  std::optional<stats::AnovaResult> oneway;
};

struct CampaignReport {
  std::string name;
  Phase phase = Phase::phase2;
  std::uint64_t base_seed = 0;
  int runs_per_cell = 0;
  std::optional<reference::ReferencePower> reference;
  std::vector<std::string> reference_deviations;
  std::vector<std::string> skipped_configs;
  std::vector<study::ErrorReport> error_reports;
  std::vector<study::ScenarioStudy> scenarios;
  std::vector<AnovaRow> anova_rows;
  std::optional<sweep::SweepConfig> recommendation;
  std::vector<plot::ProfileBucket> daily_profile;
  std::vector<Failure> failures;
  std::vector<CellProvenance> provenance;
};

nlohmann::json report_to_json(const CampaignReport& report);
CampaignReport report_from_json(const nlohmann::json& j);

/// WIFIEXP_OUT_DIR when set, otherwise ./wifiexp-out.
std::filesystem::path default_output_root();

/// Runs every phase the spec asks for and writes the enabled artifacts.
/// Cell failures are collected in the report (and failures.json) instead of
/// aborting the campaign.
CampaignReport run_campaign(const CampaignSpec& spec);

/// Configuration choice across an idle-study report and a traffic-study
/// report; falls back to whichever kind is present.
sweep::SweepConfig recommend_across(const std::vector<CampaignReport>& reports);

}  // namespace wifiexp::campaign
