#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wifiexp/emission.hpp"
#include "wifiexp/reference.hpp"
#include "wifiexp/stats.hpp"
#include "wifiexp/sweep.hpp"

namespace wifiexp::study {

enum class Direction { over, under, mixed };

const char* to_string(Direction direction);
Direction direction_from_string(const std::string& name);

struct ErrorReport {
  sweep::SweepConfig config;
  std::vector<double> e_percent;    // one per run
  std::vector<double> run_p50_dbm;  // one per run
  std::vector<std::uint64_t> run_seeds;
  double reference_dbm = 0.0;
  double mean_error = 0.0;
  double min_error = 0.0;
  double max_error = 0.0;
  Direction direction = Direction::mixed;
  int runs_over = 0;
  int runs_under = 0;
  std::size_t samples_per_run = 0;
};

/// Errors of per-run P50 channel powers against a reference level.
/// Direction follows the median of the P50s.
ErrorReport make_error_report(const sweep::SweepConfig& config,
                              std::vector<double> run_p50_dbm, double reference_dbm,
                              std::vector<std::uint64_t> run_seeds = {});

struct StudyOptions {
  std::uint64_t base_seed = 1;
  double measurement_duration = 360.0;
  double channel_bandwidth = 20e6;
  sweep::AnalyzerOptions analyzer;
};

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);
std::uint64_t config_key(const sweep::SweepConfig& config);

/// One measurement run: a sweep per sweep_period over the measurement window.
sweep::RunAcquisition acquire_study_run(const emission::EmissionTimeline& timeline,
                                        const sweep::SweepConfig& config, std::uint64_t seed,
                                        const StudyOptions& options);

/// Per-sweep channel powers (dBm) of one measurement run.
std::vector<double> measure_run(const emission::EmissionTimeline& timeline,
                                const sweep::SweepConfig& config, std::uint64_t seed,
                                const StudyOptions& options);

/// Level that measured P50s are compared against: the reference median
/// channel power when present, otherwise the extracted channel power.
double comparison_level_dbm(const reference::ReferencePower& reference);

/// Repeated idle-mode runs per config, each scored by the relative error of its P50.
std::vector<ErrorReport> run_phase2_study(const reference::ReferencePower& reference,
                                          std::span<const sweep::SweepConfig> configs,
                                          int runs_per_config, const StudyOptions& options = {},
                                          const emission::SignalParams& signal = {});

struct Phase3Cell {
  sweep::SweepConfig config;
  std::vector<std::vector<double>> run_samples_dbm;
  std::vector<std::optional<double>> transitions;
  std::vector<double> busy_error_percent;  // relative error of apparent vs true busy share
  stats::PercentileTable table;
  double mean_transition = 0.0;  // over runs with a transition
  double mean_busy_error = 0.0;
};

struct ScenarioStudy {
  emission::ScenarioSpec scenario;
  std::vector<std::uint64_t> run_seeds;
  std::vector<double> true_duty_percent;
  std::vector<Phase3Cell> cells;
  /// Variance ratio of cells[1] over cells[0] per run (same timeline).
  std::vector<stats::AnovaResult> run_variance_ratios;
  /// Median F over runs and its tail probability.
  std::optional<stats::AnovaResult> variance_ratio;
  /// Classical one-way ANOVA between cells[0] and cells[1] of run 0.
  std::optional<stats::AnovaResult> oneway;
};

struct Phase3Options {
  StudyOptions study;
  stats::TransitionOptions transition{stats::TransitionRule::floor_offset, 10.0};
  std::vector<double> percentiles{50, 90, 95, 99};
};

/// Ground truth of one run: activity profile when given, else idle or a
/// single download.
emission::EmissionTimeline scenario_timeline(const emission::ScenarioSpec& scenario,
                                             std::uint64_t seed);

/// One scenario of the traffic study; run r uses run_seed(scenario_seed, r).
ScenarioStudy run_scenario_study(const emission::ScenarioSpec& scenario,
                                 std::span<const sweep::SweepConfig> configs, int runs_per_config,
                                 const Phase3Options& options, std::uint64_t scenario_seed);

/// Scenario i is seeded with hash_combine(options.study.base_seed, i).
std::vector<ScenarioStudy> run_phase3_study(std::span<const emission::ScenarioSpec> scenarios,
                                            std::span<const sweep::SweepConfig> configs,
                                            int runs_per_config,
                                            const Phase3Options& options = {});

/// Lowest mean error among configs that do not underestimate; ties go to
/// smaller SWT, then RBW, then VBW.
sweep::SweepConfig recommend_config(std::span<const ErrorReport> reports);

/// Candidates are the traffic-study configs, excluding any config that the
/// idle study classifies as underestimating. Each candidate is scored by its
/// mean busy-share error over every scenario and run.
std::vector<ErrorReport> traffic_candidates(std::span<const ErrorReport> idle_reports,
                                            std::span<const ScenarioStudy> traffic);
sweep::SweepConfig recommend_from_studies(std::span<const ErrorReport> idle_reports,
                                          std::span<const ScenarioStudy> traffic);

}  // namespace wifiexp::study
