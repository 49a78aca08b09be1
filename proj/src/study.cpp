#include "wifiexp/study.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace wifiexp::study {

const char* to_string(Direction direction) {
  switch (direction) {
    case Direction::over: return "over";
    case Direction::under: return "under";
    case Direction::mixed: return "mixed";
  }
  return "mixed";
}

Direction direction_from_string(const std::string& name) {
  if (name == "over") return Direction::over;
  if (name == "under") return Direction::under;
  if (name == "mixed") return Direction::mixed;
  throw Error(ErrorKind::parse_error, "unknown direction '" + name + "'");
}

namespace {

void summarize(ErrorReport& report) {
  if (report.e_percent.empty()) throw Error(ErrorKind::empty_input, "report has no runs");
  report.mean_error = stats::mean(report.e_percent);
  const auto [lo, hi] = std::minmax_element(report.e_percent.begin(), report.e_percent.end());
  report.min_error = *lo;
  report.max_error = *hi;
  report.mean_error = std::clamp(report.mean_error, report.min_error, report.max_error);
}

auto ranking(const ErrorReport& r) {
  const auto& c = r.config;
  return std::make_tuple(r.mean_error, c.swt, c.rbw, c.vbw, c.span, c.swp,
                         static_cast<int>(c.detector), static_cast<int>(c.trace_mode),
                         c.center_frequency, c.sweep_period);
}

}  // namespace

ErrorReport make_error_report(const sweep::SweepConfig& config,
                              std::vector<double> run_p50_dbm, double reference_dbm,
                              std::vector<std::uint64_t> run_seeds) {
  if (run_p50_dbm.empty()) throw Error(ErrorKind::empty_input, "no runs to report");
  ErrorReport report;
  report.config = config;
  report.reference_dbm = reference_dbm;
  report.run_seeds = std::move(run_seeds);
  const double ref_mw = dbm_to_mw(reference_dbm);
  for (double p50 : run_p50_dbm) {
    report.e_percent.push_back(stats::relative_error_eq2(ref_mw, dbm_to_mw(p50)));
    if (p50 > reference_dbm) ++report.runs_over;
    if (p50 < reference_dbm) ++report.runs_under;
  }
  report.run_p50_dbm = std::move(run_p50_dbm);
  summarize(report);
  const double central = stats::median(report.run_p50_dbm);
  report.direction = central > reference_dbm   ? Direction::over
                     : central < reference_dbm ? Direction::under
                                               : Direction::mixed;
  return report;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) {
  return hash_combine(base_seed, run);
}

std::uint64_t config_key(const sweep::SweepConfig& c) {
  std::uint64_t key = hash_double(c.center_frequency);
  for (double v : {c.span, c.rbw, c.vbw, c.swt, c.sweep_period}) key = hash_combine(key, hash_double(v));
  key = hash_combine(key, static_cast<std::uint64_t>(c.swp));
  key = hash_combine(key, static_cast<std::uint64_t>(c.detector));
  return hash_combine(key, static_cast<std::uint64_t>(c.trace_mode));
}

sweep::RunAcquisition acquire_study_run(const emission::EmissionTimeline& timeline,
                                        const sweep::SweepConfig& config, std::uint64_t seed,
                                        const StudyOptions& options) {
  const auto sweeps = static_cast<std::size_t>(
      std::floor(options.measurement_duration / config.sweep_period + 1e-9));
  const std::uint64_t key = hash_combine(seed, config_key(config));
  const auto starts = sweep::sweep_schedule(config, 0.0, sweeps, timeline.total_duration(), key);
  auto analyzer = options.analyzer;
  analyzer.noise_key = hash_combine(analyzer.noise_key, key);
  return sweep::acquire_run(timeline, config, starts, analyzer, options.channel_bandwidth);
}

std::vector<double> measure_run(const emission::EmissionTimeline& timeline,
                                const sweep::SweepConfig& config, std::uint64_t seed,
                                const StudyOptions& options) {
  return acquire_study_run(timeline, config, seed, options).channel_power_dbm;
}

double comparison_level_dbm(const reference::ReferencePower& reference) {
  return reference.median_channel_dbm.value_or(reference.p_channel_dbm);
}

std::vector<ErrorReport> run_phase2_study(const reference::ReferencePower& reference,
                                          std::span<const sweep::SweepConfig> configs,
                                          int runs_per_config, const StudyOptions& options,
                                          const emission::SignalParams& signal) {
  if (configs.empty()) throw Error(ErrorKind::empty_input, "configuration grid is empty");
  if (runs_per_config < 1) throw Error(ErrorKind::invalid_argument, "runs_per_config must be >= 1");
  for (const auto& c : configs) c.validate();
  const auto timeline = emission::build_idle_timeline(signal, options.measurement_duration);
  const double ref_dbm = comparison_level_dbm(reference);

  std::vector<ErrorReport> reports;
  for (const auto& config : configs) {
    std::vector<double> p50s;
    std::vector<std::uint64_t> seeds;
    std::size_t samples = 0;
    for (int r = 0; r < runs_per_config; ++r) {
      const auto seed = run_seed(options.base_seed, static_cast<std::size_t>(r));
      const auto run = measure_run(timeline, config, seed, options);
      samples = run.size();
      p50s.push_back(stats::median(run));
      seeds.push_back(seed);
    }
    reports.push_back(make_error_report(config, std::move(p50s), ref_dbm, std::move(seeds)));
    reports.back().samples_per_run = samples;
  }
  return reports;
}

emission::EmissionTimeline scenario_timeline(const emission::ScenarioSpec& spec,
                                             std::uint64_t seed) {
  if (!spec.activity_profile.empty()) return emission::build_activity_timeline(spec, seed);
  if (spec.kind == emission::ScenarioKind::idle) {
    return emission::build_idle_timeline(spec.signal, spec.measurement_duration);
  }
  return emission::build_traffic_timeline(spec, seed);
}

ScenarioStudy run_scenario_study(const emission::ScenarioSpec& spec,
                                 std::span<const sweep::SweepConfig> configs, int runs_per_config,
                                 const Phase3Options& options, std::uint64_t scenario_seed) {
  if (configs.empty()) throw Error(ErrorKind::empty_input, "traffic study needs configs");
  if (runs_per_config < 1) throw Error(ErrorKind::invalid_argument, "runs_per_config must be >= 1");
  for (const auto& c : configs) c.validate();
  spec.validate();
  ScenarioStudy study;
  study.scenario = spec;
  study.cells.resize(configs.size());
  for (std::size_t ci = 0; ci < configs.size(); ++ci) study.cells[ci].config = configs[ci];

  StudyOptions run_options = options.study;
  run_options.measurement_duration = spec.measurement_duration;
  for (int r = 0; r < runs_per_config; ++r) {
    const auto seed = run_seed(scenario_seed, static_cast<std::size_t>(r));
    const auto timeline = scenario_timeline(spec, seed);
    const double duty = 100.0 * timeline.duty_cycle();
    study.run_seeds.push_back(seed);
    study.true_duty_percent.push_back(duty);
    for (auto& cell : study.cells) {
      auto samples = measure_run(timeline, cell.config, seed, run_options);
      const auto transition =
          stats::transition_percentile(stats::EmpiricalCdf(samples), options.transition);
      const double apparent_busy = transition ? 100.0 - *transition : 0.0;
      cell.transitions.push_back(transition);
      cell.busy_error_percent.push_back(stats::relative_error_eq2(duty, apparent_busy));
      cell.run_samples_dbm.push_back(std::move(samples));
    }
  }

  for (auto& cell : study.cells) {
    std::vector<double> present;
    for (const auto& t : cell.transitions) {
      if (t) present.push_back(*t);
    }
    cell.mean_transition = present.empty() ? 0.0 : stats::mean(present);
    cell.mean_busy_error = stats::mean(cell.busy_error_percent);
    cell.table = stats::build_percentile_table(
        cell.run_samples_dbm, options.percentiles,
        std::string(emission::to_string(spec.kind)) + " " + cell.config.label());
  }

  if (study.cells.size() >= 2) {
    const auto& base = study.cells[0].run_samples_dbm;
    const auto& other = study.cells[1].run_samples_dbm;
    std::vector<double> f_values;
    for (std::size_t r = 0; r < base.size(); ++r) {
      study.run_variance_ratios.push_back(stats::variance_ratio_test(other[r], base[r]));
      f_values.push_back(study.run_variance_ratios.back().f_value);
    }
    stats::AnovaResult summary = study.run_variance_ratios.front();
    summary.f_value = stats::median(f_values);
    summary.p_value = stats::f_survival(summary.f_value, summary.dof_between, summary.dof_within);
    study.variance_ratio = summary;
    study.oneway = stats::anova_oneway({base.front(), other.front()});
  }
  return study;
}

std::vector<ScenarioStudy> run_phase3_study(std::span<const emission::ScenarioSpec> scenarios,
                                            std::span<const sweep::SweepConfig> configs,
                                            int runs_per_config, const Phase3Options& options) {
  if (scenarios.empty()) throw Error(ErrorKind::empty_input, "traffic study needs scenarios");
  std::vector<ScenarioStudy> studies;
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    studies.push_back(run_scenario_study(scenarios[si], configs, runs_per_config, options,
                                         hash_combine(options.study.base_seed, si)));
  }
  return studies;
}

sweep::SweepConfig recommend_config(std::span<const ErrorReport> reports) {
  if (reports.empty()) throw Error(ErrorKind::empty_input, "no reports to choose from");
  const ErrorReport* best = nullptr;
  for (const auto& r : reports) {
    if (r.direction == Direction::under) continue;
    if (!best || ranking(r) < ranking(*best)) best = &r;
  }
  if (!best) {
    throw Error(ErrorKind::no_qualifying_config, "every configuration underestimates exposure");
  }
  return best->config;
}

std::vector<ErrorReport> traffic_candidates(std::span<const ErrorReport> idle_reports,
                                            std::span<const ScenarioStudy> traffic) {
  if (traffic.empty()) throw Error(ErrorKind::empty_input, "no traffic studies");
  std::vector<ErrorReport> candidates;
  for (const auto& study : traffic) {
    for (const auto& cell : study.cells) {
      auto it = std::find_if(candidates.begin(), candidates.end(),
                             [&](const ErrorReport& r) { return r.config == cell.config; });
      if (it == candidates.end()) {
        ErrorReport fresh;
        fresh.config = cell.config;
        auto idle = std::find_if(idle_reports.begin(), idle_reports.end(),
                                 [&](const ErrorReport& r) { return r.config == cell.config; });
        fresh.direction = idle == idle_reports.end() ? Direction::mixed : idle->direction;
        if (idle != idle_reports.end()) {
          fresh.runs_over = idle->runs_over;
          fresh.runs_under = idle->runs_under;
          fresh.reference_dbm = idle->reference_dbm;
        }
        candidates.push_back(std::move(fresh));
        it = std::prev(candidates.end());
      }
      it->e_percent.insert(it->e_percent.end(), cell.busy_error_percent.begin(),
                           cell.busy_error_percent.end());
    }
  }
  for (auto& c : candidates) summarize(c);
  return candidates;
}

sweep::SweepConfig recommend_from_studies(std::span<const ErrorReport> idle_reports,
                                          std::span<const ScenarioStudy> traffic) {
  return recommend_config(traffic_candidates(idle_reports, traffic));
}

}  // namespace wifiexp::study
