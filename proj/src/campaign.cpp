#include "wifiexp/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>

#include "wifiexp/io.hpp"
#include "wifiexp/kv_config.hpp"
#include "wifiexp/plot.hpp"

namespace wifiexp::campaign {

using nlohmann::json;

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::phase1: return "phase1";
    case Phase::phase2: return "phase2";
    case Phase::phase3: return "phase3";
    case Phase::daily: return "daily";
  }
  return "phase2";
}

Phase phase_from_string(const std::string& name) {
  if (name == "phase1") return Phase::phase1;
  if (name == "phase2") return Phase::phase2;
  if (name == "phase3") return Phase::phase3;
  if (name == "daily") return Phase::daily;
  throw Error(ErrorKind::config_invalid, "unknown phase '" + name + "'");
}

OutputToggles OutputToggles::from_names(const std::vector<std::string>& names) {
  OutputToggles t;
  for (const auto& n : names) {
    if (n == "traces") t.traces = true;
    else if (n == "cdfs") t.cdfs = true;
    else if (n == "percentile_tables") t.percentile_tables = true;
    else if (n == "anova") t.anova = true;
    else if (n == "recommendation") t.recommendation = true;
    else if (n == "plots") t.plots = true;
    else if (n == "all") t = {true, true, true, true, true, true};
    else throw Error(ErrorKind::config_invalid, "unknown output '" + n + "'");
  }
  return t;
}

std::vector<std::string> OutputToggles::names() const {
  std::vector<std::string> out;
  if (traces) out.emplace_back("traces");
  if (cdfs) out.emplace_back("cdfs");
  if (percentile_tables) out.emplace_back("percentile_tables");
  if (anova) out.emplace_back("anova");
  if (recommendation) out.emplace_back("recommendation");
  if (plots) out.emplace_back("plots");
  return out;
}

void CampaignSpec::validate() const {
  if (runs_per_cell < 1) throw Error(ErrorKind::config_invalid, "runs_per_cell must be >= 1");
  if (scenarios.empty()) throw Error(ErrorKind::config_invalid, "campaign needs a scenario");
  if (phase != Phase::phase1) {
    if (config_grid.empty()) throw Error(ErrorKind::config_invalid, "configuration grid is empty");
    for (const auto& c : config_grid) c.validate();
  }
  zero_span.validate();
  if (!(profile_bucket > 0.0)) throw Error(ErrorKind::config_invalid, "profile bucket must be > 0");
}

namespace {

const std::vector<std::string> kRootKeys = {"name", "phase", "seed", "runs_per_cell",
                                            "output_directory", "outputs"};
const std::vector<std::string> kScenarioKeys = {
    "kind", "kinds", "download_min_s", "download_max_s", "traffic_start_s",
    "measurement_duration_s", "activity_profile", "beacon_duration_s", "beacon_period_s",
    "beacon_power_dbm", "data_power_dbm", "noise_floor_dbm", "download_occupancy",
    "power_jitter_db"};
const std::vector<std::string> kReferenceKeys = {"record_duration_s", "extraction_rule", "file",
                                                 "rbw_mhz", "vbw_mhz", "swt_s", "swp",
                                                 "peak_threshold_db"};
const std::vector<std::string> kConfigKeys = {"rbw_mhz", "vbw_mhz", "swt_ms", "span_mhz", "swp",
                                              "detector", "trace_mode", "sweep_period_s",
                                              "center_mhz"};
const std::vector<std::string> kAnalysisKeys = {"percentiles", "transition_rule",
                                                "transition_threshold_db", "profile_bucket_s",
                                                "detector_noise"};

emission::ScenarioSpec scenario_from_table(const config::Table& t, emission::ScenarioKind kind) {
  auto s = emission::ScenarioSpec::preset(kind);
  s.download_min = t.number_or("download_min_s", s.download_min);
  s.download_max = t.number_or("download_max_s", s.download_max);
  s.traffic_start = t.number_or("traffic_start_s", s.traffic_start);
  s.measurement_duration = t.number_or("measurement_duration_s", s.measurement_duration);
  s.activity_profile = t.numbers_or("activity_profile", s.activity_profile);
  auto& g = s.signal;
  g.beacon_duration = t.number_or("beacon_duration_s", g.beacon_duration);
  g.beacon_period = t.number_or("beacon_period_s", g.beacon_period);
  g.beacon_power_dbm = t.number_or("beacon_power_dbm", g.beacon_power_dbm);
  g.data_power_dbm = t.number_or("data_power_dbm", g.data_power_dbm);
  g.noise_floor_dbm = t.number_or("noise_floor_dbm", g.noise_floor_dbm);
  g.download_occupancy = t.number_or("download_occupancy", g.download_occupancy);
  g.power_jitter_db = t.number_or("power_jitter_db", g.power_jitter_db);
  return s;
}

std::vector<sweep::SweepConfig> configs_from_table(const config::Table& t,
                                                   std::vector<std::string>* skipped) {
  const sweep::SweepConfig base;
  const auto rbws = t.numbers_or("rbw_mhz", {base.rbw / kMHz});
  const auto vbws = t.numbers_or("vbw_mhz", {base.vbw / kMHz});
  const auto swts = t.numbers_or("swt_ms", {base.swt * 1e3});
  const auto detectors = t.strings_or("detector", {sweep::to_string(base.detector)});
  const auto modes = t.strings_or("trace_mode", {sweep::to_string(base.trace_mode)});
  std::vector<sweep::SweepConfig> out;
  for (double rbw : rbws) {
    for (double vbw : vbws) {
      for (double swt : swts) {
        for (const auto& det : detectors) {
          for (const auto& mode : modes) {
            sweep::SweepConfig c;
            c.center_frequency = t.number_or("center_mhz", base.center_frequency / kMHz) * kMHz;
            c.span = t.number_or("span_mhz", base.span / kMHz) * kMHz;
            c.swp = static_cast<int>(t.integer_or("swp", base.swp));
            c.sweep_period = t.number_or("sweep_period_s", base.sweep_period);
            c.rbw = rbw * kMHz;
            c.vbw = vbw * kMHz;
            c.swt = swt * 1e-3;
            c.detector = sweep::detector_from_string(det);
            c.trace_mode = sweep::trace_mode_from_string(mode);
            if (skipped) {
              try {
                c.validate();
              } catch (const Error& e) {
                skipped->push_back(c.label() + ": " + e.what());
                continue;
              }
            }
            out.push_back(c);
          }
        }
      }
    }
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

CampaignSpec parse_campaign_spec(const std::string& text, const std::filesystem::path& base_dir) {
  const auto doc = config::parse(text);
  for (const auto& [name, table] : doc.tables) {
    if (name != "scenario" && name != "reference" && name != "grid" && name != "analysis") {
      throw Error(ErrorKind::config_invalid, "unknown section [" + name + "]");
    }
  }
  for (const auto& [name, list] : doc.table_arrays) {
    if (name != "config") throw Error(ErrorKind::config_invalid, "unknown section [[" + name + "]]");
  }

  CampaignSpec spec;
  const auto& root = doc.root;
  root.reject_unknown(kRootKeys, "top level");
  spec.name = root.string_or("name", spec.name);
  spec.phase = phase_from_string(root.string_or("phase", to_string(spec.phase)));
  spec.base_seed = root.unsigned_or("seed", spec.base_seed);
  spec.runs_per_cell = static_cast<int>(root.integer_or("runs_per_cell", spec.runs_per_cell));
  spec.output_directory = root.string_or("output_directory", spec.name);
  spec.outputs = OutputToggles::from_names(root.strings_or("outputs", {}));

  spec.scenarios.clear();
  if (const auto* t = doc.table("scenario")) {
    t->reject_unknown(kScenarioKeys, "[scenario]");
    std::vector<std::string> kinds;
    if (t->has("kinds")) {
      kinds = t->strings_or("kinds", {});
    } else {
      kinds = {t->string_or("kind", "idle")};
    }
    for (const auto& k : kinds) {
      spec.scenarios.push_back(scenario_from_table(*t, emission::scenario_kind_from_string(k)));
    }
  } else {
    spec.scenarios.emplace_back();
  }

  if (const auto* t = doc.table("reference")) {
    t->reject_unknown(kReferenceKeys, "[reference]");
    spec.phase1.record_duration = t->number_or("record_duration_s", spec.phase1.record_duration);
    spec.phase1.rule = reference::extraction_rule_from_string(
        t->string_or("extraction_rule", reference::to_string(spec.phase1.rule)));
    spec.phase1.peak_threshold_db = t->number_or("peak_threshold_db", spec.phase1.peak_threshold_db);
    spec.zero_span.rbw = t->number_or("rbw_mhz", spec.zero_span.rbw / kMHz) * kMHz;
    spec.zero_span.vbw = t->number_or("vbw_mhz", spec.zero_span.vbw / kMHz) * kMHz;
    spec.zero_span.swt = t->number_or("swt_s", spec.zero_span.swt);
    spec.zero_span.sweep_period = spec.zero_span.swt;
    spec.zero_span.swp = static_cast<int>(t->integer_or("swp", spec.zero_span.swp));
    if (t->has("file")) spec.reference_file = resolve(base_dir, t->string("file"));
  }

  if (const auto* t = doc.table("grid")) {
    t->reject_unknown(kConfigKeys, "[grid]");
    spec.config_grid = configs_from_table(*t, &spec.skipped_configs);
  }
  if (auto it = doc.table_arrays.find("config"); it != doc.table_arrays.end()) {
    for (const auto& t : it->second) {
      t.reject_unknown(kConfigKeys, "[[config]]");
      for (auto& c : configs_from_table(t, nullptr)) spec.config_grid.push_back(c);
    }
  }
  if (spec.config_grid.empty() && spec.phase != Phase::phase1) {
    spec.config_grid.push_back(sweep::SweepConfig::recommended());
  }

  if (const auto* t = doc.table("analysis")) {
    t->reject_unknown(kAnalysisKeys, "[analysis]");
    spec.percentiles = t->numbers_or("percentiles", spec.percentiles);
    spec.transition.rule = stats::transition_rule_from_string(
        t->string_or("transition_rule", stats::to_string(spec.transition.rule)));
    spec.transition.threshold_db = t->number_or("transition_threshold_db", spec.transition.threshold_db);
    spec.profile_bucket = t->number_or("profile_bucket_s", spec.profile_bucket);
    spec.detector_noise = t->boolean_or("detector_noise", spec.detector_noise);
  }
  spec.phase1.analyzer.detector_noise = spec.detector_noise;
  for (const auto& s : spec.scenarios) s.validate();
  spec.validate();
  return spec;
}

CampaignSpec load_campaign_spec(const std::filesystem::path& path) {
  try {
    return parse_campaign_spec(io::read_text(path), path.parent_path());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "wifiexp-out";
}

namespace {

json failure_json(const Failure& f) {
  return {{"cell", f.cell}, {"kind", f.kind}, {"message", f.message}};
}

json provenance_json(const CellProvenance& p) {
  return {{"cell", p.cell}, {"scenario", p.scenario}, {"config", p.config}, {"seeds", p.seeds}};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Sample set whose empirical CDF traces the reference quantile curve.
std::vector<double> reference_curve(const reference::ReferenceCampaign& campaign) {
  std::vector<double> out;
  for (int i = 0; i <= 200; ++i) out.push_back(reference::reference_quantile_dbm(campaign, i * 0.5));
  return out;
}

class Runner {
 public:
  explicit Runner(const CampaignSpec& spec) : spec_(spec) {
    report_.name = spec.name;
    report_.phase = spec.phase;
    report_.base_seed = spec.base_seed;
    report_.runs_per_cell = spec.runs_per_cell;
    report_.skipped_configs = spec.skipped_configs;
    study_.base_seed = spec.base_seed;
    study_.measurement_duration = spec.scenarios.front().measurement_duration;
    study_.analyzer.detector_noise = spec.detector_noise;
  }

  CampaignReport run() {
    const std::string started = utc_now();
    switch (spec_.phase) {
      case Phase::phase1: obtain_reference(); break;
      case Phase::phase2:
        if (obtain_reference()) idle_study();
        break;
      case Phase::phase3: traffic_study(); break;
      case Phase::daily: daily(); break;
    }
    if (spec_.outputs.any()) flush(started);
    return std::move(report_);
  }

 private:
  bool writing() const { return spec_.outputs.any(); }
  std::filesystem::path out(const std::string& name) const { return spec_.output_directory / name; }

  template <typename Fn>
  bool guarded(const std::string& cell, Fn&& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      report_.failures.push_back({cell, wifiexp::to_string(e.kind()), e.what()});
    } catch (const std::exception& e) {
      report_.failures.push_back({cell, "internal", e.what()});
    }
    return false;
  }

  bool obtain_reference() {
    return guarded("phase1", [&] {
      if (spec_.reference_file) {
        report_.reference = io::reference_from_json(io::read_json(*spec_.reference_file));
        report_.provenance.push_back({"phase1", "file", spec_.reference_file->string(), {}});
        return;
      }
      const auto& scenario = spec_.scenarios.front();
      const auto timeline =
          emission::build_idle_timeline(scenario.signal, spec_.phase1.record_duration);
      auto options = spec_.phase1;
      options.analyzer.noise_key = spec_.base_seed;
      const auto campaign = reference::run_phase1(timeline, spec_.zero_span, options);
      report_.reference = reference::assess_reference(campaign);
      report_.reference_deviations = campaign.deviations;
      report_.provenance.push_back({"phase1", "idle", spec_.zero_span.label(), {spec_.base_seed}});
      reference_curve_ = reference_curve(campaign);
      if (writing()) io::write_json(out("reference.json"), io::to_json(*report_.reference));

      if (spec_.outputs.traces) {
        // record at the grid frequency nearest 2415 MHz
        const auto& grid = campaign.frequency_grid;
        const auto nearest = *std::min_element(grid.begin(), grid.end(), [](double a, double b) {
          return std::abs(a - 2415e6) < std::abs(b - 2415e6);
        });
        const auto series = sweep::run_zero_span(timeline, spec_.zero_span, nearest, 0.0, options.analyzer);
        io::write_text(out("zero_span_first_record.csv"), io::zero_span_to_csv(series));
      }
      if (spec_.outputs.cdfs) {
        io::write_text(out("reference_cdf.csv"), io::cdf_to_csv(stats::EmpiricalCdf(reference_curve_)));
      }
      if (spec_.outputs.plots && spec_.phase == Phase::phase1) {
        std::vector<plot::LabeledCdf> curves{{"Reference", stats::EmpiricalCdf(reference_curve_)}};
        io::write_text(out("reference_cdf.svg"), plot::render_cdf_plot(curves, "Reference channel power"));
      }
    });
  }

  void idle_study() {
    const auto& scenario = spec_.scenarios.front();
    const auto timeline = emission::build_idle_timeline(scenario.signal, scenario.measurement_duration);
    std::vector<plot::LabeledCdf> curves;
    if (!reference_curve_.empty()) curves.push_back({"Reference", stats::EmpiricalCdf(reference_curve_)});

    for (const auto& config : spec_.config_grid) {
      const std::string cell = config.label();
      guarded(cell, [&] {
        auto reports = study::run_phase2_study(*report_.reference, std::span(&config, 1),
                                               spec_.runs_per_cell, study_, scenario.signal);
        report_.provenance.push_back({cell, "idle", cell, reports.front().run_seeds});
        report_.error_reports.push_back(std::move(reports.front()));
        if (!(spec_.outputs.traces || spec_.outputs.cdfs || spec_.outputs.plots)) return;

        const auto first = study::acquire_study_run(timeline, config, study::run_seed(spec_.base_seed, 0), study_);
        if (spec_.outputs.traces) {
          io::write_text(out("channel_" + cell + ".csv"),
                         io::channel_series_to_csv(first.sweep_starts, first.channel_power_dbm));
          io::write_text(out("trace_" + cell + ".csv"), io::traces_to_csv(std::span(&first.displayed, 1)));
        }
        stats::EmpiricalCdf cdf(first.channel_power_dbm);
        if (spec_.outputs.cdfs) io::write_text(out("cdf_" + cell + ".csv"), io::cdf_to_csv(cdf));
        curves.push_back({cell, std::move(cdf)});
      });
    }
    if (spec_.outputs.plots && !curves.empty()) {
      guarded("plots", [&] {
        io::write_text(out("idle_cdfs.svg"), plot::render_cdf_plot(curves, "Idle mode channel power"));
      });
    }
    if (!report_.error_reports.empty()) {
      guarded("recommendation", [&] { report_.recommendation = study::recommend_config(report_.error_reports); });
    }
  }

  void traffic_study() {
    study::Phase3Options options;
    options.study = study_;
    options.transition = spec_.transition;
    options.percentiles = spec_.percentiles;
    for (std::size_t si = 0; si < spec_.scenarios.size(); ++si) {
      const auto& scenario = spec_.scenarios[si];
      const std::string name = emission::to_string(scenario.kind);
      guarded(name, [&] {
        auto s = study::run_scenario_study(scenario, spec_.config_grid, spec_.runs_per_cell, options,
                                           hash_combine(spec_.base_seed, si));
        std::vector<plot::LabeledCdf> curves;
        for (const auto& cell : s.cells) {
          const std::string cell_name = name + "_" + cell.config.label();
          report_.provenance.push_back({cell_name, name, cell.config.label(), s.run_seeds});
          if (spec_.outputs.percentile_tables) {
            io::write_text(out("percentiles_" + cell_name + ".csv"), io::percentile_table_to_csv(cell.table));
          }
          stats::EmpiricalCdf cdf(cell.run_samples_dbm.front());
          if (spec_.outputs.cdfs) io::write_text(out("cdf_" + cell_name + ".csv"), io::cdf_to_csv(cdf));
          if (spec_.outputs.traces) {
            auto run_options = study_;
            run_options.measurement_duration = scenario.measurement_duration;
            const auto first = study::acquire_study_run(study::scenario_timeline(scenario, s.run_seeds.front()),
                                                        cell.config, s.run_seeds.front(), run_options);
            io::write_text(out("channel_" + cell_name + ".csv"),
                           io::channel_series_to_csv(first.sweep_starts, first.channel_power_dbm));
            io::write_text(out("trace_" + cell_name + ".csv"), io::traces_to_csv(std::span(&first.displayed, 1)));
          }
          curves.push_back({cell.config.label(), std::move(cdf)});
        }
        if (spec_.outputs.plots) {
          io::write_text(out("cdfs_" + name + ".svg"), plot::render_cdf_plot(curves, name + " channel power"));
        }
        if (s.variance_ratio) report_.anova_rows.push_back({name, *s.variance_ratio, s.oneway});
        report_.scenarios.push_back(std::move(s));
      });
    }
    if (!report_.scenarios.empty()) {
      guarded("recommendation", [&] {
        report_.recommendation = study::recommend_from_studies({}, report_.scenarios);
      });
    }
  }

  void daily() {
    const auto& scenario = spec_.scenarios.front();
    const auto& config = spec_.config_grid.front();
    guarded("daily", [&] {
      const auto seed = study::run_seed(spec_.base_seed, 0);
      const auto timeline = study::scenario_timeline(scenario, seed);
      const auto run = study::acquire_study_run(timeline, config, seed, study_);
      const auto& samples = run.channel_power_dbm;
      report_.daily_profile = plot::daily_profile_buckets(samples, scenario.measurement_duration,
                                                          spec_.profile_bucket, config.sweep_period);
      report_.provenance.push_back({"daily", emission::to_string(scenario.kind), config.label(), {seed}});
      if (spec_.outputs.traces) io::write_text(out("daily_channel.csv"), io::channel_series_to_csv(run.sweep_starts, samples));
      if (spec_.outputs.cdfs) {
        io::write_text(out("daily_profile.csv"), io::profile_to_csv(report_.daily_profile));
      }
      if (spec_.outputs.plots) {
        io::write_text(out("daily_profile.svg"),
                       plot::render_daily_profile(samples, scenario.measurement_duration,
                                                  spec_.profile_bucket, config.sweep_period,
                                                  "Daily channel power"));
      }
    });
  }

  void flush(const std::string& started) {
    try {
      if (spec_.outputs.anova) {
        json rows = json::array();
        for (const auto& r : report_.anova_rows) {
          rows.push_back({{"scenario", r.scenario},
                          {"variance_ratio", io::to_json(r.variance_ratio)},
                          {"oneway", r.oneway ? io::to_json(*r.oneway) : json(nullptr)}});
        }
        io::write_json(out("anova.json"), rows);
      }
      if (spec_.outputs.recommendation && report_.recommendation) {
        io::write_json(out("recommendation.json"), io::to_json(*report_.recommendation));
      }
      io::write_json(out("report.json"), report_to_json(report_));
      json prov = json::array();
      for (const auto& p : report_.provenance) prov.push_back(provenance_json(p));
      io::write_json(out("provenance.json"), {{"tool_version", kToolVersion},
                                              {"campaign", spec_.name},
                                              {"base_seed", spec_.base_seed},
                                              {"outputs", spec_.outputs.names()},
                                              {"started_at", started},
                                              {"finished_at", utc_now()},
                                              {"cells", prov}});
    } catch (const Error& e) {
      report_.failures.push_back({"output", wifiexp::to_string(e.kind()), e.what()});
    } catch (const std::exception& e) {
      report_.failures.push_back({"output", "io-error", e.what()});
    }
    json failures = json::array();
    for (const auto& f : report_.failures) failures.push_back(failure_json(f));
    try {
      io::write_json(out("failures.json"), failures);
    } catch (const std::exception&) {
      // nothing more can be written; the in-memory report still lists them
    }
  }

  const CampaignSpec& spec_;
  CampaignReport report_;
  study::StudyOptions study_;
  std::vector<double> reference_curve_;
};

}  // namespace

CampaignReport run_campaign(const CampaignSpec& spec) {
  spec.validate();
  return Runner(spec).run();
}

json report_to_json(const CampaignReport& r) {
  json errors = json::array();
  for (const auto& e : r.error_reports) errors.push_back(io::to_json(e));
  json scenarios = json::array();
  for (const auto& s : r.scenarios) scenarios.push_back(io::to_json(s));
  json anova = json::array();
  for (const auto& a : r.anova_rows) {
    anova.push_back({{"scenario", a.scenario},
                     {"variance_ratio", io::to_json(a.variance_ratio)},
                     {"oneway", a.oneway ? io::to_json(*a.oneway) : json(nullptr)}});
  }
  json profile = json::array();
  for (const auto& b : r.daily_profile) {
    profile.push_back({{"start_s", b.start}, {"p50_dbm", b.p50_dbm}, {"p90_dbm", b.p90_dbm}, {"max_dbm", b.max_dbm}});
  }
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back(failure_json(f));
  json prov = json::array();
  for (const auto& p : r.provenance) prov.push_back(provenance_json(p));
  return json{{"name", r.name},
              {"phase", to_string(r.phase)},
              {"base_seed", r.base_seed},
              {"runs_per_cell", r.runs_per_cell},
              {"reference", r.reference ? io::to_json(*r.reference) : json(nullptr)},
              {"reference_deviations", r.reference_deviations},
              {"skipped_configs", r.skipped_configs},
              {"error_reports", errors},
              {"scenarios", scenarios},
              {"anova_rows", anova},
              {"recommendation", r.recommendation ? io::to_json(*r.recommendation) : json(nullptr)},
              {"daily_profile", profile},
              {"failures", failures},
              {"cells", prov}};
}

CampaignReport report_from_json(const json& j) {
  try {
    CampaignReport r;
    r.name = j.at("name").get<std::string>();
    r.phase = phase_from_string(j.at("phase").get<std::string>());
    r.base_seed = j.at("base_seed").get<std::uint64_t>();
    r.runs_per_cell = j.at("runs_per_cell").get<int>();
    if (!j.at("reference").is_null()) r.reference = io::reference_from_json(j.at("reference"));
    r.reference_deviations = j.at("reference_deviations").get<std::vector<std::string>>();
    r.skipped_configs = j.at("skipped_configs").get<std::vector<std::string>>();
    for (const auto& e : j.at("error_reports")) r.error_reports.push_back(io::error_report_from_json(e));
    for (const auto& s : j.at("scenarios")) r.scenarios.push_back(io::scenario_study_from_json(s));
    for (const auto& a : j.at("anova_rows")) {
      AnovaRow row{a.at("scenario").get<std::string>(), io::anova_from_json(a.at("variance_ratio")), std::nullopt};
      if (!a.at("oneway").is_null()) row.oneway = io::anova_from_json(a.at("oneway"));
      r.anova_rows.push_back(std::move(row));
    }
    if (!j.at("recommendation").is_null()) r.recommendation = io::config_from_json(j.at("recommendation"));
    for (const auto& b : j.at("daily_profile")) {
      r.daily_profile.push_back({b.at("start_s").get<double>(), b.at("p50_dbm").get<double>(),
                                 b.at("p90_dbm").get<double>(), b.at("max_dbm").get<double>()});
    }
    for (const auto& f : j.at("failures")) {
      r.failures.push_back({f.at("cell").get<std::string>(), f.at("kind").get<std::string>(),
                            f.at("message").get<std::string>()});
    }
    for (const auto& p : j.at("cells")) {
      r.provenance.push_back({p.at("cell").get<std::string>(), p.at("scenario").get<std::string>(),
                              p.at("config").get<std::string>(),
                              p.at("seeds").get<std::vector<std::uint64_t>>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("malformed report: ") + e.what());
  }
}

sweep::SweepConfig recommend_across(const std::vector<CampaignReport>& reports) {
  std::vector<study::ErrorReport> idle;
  std::vector<study::ScenarioStudy> traffic;
  for (const auto& r : reports) {
    idle.insert(idle.end(), r.error_reports.begin(), r.error_reports.end());
    traffic.insert(traffic.end(), r.scenarios.begin(), r.scenarios.end());
  }
  if (!traffic.empty()) return study::recommend_from_studies(idle, traffic);
  return study::recommend_config(idle);
}

}  // namespace wifiexp::campaign
