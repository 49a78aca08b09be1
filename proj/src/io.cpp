#include "wifiexp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wifiexp::io {

namespace {

[[noreturn]] void bad_csv(const std::string& msg) { throw Error(ErrorKind::parse_error, msg); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) bad_csv("not a number: '" + s + "'");
  return v;
}

// Rows of a CSV with the expected header, each with header.size() numbers
// unless text columns are allowed.
std::vector<std::vector<std::string>> rows(const std::string& text,
                                           const std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || split(line) != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    bad_csv("expected CSV header '" + want + "'");
  }
  std::vector<std::vector<std::string>> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != header.size()) bad_csv("CSV row has the wrong column count: " + line);
    out.push_back(std::move(cells));
  }
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::vector<double> to_dbm(const std::vector<double>& mw) {
  std::vector<double> out;
  for (double v : mw) out.push_back(mw_to_dbm(v));
  return out;
}

// Malformed documents surface as parse errors rather than library exceptions.
template <typename Fn>
auto checked(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

json to_json(const sweep::SweepConfig& c) {
  return json{{"center_frequency_hz", c.center_frequency},
              {"span_hz", c.span},
              {"rbw_hz", c.rbw},
              {"vbw_hz", c.vbw},
              {"swt_s", c.swt},
              {"swp", c.swp},
              {"detector", sweep::to_string(c.detector)},
              {"trace_mode", sweep::to_string(c.trace_mode)},
              {"sweep_period_s", c.sweep_period}};
}

static sweep::SweepConfig config_from_json_unchecked(const json& j) {
  sweep::SweepConfig c;
  c.center_frequency = j.at("center_frequency_hz").get<double>();
  c.span = j.at("span_hz").get<double>();
  c.rbw = j.at("rbw_hz").get<double>();
  c.vbw = j.at("vbw_hz").get<double>();
  c.swt = j.at("swt_s").get<double>();
  c.swp = j.at("swp").get<int>();
  c.detector = sweep::detector_from_string(j.at("detector").get<std::string>());
  c.trace_mode = sweep::trace_mode_from_string(j.at("trace_mode").get<std::string>());
  c.sweep_period = j.at("sweep_period_s").get<double>();
  return c;
}

json to_json(const emission::ScenarioSpec& s) {
  const auto& g = s.signal;
  return json{{"kind", emission::to_string(s.kind)},
              {"download_min_s", s.download_min},
              {"download_max_s", s.download_max},
              {"traffic_start_s", s.traffic_start},
              {"measurement_duration_s", s.measurement_duration},
              {"activity_profile", s.activity_profile},
              {"signal",
               {{"beacon_duration_s", g.beacon_duration},
                {"beacon_period_s", g.beacon_period},
                {"beacon_power_dbm", g.beacon_power_dbm},
                {"data_power_dbm", g.data_power_dbm},
                {"noise_floor_dbm", g.noise_floor_dbm},
                {"noise_reference_bandwidth_hz", g.noise_reference_bandwidth},
                {"download_occupancy", g.download_occupancy},
                {"power_jitter_db", g.power_jitter_db},
                {"center_frequency_hz", g.center_frequency}}}};
}

static emission::ScenarioSpec scenario_from_json_unchecked(const json& j) {
  emission::ScenarioSpec s;
  s.kind = emission::scenario_kind_from_string(j.at("kind").get<std::string>());
  s.download_min = j.at("download_min_s").get<double>();
  s.download_max = j.at("download_max_s").get<double>();
  s.traffic_start = j.at("traffic_start_s").get<double>();
  s.measurement_duration = j.at("measurement_duration_s").get<double>();
  s.activity_profile = j.at("activity_profile").get<std::vector<double>>();
  const auto& g = j.at("signal");
  s.signal.beacon_duration = g.at("beacon_duration_s").get<double>();
  s.signal.beacon_period = g.at("beacon_period_s").get<double>();
  s.signal.beacon_power_dbm = g.at("beacon_power_dbm").get<double>();
  s.signal.data_power_dbm = g.at("data_power_dbm").get<double>();
  s.signal.noise_floor_dbm = g.at("noise_floor_dbm").get<double>();
  s.signal.noise_reference_bandwidth = g.at("noise_reference_bandwidth_hz").get<double>();
  s.signal.download_occupancy = g.at("download_occupancy").get<double>();
  s.signal.power_jitter_db = g.at("power_jitter_db").get<double>();
  s.signal.center_frequency = g.at("center_frequency_hz").get<double>();
  return s;
}

json to_json(const reference::ReferencePower& p) {
  return json{{"p_channel_dbm", p.p_channel_dbm},
              {"p_channel_mw", p.p_channel_linear},
              {"chbw_hz", p.chbw},
              {"rbw_hz", p.rbw},
              {"n", p.n},
              {"p_i_dbm", to_dbm(p.per_frequency_levels)},
              {"p_i_mw", p.per_frequency_levels},
              {"median_channel_dbm", optional_number(p.median_channel_dbm)}};
}

static reference::ReferencePower reference_from_json_unchecked(const json& j) {
  std::vector<double> levels;
  if (j.contains("p_i_mw")) {
    levels = j.at("p_i_mw").get<std::vector<double>>();
  } else {
    for (double dbm : j.at("p_i_dbm").get<std::vector<double>>()) levels.push_back(dbm_to_mw(dbm));
  }
  auto p = reference::channel_power_eq1(levels, j.at("chbw_hz").get<double>(),
                                        j.at("rbw_hz").get<double>());
  if (p.n != j.at("n").get<std::size_t>()) {
    throw Error(ErrorKind::parse_error, "reference n does not match the level count");
  }
  if (j.contains("median_channel_dbm")) p.median_channel_dbm = number_or_null(j.at("median_channel_dbm"));
  return p;
}

json to_json(const stats::AnovaResult& r) {
  return json{{"f_value", r.f_value},
              {"p_value", r.p_value},
              {"dof_between", r.dof_between},
              {"dof_within", r.dof_within},
              {"alpha", r.alpha}};
}

static stats::AnovaResult anova_from_json_unchecked(const json& j) {
  stats::AnovaResult r;
  r.f_value = j.at("f_value").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.dof_between = j.at("dof_between").get<double>();
  r.dof_within = j.at("dof_within").get<double>();
  r.alpha = j.at("alpha").get<double>();
  return r;
}

json to_json(const stats::PercentileTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"percentile", r.label},
                    {"mean_dbm", r.mean_dbm},
                    {"min_dbm", r.min_dbm},
                    {"max_dbm", r.max_dbm}});
  }
  return json{{"title", t.title}, {"rows", rows}};
}

static stats::PercentileTable percentile_table_from_json_unchecked(const json& j) {
  stats::PercentileTable t;
  t.title = j.at("title").get<std::string>();
  for (const auto& r : j.at("rows")) {
    t.rows.push_back({r.at("percentile").get<std::string>(), r.at("mean_dbm").get<double>(),
                      r.at("min_dbm").get<double>(), r.at("max_dbm").get<double>()});
  }
  return t;
}

json to_json(const study::ErrorReport& r) {
  return json{{"config", to_json(r.config)},
              {"label", r.config.label()},
              {"e_percent", r.e_percent},
              {"run_p50_dbm", r.run_p50_dbm},
              {"run_seeds", r.run_seeds},
              {"reference_dbm", r.reference_dbm},
              {"mean_error", r.mean_error},
              {"min_error", r.min_error},
              {"max_error", r.max_error},
              {"direction", study::to_string(r.direction)},
              {"runs_over", r.runs_over},
              {"runs_under", r.runs_under},
              {"samples_per_run", r.samples_per_run}};
}

static study::ErrorReport error_report_from_json_unchecked(const json& j) {
  study::ErrorReport r;
  r.config = config_from_json(j.at("config"));
  r.e_percent = j.at("e_percent").get<std::vector<double>>();
  r.run_p50_dbm = j.at("run_p50_dbm").get<std::vector<double>>();
  r.run_seeds = j.at("run_seeds").get<std::vector<std::uint64_t>>();
  r.reference_dbm = j.at("reference_dbm").get<double>();
  r.mean_error = j.at("mean_error").get<double>();
  r.min_error = j.at("min_error").get<double>();
  r.max_error = j.at("max_error").get<double>();
  r.direction = study::direction_from_string(j.at("direction").get<std::string>());
  r.runs_over = j.at("runs_over").get<int>();
  r.runs_under = j.at("runs_under").get<int>();
  r.samples_per_run = j.at("samples_per_run").get<std::size_t>();
  return r;
}

json to_json(const study::ScenarioStudy& s) {
  json cells = json::array();
  for (const auto& c : s.cells) {
    json transitions = json::array();
    for (const auto& t : c.transitions) transitions.push_back(optional_number(t));
    cells.push_back({{"config", to_json(c.config)},
                     {"label", c.config.label()},
                     {"transitions", transitions},
                     {"mean_transition", c.mean_transition},
                     {"busy_error_percent", c.busy_error_percent},
                     {"mean_busy_error", c.mean_busy_error},
                     {"percentile_table", to_json(c.table)}});
  }
  json ratios = json::array();
  for (const auto& r : s.run_variance_ratios) ratios.push_back(to_json(r));
  return json{{"scenario", to_json(s.scenario)},
              {"run_seeds", s.run_seeds},
              {"true_duty_percent", s.true_duty_percent},
              {"cells", cells},
              {"run_variance_ratios", ratios},
              {"variance_ratio", s.variance_ratio ? to_json(*s.variance_ratio) : json(nullptr)},
              {"oneway", s.oneway ? to_json(*s.oneway) : json(nullptr)}};
}

static study::ScenarioStudy scenario_study_from_json_unchecked(const json& j) {
  study::ScenarioStudy s;
  s.scenario = scenario_from_json(j.at("scenario"));
  s.run_seeds = j.at("run_seeds").get<std::vector<std::uint64_t>>();
  s.true_duty_percent = j.at("true_duty_percent").get<std::vector<double>>();
  for (const auto& jc : j.at("cells")) {
    study::Phase3Cell c;
    c.config = config_from_json(jc.at("config"));
    for (const auto& t : jc.at("transitions")) c.transitions.push_back(number_or_null(t));
    c.mean_transition = jc.at("mean_transition").get<double>();
    c.busy_error_percent = jc.at("busy_error_percent").get<std::vector<double>>();
    c.mean_busy_error = jc.at("mean_busy_error").get<double>();
    c.table = percentile_table_from_json(jc.at("percentile_table"));
    s.cells.push_back(std::move(c));
  }
  for (const auto& r : j.at("run_variance_ratios")) s.run_variance_ratios.push_back(anova_from_json(r));
  if (!j.at("variance_ratio").is_null()) s.variance_ratio = anova_from_json(j.at("variance_ratio"));
  if (!j.at("oneway").is_null()) s.oneway = anova_from_json(j.at("oneway"));
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::io_error, "cannot write '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, path.string() + ": " + e.what());
  }
}

sweep::SweepConfig config_from_json(const json& j) {
  return checked("config", [&] { return config_from_json_unchecked(j); });
}

emission::ScenarioSpec scenario_from_json(const json& j) {
  return checked("scenario", [&] { return scenario_from_json_unchecked(j); });
}

reference::ReferencePower reference_from_json(const json& j) {
  return checked("reference", [&] { return reference_from_json_unchecked(j); });
}

stats::AnovaResult anova_from_json(const json& j) {
  return checked("anova", [&] { return anova_from_json_unchecked(j); });
}

stats::PercentileTable percentile_table_from_json(const json& j) {
  return checked("percentile table", [&] { return percentile_table_from_json_unchecked(j); });
}

study::ErrorReport error_report_from_json(const json& j) {
  return checked("error report", [&] { return error_report_from_json_unchecked(j); });
}

study::ScenarioStudy scenario_study_from_json(const json& j) {
  return checked("scenario study", [&] { return scenario_study_from_json_unchecked(j); });
}

std::string traces_to_csv(std::span<const sweep::Trace> traces) {
  std::string out = "frequency_hz,power_dbm,sweep_start_s\n";
  for (const auto& t : traces) {
    for (std::size_t i = 0; i < t.frequencies.size(); ++i) {
      out += format_double(t.frequencies[i]) + ',' + format_double(t.powers_dbm[i]) + ',' +
             format_double(t.sweep_start) + '\n';
    }
  }
  return out;
}

std::vector<sweep::Trace> traces_from_csv(const std::string& text) {
  std::vector<sweep::Trace> out;
  for (const auto& r : rows(text, {"frequency_hz", "power_dbm", "sweep_start_s"})) {
    const double start = parse_double(r[2]);
    if (out.empty() || out.back().sweep_start != start) {
      out.emplace_back();
      out.back().sweep_start = start;
    }
    auto& t = out.back();
    t.frequencies.push_back(parse_double(r[0]));
    t.powers_dbm.push_back(parse_double(r[1]));
    t.powers_mw.push_back(dbm_to_mw(t.powers_dbm.back()));
  }
  for (auto& t : out) {
    t.config.swp = static_cast<int>(t.frequencies.size());
    if (t.frequencies.size() >= 2) {
      t.config.span = t.frequencies.back() - t.frequencies.front();
      t.config.center_frequency = (t.frequencies.back() + t.frequencies.front()) / 2.0;
    }
  }
  return out;
}

std::string zero_span_to_csv(const sweep::ZeroSpanSeries& series) {
  std::string out = "time_s,power_dbm,frequency_hz\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out += format_double(series.times[i]) + ',' + format_double(series.powers_dbm[i]) + ',' +
           format_double(series.frequency) + '\n';
  }
  return out;
}

sweep::ZeroSpanSeries zero_span_from_csv(const std::string& text) {
  sweep::ZeroSpanSeries s;
  for (const auto& r : rows(text, {"time_s", "power_dbm", "frequency_hz"})) {
    s.frequency = parse_double(r[2]);
    s.times.push_back(parse_double(r[0]));
    s.powers_dbm.push_back(parse_double(r[1]));
    s.powers_mw.push_back(dbm_to_mw(s.powers_dbm.back()));
  }
  s.config = sweep::SweepConfig::reference_zero_span();
  s.config.swp = static_cast<int>(s.times.size());
  return s;
}

std::string percentile_table_to_csv(const stats::PercentileTable& table) {
  std::string out = "percentile,mean_dbm,min_dbm,max_dbm\n";
  for (const auto& r : table.rows) {
    out += r.label + ',' + format_double(r.mean_dbm) + ',' + format_double(r.min_dbm) + ',' +
           format_double(r.max_dbm) + '\n';
  }
  return out;
}

stats::PercentileTable percentile_table_from_csv(const std::string& text) {
  stats::PercentileTable t;
  for (const auto& r : rows(text, {"percentile", "mean_dbm", "min_dbm", "max_dbm"})) {
    t.rows.push_back({r[0], parse_double(r[1]), parse_double(r[2]), parse_double(r[3])});
  }
  return t;
}

std::string cdf_to_csv(const stats::EmpiricalCdf& cdf) {
  std::string out = "power_dbm,cumulative_probability\n";
  const auto s = cdf.sorted_samples();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_double(s[i]) + ',' +
           format_double(static_cast<double>(i + 1) / static_cast<double>(s.size())) + '\n';
  }
  return out;
}

stats::EmpiricalCdf cdf_from_csv(const std::string& text) {
  std::vector<double> samples;
  for (const auto& r : rows(text, {"power_dbm", "cumulative_probability"})) {
    samples.push_back(parse_double(r[0]));
  }
  return stats::EmpiricalCdf(std::move(samples));
}

std::string channel_series_to_csv(std::span<const double> starts,
                                  std::span<const double> powers_dbm) {
  std::string out = "sweep_index,sweep_start_s,channel_power_dbm\n";
  for (std::size_t i = 0; i < powers_dbm.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(i < starts.size() ? starts[i] : 0.0) + ',' +
           format_double(powers_dbm[i]) + '\n';
  }
  return out;
}

ChannelSeries channel_series_from_csv(const std::string& text) {
  ChannelSeries series;
  for (const auto& r : rows(text, {"sweep_index", "sweep_start_s", "channel_power_dbm"})) {
    series.sweep_starts.push_back(parse_double(r[1]));
    series.powers_dbm.push_back(parse_double(r[2]));
  }
  return series;
}

std::string profile_to_csv(std::span<const plot::ProfileBucket> buckets) {
  std::string out = "bucket_start_s,p50_dbm,p90_dbm,max_dbm\n";
  for (const auto& b : buckets) {
    out += format_double(b.start) + ',' + format_double(b.p50_dbm) + ',' + format_double(b.p90_dbm) +
           ',' + format_double(b.max_dbm) + '\n';
  }
  return out;
}

std::vector<plot::ProfileBucket> profile_from_csv(const std::string& text) {
  std::vector<plot::ProfileBucket> out;
  for (const auto& r : rows(text, {"bucket_start_s", "p50_dbm", "p90_dbm", "max_dbm"})) {
    out.push_back({parse_double(r[0]), parse_double(r[1]), parse_double(r[2]), parse_double(r[3])});
  }
  return out;
}

}  // namespace wifiexp::io
