#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "wifiexp/campaign.hpp"
#include "wifiexp/io.hpp"

using namespace wifiexp;
using namespace wifiexp::campaign;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("wifiexp_campaign_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

// Small stand-in reference so idle studies run without a phase 1 campaign.
std::filesystem::path write_reference(const std::filesystem::path& dir) {
  auto ref = reference::channel_power_eq1(std::vector<double>(65, dbm_to_mw(-75.0)), 20e6, 0.3e6);
  ref.median_channel_dbm = -71.3;
  io::write_json(dir / "reference.json", io::to_json(ref));
  return dir / "reference.json";
}

}  // namespace

TEST_CASE("spec parsing expands the grid and records skipped combinations") {
  const auto spec = parse_campaign_spec(R"(
name = "grid"
phase = "phase2"
seed = 9
runs_per_cell = 4
outputs = ["cdfs", "recommendation"]

[scenario]
kind = "idle"
measurement_duration_s = 120

[grid]
rbw_mhz = [0.3, 1]
vbw_mhz = [1, 3]
swt_ms = [2.5, 10]
)");
  CHECK(spec.name == "grid");
  CHECK(spec.phase == Phase::phase2);
  CHECK(spec.base_seed == 9);
  CHECK(spec.runs_per_cell == 4);
  CHECK(spec.outputs.cdfs);
  CHECK_FALSE(spec.outputs.traces);
  CHECK(spec.config_grid.size() == 6);
  CHECK(spec.skipped_configs.size() == 2);
  CHECK(spec.scenarios.front().measurement_duration == 120);
  CHECK(spec.config_grid.front().rbw == 0.3e6);
  CHECK(spec.config_grid.back().rbw == 1e6);
}

TEST_CASE("spec parsing rejects unknown keys, sections and values") {
  CHECK_THROWS_AS(parse_campaign_spec("nmae = \"x\"\n"), Error);
  CHECK_THROWS_AS(parse_campaign_spec("[scenery]\n"), Error);
  CHECK_THROWS_AS(parse_campaign_spec("phase = \"phase9\"\n"), Error);
  CHECK_THROWS_AS(parse_campaign_spec("outputs = [\"movies\"]\n"), Error);
  CHECK_THROWS_AS(parse_campaign_spec("runs_per_cell = 0\n"), Error);
  CHECK_THROWS_AS(parse_campaign_spec("[scenario]\nkind = \"file3\"\nmeasurement_duration_s = 100\n"), Error);
  CHECK_THROWS_AS(load_campaign_spec("/nonexistent/spec.toml"), Error);
}

TEST_CASE("explicit configs and scenario lists") {
  const auto spec = parse_campaign_spec(R"(
phase = "phase3"
[scenario]
kinds = ["file1", "file2"]
download_min_s = 3
[[config]]
swt_ms = 2.5
detector = "max"
[[config]]
swt_ms = 10
trace_mode = "max_hold"
)");
  REQUIRE(spec.scenarios.size() == 2);
  CHECK(spec.scenarios[0].kind == emission::ScenarioKind::file1);
  CHECK(spec.scenarios[0].download_min == 3);
  REQUIRE(spec.config_grid.size() == 2);
  CHECK(spec.config_grid[0].detector == sweep::Detector::max);
  CHECK(spec.config_grid[1].trace_mode == sweep::TraceMode::max_hold);
}

TEST_CASE("idle campaign with a stored reference writes its artifacts") {
  const auto dir = scratch("idle");
  const auto ref = write_reference(dir);
  auto spec = parse_campaign_spec(R"(
name = "idle"
phase = "phase2"
runs_per_cell = 2
outputs = ["traces", "cdfs", "recommendation", "plots"]
[scenario]
measurement_duration_s = 30
[reference]
file = "reference.json"
[grid]
swt_ms = [2.5, 40]
)", dir);
  spec.output_directory = dir / "out";
  CHECK(spec.reference_file == ref);
  const auto report = run_campaign(spec);
  CHECK(report.failures.empty());
  REQUIRE(report.error_reports.size() == 2);
  CHECK(report.error_reports[0].samples_per_run == 30);
  REQUIRE(report.recommendation.has_value());
  for (const char* name : {"report.json", "provenance.json", "failures.json", "recommendation.json",
                           "idle_cdfs.svg"}) {
    CHECK(std::filesystem::exists(spec.output_directory / name));
  }
  const auto label = spec.config_grid.front().label();
  CHECK(std::filesystem::exists(spec.output_directory / ("channel_" + label + ".csv")));
  CHECK(std::filesystem::exists(spec.output_directory / ("trace_" + label + ".csv")));
  CHECK(std::filesystem::exists(spec.output_directory / ("cdf_" + label + ".csv")));

  const auto stored = io::read_json(spec.output_directory / "report.json");
  CHECK(report_to_json(report_from_json(stored)) == stored);

  const auto again = run_campaign(spec);
  CHECK(report_to_json(again) == report_to_json(report));
  std::filesystem::remove_all(dir);
}

TEST_CASE("a missing reference file becomes a failure, not a crash") {
  const auto dir = scratch("missing");
  auto spec = parse_campaign_spec(R"(
phase = "phase2"
outputs = ["cdfs"]
[reference]
file = "absent.json"
)", dir);
  spec.output_directory = dir;
  const auto report = run_campaign(spec);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].kind == "io-error");
  CHECK(report.error_reports.empty());
  const auto manifest = io::read_json(dir / "failures.json");
  CHECK(manifest.size() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("traffic campaign isolates per-scenario failures") {
  auto spec = parse_campaign_spec(R"(
phase = "phase3"
runs_per_cell = 2
[scenario]
kinds = ["file1", "file2"]
[grid]
swt_ms = [2.5, 10]
)");
  spec.scenarios[1].signal.beacon_period = -1.0;
  const auto report = run_campaign(spec);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].cell == "file2");
  REQUIRE(report.scenarios.size() == 1);
  CHECK(report.anova_rows.size() == 1);
  CHECK(report.recommendation.has_value());
}

TEST_CASE("no artifacts are written without outputs") {
  const auto dir = scratch("silent");
  auto spec = parse_campaign_spec("phase = \"phase3\"\nruns_per_cell = 1\n[scenario]\nkind = \"file1\"\n");
  spec.output_directory = dir;
  const auto report = run_campaign(spec);
  CHECK(report.failures.empty());
  CHECK_FALSE(std::filesystem::exists(dir));
}

TEST_CASE("recommendation across idle and traffic reports") {
  CampaignReport idle, traffic;
  sweep::SweepConfig fast, slow, wide;
  slow.swt = 10e-3;
  wide.rbw = 1e6;
  wide.vbw = 3e6;
  for (auto c : {fast, slow, wide}) {
    auto r = study::make_error_report(c, {-50.0, -50.0}, -51.0);
    if (c == wide) r.direction = study::Direction::under;
    idle.error_reports.push_back(r);
  }
  CHECK(recommend_across({idle}) == fast);
  study::ScenarioStudy s;
  for (auto [c, e] : {std::pair{wide, 0.0}, std::pair{slow, 5.0}, std::pair{fast, 9.0}}) {
    study::Phase3Cell cell;
    cell.config = c;
    cell.busy_error_percent = {e, e};
    s.cells.push_back(cell);
  }
  traffic.scenarios.push_back(s);
  CHECK(recommend_across({idle, traffic}) == slow);
}

TEST_CASE("default output root honours the environment") {
  ::setenv(kOutDirEnv, "/tmp/elsewhere", 1);
  CHECK(default_output_root() == "/tmp/elsewhere");
  ::unsetenv(kOutDirEnv);
  CHECK(default_output_root() == "wifiexp-out");
}

TEST_CASE("output toggles") {
  const auto t = OutputToggles::from_names({"anova", "plots"});
  CHECK(t.any());
  CHECK(t.names() == std::vector<std::string>{"anova", "plots"});
  CHECK_FALSE(OutputToggles{}.any());
  CHECK(OutputToggles::from_names({"all"}).names().size() == 6);
}

namespace {

// Parses one artifact with the reader matching its name; returns false for unknown names.
bool reparse(const std::filesystem::path& file) {
  const auto name = file.filename().string();
  const auto starts = [&](const char* prefix) { return name.rfind(prefix, 0) == 0; };
  if (file.extension() == ".json") {
    io::read_json(file);
    return true;
  }
  if (file.extension() == ".svg") {
    const auto text = io::read_text(file);
    return text.rfind("<svg", 0) == 0 && text.find("</svg>") != std::string::npos;
  }
  const auto text = io::read_text(file);
  if (starts("cdf_") || name == "reference_cdf.csv") return io::cdf_from_csv(text).size() > 0;
  if (starts("trace_")) return !io::traces_from_csv(text).empty();
  if (starts("channel_") || name == "daily_channel.csv") return !io::channel_series_from_csv(text).powers_dbm.empty();
  if (starts("percentiles_")) return !io::percentile_table_from_csv(text).rows.empty();
  if (name == "daily_profile.csv") return !io::profile_from_csv(text).empty();
  if (name == "zero_span_first_record.csv") return !io::zero_span_from_csv(text).powers_mw.empty();
  return false;
}

}  // namespace

TEST_CASE("every written artifact parses back") {
  const auto dir = scratch("artifacts");
  const std::string all = "outputs = [\"all\"]\nruns_per_cell = 1\n";
  auto phase1 = parse_campaign_spec(all + "phase = \"phase1\"\n[reference]\nrecord_duration_s = 2\n");
  phase1.output_directory = dir / "phase1";
  auto phase3 = parse_campaign_spec(all + "phase = \"phase3\"\n[scenario]\nkind = \"file1\"\n[grid]\nswt_ms = [2.5]\n");
  phase3.output_directory = dir / "phase3";
  auto daily = parse_campaign_spec(all + R"(phase = "daily"
[scenario]
kind = "custom"
measurement_duration_s = 7200
activity_profile = [0.1, 0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1,
                    0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]
[analysis]
profile_bucket_s = 3600
)");
  daily.output_directory = dir / "daily";
  for (auto* spec : {&phase1, &phase3, &daily}) {
    CAPTURE(to_string(spec->phase));
    const auto report = run_campaign(*spec);
    CHECK(report.failures.empty());
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(spec->output_directory)) {
      CAPTURE(entry.path().filename().string());
      CHECK(reparse(entry.path()));
      ++files;
    }
    CHECK(files >= 5);
  }
  std::filesystem::remove_all(dir);
}
