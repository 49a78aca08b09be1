#include <omp.h>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wifiexp/campaign.hpp"
#include "wifiexp/io.hpp"

namespace {

using namespace wifiexp;

struct Common {
  std::vector<std::string> specs;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 0;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool many_specs) {
  if (many_specs) {
    cmd->add_option("--spec", c.specs, "Campaign spec (repeatable)")->required();
  } else {
    cmd->add_option("--spec", c.specs, "Campaign spec")->required()->expected(1);
  }
  cmd->add_option("--seed", c.seed, "Override the base seed");
  cmd->add_option("--out", c.out, "Output root directory");
  cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", c.format, "Summary format")->check(CLI::IsMember({"json", "csv"}));
}

campaign::CampaignSpec load(const std::string& path, const Common& c) {
  auto spec = campaign::load_campaign_spec(path);
  if (c.seed) spec.base_seed = *c.seed;
  const auto root = c.out.empty() ? campaign::default_output_root() : std::filesystem::path(c.out);
  if (spec.output_directory.is_relative()) spec.output_directory = root / spec.output_directory;
  return spec;
}

std::string csv_summary(const campaign::CampaignReport& r) {
  std::string out = "kind,cell,value,detail\n";
  if (r.reference) {
    out += "reference,channel_power_dbm," + io::format_double(r.reference->p_channel_dbm) + ",\n";
  }
  for (const auto& e : r.error_reports) {
    out += "error," + e.config.label() + ',' + io::format_double(e.mean_error) + ',' +
           study::to_string(e.direction) + '\n';
  }
  for (const auto& s : r.scenarios) {
    for (const auto& cell : s.cells) {
      out += "transition," + std::string(emission::to_string(s.scenario.kind)) + '_' + cell.config.label() +
             ',' + io::format_double(cell.mean_transition) + ',' + io::format_double(cell.mean_busy_error) + '\n';
    }
  }
  for (const auto& a : r.anova_rows) {
    out += "anova," + a.scenario + ',' + io::format_double(a.variance_ratio.f_value) + ',' +
           io::format_double(a.variance_ratio.p_value) + '\n';
  }
  if (r.recommendation) out += "recommendation," + r.recommendation->label() + ",,\n";
  for (const auto& f : r.failures) out += "failure," + f.cell + ',' + f.kind + ',' + f.message + '\n';
  return out;
}

void print(const campaign::CampaignReport& r, const std::string& format) {
  if (format == "csv") {
    std::cout << csv_summary(r);
  } else {
    std::cout << campaign::report_to_json(r).dump(2) << '\n';
  }
}

int run_phase(const Common& c, campaign::Phase phase, bool plots_only) {
  auto spec = load(c.specs.front(), c);
  if (!plots_only && spec.phase != phase) {
    throw Error(ErrorKind::config_invalid, std::string("spec is for ") + campaign::to_string(spec.phase) +
                                               ", not " + campaign::to_string(phase));
  }
  if (plots_only) spec.outputs = campaign::OutputToggles{.plots = true};
  const auto report = campaign::run_campaign(spec);
  print(report, c.format);
  for (const auto& f : report.failures) std::cerr << "failed " << f.cell << ": " << f.message << '\n';
  return report.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WiFi exposure measurement simulator"};
  app.set_version_flag("--version", wifiexp::campaign::kToolVersion);
  app.require_subcommand(1);

  Common p1, p2, p3, rec, plot;
  std::string report_dir, report_format = "json";
  auto* c1 = app.add_subcommand("phase1", "Zero-span reference assessment");
  auto* c2 = app.add_subcommand("phase2", "Idle-mode configuration study");
  auto* c3 = app.add_subcommand("phase3", "Traffic-scenario study");
  auto* cr = app.add_subcommand("recommend", "Recommend a configuration from several campaigns");
  auto* cp = app.add_subcommand("plot", "Run a spec and write only its plots");
  auto* cs = app.add_subcommand("report", "Print a stored report");
  add_common(c1, p1, false);
  add_common(c2, p2, false);
  add_common(c3, p3, false);
  add_common(cr, rec, true);
  add_common(cp, plot, false);
  cs->add_option("dir", report_dir, "Campaign output directory")->required();
  cs->add_option("--format", report_format)->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    for (const Common* c : {&p1, &p2, &p3, &rec, &plot}) {
      if (c->workers > 0) omp_set_num_threads(c->workers);
    }
    if (*c1) return run_phase(p1, campaign::Phase::phase1, false);
    if (*c2) return run_phase(p2, campaign::Phase::phase2, false);
    if (*c3) return run_phase(p3, campaign::Phase::phase3, false);
    if (*cp) return run_phase(plot, campaign::Phase::phase2, true);
    if (*cs) {
      print(campaign::report_from_json(io::read_json(std::filesystem::path(report_dir) / "report.json")),
            report_format);
      return 0;
    }
    if (*cr) {
      std::vector<campaign::CampaignReport> reports;
      int status = 0;
      for (const auto& path : rec.specs) {
        auto spec = load(path, rec);
        spec.outputs = {};
        reports.push_back(campaign::run_campaign(spec));
        for (const auto& f : reports.back().failures) {
          std::cerr << "failed " << f.cell << ": " << f.message << '\n';
          status = 1;
        }
      }
      const auto choice = campaign::recommend_across(reports);
      if (rec.format == "csv") {
        std::cout << "recommendation\n" << choice.label() << '\n';
      } else {
        std::cout << io::to_json(choice).dump(2) << '\n';
      }
      return status;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
