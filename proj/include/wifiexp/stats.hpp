#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wifiexp/emission.hpp"

namespace wifiexp::stats {

/// |p_ref - p_meas| / |p_ref| * 100, both linear.
double relative_error_eq2(double p_ref, double p_meas);

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples_dbm);

  std::span<const double> sorted_samples() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  /// Inclusive convention: rank h = (n - 1) q / 100, linear between order
  /// statistics.
  double percentile(double q) const;

 private:
  std::vector<double> sorted_;
};

double percentile(const EmpiricalCdf& cdf, double q);

enum class TransitionRule {
  largest_gap,   // widest jump in sorted dB values, if above threshold
  floor_offset,  // share of samples within threshold of the lowest sample
};

const char* to_string(TransitionRule rule);
TransitionRule transition_rule_from_string(const std::string& name);

struct TransitionOptions {
  TransitionRule rule = TransitionRule::largest_gap;
  double threshold_db = 10.0;
};

/// Cumulative percentage below the low-to-high jump of a bimodal CDF;
/// nullopt when no such jump exists.
std::optional<double> transition_percentile(const EmpiricalCdf& cdf,
                                            const TransitionOptions& options = {});

struct DutyInterval {
  double lo = 0.0;  // percent, from the emission model
  double hi = 0.0;
  /// Whole-percent band from download share plus the idle beacon share.
  double reported_lo = 0.0;
  double reported_hi = 0.0;

  bool reported_contains(double duty_percent) const;
};

DutyInterval duty_cycle_expectation(const emission::ScenarioSpec& spec);

struct AnovaResult {
  double f_value = 0.0;
  double p_value = 1.0;
  double dof_between = 0.0;  // numerator dof
  double dof_within = 0.0;   // denominator dof
  double alpha = 0.05;

  bool significant() const { return p_value < alpha; }
};

/// Classical one-way ANOVA.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups, double alpha = 0.05);

/// F = s2(numerator) / s2(denominator) with dof (n1 - 1, n2 - 1).
AnovaResult variance_ratio_test(std::span<const double> numerator,
                                std::span<const double> denominator, double alpha = 0.05);

double regularized_incomplete_beta(double a, double b, double x);
/// Right tail of the F distribution.
double f_survival(double f, double dof1, double dof2);

/// Linear-power mean of per-sweep channel powers (dBm) over the window.
double time_average_exposure(std::span<const double> samples_dbm, double window = 360.0,
                             double cadence = 1.0);

struct PercentileRow {
  std::string label;
  double mean_dbm = 0.0;
  double min_dbm = 0.0;
  double max_dbm = 0.0;
};

struct PercentileTable {
  std::string title;
  std::vector<PercentileRow> rows;
};

/// One row per percentile plus a "Max" row, aggregated over runs.
PercentileTable build_percentile_table(const std::vector<std::vector<double>>& runs_dbm,
                                       std::span<const double> percentiles,
                                       std::string title = {});

double mean(std::span<const double> values);
double sample_variance(std::span<const double> values);
double median(std::vector<double> values);

}  // namespace wifiexp::stats
