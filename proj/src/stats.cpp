#include "wifiexp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wifiexp::stats {

double relative_error_eq2(double p_ref, double p_meas) {
  if (p_ref == 0.0) throw Error(ErrorKind::zero_reference, "reference power is zero");
  if (p_meas < 0.0) throw Error(ErrorKind::invalid_argument, "measured power is negative");
  return std::abs(p_ref - p_meas) / std::abs(p_ref) * 100.0;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples_dbm) : sorted_(std::move(samples_dbm)) {
  if (std::any_of(sorted_.begin(), sorted_.end(), [](double v) { return std::isnan(v); })) {
    throw Error(ErrorKind::invalid_argument, "CDF samples contain NaN");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::percentile(double q) const {
  if (sorted_.empty()) throw Error(ErrorKind::empty_input, "CDF has no samples");
  if (!(q >= 0.0 && q <= 100.0)) throw Error(ErrorKind::invalid_argument, "q outside [0, 100]");
  const double h = static_cast<double>(sorted_.size() - 1) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted_.size()) return sorted_.back();
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted_[lo];
  return sorted_[lo] + frac * (sorted_[lo + 1] - sorted_[lo]);
}

double percentile(const EmpiricalCdf& cdf, double q) { return cdf.percentile(q); }

const char* to_string(TransitionRule rule) {
  return rule == TransitionRule::floor_offset ? "floor_offset" : "largest_gap";
}

TransitionRule transition_rule_from_string(const std::string& name) {
  if (name == "largest_gap") return TransitionRule::largest_gap;
  if (name == "floor_offset") return TransitionRule::floor_offset;
  throw Error(ErrorKind::parse_error, "unknown transition rule '" + name + "'");
}

std::optional<double> transition_percentile(const EmpiricalCdf& cdf,
                                            const TransitionOptions& options) {
  const auto s = cdf.sorted_samples();
  if (s.size() < 10) throw Error(ErrorKind::invalid_argument, "transition needs at least 10 samples");
  const double n = static_cast<double>(s.size());
  if (options.rule == TransitionRule::floor_offset) {
    const double cut = s.front() + options.threshold_db;
    const auto below = std::lower_bound(s.begin(), s.end(), cut) - s.begin();
    if (static_cast<std::size_t>(below) == s.size()) return std::nullopt;
    return 100.0 * static_cast<double>(below) / n;
  }
  std::size_t best = 0;
  double widest = -1.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double gap = s[i + 1] - s[i];
    if (gap > widest) {
      widest = gap;
      best = i;
    }
  }
  if (!(widest > options.threshold_db)) return std::nullopt;
  return 100.0 * static_cast<double>(best + 1) / n;
}

bool DutyInterval::reported_contains(double duty_percent) const {
  const double whole = std::round(duty_percent);
  return whole >= reported_lo && whole <= reported_hi;
}

DutyInterval duty_cycle_expectation(const emission::ScenarioSpec& spec) {
  spec.validate();
  const auto& s = spec.signal;
  const double idle = s.beacon_duration / s.beacon_period;
  DutyInterval out;
  if (spec.kind == emission::ScenarioKind::idle) {
    out.lo = out.hi = 100.0 * idle;
    out.reported_lo = out.reported_hi = std::round(100.0 * idle);
    return out;
  }
  const double occupied =
      std::min(s.download_occupancy * s.beacon_period, s.beacon_period - s.beacon_duration);
  const double busy = (s.beacon_duration + occupied) / s.beacon_period;
  const double window = spec.measurement_duration;
  auto model = [&](double d) { return 100.0 * (idle * (window - d) + busy * d) / window; };
  out.lo = model(spec.download_min);
  out.hi = model(spec.download_max);
  out.reported_lo = std::round(100.0 * (spec.download_min / window + idle));
  out.reported_hi = std::round(100.0 * (spec.download_max / window + idle));
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::empty_input, "mean of no values");
  return compensated_sum(values) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorKind::empty_input, "variance needs two values");
  const double m = mean(values);
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(),
                 [m](double v) { return (v - m) * (v - m); });
  return compensated_sum(sq) / static_cast<double>(values.size() - 1);
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::empty_input, "median of no values");
  return EmpiricalCdf(std::move(values)).percentile(50.0);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::invalid_argument, "beta shape must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double f_survival(double f, double dof1, double dof2) {
  if (!(dof1 > 0.0) || !(dof2 > 0.0)) throw Error(ErrorKind::invalid_argument, "dof must be > 0");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(dof2 / 2.0, dof1 / 2.0, dof2 / (dof2 + dof1 * f));
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups, double alpha) {
  if (groups.size() < 2) throw Error(ErrorKind::invalid_argument, "ANOVA needs two groups");
  std::vector<double> all;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error(ErrorKind::invalid_argument, "each group needs two samples");
    all.insert(all.end(), g.begin(), g.end());
  }
  const double grand = mean(all);
  std::vector<double> between_terms;
  std::vector<double> within_terms;
  for (const auto& g : groups) {
    const double m = mean(g);
    between_terms.push_back(static_cast<double>(g.size()) * (m - grand) * (m - grand));
    for (double v : g) within_terms.push_back((v - m) * (v - m));
  }
  const double ss_between = compensated_sum(between_terms);
  const double ss_within = compensated_sum(within_terms);

  AnovaResult r;
  r.alpha = alpha;
  r.dof_between = static_cast<double>(groups.size() - 1);
  r.dof_within = static_cast<double>(all.size() - groups.size());
  // Rounding in the group means leaves a residue far below any real spread.
  const double scale = std::max(1.0, grand * grand) * static_cast<double>(all.size());
  if (ss_between <= 1e-24 * scale) {
    r.f_value = 0.0;
    r.p_value = 1.0;
    return r;
  }
  if (ss_within <= 0.0) {
    throw Error(ErrorKind::degenerate_group, "groups have no spread but different means");
  }
  r.f_value = (ss_between / r.dof_between) / (ss_within / r.dof_within);
  r.p_value = f_survival(r.f_value, r.dof_between, r.dof_within);
  return r;
}

AnovaResult variance_ratio_test(std::span<const double> numerator,
                                std::span<const double> denominator, double alpha) {
  const double num = sample_variance(numerator);
  const double den = sample_variance(denominator);
  if (den <= 0.0) throw Error(ErrorKind::degenerate_group, "denominator group has no spread");
  AnovaResult r;
  r.alpha = alpha;
  r.dof_between = static_cast<double>(numerator.size() - 1);
  r.dof_within = static_cast<double>(denominator.size() - 1);
  r.f_value = num / den;
  r.p_value = f_survival(r.f_value, r.dof_between, r.dof_within);
  return r;
}

double time_average_exposure(std::span<const double> samples_dbm, double window,
                             double cadence) {
  if (!(window > 0.0) || !(cadence > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "window and cadence must be positive");
  }
  const auto needed = static_cast<std::size_t>(std::llround(window / cadence));
  if (needed == 0 || samples_dbm.size() < needed) {
    throw Error(ErrorKind::insufficient_coverage,
                "need " + std::to_string(needed) + " samples, got " +
                    std::to_string(samples_dbm.size()));
  }
  std::vector<double> mw(needed);
  std::transform(samples_dbm.begin(), samples_dbm.begin() + static_cast<std::ptrdiff_t>(needed),
                 mw.begin(), dbm_to_mw);
  return mw_to_dbm(mean(mw));
}

PercentileTable build_percentile_table(const std::vector<std::vector<double>>& runs_dbm,
                                       std::span<const double> percentiles, std::string title) {
  if (runs_dbm.empty()) throw Error(ErrorKind::empty_input, "no runs for percentile table");
  std::vector<EmpiricalCdf> cdfs;
  cdfs.reserve(runs_dbm.size());
  for (const auto& run : runs_dbm) cdfs.emplace_back(run);

  auto row_from = [&](std::string label, auto value_of) {
    std::vector<double> values;
    for (const auto& c : cdfs) values.push_back(value_of(c));
    PercentileRow row;
    row.label = std::move(label);
    row.mean_dbm = mean(values);
    row.min_dbm = *std::min_element(values.begin(), values.end());
    row.max_dbm = *std::max_element(values.begin(), values.end());
    // keep min <= mean <= max despite rounding
    row.mean_dbm = std::clamp(row.mean_dbm, row.min_dbm, row.max_dbm);
    return row;
  };

  PercentileTable table;
  table.title = std::move(title);
  for (double q : percentiles) {
    char label[32];
    std::snprintf(label, sizeof label, "P%g", q);
    table.rows.push_back(row_from(label, [q](const EmpiricalCdf& c) { return c.percentile(q); }));
  }
  table.rows.push_back(
      row_from("Max", [](const EmpiricalCdf& c) { return c.sorted_samples().back(); }));
  return table;
}

}  // namespace wifiexp::stats
