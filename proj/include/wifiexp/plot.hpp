#pragma once

#include <span>
#include <string>
#include <vector>

#include "wifiexp/stats.hpp"

namespace wifiexp::plot {

struct LabeledCdf {
  std::string label;
  stats::EmpiricalCdf cdf;
};

/// Step curves of cumulative probability against power (dBm), one polyline
/// per CDF with one vertex per sample.
std::string render_cdf_plot(std::span<const LabeledCdf> cdfs, const std::string& title = {});

struct ProfileBucket {
  double start = 0.0;  // s
  double p50_dbm = 0.0;
  double p90_dbm = 0.0;
  double max_dbm = 0.0;
};

/// Per-bucket P50/P90/max of per-sweep samples taken every cadence seconds.
std::vector<ProfileBucket> daily_profile_buckets(std::span<const double> samples_dbm,
                                                 double period = 86400.0, double bucket = 3600.0,
                                                 double cadence = 1.0);

std::string render_daily_profile(std::span<const double> samples_dbm, double period = 86400.0,
                                 double bucket = 3600.0, double cadence = 1.0,
                                 const std::string& title = {});

}  // namespace wifiexp::plot
