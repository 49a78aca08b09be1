#include <doctest.h>

#include <string>
#include <vector>

#include "wifiexp/plot.hpp"

using namespace wifiexp;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("CDF plot has one curve per input and one vertex per sample") {
  std::vector<plot::LabeledCdf> curves{{"a", stats::EmpiricalCdf({-70, -60, -50})},
                                       {"b & c", stats::EmpiricalCdf({-65, -64, -63, -62, -40})}};
  const auto svg = plot::render_cdf_plot(curves, "Title");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "class=\"curve\"") == 2);
  CHECK(svg.find("b &amp; c") != std::string::npos);
  const auto first = svg.find("points=\"");
  const auto end = svg.find('"', first + 8);
  CHECK(count(svg.substr(first, end - first), ",") == 3);
  CHECK_THROWS_AS(plot::render_cdf_plot({}), Error);
}

TEST_CASE("daily profile buckets") {
  std::vector<double> samples(86400, -70.0);
  for (std::size_t i = 3600; i < 7200; ++i) samples[i] = -50.0;
  const auto buckets = plot::daily_profile_buckets(samples);
  REQUIRE(buckets.size() == 24);
  CHECK(buckets[0].p50_dbm == -70.0);
  CHECK(buckets[1].p50_dbm == -50.0);
  CHECK(buckets[1].start == 3600.0);
  CHECK(buckets[1].max_dbm == -50.0);
  CHECK_THROWS_AS(plot::daily_profile_buckets(std::vector<double>(100, -70.0)), Error);
  const auto svg = plot::render_daily_profile(samples);
  CHECK(svg.find("</svg>") != std::string::npos);
}
