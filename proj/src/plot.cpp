#include "wifiexp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wifiexp::plot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c",
                                "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

void open_svg(std::ostringstream& svg, const Frame& f, const std::string& title,
              const std::string& x_label, const std::string& y_label) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\">" << escape(title)
        << "</text>\n";
  }
  svg << "<rect class=\"axes\" x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x_lo + (f.x_hi - f.x_lo) * i / 4.0;
    const double y = f.y_lo + (f.y_hi - f.y_lo) * i / 4.0;
    svg << "<text x=\"" << fmt(f.px(x)) << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(f.py(y) + 4)
        << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << (kTop + kHeight - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

void curve(std::ostringstream& svg, const Frame& f, const std::vector<std::pair<double, double>>& pts,
           std::size_t index, const std::string& label) {
  const char* color = kPalette[index % std::size(kPalette)];
  svg << "<polyline class=\"curve\" data-label=\"" << escape(label) << "\" fill=\"none\" stroke=\""
      << color << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) svg << ' ';
    svg << fmt(f.px(pts[i].first)) << ',' << fmt(f.py(pts[i].second));
  }
  svg << "\"/>\n";
  const double ly = kTop + 16.0 + 18.0 * static_cast<double>(index);
  svg << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly << "\" x2=\""
      << kWidth - kRight + 36 << "\" y2=\"" << ly << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
  svg << "<text class=\"legend\" x=\"" << kWidth - kRight + 42 << "\" y=\"" << ly + 4 << "\">"
      << escape(label) << "</text>\n";
}

Frame padded(double lo, double hi, double y_lo, double y_hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::invalid_argument, "plot data must be finite");
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  return {lo, hi, y_lo, y_hi};
}

}  // namespace

std::string render_cdf_plot(std::span<const LabeledCdf> cdfs, const std::string& title) {
  if (cdfs.empty()) throw Error(ErrorKind::empty_input, "no CDFs to plot");
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& c : cdfs) {
    if (c.cdf.size() == 0) throw Error(ErrorKind::empty_input, "CDF '" + c.label + "' is empty");
    lo = std::min(lo, c.cdf.sorted_samples().front());
    hi = std::max(hi, c.cdf.sorted_samples().back());
  }
  const Frame frame = padded(lo, hi, 0.0, 1.0);
  std::ostringstream svg;
  open_svg(svg, frame, title, "Power (dBm)", "Cumulative probability");
  for (std::size_t k = 0; k < cdfs.size(); ++k) {
    const auto s = cdfs[k].cdf.sorted_samples();
    std::vector<std::pair<double, double>> pts;
    pts.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      pts.emplace_back(s[i], static_cast<double>(i + 1) / static_cast<double>(s.size()));
    }
    curve(svg, frame, pts, k, cdfs[k].label);
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<ProfileBucket> daily_profile_buckets(std::span<const double> samples_dbm,
                                                 double period, double bucket, double cadence) {
  if (!(period > 0.0) || !(bucket > 0.0) || !(cadence > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "period, bucket and cadence must be positive");
  }
  const auto needed = static_cast<std::size_t>(std::llround(period / cadence));
  if (samples_dbm.size() < needed || needed == 0) {
    throw Error(ErrorKind::insufficient_coverage, "samples do not cover the profile period");
  }
  const auto per_bucket = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(bucket / cadence)));
  std::vector<ProfileBucket> out;
  for (std::size_t first = 0; first < needed; first += per_bucket) {
    const std::size_t last = std::min(needed, first + per_bucket);
    stats::EmpiricalCdf cdf(std::vector<double>(samples_dbm.begin() + static_cast<std::ptrdiff_t>(first),
                                                samples_dbm.begin() + static_cast<std::ptrdiff_t>(last)));
    out.push_back({static_cast<double>(first) * cadence, cdf.percentile(50.0), cdf.percentile(90.0),
                   cdf.sorted_samples().back()});
  }
  return out;
}

std::string render_daily_profile(std::span<const double> samples_dbm, double period,
                                 double bucket, double cadence, const std::string& title) {
  const auto buckets = daily_profile_buckets(samples_dbm, period, bucket, cadence);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& b : buckets) {
    lo = std::min({lo, b.p50_dbm, b.p90_dbm, b.max_dbm});
    hi = std::max({hi, b.p50_dbm, b.p90_dbm, b.max_dbm});
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double hours = period / 3600.0;
  const Frame frame{0.0, hours, lo, hi};
  std::ostringstream svg;
  open_svg(svg, frame, title, "Time (h)", "Channel power (dBm)");
  const char* labels[] = {"P50", "P90", "Max"};
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& b : buckets) {
      const double v = k == 0 ? b.p50_dbm : k == 1 ? b.p90_dbm : b.max_dbm;
      pts.emplace_back(b.start / 3600.0, v);
    }
    curve(svg, frame, pts, k + 1, labels[k]);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace wifiexp::plot
