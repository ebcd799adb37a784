#include "wasserlim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wasserlim::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 60.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
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

}  // namespace

std::string line_chart(const std::vector<double>& values, const std::string& title,
                       const std::vector<std::string>& labels) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : values)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const std::size_t n = values.size();
  auto px = [&](std::size_t i) { return kMargin + (n > 1 ? plot_w * i / double(n - 1) : plot_w / 2); };
  auto py = [&](double v) { return kHeight - kMargin - plot_h * (v - lo) / (hi - lo); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
    << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kMargin / 2)
    << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  const double x0 = kMargin, y0 = kHeight - kMargin;
  s << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(kWidth - kMargin)
    << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\""
    << num(kMargin) << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py(lo) + 4) << "\" text-anchor=\"end\">"
    << num(lo) << "</text>\n";
  s << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py(hi) + 4) << "\" text-anchor=\"end\">"
    << num(hi) << "</text>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string label = i < labels.size() ? labels[i] : std::to_string(i);
    s << "<text x=\"" << num(px(i)) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">"
      << escape(label) << "</text>\n";
  }
  s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values[i])) continue;
    s << (first ? "" : " ") << num(px(i)) << ',' << num(py(values[i]));
    first = false;
  }
  s << "\"/>\n";
  for (std::size_t i = 0; i < n; ++i)
    if (std::isfinite(values[i]))
      s << "<circle cx=\"" << num(px(i)) << "\" cy=\"" << num(py(values[i]))
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace wasserlim::svg
