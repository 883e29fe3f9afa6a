// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "scalelaw/isoflop.hpp"
#include "scalelaw/records.hpp"

namespace scalelaw {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string curves_csv(std::span<const IsoflopCurve> curves) {
  std::ostringstream out;
  out << "sparsity,n,d,loss\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.samples) {
      out << format_double(curve.sparsity) << ',' << format_double(p.n) << ',' << format_double(p.d) << ','
          << format_double(p.loss) << '\n';
    }
  }
  return out.str();
}

std::string divergence_csv(const DivergenceReport& report) {
  std::ostringstream out;
  out << "n,d,sparsity,loss_a,loss_b,diff\n";
  for (const auto& p : report.points) {
    out << format_double(p.scale.n_active) << ',' << format_double(p.scale.d_tokens) << ','
        << format_double(p.scale.sparsity) << ',' << format_double(p.loss_a) << ',' << format_double(p.loss_b) << ','
        << format_double(p.diff) << '\n';
  }
  return out.str();
}

std::string curves_svg(std::span<const IsoflopCurve> curves) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& curve : curves) {
    for (const auto& p : curve.samples) {
      x_lo = std::min(x_lo, std::log10(p.n));
      x_hi = std::max(x_hi, std::log10(p.n));
      if (std::isfinite(p.loss)) {
        y_lo = std::min(y_lo, p.loss);
        y_hi = std::max(y_hi, p.loss);
      }
    }
  }
  if (!(x_lo < x_hi)) {
    x_lo = 0.0;
    x_hi = 1.0;
  }
  if (!(y_lo < y_hi)) {
    y_lo = std::isfinite(y_lo) ? y_lo - 1.0 : 0.0;
    y_hi = y_lo + 2.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double log_n) { return kLeft + (log_n - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double loss) { return kTop + (y_hi - loss) / (y_hi - y_lo) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <g stroke=\"black\" stroke-width=\"1\">\n"
      << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << kTop + plot_h << "\"/>\n"
      << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
      << "\"/>\n"
      << "  </g>\n";

  // Decade ticks on x, five evenly spaced ticks on y.
  svg << "  <g fill=\"black\">\n";
  for (int e = static_cast<int>(std::ceil(x_lo)); e <= static_cast<int>(std::floor(x_hi)); ++e) {
    const double x = px(e);
    svg << "    <line x1=\"" << fixed(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fixed(x) << "\" y2=\""
        << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n"
        << "    <text x=\"" << fixed(x) << "\" y=\"" << kTop + plot_h + 20 << "\" text-anchor=\"middle\">1e" << e
        << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 4.0;
    const double y = py(v);
    svg << "    <line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed(y) << "\" x2=\"" << kLeft << "\" y2=\"" << fixed(y)
        << "\" stroke=\"black\"/>\n"
        << "    <text x=\"" << kLeft - 8 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">" << short_number(v)
        << "</text>\n";
  }
  svg << "    <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">parameters N (log scale)</text>\n"
      << "    <text x=\"15\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << kTop + plot_h / 2 << ")\">loss</text>\n"
      << "  </g>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const char* color = kPalette[c % kPalette.size()];
    svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& p : curve.samples) {
      if (!std::isfinite(p.loss)) continue;
      svg << (first ? "" : " ") << fixed(px(std::log10(p.n))) << ',' << fixed(py(p.loss));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kTop + 15.0 + 18.0 * static_cast<double>(c);
    svg << "  <line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "  <text x=\"" << kWidth - kRight + 45 << "\" y=\"" << ly + 4 << "\">" << law_name(curve.law)
        << " s=" << short_number(curve.sparsity) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace scalelaw
