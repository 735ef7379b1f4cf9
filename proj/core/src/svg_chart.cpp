#include "helpfuse/svg_chart.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "helpfuse/error.hpp"

namespace helpfuse {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 170;  // legend space
constexpr int kMarginTop = 50;
constexpr int kMarginBottom = 60;
constexpr int kTicks = 5;

const std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                             "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

void write_line_chart(const ChartSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const double x_span = spec.x_max - spec.x_min;
  const double y_span = spec.y_max - spec.y_min;
  auto px = [&](double x) { return kMarginLeft + (x - spec.x_min) / x_span * plot_w; };
  auto py = [&](double y) { return kMarginTop + plot_h - (y - spec.y_min) / y_span * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(spec.title)
      << "</text>\n";

  // Axes and grid.
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = spec.x_min + x_span * i / kTicks;
    const double fy = spec.y_min + y_span * i / kTicks;
    const double gx = px(fx);
    const double gy = py(fy);
    out << "<line x1=\"" << fmt_coord(gx) << "\" y1=\"" << kMarginTop << "\" x2=\""
        << fmt_coord(gx) << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt_coord(gy) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << fmt_coord(gy)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt_coord(gx) << "\" y=\"" << kMarginTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fx)
        << "</text>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt_coord(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fy)
        << "</text>\n";
  }
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_xml(spec.x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 20 " << kMarginTop + plot_h / 2 << ")\">"
      << escape_xml(spec.y_label) << "</text>\n";

  // Series polylines and legend.
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const ChartSeries& series = spec.series[s];
    const char* color = kPalette[s % kPalette.size()];
    if (!series.points.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const auto& [x, y] : series.points)
        out << fmt_coord(px(x)) << ',' << fmt_coord(py(y)) << ' ';
      out << "\"/>\n";
    }
    const double ly = kMarginTop + 14 + 18.0 * static_cast<double>(s);
    const double lx = kMarginLeft + plot_w + 12;
    out << "<line x1=\"" << fmt_coord(lx) << "\" y1=\"" << fmt_coord(ly) << "\" x2=\""
        << fmt_coord(lx + 22) << "\" y2=\"" << fmt_coord(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt_coord(lx + 28) << "\" y=\"" << fmt_coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(series.name)
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

}  // namespace helpfuse
