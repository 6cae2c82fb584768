#include "interprisk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace interprisk::svg {

namespace {

std::string esc(const std::string& s) {
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

// Fixed formatting keeps the output byte-stable across runs.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fmt(w) + "\" height=\"" + fmt(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string bar_chart(const std::string& title, const std::vector<Bar>& bars) {
  const double left = 220, width = 360, row = 18, top = 40;
  const double h = top + row * static_cast<double>(bars.size()) + 30;
  double extent = 0.0;
  for (const auto& b : bars) extent = std::max(extent, std::abs(b.value));
  if (!(extent > 0)) extent = 1.0;
  bool any_negative = false;
  for (const auto& b : bars) any_negative |= b.value < 0;
  const double axis = any_negative ? left + width / 2 : left;
  const double scale = (any_negative ? width / 2 : width) / extent;

  std::ostringstream os;
  os << header(left + width + 80, h);
  os << "<text x=\"" << fmt(left) << "\" y=\"20\" font-size=\"14\">" << esc(title) << "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double y = top + row * static_cast<double>(i);
    const double len = std::abs(bars[i].value) * scale;
    const double x = bars[i].value < 0 ? axis - len : axis;
    os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(y + 12) << "\" text-anchor=\"end\">"
       << esc(bars[i].label) << "</text>\n";
    os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y + 2) << "\" width=\"" << fmt(len)
       << "\" height=\"" << fmt(row - 4) << "\" fill=\"" << (bars[i].value < 0 ? "#1f77b4" : "#d62728")
       << "\"/>\n";
    os << "<text x=\"" << fmt(left + width + 6) << "\" y=\"" << fmt(y + 12) << "\">" << label(bars[i].value)
       << "</text>\n";
  }
  os << "<line x1=\"" << fmt(axis) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(axis) << "\" y2=\""
     << fmt(h - 30) << "\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  const double left = 70, top = 40, width = 480, height = 300;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.x) {
      if (std::isfinite(v)) x0 = std::min(x0, v), x1 = std::max(x1, v);
    }
    for (double v : s.y) {
      if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
  }
  if (!(x1 > x0)) x0 -= 1, x1 += 1;
  if (!(y1 > y0)) y0 -= 1, y1 += 1;
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * width; };
  auto py = [&](double v) { return top + height - (v - y0) / (y1 - y0) * height; };

  std::ostringstream os;
  os << header(left + width + 160, top + height + 50);
  os << "<text x=\"" << fmt(left) << "\" y=\"20\" font-size=\"14\">" << esc(title) << "</text>\n";
  os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(width) << "\" height=\""
     << fmt(height) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fmt(left + width / 2) << "\" y=\"" << fmt(top + height + 35)
     << "\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
  os << "<text x=\"15\" y=\"" << fmt(top + height / 2) << "\" transform=\"rotate(-90 15 " << fmt(top + height / 2)
     << ")\" text-anchor=\"middle\">" << esc(y_label) << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4, yv = y0 + (y1 - y0) * t / 4;
    os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(top + height + 15) << "\" text-anchor=\"middle\">"
       << label(xv) << "</text>\n";
    os << "<text x=\"" << fmt(left - 5) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << label(yv)
       << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % 8];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(series[s].x.size(), series[s].y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) continue;
      os << fmt(px(series[s].x[i])) << ',' << fmt(py(series[s].y[i])) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 15 + 16 * static_cast<double>(s);
    os << "<rect x=\"" << fmt(left + width + 10) << "\" y=\"" << fmt(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
       << colour << "\"/>\n<text x=\"" << fmt(left + width + 25) << "\" y=\"" << fmt(ly) << "\">"
       << esc(series[s].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmaps(const std::string& title, const std::vector<HeatmapPanel>& panels) {
  const double cell = 60, gap = 50, top = 60, left = 80;
  double max_cols = 1, max_rows = 1;
  for (const auto& p : panels) {
    max_rows = std::max(max_rows, static_cast<double>(p.cells.size()));
    for (const auto& r : p.cells) max_cols = std::max(max_cols, static_cast<double>(r.size()));
  }
  const double panel_w = max_cols * cell + gap;
  std::ostringstream os;
  os << header(left + panel_w * static_cast<double>(panels.size()) + 20, top + max_rows * cell + 40);
  os << "<text x=\"" << fmt(left) << "\" y=\"20\" font-size=\"14\">" << esc(title) << "</text>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    const double ox = left + panel_w * static_cast<double>(k);
    os << "<text x=\"" << fmt(ox) << "\" y=\"" << fmt(top - 25) << "\">" << esc(p.title) << "</text>\n";
    for (std::size_t c = 0; c < p.col_labels.size(); ++c) {
      os << "<text x=\"" << fmt(ox + cell * (static_cast<double>(c) + 0.5)) << "\" y=\"" << fmt(top - 6)
         << "\" text-anchor=\"middle\">" << esc(p.col_labels[c]) << "</text>\n";
    }
    for (std::size_t r = 0; r < p.cells.size(); ++r) {
      if (k == 0 && r < p.row_labels.size()) {
        os << "<text x=\"" << fmt(ox - 6) << "\" y=\"" << fmt(top + cell * (static_cast<double>(r) + 0.5) + 4)
           << "\" text-anchor=\"end\">" << esc(p.row_labels[r]) << "</text>\n";
      }
      for (std::size_t c = 0; c < p.cells[r].size(); ++c) {
        const double v = std::clamp(p.cells[r][c], 0.0, 1.0);
        const int shade = static_cast<int>(std::lround(255 * (1 - v)));
        char colour[16];
        std::snprintf(colour, sizeof colour, "#%02x%02xff", shade, shade);
        const double x = ox + cell * static_cast<double>(c), y = top + cell * static_cast<double>(r);
        os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cell) << "\" height=\""
           << fmt(cell) << "\" fill=\"" << colour << "\" stroke=\"white\"/>\n";
        os << "<text x=\"" << fmt(x + cell / 2) << "\" y=\"" << fmt(y + cell / 2 + 4)
           << "\" text-anchor=\"middle\" fill=\"" << (v > 0.5 ? "white" : "black") << "\">" << fmt(p.cells[r][c])
           << "</text>\n";
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace interprisk::svg
