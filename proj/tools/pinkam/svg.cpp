#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace svg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginL = 70;
constexpr int kMarginR = 20;
constexpr int kMarginT = 40;
constexpr int kMarginB = 50;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::ofstream open(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot write '" + path + "'");
  return out;
}

void header(std::ofstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"15\">" << title << "</text>\n";
}

struct Frame {
  double x0, x1, y0, y1;  // data bounds (already log10 for log axes)
  double px(double x) const {
    return kMarginL + (x - x0) / (x1 - x0) * (kWidth - kMarginL - kMarginR);
  }
  double py(double y) const {
    return kHeight - kMarginB - (y - y0) / (y1 - y0) * (kHeight - kMarginT - kMarginB);
  }
};

void axes_box(std::ofstream& out) {
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << kWidth - kMarginL - kMarginR << "\" height=\"" << kHeight - kMarginT - kMarginB
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
}

}  // namespace

void write_loglog_spectrum(const std::string& path, const double* freqs, const double* psd,
                           std::size_t count, const FitLine& fit, const std::string& title) {
  if (count == 0) throw std::runtime_error("svg: empty spectrum");
  double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0;
  double ly0 = lx0, ly1 = -lx0;
  for (std::size_t k = 0; k < count; ++k) {
    if (psd[k] <= 0.0 || freqs[k] <= 0.0) continue;
    lx0 = std::min(lx0, std::log10(freqs[k]));
    lx1 = std::max(lx1, std::log10(freqs[k]));
    ly0 = std::min(ly0, std::log10(psd[k]));
    ly1 = std::max(ly1, std::log10(psd[k]));
  }
  if (!(lx0 < lx1)) throw std::runtime_error("svg: spectrum has no positive-power points");
  const double pad = 0.05 * (ly1 - ly0 + 1e-12);
  Frame f{lx0 - 0.1, lx1 + 0.1, ly0 - pad, ly1 + pad};

  auto out = open(path);
  header(out, title);
  axes_box(out);

  // decade grid and tick labels
  for (int d = static_cast<int>(std::ceil(f.x0)); d <= static_cast<int>(std::floor(f.x1)); ++d) {
    const double x = f.px(d);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << kMarginT << "\" x2=\"" << num(x) << "\" y2=\""
        << kHeight - kMarginB << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << kHeight - kMarginB + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
        << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(f.y0)); d <= static_cast<int>(std::floor(f.y1)); ++d) {
    const double y = f.py(d);
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << num(y) << "\" x2=\"" << kWidth - kMarginR
        << "\" y2=\"" << num(y) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
        << "</text>\n";
  }
  out << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">f [Hz]</text>\n";
  out << "<text x=\"16\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
      << " transform=\"rotate(-90 16 " << (kMarginT + kHeight - kMarginB) / 2
      << ")\">PSD</text>\n";

  for (std::size_t k = 0; k < count; ++k) {
    if (psd[k] <= 0.0 || freqs[k] <= 0.0) continue;
    out << "<circle cx=\"" << num(f.px(std::log10(freqs[k]))) << "\" cy=\""
        << num(f.py(std::log10(psd[k]))) << "\" r=\"2.5\" fill=\"#33557f\"/>\n";
  }

  if (fit.f_hi > fit.f_lo && fit.f_lo > 0.0) {
    const double xa = std::log10(fit.f_lo), xb = std::log10(fit.f_hi);
    const double ya = fit.intercept + fit.slope * xa;
    const double yb = fit.intercept + fit.slope * xb;
    out << "<line x1=\"" << num(f.px(xa)) << "\" y1=\"" << num(f.py(ya)) << "\" x2=\""
        << num(f.px(xb)) << "\" y2=\"" << num(f.py(yb))
        << "\" stroke=\"#c33\" stroke-width=\"2\"/>\n";
    char label[96];
    std::snprintf(label, sizeof(label), "slope = %.2f (r\xc2\xb2 = %.3f)", fit.slope, fit.r2);
    out << "<text x=\"" << kWidth - kMarginR - 8 << "\" y=\"" << kMarginT + 18
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#c33\">"
        << label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_timeline(const std::string& path, const double* times, const double* slopes,
                    std::size_t count, const std::string& title) {
  if (count == 0) throw std::runtime_error("svg: empty timeline");
  double y0 = -1.0, y1 = -1.0;
  for (std::size_t k = 0; k < count; ++k) {
    y0 = std::min(y0, slopes[k]);
    y1 = std::max(y1, slopes[k]);
  }
  const double pad = 0.1 * (y1 - y0 + 0.2);
  Frame f{times[0], count > 1 ? times[count - 1] : times[0] + 1.0, y0 - pad, y1 + pad};

  auto out = open(path);
  header(out, title);
  axes_box(out);

  const double guide_y = f.py(-1.0);
  out << "<line x1=\"" << kMarginL << "\" y1=\"" << num(guide_y) << "\" x2=\"" << kWidth - kMarginR
      << "\" y2=\"" << num(guide_y) << "\" stroke=\"#e8a\" stroke-dasharray=\"5,4\"/>\n"
      << "<text x=\"" << kWidth - kMarginR - 4 << "\" y=\"" << num(guide_y - 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#e8a\">-1</text>\n";

  const int n_ticks = 6;
  for (int t = 0; t <= n_ticks; ++t) {
    const double xv = f.x0 + (f.x1 - f.x0) * t / n_ticks;
    out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << kHeight - kMarginB + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(xv)
        << "</text>\n";
    const double yv = f.y0 + (f.y1 - f.y0) * t / n_ticks;
    out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << num(f.py(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(yv)
        << "</text>\n";
  }
  out << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">t [s]</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#33557f\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < count; ++k) {
    out << num(f.px(times[k])) << ',' << num(f.py(slopes[k])) << ' ';
  }
  out << "\"/>\n</svg>\n";
}

void write_heatmap(const std::string& path, const std::vector<int>& n_values,
                   const std::vector<double>& k_values, const std::vector<HeatCell>& cells,
                   const std::string& title) {
  if (cells.size() != n_values.size() * k_values.size())
    throw std::runtime_error("svg: heatmap cell count mismatch");

  auto out = open(path);
  header(out, title);

  const double cell_w = static_cast<double>(kWidth - kMarginL - kMarginR) / k_values.size();
  const double cell_h = static_cast<double>(kHeight - kMarginT - kMarginB) / n_values.size();

  auto fill_for = [](const HeatCell& c) -> const char* {
    if (!c.ok) return "#eeeeee";
    switch (c.noise_class) {
      case 0: return "#f2a0b5";  // pink
      case 1: return "#ffffff";  // white
      case 2: return "#8b5a2b";  // brown
      default: return "#bdbdbd";
    }
  };

  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
      const HeatCell& c = cells[ni * k_values.size() + ki];
      // low N at the bottom
      const double x = kMarginL + ki * cell_w;
      const double y = kHeight - kMarginB - (ni + 1) * cell_h;
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell_w)
          << "\" height=\"" << num(cell_h) << "\" fill=\"" << fill_for(c)
          << "\" stroke=\"#666\"/>\n";
      char label[32];
      if (c.ok)
        std::snprintf(label, sizeof(label), "%.2f", c.slope);
      else
        std::snprintf(label, sizeof(label), "x");
      const bool dark = c.ok && c.noise_class == 2;
      out << "<text x=\"" << num(x + cell_w / 2) << "\" y=\"" << num(y + cell_h / 2 + 4)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
          << (dark ? "#fff" : "#222") << "\">" << label << "</text>\n";
    }
  }
  for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
    out << "<text x=\"" << num(kMarginL + (ki + 0.5) * cell_w) << "\" y=\"" << kHeight - kMarginB + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(k_values[ki])
        << "</text>\n";
  }
  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    out << "<text x=\"" << kMarginL - 8 << "\" y=\""
        << num(kHeight - kMarginB - (ni + 0.5) * cell_h + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << n_values[ni]
        << "</text>\n";
  }
  out << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">K</text>\n";
  out << "<text x=\"16\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
      << " transform=\"rotate(-90 16 " << (kMarginT + kHeight - kMarginB) / 2 << ")\">N</text>\n";
  out << "</svg>\n";
}

}  // namespace svg
