#include "sea/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "sea/errors.hpp"

namespace sea {

namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

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

std::string fixed(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Round step (1, 2, 5 x 10^k) giving about `count` intervals.
double nice_step(double span, int count) {
  const double raw = span / count;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  const double nice = frac < 1.5 ? 1.0 : frac < 3.0 ? 2.0 : frac < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string trace_csv(const SimTrace& trace) {
  std::string out;
  for (std::size_t c = 0; c < SimTrace::kChannels.size(); ++c) {
    if (c) out += ',';
    out += SimTrace::kChannels[c];
  }
  out += '\n';
  std::vector<const std::vector<double>*> cols;
  for (auto name : SimTrace::kChannels) cols.push_back(&trace.channel(name));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out += ',';
      out += format_number((*cols[c])[i]);
    }
    out += '\n';
  }
  return out;
}

std::string frf_csv(const FrfEstimate& frf) {
  std::string out = "freq_hz,mag_db,phase_deg,coherence\n";
  for (std::size_t i = 0; i < frf.freqs_hz.size(); ++i) {
    out += format_number(frf.freqs_hz[i]) + ',' + format_number(frf.magnitude_db[i]) + ',' +
           format_number(frf.phase_deg[i]) + ',' + format_number(frf.coherence[i]) + '\n';
  }
  return out;
}

std::string frequency_response_csv(const FrequencyResponse& fr) {
  std::string out = "freq_hz,mag_db,phase_deg\n";
  for (std::size_t i = 0; i < fr.freqs_hz.size(); ++i) {
    out += format_number(fr.freqs_hz[i]) + ',' + format_number(fr.magnitude_db[i]) + ',' +
           format_number(fr.phase_deg[i]) + '\n';
  }
  return out;
}

std::string plant_csv(const SeaModel& model) {
  std::string out = "map,power,num,den\n";
  for (const auto& [name, tf] : {std::pair{"P", &model.P}, std::pair{"G", &model.G}}) {
    const int n = std::max(tf->num().degree(), tf->den().degree());
    for (int k = n; k >= 0; --k) {
      out += std::string(name) + ',' + std::to_string(k) + ',' + format_number(tf->num().coefficient(k)) + ',' +
             format_number(tf->den().coefficient(k)) + '\n';
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path.string() + "' for writing");
  os << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string render_svg(std::span<const PlotPanel> panels, int width, int panel_height) {
  const int left = 80;
  const int right = 170;
  const int top = 34;
  const int bottom = 46;
  const int height = panel_height * static_cast<int>(panels.size());
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const PlotPanel& p = panels[pi];
    const double y0 = static_cast<double>(pi) * panel_height;
    const double px0 = left;
    const double px1 = width - right;
    const double py0 = y0 + top;
    const double py1 = y0 + panel_height - bottom;

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : p.series) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        if (p.log_x && !(s.x[i] > 0.0)) continue;
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
    if (!std::isfinite(xmin)) {
      xmin = p.log_x ? 1.0 : 0.0;
      xmax = p.log_x ? 10.0 : 1.0;
      ymin = 0.0;
      ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + (p.log_x ? xmin : 1.0);
    if (ymax == ymin) {
      ymax += 0.5 * std::max(1e-12, std::abs(ymax));
      ymin -= 0.5 * std::max(1e-12, std::abs(ymin));
      if (ymax == ymin) ymax = ymin + 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const auto sx = [&](double x) {
      const double w = p.log_x ? std::log10(x / xmin) / std::log10(xmax / xmin) : (x - xmin) / (xmax - xmin);
      return px0 + w * (px1 - px0);
    };
    const auto sy = [&](double y) { return py1 - (y - ymin) / (ymax - ymin) * (py1 - py0); };

    os << "<text x=\"" << fixed((px0 + px1) / 2) << "\" y=\"" << fixed(y0 + 20)
       << "\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(p.title) << "</text>\n";
    os << "<rect x=\"" << fixed(px0) << "\" y=\"" << fixed(py0) << "\" width=\"" << fixed(px1 - px0)
       << "\" height=\"" << fixed(py1 - py0) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // y ticks
    const double ystep = nice_step(ymax - ymin, 5);
    for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-12 * ystep; v += ystep) {
      const double yy = sy(v);
      os << "<line x1=\"" << fixed(px0) << "\" y1=\"" << fixed(yy) << "\" x2=\"" << fixed(px1) << "\" y2=\""
         << fixed(yy) << "\" stroke=\"#ddd\"/>\n";
      os << "<text x=\"" << fixed(px0 - 6) << "\" y=\"" << fixed(yy + 4) << "\" text-anchor=\"end\">"
         << tick_label(std::abs(v) < 1e-12 * ystep ? 0.0 : v) << "</text>\n";
    }
    // x ticks
    std::vector<double> xt;
    if (p.log_x) {
      for (double d = std::pow(10.0, std::floor(std::log10(xmin))); d <= xmax * 1.0000001; d *= 10.0) {
        if (d >= xmin * 0.9999999) xt.push_back(d);
      }
    } else {
      const double xstep = nice_step(xmax - xmin, 8);
      for (double v = std::ceil(xmin / xstep) * xstep; v <= xmax + 1e-12 * xstep; v += xstep) xt.push_back(v);
    }
    for (double v : xt) {
      const double xx = sx(v);
      os << "<line x1=\"" << fixed(xx) << "\" y1=\"" << fixed(py0) << "\" x2=\"" << fixed(xx) << "\" y2=\""
         << fixed(py1) << "\" stroke=\"#ddd\"/>\n";
      os << "<text x=\"" << fixed(xx) << "\" y=\"" << fixed(py1 + 16) << "\" text-anchor=\"middle\">"
         << tick_label(v) << "</text>\n";
    }
    os << "<text x=\"" << fixed((px0 + px1) / 2) << "\" y=\"" << fixed(py1 + 34)
       << "\" text-anchor=\"middle\">" << escape_xml(p.x_label) << "</text>\n";
    os << "<text x=\"" << fixed(px0 - 62) << "\" y=\"" << fixed((py0 + py1) / 2) << "\" text-anchor=\"middle\""
       << " transform=\"rotate(-90 " << fixed(px0 - 62) << ' ' << fixed((py0 + py1) / 2) << ")\">"
       << escape_xml(p.y_label) << "</text>\n";

    for (double m : p.markers_x) {
      if (m < xmin || m > xmax) continue;
      const double xx = sx(m);
      os << "<line x1=\"" << fixed(xx) << "\" y1=\"" << fixed(py0) << "\" x2=\"" << fixed(xx) << "\" y2=\""
         << fixed(py1) << "\" stroke=\"#555\" stroke-dasharray=\"5,4\"/>\n";
      os << "<text x=\"" << fixed(xx + 4) << "\" y=\"" << fixed(py0 + 14) << "\">" << tick_label(m) << "</text>\n";
    }

    for (std::size_t si = 0; si < p.series.size(); ++si) {
      const auto& s = p.series[si];
      const char* color = kPalette[si % kPalette.size()];
      // Decimate long series to about two points per horizontal pixel.
      const std::size_t n = std::min(s.x.size(), s.y.size());
      const std::size_t stride = std::max<std::size_t>(1, n / static_cast<std::size_t>(2 * (px1 - px0)));
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < n; i += stride) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (p.log_x && !(s.x[i] > 0.0))) continue;
        os << fixed(sx(s.x[i])) << ',' << fixed(sy(s.y[i])) << ' ';
      }
      os << "\"/>\n";
      const double ly = py0 + 14 + 18.0 * static_cast<double>(si);
      os << "<line x1=\"" << fixed(px1 + 10) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\"" << fixed(px1 + 30)
         << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << fixed(px1 + 34) << "\" y=\"" << fixed(ly) << "\">" << escape_xml(s.label) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace sea
