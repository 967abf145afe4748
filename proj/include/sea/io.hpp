#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sea/ident.hpp"
#include "sea/plant.hpp"
#include "sea/sim.hpp"
#include "sea/xfer.hpp"

namespace sea {

// Nine significant digits, shortest form.
std::string format_number(double v);

// Header row with the SimTrace channel names, LF line endings.
std::string trace_csv(const SimTrace& trace);
// freq_hz, mag_db, phase_deg, coherence
std::string frf_csv(const FrfEstimate& frf);
// freq_hz, mag_db, phase_deg
std::string frequency_response_csv(const FrequencyResponse& fr);

// map, power, num, den for P and G, highest power first.
std::string plant_csv(const SeaModel& model);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<PlotSeries> series;
  std::vector<double> markers_x;  // vertical marker lines
};

// Stacked panels, each with axes, ticks, a legend and one polyline per series.
std::string render_svg(std::span<const PlotPanel> panels, int width = 900, int panel_height = 320);

}  // namespace sea
