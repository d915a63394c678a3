// CSV, JSON and SVG emitters. Output is byte-identical for identical input.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdres/convolve.hpp"
#include "tdres/freqresp.hpp"

namespace tdres {

/// Shortest decimal that round-trips, '.' separator, locale independent.
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

std::string to_csv(const Table& t);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const Table& t);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// t,f_out
Table trace_table(const ResponseTrace& tr);
/// k,t_k,value
Table envelope_table(const Envelope& env);
/// omega,amplitude
Table curve_table(const ResonanceCurve& c);

nlohmann::json trace_metadata(const ResponseTrace& tr);
nlohmann::json half_power_json(const HalfPower& hp);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label = "f_out";
  int width = 800;
  int height = 480;
};

std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts = {});
void export_plot(const std::vector<Series>& series, const std::filesystem::path& path,
                 const PlotOptions& opts = {});

}  // namespace tdres
