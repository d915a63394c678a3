#include "tdres/export.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace tdres {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return {buf.data(), res.ptr};
}

namespace {

std::string fixed(double x, int digits) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed, digits);
  std::string s(buf.data(), res.ptr);
  if (s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

std::string tick_label(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 4);
  return {buf.data(), res.ptr};
}

std::string xml_escape(const std::string& s) {
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

std::string to_csv(const Table& t) {
  if (t.header.size() != t.columns.size()) {
    throw std::invalid_argument("to_csv: header and column counts differ");
  }
  std::size_t rows = t.columns.empty() ? 0 : t.columns.front().size();
  for (const auto& c : t.columns) {
    if (c.size() != rows) throw std::invalid_argument("to_csv: columns of unequal length");
  }
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ',';
      out += format_number(t.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_csv(const std::filesystem::path& path, const Table& t) { write_text(path, to_csv(t)); }

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

Table trace_table(const ResponseTrace& tr) {
  Table t{{"t", "f_out"}, {{}, tr.values}};
  t.columns[0].reserve(tr.values.size());
  for (std::size_t i = 0; i < tr.values.size(); ++i) t.columns[0].push_back(tr.time(i));
  return t;
}

Table envelope_table(const Envelope& env) {
  Table t{{"k", "t_k", "value"}, {{}, {}, {}}};
  for (const auto& s : env.samples) {
    t.columns[0].push_back(s.k);
    t.columns[1].push_back(s.t);
    t.columns[2].push_back(s.value);
  }
  return t;
}

Table curve_table(const ResonanceCurve& c) { return {{"omega", "amplitude"}, {c.omegas, c.amplitudes}}; }

nlohmann::json trace_metadata(const ResponseTrace& tr) {
  return {{"input", tr.input},
          {"kernel", tr.kernel},
          {"quadrature", tr.quadrature},
          {"t0", tr.t0},
          {"dt", tr.dt},
          {"samples", tr.values.size()}};
}

nlohmann::json half_power_json(const HalfPower& hp) {
  return {{"omega1", hp.omega1},
          {"omega2", hp.omega2},
          {"delta_omega", hp.delta_omega},
          {"q_est", hp.q_est},
          {"omega_peak", hp.omega_peak}};
}

std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts) {
  if (series.empty()) throw std::invalid_argument("export_plot: no series");
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("export_plot: x and y lengths differ");
    if (s.x.empty()) throw std::invalid_argument("export_plot: empty series '" + s.label + "'");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) throw std::invalid_argument("export_plot: no finite points");
  if (x1 == x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 == y0) {
    const double pad = std::max(1.0, std::abs(y0) * 0.1);
    y0 -= pad;
    y1 += pad;
  }

  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  static constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                      "#ff7f0e", "#9467bd", "#8c564b"};
  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) +
       "\" height=\"" + std::to_string(opts.height) + "\" viewBox=\"0 0 " +
       std::to_string(opts.width) + " " + std::to_string(opts.height) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
       std::to_string(opts.height) + "\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    o += "<text x=\"" + fixed(opts.width / 2.0, 1) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         xml_escape(opts.title) + "</text>\n";
  }
  o += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  o += "<rect x=\"" + fixed(left, 2) + "\" y=\"" + fixed(top, 2) + "\" width=\"" + fixed(pw, 2) +
       "\" height=\"" + fixed(ph, 2) + "\"/>\n";
  if (y0 < 0.0 && y1 > 0.0) {
    o += "<line x1=\"" + fixed(left, 2) + "\" y1=\"" + fixed(py(0.0), 2) + "\" x2=\"" +
         fixed(left + pw, 2) + "\" y2=\"" + fixed(py(0.0), 2) + "\" stroke=\"#999999\"/>\n";
  }
  o += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x0 + (x1 - x0) * i / kTicks;
    const double yv = y0 + (y1 - y0) * i / kTicks;
    o += "<text x=\"" + fixed(px(xv), 2) + "\" y=\"" + fixed(top + ph + 16, 2) +
         "\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
    o += "<text x=\"" + fixed(left - 6, 2) + "\" y=\"" + fixed(py(yv) + 4, 2) +
         "\" text-anchor=\"end\">" + tick_label(yv) + "</text>\n";
  }
  o += "<text x=\"" + fixed(left + pw / 2, 2) + "\" y=\"" + fixed(opts.height - 10.0, 2) +
       "\" text-anchor=\"middle\">" + xml_escape(opts.x_label) + "</text>\n";
  o += "<text x=\"16\" y=\"" + fixed(top + ph / 2, 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fixed(top + ph / 2, 2) + ")\">" + xml_escape(opts.y_label) + "</text>\n";
  o += "</g>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % kColors.size()];
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"1.2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!first) o += ' ';
      first = false;
      o += fixed(px(s.x[i]), 2) + "," + fixed(py(s.y[i]), 2);
    }
    o += "\"/>\n";
    const double ly = top + 14.0 + 16.0 * static_cast<double>(si);
    o += "<line x1=\"" + fixed(left + pw - 130, 2) + "\" y1=\"" + fixed(ly - 4, 2) + "\" x2=\"" +
         fixed(left + pw - 110, 2) + "\" y2=\"" + fixed(ly - 4, 2) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fixed(left + pw - 104, 2) + "\" y=\"" + fixed(ly, 2) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

void export_plot(const std::vector<Series>& series, const std::filesystem::path& path,
                 const PlotOptions& opts) {
  write_text(path, render_svg(series, opts));
}

}  // namespace tdres
