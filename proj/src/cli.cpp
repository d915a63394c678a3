#include "tdres/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "tdres/convolve.hpp"
#include "tdres/export.hpp"
#include "tdres/fourier_probe.hpp"
#include "tdres/freqresp.hpp"
#include "tdres/genopt.hpp"
#include "tdres/oscillator.hpp"
#include "tdres/sysdecomp.hpp"
#include "tdres/waveform.hpp"

namespace tdres::cli {

using std::numbers::pi;

namespace {

// Validation failures: reported with exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSubcommands{"simulate", "sweep", "optimize", "fourier", "decompose"};

template <class T>
T field(const nlohmann::json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError("config." + key + ": wrong type");
  }
}

double number(const nlohmann::json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw UsageError("config." + key + ": expected a number");
  return j.at(key).get<double>();
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["oscillator"] = oscillator;
  j["input"] = input;
  j["kernel"] = kernel;
  if (dt) j["dt"] = *dt;
  if (horizon) j["horizon"] = *horizon;
  j["quadrature"] = quadrature_to_json(quadrature);
  j["out"] = out;
  j["plot"] = plot;
  j["envelope"] = envelope;
  if (k_max) j["k_max"] = *k_max;
  j["method"] = method;
  if (from) j["from"] = *from;
  if (to) j["to"] = *to;
  j["points"] = points;
  j["prefix"] = prefix;
  j["candidates"] = candidates;
  j["target_norm"] = target_norm;
  j["waveform_csv"] = waveform_csv;
  j["harmonics"] = harmonics;
  j["bank_q"] = bank_q;
  j["a"] = a;
  j["A"] = A;
  j["y0"] = y0;
  j["laplace_s"] = laplace_s;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "metadata") continue;
    if (key == "subcommand") {
      c.subcommand = field<std::string>(j, key);
      if (std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) == kSubcommands.end()) {
        throw UsageError("config.subcommand: unknown subcommand '" + c.subcommand + "'");
      }
    } else if (key == "oscillator") {
      try {
        (void)SecondOrderOscillator::from_json(value);
      } catch (const std::exception& e) {
        throw UsageError(std::string("config.oscillator: ") + e.what());
      }
      c.oscillator = value;
    } else if (key == "input") {
      if (!value.is_null()) {
        try {
          (void)Waveform::from_json(value);
        } catch (const std::exception& e) {
          throw UsageError(std::string("config.input: ") + e.what());
        }
      }
      c.input = value;
    } else if (key == "kernel") {
      c.kernel = field<std::string>(j, key);
    } else if (key == "dt") {
      c.dt = number(j, key);
    } else if (key == "horizon") {
      c.horizon = number(j, key);
    } else if (key == "quadrature") {
      try {
        c.quadrature = quadrature_from_json(value);
      } catch (const std::exception& e) {
        throw UsageError(std::string("config.quadrature: ") + e.what());
      }
    } else if (key == "out") {
      c.out = field<std::string>(j, key);
    } else if (key == "plot") {
      c.plot = field<std::string>(j, key);
    } else if (key == "envelope") {
      c.envelope = field<std::string>(j, key);
    } else if (key == "k_max") {
      c.k_max = field<int>(j, key);
    } else if (key == "method") {
      c.method = field<std::string>(j, key);
    } else if (key == "from") {
      c.from = number(j, key);
    } else if (key == "to") {
      c.to = number(j, key);
    } else if (key == "points") {
      c.points = field<int>(j, key);
    } else if (key == "prefix") {
      c.prefix = field<std::string>(j, key);
    } else if (key == "candidates") {
      c.candidates = field<std::vector<nlohmann::json>>(j, key);
      for (std::size_t i = 0; i < c.candidates.size(); ++i) {
        try {
          (void)Waveform::from_json(c.candidates[i]);
        } catch (const std::exception& e) {
          throw UsageError("config.candidates[" + std::to_string(i) + "]: " + e.what());
        }
      }
    } else if (key == "target_norm") {
      c.target_norm = number(j, key);
    } else if (key == "waveform_csv") {
      c.waveform_csv = field<std::string>(j, key);
    } else if (key == "harmonics") {
      c.harmonics = field<std::vector<int>>(j, key);
    } else if (key == "bank_q") {
      c.bank_q = number(j, key);
    } else if (key == "a") {
      c.a = number(j, key);
    } else if (key == "A") {
      c.A = number(j, key);
    } else if (key == "y0") {
      c.y0 = number(j, key);
    } else if (key == "laplace_s") {
      c.laplace_s = field<std::vector<double>>(j, key);
    } else {
      throw UsageError("config." + key + ": unknown field");
    }
  }
  return c;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return a.to_json() == b.to_json(); }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("config: cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config: invalid JSON in '" + path.string() + "': " + e.what());
  }
  return RunConfig::from_json(j);
}

namespace {

/// Flag values; unset ones leave the config untouched.
struct Flags {
  std::string config;
  std::optional<double> q, omega0, gamma, R, L, C, vm;
  std::optional<std::string> input;
  std::optional<std::string> input_json;
  std::optional<double> amplitude, drive_omega, period, duty;
  std::optional<std::string> kernel;
  std::optional<double> dt, horizon;
  std::optional<std::string> rule;
  std::optional<int> quad_points;
  std::optional<std::string> out, plot, envelope;
  std::optional<int> k_max;
  std::optional<std::string> method;
  std::optional<double> from, to;
  std::optional<int> points;
  std::optional<std::string> prefix;
  std::optional<std::string> candidates;
  std::optional<double> target_norm;
  std::optional<std::string> waveform_csv;
  std::optional<std::vector<int>> harmonics;
  std::optional<double> bank_q;
  std::optional<double> a, A, y0;
  std::optional<std::vector<double>> laplace_s;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration; flags override it");
  sub->add_option("--q", f.q, "quality factor omega0 / (2 gamma)");
  sub->add_option("--omega0", f.omega0, "natural frequency, rad/s");
  sub->add_option("--gamma", f.gamma, "damping factor, 1/s");
  sub->add_option("--R", f.R, "resistance, ohm");
  sub->add_option("--L", f.L, "inductance, H");
  sub->add_option("--C", f.C, "capacitance, F");
  sub->add_option("--vm", f.vm, "drive amplitude, V");
  sub->add_option("--rule", f.rule, "quadrature rule: simpson | trapezoid");
  sub->add_option("--quad-points", f.quad_points, "quadrature panels per shortest period");
  sub->add_option("--out", f.out, "output file");
  sub->add_option("--plot", f.plot, "SVG plot file");
}

void add_input(CLI::App* sub, Flags& f) {
  sub->add_option("--input", f.input,
                  "sine | square | triangle | pulse | bipolar_pulse | step | constant");
  sub->add_option("--input-json", f.input_json, "waveform descriptor as inline JSON");
  sub->add_option("--amplitude", f.amplitude, "input amplitude");
  sub->add_option("--drive-omega", f.drive_omega, "input angular frequency, rad/s");
  sub->add_option("--period", f.period, "input period, s");
  sub->add_option("--duty", f.duty, "pulse duty cycle");
}

void add_timing(CLI::App* sub, Flags& f) {
  sub->add_option("--dt", f.dt, "time step, s");
  sub->add_option("--horizon", f.horizon, "simulated time span, s");
}

/// Applies flags on top of `c`. Oscillator flags replace the oscillator description
/// as a whole when any of them is given.
void merge(RunConfig& c, const Flags& f) {
  if (f.R || f.L || f.C) {
    if (!(f.R && f.L && f.C)) throw UsageError("--R, --L and --C must be given together");
    c.oscillator = {{"R", *f.R}, {"L", *f.L}, {"C", *f.C}, {"v_m", f.vm.value_or(1.0)}};
  } else if (f.q || f.gamma || f.omega0) {
    if (f.q && f.gamma) throw UsageError("--q and --gamma are mutually exclusive");
    const double w0 = f.omega0.value_or(c.oscillator.value("omega0", 1.0));
    if (f.gamma) {
      c.oscillator = {{"gamma", *f.gamma}, {"omega0", w0}};
    } else if (f.q) {
      c.oscillator = {{"q", *f.q}, {"omega0", w0}};
    } else {
      c.oscillator["omega0"] = w0;
    }
  }
  if (f.kernel) c.kernel = *f.kernel;
  if (f.dt) c.dt = f.dt;
  if (f.horizon) c.horizon = f.horizon;
  if (f.rule) c.quadrature.rule = quadrature_rule_from_string(*f.rule);
  if (f.quad_points) c.quadrature.points = *f.quad_points;
  if (f.out) c.out = *f.out;
  if (f.plot) c.plot = *f.plot;
  if (f.envelope) c.envelope = *f.envelope;
  if (f.k_max) c.k_max = f.k_max;
  if (f.method) c.method = *f.method;
  if (f.from) c.from = f.from;
  if (f.to) c.to = f.to;
  if (f.points) c.points = *f.points;
  if (f.prefix) c.prefix = *f.prefix;
  if (f.target_norm) c.target_norm = *f.target_norm;
  if (f.waveform_csv) c.waveform_csv = *f.waveform_csv;
  if (f.harmonics) c.harmonics = *f.harmonics;
  if (f.bank_q) c.bank_q = *f.bank_q;
  if (f.a) c.a = *f.a;
  if (f.A) c.A = *f.A;
  if (f.y0) c.y0 = *f.y0;
  if (f.laplace_s) c.laplace_s = *f.laplace_s;
  if (f.candidates) {
    std::ifstream is(*f.candidates);
    if (!is) throw UsageError("--candidates: cannot open '" + *f.candidates + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("--candidates: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw UsageError("--candidates: expected a JSON array of waveforms");
    c.candidates = j.get<std::vector<nlohmann::json>>();
  }
}

SecondOrderOscillator oscillator_of(const RunConfig& c) {
  try {
    return SecondOrderOscillator::from_json(c.oscillator);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--q/--gamma/--omega0 (oscillator): ") + e.what());
  }
}

/// Resolves input flags against the oscillator; `fallback` is the default kind.
nlohmann::json resolve_input(const RunConfig& c, const Flags& f, const SecondOrderOscillator& osc,
                             const std::string& fallback) {
  if (f.input_json) {
    try {
      return Waveform::from_json(nlohmann::json::parse(*f.input_json)).to_json();
    } catch (const std::exception& e) {
      throw UsageError(std::string("--input-json: ") + e.what());
    }
  }
  const bool any = f.input || f.amplitude || f.drive_omega || f.period || f.duty;
  if (!any && !c.input.is_null()) return c.input;
  const std::string kind = f.input.value_or(fallback);
  std::map<std::string, double> params;
  if (f.amplitude) params["amplitude"] = *f.amplitude;
  if (f.period) {
    params["period"] = *f.period;
  } else {
    params["omega"] = f.drive_omega.value_or(osc.omega0());
  }
  if (f.duty) params["duty"] = *f.duty;
  if (kind == "pulse" || kind == "bipolar_pulse") params.try_emplace("duty", 0.3);
  if (kind == "step" || kind == "unit_step" || kind == "constant") {
    params.erase("omega");
    params.erase("period");
    if (kind == "constant") params.try_emplace("value", f.amplitude.value_or(1.0));
  }
  try {
    return standard_waveform(kind, params).to_json();
  } catch (const std::exception& e) {
    throw UsageError(std::string("--input: ") + e.what());
  }
}

void require_positive(std::optional<double> v, const char* flag) {
  if (v && !(*v > 0.0 && std::isfinite(*v))) {
    throw UsageError(std::string(flag) + ": must be a positive number");
  }
}

/// Files are produced first and written together at the end, in order.
struct Outputs {
  std::vector<std::pair<std::filesystem::path, std::string>> files;

  void add(const std::string& path, std::string text) { files.emplace_back(path, std::move(text)); }
  void add_json(const std::string& path, const nlohmann::json& j) { add(path, j.dump(2) + "\n"); }
  void flush() const {
    for (const auto& [p, text] : files) write_text(p, text);
  }
};

nlohmann::json sidecar(const RunConfig& c, nlohmann::json metadata) {
  nlohmann::json j = c.to_json();
  j["metadata"] = std::move(metadata);
  return j;
}

ImpulseResponse kernel_of(const RunConfig& c, const SecondOrderOscillator& osc) {
  KernelFlavor flavor{};
  try {
    flavor = kernel_flavor_from_string(c.kernel);
  } catch (const std::exception&) {
    flavor = KernelFlavor::Custom;
  }
  switch (flavor) {
    case KernelFlavor::Exact:
    case KernelFlavor::Normalized: return impulse_response(osc, flavor);
    case KernelFlavor::SimplifiedHS: return simplified_impulse_response(osc);
    default: break;
  }
  const double w0 = osc.omega0();
  if (c.kernel == "sine") return ImpulseResponse::custom(sine(1.0, w0), 2.0 * pi / w0);
  if (c.kernel == "two_harmonic") {
    return ImpulseResponse::custom(sum({sine(1.0, w0), sine(0.3, 3.0 * w0)}), 2.0 * pi / w0);
  }
  throw UsageError("--kernel: unknown kernel '" + c.kernel +
                   "' (normalized | exact | simplified_hs | sine | two_harmonic)");
}

void check_kernel_name(const RunConfig& c) {
  static const std::vector<std::string> names{"normalized", "exact", "simplified_hs", "hs", "sine",
                                              "two_harmonic"};
  if (std::find(names.begin(), names.end(), c.kernel) == names.end()) {
    throw UsageError("--kernel: unknown kernel '" + c.kernel + "'");
  }
}

double default_horizon(const SecondOrderOscillator& osc) {
  return osc.lossless() ? 20.0 * osc.natural_period() : 12.0 / osc.gamma();
}

// ---------------------------------------------------------------------------

void validate_simulate(RunConfig& c, const Flags& f) {
  const auto osc = oscillator_of(c);
  check_kernel_name(c);
  c.input = resolve_input(c, f, osc, "sine");
  require_positive(c.dt, "--dt");
  require_positive(c.horizon, "--horizon");
  if (!c.dt) c.dt = osc.damped_period() / 200.0;
  if (!c.horizon) c.horizon = default_horizon(osc);
  if (c.out.empty()) c.out = "trace.csv";
  if (c.k_max && *c.k_max < 1) throw UsageError("--k-max: must be >= 1");
  if (auto p = kernel_of(c, osc).period(); p && *c.dt > *p / 64.0 * (1.0 + 1e-12)) {
    throw UsageError("--dt: must not exceed the kernel period / 64 = " + format_number(*p / 64.0));
  }
}

void exec_simulate(const RunConfig& c, Outputs& o, std::ostream& out) {
  const auto osc = SecondOrderOscillator::from_json(c.oscillator);
  const auto h = kernel_of(c, osc);
  const Waveform input = Waveform::from_json(c.input);
  const ResponseTrace tr = zsr(h, input, *c.horizon, *c.dt, c.quadrature);
  o.add(c.out, to_csv(trace_table(tr)));
  o.add_json(c.out + ".json", sidecar(c, trace_metadata(tr)));

  std::optional<Envelope> env;
  if (!c.envelope.empty() || !c.plot.empty()) {
    const double spacing = h.zero_crossing_spacing().value_or(*c.horizon);
    const int k_max = c.k_max.value_or(std::max(1, static_cast<int>(*c.horizon / spacing)));
    env = extreme_samples(h, input, k_max, c.quadrature);
  }
  if (!c.envelope.empty()) {
    o.add(c.envelope, to_csv(envelope_table(*env)));
    nlohmann::json meta = trace_metadata(tr);
    meta["spacing"] = h.zero_crossing_spacing().value_or(0.0);
    o.add_json(c.envelope + ".json", sidecar(c, meta));
  }
  if (!c.plot.empty()) {
    Series trace{"f_out", {}, tr.values};
    for (std::size_t i = 0; i < tr.values.size(); ++i) trace.x.push_back(tr.time(i));
    Series upper{"|f_out(t_k)|", {}, {}};
    for (const auto& s : env->samples) {
      upper.x.push_back(s.t);
      upper.y.push_back(std::abs(s.value));
    }
    o.add(c.plot, render_svg({trace, upper}, {"zero-state response", "t", "f_out"}));
  }
  double peak = 0.0;
  for (double v : tr.values) peak = std::max(peak, std::abs(v));
  out << "simulate: " << tr.values.size() << " samples, max |f_out| = " << format_number(peak)
      << "\n";
}

void validate_sweep(RunConfig& c, const Flags&) {
  const auto osc = oscillator_of(c);
  if (c.method != "analytic" && c.method != "timedomain" && c.method != "both") {
    throw UsageError("--method: expected analytic | timedomain | both, got '" + c.method + "'");
  }
  if ((c.method != "analytic") && osc.lossless()) {
    throw UsageError("--method: the time-domain sweep needs gamma > 0");
  }
  if (!c.from) c.from = 0.8 * osc.omega0();
  if (!c.to) c.to = 1.2 * osc.omega0();
  require_positive(c.from, "--from");
  if (!(*c.to > *c.from)) throw UsageError("--to: must exceed --from");
  if (c.points < 3) throw UsageError("--points: need at least 3");
}

void exec_sweep(const RunConfig& c, Outputs& o, std::ostream& out) {
  const auto osc = SecondOrderOscillator::from_json(c.oscillator);
  const auto grid = linear_grid(*c.from, *c.to, c.points);
  const bool rlc = c.oscillator.contains("R");
  std::vector<ResonanceCurve> curves;
  for (const char* m : {"analytic", "timedomain"}) {
    if (c.method != "both" && c.method != m) continue;
    const SweepMethod method = sweep_method_from_string(m);
    if (rlc) {
      RlcParams p{c.oscillator.at("R").get<double>(), c.oscillator.at("L").get<double>(),
                  c.oscillator.at("C").get<double>(), c.oscillator.value("v_m", 1.0)};
      curves.push_back(resonance_sweep(p, grid, method, c.quadrature));
    } else {
      curves.push_back(resonance_sweep(osc, grid, method, c.quadrature));
    }
  }
  nlohmann::json summary = sidecar(c, {{"oscillator", osc.to_json()}});
  std::vector<Series> plot;
  for (const auto& curve : curves) {
    const std::string name = to_string(curve.method);
    o.add(c.prefix + "_" + name + ".csv", to_csv(curve_table(curve)));
    try {
      const HalfPower hp = half_power(curve);
      summary["half_power"][name] = half_power_json(hp);
      out << "sweep " << name << ": delta_omega = " << format_number(hp.delta_omega)
          << ", q_est = " << format_number(hp.q_est) << "\n";
    } catch (const std::domain_error& e) {
      summary["half_power"][name] = {{"error", e.what()}};
      out << "sweep " << name << ": " << e.what() << "\n";
    }
    double peak = 0.0;
    for (double v : curve.amplitudes) {
      if (std::isfinite(v)) peak = std::max(peak, v);
    }
    Series s{name + " (peak-normalized)", curve.omegas, {}};
    for (double v : curve.amplitudes) s.y.push_back(peak > 0.0 ? v / peak : v);
    plot.push_back(std::move(s));
  }
  o.add_json(c.prefix + "_half_power.json", summary);
  if (!c.plot.empty()) o.add(c.plot, render_svg(plot, {"resonance curve", "omega", "amplitude / peak"}));
}

void validate_optimize(RunConfig& c, const Flags&) {
  const auto osc = oscillator_of(c);
  check_kernel_name(c);
  if (!(c.target_norm > 0.0)) throw UsageError("--target-norm: must be > 0");
  if (c.out.empty()) c.out = "optimize.json";
  if (c.candidates.empty()) {
    const double t = 2.0 * pi / osc.omega0();
    c.candidates = {sine(1.0, osc.omega0()).to_json(), square(1.0, t).to_json(),
                    triangle(1.0, t).to_json()};
  }
}

void exec_optimize(const RunConfig& c, Outputs& o, std::ostream& out) {
  const auto osc = SecondOrderOscillator::from_json(c.oscillator);
  const auto h = kernel_of(c, osc);
  const auto gi = choose_generating_interval(h, c.quadrature);
  const Waveform best = optimal_input(h, gi, c.target_norm, c.quadrature);
  std::vector<Waveform> cands;
  for (const auto& j : c.candidates) cands.push_back(Waveform::from_json(j));
  cands.push_back(best);
  const auto ranked = rank_inputs(cands, h, gi, c.target_norm, c.quadrature);
  const double h_norm = norm(h.waveform(), gi.interval(), c.quadrature);

  nlohmann::json report = sidecar(c, {});
  report["generating_interval"] = {{"length", gi.length},
                                   {"period", gi.period},
                                   {"mode", to_string(gi.mode)},
                                   {"symmetry_defect", gi.symmetry_defect}};
  report["kernel"] = h.to_json();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : ranked) {
    const bool is_opt = r.index + 1 == cands.size();
    rows.push_back({{"index", r.index},
                    {"label", is_opt ? "optimal" : "candidate"},
                    {"descriptor", is_opt ? nlohmann::json("optimal_input") : c.candidates[r.index]},
                    {"s0", r.s0},
                    {"bound", c.target_norm * h_norm},
                    {"gap_ratio", r.gap_ratio},
                    {"miss_percent", 100.0 * r.miss}});
  }
  report["candidates"] = rows;
  report["optimal"] = optimality_report(best, h, gi, c.quadrature).to_json();
  o.add_json(c.out, report);

  if (!c.waveform_csv.empty()) {
    Table t{{"t", "f_inp"}, {{}, {}}};
    const double span = 2.0 * gi.period;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      const double tt = span * i / n;
      t.columns[0].push_back(tt);
      t.columns[1].push_back(best.eval(tt));
    }
    o.add(c.waveform_csv, to_csv(t));
  }
  out << "optimize: generating interval " << format_number(gi.length) << " ("
      << to_string(gi.mode) << "), best s0 = " << format_number(ranked.front().s0) << "\n";
}

void validate_fourier(RunConfig& c, const Flags& f) {
  const auto osc = oscillator_of(c);
  if (!f.input && !f.input_json && c.input.is_null() && !f.period && !f.drive_omega) {
    c.input = square(1.0, osc.natural_period()).to_json();
  } else {
    c.input = resolve_input(c, f, osc, "square");
  }
  if (!Waveform::from_json(c.input).period()) throw UsageError("--input: must be periodic");
  if (c.harmonics.empty()) throw UsageError("--harmonics: need at least one");
  for (int k : c.harmonics) {
    if (k < 1) throw UsageError("--harmonics: indices must be >= 1");
  }
  if (!(c.bank_q >= kMinProbeQ)) throw UsageError("--bank-q: must be >= 10");
  if (c.out.empty()) c.out = "fourier.csv";
}

void exec_fourier(const RunConfig& c, Outputs& o, std::ostream& out) {
  const Waveform input = Waveform::from_json(c.input);
  const double T = *input.period();
  const auto probes = harmonic_probe(input, c.harmonics, c.bank_q, c.quadrature);
  std::vector<double> direct;
  double max_direct = 0.0;
  for (const auto& p : probes) {
    direct.push_back(direct_fourier_coefficient(input, p.k, T, c.quadrature));
    max_direct = std::max(max_direct, std::abs(direct.back()));
  }
  Table t{{"k", "omega", "saturated", "estimate", "direct", "relative_error"}, {{}, {}, {}, {}, {}, {}}};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto& p = probes[i];
    t.columns[0].push_back(p.k);
    t.columns[1].push_back(p.omega);
    t.columns[2].push_back(p.saturated);
    t.columns[3].push_back(*p.estimate);
    t.columns[4].push_back(direct[i]);
    t.columns[5].push_back(max_direct > 0.0 ? std::abs(*p.estimate - std::abs(direct[i])) / max_direct
                                            : std::abs(*p.estimate));
  }
  o.add(c.out, to_csv(t));
  o.add_json(c.out + ".json", sidecar(c, {{"period", T}}));
  if (!c.plot.empty()) {
    Series est{"estimate", t.columns[0], t.columns[3]};
    Series dir{"|direct|", t.columns[0], {}};
    for (double d : direct) dir.y.push_back(std::abs(d));
    o.add(c.plot, render_svg({est, dir}, {"harmonic probe", "k", "coefficient"}));
  }
  out << "fourier: " << probes.size() << " harmonics probed at Q = " << format_number(c.bank_q)
      << "\n";
}

void validate_decompose(RunConfig& c, const Flags& f) {
  if (!(c.a > 0.0)) throw UsageError("--a: must be > 0");
  require_positive(c.dt, "--dt");
  require_positive(c.horizon, "--horizon");
  if (!c.horizon) c.horizon = 10.0 / c.a;
  if (!c.dt) c.dt = *c.horizon / 1000.0;
  if (c.out.empty()) c.out = "decompose.csv";
  if (!c.laplace_s.empty()) {
    const auto osc = oscillator_of(c);
    if (osc.lossless()) throw UsageError("--laplace-s: needs gamma > 0");
    for (double s : c.laplace_s) {
      if (!(s > 0.0)) throw UsageError("--laplace-s: values must be > 0");
    }
    c.input = resolve_input(c, f, osc, "sine");
    if (!Waveform::from_json(c.input).period()) throw UsageError("--input: must be periodic");
  }
}

void exec_decompose(const RunConfig& c, Outputs& o, std::ostream& out) {
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor(*c.horizon / *c.dt + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(*c.dt * static_cast<double>(i));
  const auto sol = first_order_solve({c.a, c.A, c.y0}, grid);
  o.add(c.out, to_csv({{"t", "zir", "zsr", "total"}, {sol.t, sol.zir, sol.zsr, sol.total}}));
  o.add_json(c.out + ".json", sidecar(c, {{"samples", grid.size()}}));
  if (!c.plot.empty()) {
    o.add(c.plot, render_svg({{"zir", sol.t, sol.zir}, {"zsr", sol.t, sol.zsr}, {"total", sol.t, sol.total}},
                             {"first-order decomposition", "t", "y"}));
  }
  if (!c.laplace_s.empty()) {
    const auto osc = SecondOrderOscillator::from_json(c.oscillator);
    const Waveform input = Waveform::from_json(c.input);
    nlohmann::json checks = nlohmann::json::array();
    for (double s : c.laplace_s) {
      checks.push_back(laplace_check(osc, input, {s, 0.0}, c.quadrature).to_json());
    }
    const std::string stem = c.out.size() > 4 && c.out.ends_with(".csv")
                                 ? c.out.substr(0, c.out.size() - 4)
                                 : c.out;
    o.add_json(stem + "_laplace.json", {{"checks", checks}, {"config", c.to_json()}});
  }
  out << "decompose: " << grid.size() << " samples\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tdres: time-domain resonance toolkit"};
  app.require_subcommand(1, 1);
  Flags f;

  auto* sim = app.add_subcommand("simulate", "zero-state response of an oscillator");
  add_common(sim, f);
  add_input(sim, f);
  add_timing(sim, f);
  sim->add_option("--kernel", f.kernel, "normalized | exact | simplified_hs");
  sim->add_option("--envelope", f.envelope, "CSV of the extremes k,t_k,value");
  sim->add_option("--k-max", f.k_max, "number of extremes in the envelope");

  auto* swp = app.add_subcommand("sweep", "resonance curve and half-power bandwidth");
  add_common(swp, f);
  swp->add_option("--method", f.method, "analytic | timedomain | both");
  swp->add_option("--from", f.from, "lowest frequency, rad/s");
  swp->add_option("--to", f.to, "highest frequency, rad/s");
  swp->add_option("--points", f.points, "number of frequencies");
  swp->add_option("--prefix", f.prefix, "output file prefix");

  auto* opt = app.add_subcommand("optimize", "optimal periodic drive for a kernel");
  add_common(opt, f);
  opt->add_option("--kernel", f.kernel, "normalized | exact | simplified_hs | sine | two_harmonic");
  opt->add_option("--candidates", f.candidates, "JSON array of waveform descriptors");
  opt->add_option("--target-norm", f.target_norm, "norm on the generating interval");
  opt->add_option("--waveform-csv", f.waveform_csv, "CSV of the synthesized drive");

  auto* fou = app.add_subcommand("fourier", "harmonic discovery with a resonator bank");
  add_common(fou, f);
  add_input(fou, f);
  fou->add_option("--harmonics", f.harmonics, "harmonic indices")->delimiter(',');
  fou->add_option("--bank-q", f.bank_q, "quality factor of every bank oscillator");

  auto* dec = app.add_subcommand("decompose", "zero-input / zero-state decomposition");
  add_common(dec, f);
  add_input(dec, f);
  add_timing(dec, f);
  dec->add_option("--a", f.a, "first-order rate, 1/s");
  dec->add_option("--A", f.A, "step input amplitude");
  dec->add_option("--y0", f.y0, "initial value");
  dec->add_option("--laplace-s", f.laplace_s, "real s values for Laplace checks")->delimiter(',');

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  RunConfig c;
  try {
    if (!f.config.empty()) c = load_config(f.config);
    c.subcommand = name;
    merge(c, f);
    c.quadrature.validate();
    if (name == "simulate") validate_simulate(c, f);
    if (name == "sweep") validate_sweep(c, f);
    if (name == "optimize") validate_optimize(c, f);
    if (name == "fourier") validate_fourier(c, f);
    if (name == "decompose") validate_decompose(c, f);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Outputs o;
    if (name == "simulate") exec_simulate(c, o, out);
    if (name == "sweep") exec_sweep(c, o, out);
    if (name == "optimize") exec_optimize(c, o, out);
    if (name == "fourier") exec_fourier(c, o, out);
    if (name == "decompose") exec_decompose(c, o, out);
    o.flush();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace tdres::cli
