#include "tdres/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdres {

namespace {

using std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite(double x) { return std::isfinite(x); }

// Integer multiples m * step lying strictly inside (a, b), shifted by offset.
void lattice_points(double offset, double step, double a, double b, std::vector<double>& out) {
  const double lo = std::ceil((a - offset) / step);
  const double hi = std::floor((b - offset) / step);
  for (double m = lo; m <= hi; m += 1.0) {
    const double x = offset + m * step;
    if (x > a && x < b) out.push_back(x);
  }
}

std::optional<double> min_opt(std::optional<double> x, std::optional<double> y) {
  if (!x) return y;
  if (!y) return x;
  return std::min(*x, *y);
}

// Smallest common period of a set of periods, searching integer multiples of
// the longest one.
std::optional<double> common_period(const std::vector<double>& periods) {
  if (periods.empty()) return std::nullopt;
  const double longest = *std::max_element(periods.begin(), periods.end());
  for (int m = 1; m <= 64; ++m) {
    const double cand = m * longest;
    bool ok = true;
    for (double p : periods) {
      const double ratio = cand / p;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        ok = false;
        break;
      }
    }
    if (ok) return cand;
  }
  return std::nullopt;
}

}  // namespace

Interval::Interval(double s, double e) : start(s), end(e) {
  if (!(finite(s) && finite(e) && e > s)) {
    throw std::invalid_argument("invalid interval: end must exceed start (got [" +
                                std::to_string(s) + ", " + std::to_string(e) + "])");
  }
}

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::Simpson ? "simpson" : "trapezoid";
}

QuadratureRule quadrature_rule_from_string(const std::string& name) {
  if (name == "simpson") return QuadratureRule::Simpson;
  if (name == "trapezoid") return QuadratureRule::Trapezoid;
  throw std::invalid_argument("unknown quadrature rule '" + name + "'");
}

namespace detail {

void validate(const wave::Sine& w) {
  require(finite(w.amplitude) && finite(w.omega) && finite(w.phase), "sine: non-finite parameter");
}
void validate(const wave::Square& w) {
  require(finite(w.amplitude), "square: non-finite amplitude");
  require(finite(w.period) && w.period > 0.0, "square: period must be > 0");
}
void validate(const wave::Triangle& w) {
  require(finite(w.amplitude), "triangle: non-finite amplitude");
  require(finite(w.period) && w.period > 0.0, "triangle: period must be > 0");
}
void validate(const wave::UnitStep& w) { require(finite(w.onset), "unit_step: non-finite onset"); }
void validate(const wave::Constant& w) { require(finite(w.value), "constant: non-finite value"); }
void validate(const wave::Exponential& w) {
  require(finite(w.amplitude), "exponential: non-finite amplitude");
  require(finite(w.rate) && w.rate > 0.0, "exponential: rate must be > 0");
}
void validate(const wave::DampedSine& w) {
  require(finite(w.amplitude) && finite(w.omega), "damped_sine: non-finite parameter");
  require(finite(w.gamma) && w.gamma >= 0.0, "damped_sine: gamma must be >= 0");
  require(w.omega > 0.0, "damped_sine: omega must be > 0");
}
void validate(const wave::PulseTrain& w) {
  require(!w.samples.empty(), "pulse_train: needs at least one level");
  require(finite(w.period) && w.period > 0.0, "pulse_train: period must be > 0");
  for (double v : w.samples) require(finite(v), "pulse_train: non-finite level");
}
void validate(const wave::Windowed& w) {
  require(finite(w.t_on) && finite(w.t_off) && w.t_off > w.t_on,
          "windowed: t_off must exceed t_on");
}
void validate(const wave::Scaled& w) { require(finite(w.factor), "scaled: non-finite factor"); }
void validate(const wave::TimeReversed& w) {
  require(finite(w.span) && w.span > 0.0, "time_reversed: span must be > 0");
}
void validate(const wave::PeriodicExtension& w) {
  require(finite(w.period) && w.period > 0.0, "periodic_extension: period must be > 0");
}
void validate(const wave::Sampled& w) {
  require(finite(w.t0), "sampled: non-finite t0");
  require(finite(w.dt) && w.dt > 0.0, "sampled: dt must be > 0");
  require(w.values.size() >= 2, "sampled: needs at least two values");
  for (double v : w.values) require(finite(v), "sampled: non-finite value");
}
void validate(const wave::Sum& w) { require(!w.terms.empty(), "sum: needs at least one term"); }

}  // namespace detail

double Waveform::eval(double t) const {
  return std::visit(
      Overloaded{
          [t](const wave::Sine& w) { return w.amplitude * std::sin(w.omega * t + w.phase); },
          [t](const wave::Square& w) {
            // Phase in (0, period]: a switching instant belongs to the half on its left.
            const double phase = t - w.period * (std::ceil(t / w.period) - 1.0);
            return phase <= 0.5 * w.period ? w.amplitude : -w.amplitude;
          },
          [t](const wave::Triangle& w) {
            const double u = t / w.period - std::floor(t / w.period);
            double v;
            if (u < 0.25) {
              v = 4.0 * u;
            } else if (u < 0.75) {
              v = 2.0 - 4.0 * u;
            } else {
              v = 4.0 * u - 4.0;
            }
            return w.amplitude * v;
          },
          [t](const wave::UnitStep& w) { return t >= w.onset ? 1.0 : 0.0; },
          [](const wave::Constant& w) { return w.value; },
          [t](const wave::Exponential& w) {
            return t >= 0.0 ? w.amplitude * std::exp(-w.rate * t) : 0.0;
          },
          [t](const wave::DampedSine& w) {
            if (t < 0.0) return 0.0;
            const double decay = w.gamma == 0.0 ? 1.0 : std::exp(-w.gamma * t);
            return w.amplitude * decay * std::sin(w.omega * t);
          },
          [t](const wave::PulseTrain& w) {
            const double u = t / w.period - std::floor(t / w.period);
            const auto n = w.samples.size();
            auto idx = static_cast<std::size_t>(u * static_cast<double>(n));
            if (idx >= n) idx = n - 1;
            return w.samples[idx];
          },
          [t](const wave::Windowed& w) {
            return (t >= w.t_on && t < w.t_off) ? w.inner.eval(t) : 0.0;
          },
          [t](const wave::Scaled& w) { return w.factor * w.inner.eval(t); },
          [t](const wave::TimeReversed& w) {
            return (t >= 0.0 && t <= w.span) ? w.inner.eval(w.span - t) : 0.0;
          },
          [t](const wave::PeriodicExtension& w) {
            const double n = std::floor(t / w.period);
            double r = t - n * w.period;
            if (r < 0.0) r = 0.0;
            if (r >= w.period) r = std::nextafter(w.period, 0.0);
            const double v = w.inner.eval(r);
            if (w.antiperiodic && std::fmod(std::abs(n), 2.0) == 1.0) return -v;
            return v;
          },
          [t](const wave::Sampled& w) {
            const double x = (t - w.t0) / w.dt;
            const double last = static_cast<double>(w.values.size() - 1);
            if (x < 0.0 || x > last) return 0.0;
            auto i = static_cast<std::size_t>(std::floor(x));
            if (i >= w.values.size() - 1) return w.values.back();
            const double frac = x - static_cast<double>(i);
            return w.values[i] + frac * (w.values[i + 1] - w.values[i]);
          },
          [t](const wave::Sum& w) {
            double acc = 0.0;
            for (const auto& term : w.terms) acc += term.eval(t);
            return acc;
          },
      },
      node_->alt);
}

std::optional<double> Waveform::period() const {
  return std::visit(
      Overloaded{
          [](const wave::Sine& w) -> std::optional<double> {
            if (w.omega == 0.0) return std::nullopt;
            return 2.0 * pi / std::abs(w.omega);
          },
          [](const wave::Square& w) -> std::optional<double> { return w.period; },
          [](const wave::Triangle& w) -> std::optional<double> { return w.period; },
          [](const wave::PulseTrain& w) -> std::optional<double> { return w.period; },
          [](const wave::Scaled& w) -> std::optional<double> { return w.inner.period(); },
          [](const wave::PeriodicExtension& w) -> std::optional<double> {
            return w.antiperiodic ? 2.0 * w.period : w.period;
          },
          [](const wave::Sum& w) -> std::optional<double> {
            std::vector<double> periods;
            for (const auto& term : w.terms) {
              if (term.as<wave::Constant>() != nullptr) continue;
              auto p = term.period();
              if (!p) return std::nullopt;
              periods.push_back(*p);
            }
            return common_period(periods);
          },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      node_->alt);
}

std::optional<double> Waveform::time_scale() const {
  return std::visit(
      Overloaded{
          [](const wave::Sine& w) -> std::optional<double> {
            if (w.omega == 0.0) return std::nullopt;
            return 2.0 * pi / std::abs(w.omega);
          },
          [](const wave::Square& w) -> std::optional<double> { return w.period; },
          [](const wave::Triangle& w) -> std::optional<double> { return w.period; },
          [](const wave::UnitStep&) -> std::optional<double> { return std::nullopt; },
          [](const wave::Constant&) -> std::optional<double> { return std::nullopt; },
          [](const wave::Exponential& w) -> std::optional<double> { return 1.0 / w.rate; },
          [](const wave::DampedSine& w) -> std::optional<double> {
            std::optional<double> s = 2.0 * pi / w.omega;
            if (w.gamma > 0.0) s = std::min(*s, 1.0 / w.gamma);
            return s;
          },
          [](const wave::PulseTrain& w) -> std::optional<double> { return w.period; },
          [](const wave::Windowed& w) { return w.inner.time_scale(); },
          [](const wave::Scaled& w) { return w.inner.time_scale(); },
          [](const wave::TimeReversed& w) { return w.inner.time_scale(); },
          [](const wave::PeriodicExtension& w) {
            return min_opt(w.inner.time_scale(), std::optional<double>(w.period));
          },
          [](const wave::Sampled&) -> std::optional<double> { return std::nullopt; },
          [](const wave::Sum& w) {
            std::optional<double> s;
            for (const auto& term : w.terms) s = min_opt(s, term.time_scale());
            return s;
          },
      },
      node_->alt);
}

void Waveform::breakpoints(double a, double b, std::vector<double>& out) const {
  if (!(b > a)) return;
  auto push_if_inside = [&](double x) {
    if (x > a && x < b) out.push_back(x);
  };
  std::visit(
      Overloaded{
          [](const wave::Sine&) {},
          [](const wave::Constant&) {},
          [&](const wave::Square& w) { lattice_points(0.0, 0.5 * w.period, a, b, out); },
          [&](const wave::Triangle& w) {
            lattice_points(0.25 * w.period, 0.5 * w.period, a, b, out);
          },
          [&](const wave::UnitStep& w) { push_if_inside(w.onset); },
          [&](const wave::Exponential&) { push_if_inside(0.0); },
          [&](const wave::DampedSine&) { push_if_inside(0.0); },
          [&](const wave::PulseTrain& w) {
            lattice_points(0.0, w.period / static_cast<double>(w.samples.size()), a, b, out);
          },
          [&](const wave::Windowed& w) {
            push_if_inside(w.t_on);
            push_if_inside(w.t_off);
            const double lo = std::max(a, w.t_on);
            const double hi = std::min(b, w.t_off);
            if (hi > lo) w.inner.breakpoints(lo, hi, out);
          },
          [&](const wave::Scaled& w) { w.inner.breakpoints(a, b, out); },
          [&](const wave::TimeReversed& w) {
            push_if_inside(0.0);
            push_if_inside(w.span);
            const double lo = std::max(a, 0.0);
            const double hi = std::min(b, w.span);
            if (hi > lo) {
              std::vector<double> inner;
              w.inner.breakpoints(w.span - hi, w.span - lo, inner);
              for (double x : inner) push_if_inside(w.span - x);
            }
          },
          [&](const wave::PeriodicExtension& w) {
            std::vector<double> inner;
            w.inner.breakpoints(0.0, w.period, inner);
            const double first = std::floor(a / w.period);
            const double last = std::floor(b / w.period);
            for (double n = first; n <= last; n += 1.0) {
              const double base = n * w.period;
              push_if_inside(base);
              for (double x : inner) push_if_inside(base + x);
            }
          },
          [&](const wave::Sampled& w) {
            const double t_end = w.t0 + w.dt * static_cast<double>(w.values.size() - 1);
            const double lo = std::max(a, w.t0);
            const double hi = std::min(b, t_end);
            push_if_inside(w.t0);
            push_if_inside(t_end);
            if (hi > lo) lattice_points(w.t0, w.dt, lo, hi, out);
          },
          [&](const wave::Sum& w) {
            for (const auto& term : w.terms) term.breakpoints(a, b, out);
          },
      },
      node_->alt);
}

bool Waveform::contains_sampled() const {
  return std::visit(
      Overloaded{
          [](const wave::Sampled&) { return true; },
          [](const wave::Windowed& w) { return w.inner.contains_sampled(); },
          [](const wave::Scaled& w) { return w.inner.contains_sampled(); },
          [](const wave::TimeReversed& w) { return w.inner.contains_sampled(); },
          [](const wave::PeriodicExtension& w) { return w.inner.contains_sampled(); },
          [](const wave::Sum& w) {
            return std::any_of(w.terms.begin(), w.terms.end(),
                               [](const Waveform& x) { return x.contains_sampled(); });
          },
          [](const auto&) { return false; },
      },
      node_->alt);
}

std::string Waveform::kind() const {
  return std::visit(Overloaded{
                        [](const wave::Sine&) { return "sine"; },
                        [](const wave::Square&) { return "square"; },
                        [](const wave::Triangle&) { return "triangle"; },
                        [](const wave::UnitStep&) { return "unit_step"; },
                        [](const wave::Constant&) { return "constant"; },
                        [](const wave::Exponential&) { return "exponential"; },
                        [](const wave::DampedSine&) { return "damped_sine"; },
                        [](const wave::PulseTrain&) { return "pulse_train"; },
                        [](const wave::Windowed&) { return "windowed"; },
                        [](const wave::Scaled&) { return "scaled"; },
                        [](const wave::TimeReversed&) { return "time_reversed"; },
                        [](const wave::PeriodicExtension&) { return "periodic_extension"; },
                        [](const wave::Sampled&) { return "sampled"; },
                        [](const wave::Sum&) { return "sum"; },
                    },
                    node_->alt);
}

// ---------------------------------------------------------------------------
// JSON descriptor

nlohmann::json Waveform::to_json() const {
  using nlohmann::json;
  json j;
  j["kind"] = kind();
  std::visit(
      Overloaded{
          [&](const wave::Sine& w) {
            j["params"] = {{"amplitude", w.amplitude}, {"omega", w.omega}, {"phase", w.phase}};
          },
          [&](const wave::Square& w) {
            j["params"] = {{"amplitude", w.amplitude}, {"period", w.period}};
          },
          [&](const wave::Triangle& w) {
            j["params"] = {{"amplitude", w.amplitude}, {"period", w.period}};
          },
          [&](const wave::UnitStep& w) { j["params"] = {{"onset", w.onset}}; },
          [&](const wave::Constant& w) { j["params"] = {{"value", w.value}}; },
          [&](const wave::Exponential& w) {
            j["params"] = {{"amplitude", w.amplitude}, {"rate", w.rate}};
          },
          [&](const wave::DampedSine& w) {
            j["params"] = {{"amplitude", w.amplitude}, {"gamma", w.gamma}, {"omega", w.omega}};
          },
          [&](const wave::PulseTrain& w) {
            j["params"] = {{"period", w.period}, {"samples", w.samples}};
          },
          [&](const wave::Windowed& w) {
            j["params"] = {{"t_on", w.t_on}, {"t_off", w.t_off}};
            j["inner"] = w.inner.to_json();
          },
          [&](const wave::Scaled& w) {
            j["params"] = {{"factor", w.factor}};
            j["inner"] = w.inner.to_json();
          },
          [&](const wave::TimeReversed& w) {
            j["params"] = {{"span", w.span}};
            j["inner"] = w.inner.to_json();
          },
          [&](const wave::PeriodicExtension& w) {
            j["params"] = {{"period", w.period}, {"antiperiodic", w.antiperiodic}};
            j["inner"] = w.inner.to_json();
          },
          [&](const wave::Sampled& w) {
            j["params"] = {{"t0", w.t0}, {"dt", w.dt}, {"values", w.values}};
          },
          [&](const wave::Sum& w) {
            j["params"] = json::object();
            j["terms"] = json::array();
            for (const auto& term : w.terms) j["terms"].push_back(term.to_json());
          },
      },
      node_->alt);
  return j;
}

namespace {

double num(const nlohmann::json& params, const char* key, std::optional<double> fallback,
           const std::string& kind) {
  if (params.contains(key)) {
    const auto& v = params.at(key);
    if (!v.is_number()) {
      throw std::invalid_argument(kind + ".params." + key + ": expected a number");
    }
    return v.get<double>();
  }
  if (fallback) return *fallback;
  throw std::invalid_argument(kind + ".params." + key + ": missing");
}

std::vector<double> num_array(const nlohmann::json& params, const char* key,
                              const std::string& kind) {
  if (!params.contains(key) || !params.at(key).is_array()) {
    throw std::invalid_argument(kind + ".params." + key + ": expected an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : params.at(key)) {
    if (!v.is_number()) {
      throw std::invalid_argument(kind + ".params." + key + ": expected an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Waveform Waveform::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw std::invalid_argument("waveform: expected an object with a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  if (!params.is_object()) throw std::invalid_argument(kind + ".params: expected an object");
  auto inner = [&]() {
    if (!j.contains("inner")) throw std::invalid_argument(kind + ".inner: missing");
    return Waveform::from_json(j.at("inner"));
  };

  if (kind == "sine") {
    return wave::Sine{num(params, "amplitude", 1.0, kind), num(params, "omega", std::nullopt, kind),
                      num(params, "phase", 0.0, kind)};
  }
  if (kind == "square") {
    return wave::Square{num(params, "amplitude", 1.0, kind),
                        num(params, "period", std::nullopt, kind)};
  }
  if (kind == "triangle") {
    return wave::Triangle{num(params, "amplitude", 1.0, kind),
                          num(params, "period", std::nullopt, kind)};
  }
  if (kind == "unit_step") return wave::UnitStep{num(params, "onset", 0.0, kind)};
  if (kind == "constant") return wave::Constant{num(params, "value", std::nullopt, kind)};
  if (kind == "exponential") {
    return wave::Exponential{num(params, "amplitude", 1.0, kind),
                             num(params, "rate", std::nullopt, kind)};
  }
  if (kind == "damped_sine") {
    return wave::DampedSine{num(params, "amplitude", 1.0, kind), num(params, "gamma", 0.0, kind),
                            num(params, "omega", std::nullopt, kind)};
  }
  if (kind == "pulse_train") {
    return wave::PulseTrain{num_array(params, "samples", kind),
                            num(params, "period", std::nullopt, kind)};
  }
  if (kind == "windowed") {
    return wave::Windowed{inner(), num(params, "t_on", std::nullopt, kind),
                          num(params, "t_off", std::nullopt, kind)};
  }
  if (kind == "scaled") return wave::Scaled{inner(), num(params, "factor", std::nullopt, kind)};
  if (kind == "time_reversed") {
    return wave::TimeReversed{inner(), num(params, "span", std::nullopt, kind)};
  }
  if (kind == "periodic_extension") {
    bool anti = false;
    if (params.contains("antiperiodic")) {
      if (!params.at("antiperiodic").is_boolean()) {
        throw std::invalid_argument(kind + ".params.antiperiodic: expected a boolean");
      }
      anti = params.at("antiperiodic").get<bool>();
    }
    return wave::PeriodicExtension{inner(), num(params, "period", std::nullopt, kind), anti};
  }
  if (kind == "sampled") {
    return wave::Sampled{num(params, "t0", 0.0, kind), num(params, "dt", std::nullopt, kind),
                         num_array(params, "values", kind)};
  }
  if (kind == "sum") {
    if (!j.contains("terms") || !j.at("terms").is_array()) {
      throw std::invalid_argument("sum.terms: expected an array of waveforms");
    }
    std::vector<Waveform> terms;
    for (const auto& t : j.at("terms")) terms.push_back(Waveform::from_json(t));
    return wave::Sum{std::move(terms)};
  }
  throw std::invalid_argument("waveform: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Constructors

Waveform sine(double amplitude, double omega, double phase) {
  return wave::Sine{amplitude, omega, phase};
}
Waveform square(double amplitude, double period) { return wave::Square{amplitude, period}; }
Waveform triangle(double amplitude, double period) { return wave::Triangle{amplitude, period}; }
Waveform unit_step(double onset) { return wave::UnitStep{onset}; }
Waveform constant(double value) { return wave::Constant{value}; }
Waveform scaled(const Waveform& w, double factor) { return wave::Scaled{w, factor}; }
Waveform windowed(const Waveform& w, double t_on, double t_off) {
  return wave::Windowed{w, t_on, t_off};
}
Waveform sum(std::vector<Waveform> terms) { return wave::Sum{std::move(terms)}; }

namespace {

// Levels of one period of a pulse pattern whose edges (fractions of the
// period) all fall on a common uniform grid.
std::vector<double> pulse_levels(const std::vector<std::pair<double, double>>& spans,
                                 const std::vector<double>& levels) {
  std::vector<double> edges;
  for (auto [lo, hi] : spans) {
    edges.push_back(lo);
    edges.push_back(hi);
  }
  for (int n = 1; n <= 10000; ++n) {
    const bool aligned = std::all_of(edges.begin(), edges.end(), [n](double e) {
      const double x = e * n;
      return std::abs(x - std::round(x)) < 1e-9;
    });
    if (!aligned) continue;
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (std::size_t s = 0; s < spans.size(); ++s) {
      const auto lo = static_cast<long>(std::lround(spans[s].first * n));
      const auto hi = static_cast<long>(std::lround(spans[s].second * n));
      for (long i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = levels[s];
    }
    return out;
  }
  throw std::invalid_argument("pulse: duty cycle must be a fraction with denominator <= 10000");
}

}  // namespace

Waveform standard_waveform(std::string_view kind_view, const std::map<std::string, double>& params) {
  const std::string kind(kind_view);
  auto get = [&](const std::string& key, std::optional<double> fallback) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument(kind + ": missing parameter '" + key + "'");
  };
  // Periodic shapes accept either period or omega.
  auto period = [&]() {
    if (params.count("period") != 0) return get("period", std::nullopt);
    if (params.count("omega") != 0) {
      const double w = get("omega", std::nullopt);
      require(w > 0.0, kind + ": omega must be > 0");
      return 2.0 * pi / w;
    }
    throw std::invalid_argument(kind + ": missing parameter 'period' (or 'omega')");
  };

  if (kind == "sine") {
    return sine(get("amplitude", 1.0), get("omega", std::nullopt), get("phase", 0.0));
  }
  if (kind == "square") return square(get("amplitude", 1.0), period());
  if (kind == "triangle") return triangle(get("amplitude", 1.0), period());
  if (kind == "unit_step" || kind == "step") {
    const Waveform step = unit_step(get("onset", 0.0));
    const double a = get("amplitude", 1.0);
    return a == 1.0 ? step : scaled(step, a);
  }
  if (kind == "constant") return constant(get("value", std::nullopt));
  if (kind == "exponential") {
    return wave::Exponential{get("amplitude", 1.0), get("rate", std::nullopt)};
  }
  if (kind == "damped_sine") {
    return wave::DampedSine{get("amplitude", 1.0), get("gamma", 0.0), get("omega", std::nullopt)};
  }
  if (kind == "pulse" || kind == "bipolar_pulse") {
    const double duty = get("duty", std::nullopt);
    const double a = get("amplitude", 1.0);
    const double t = period();
    if (kind == "pulse") {
      require(duty > 0.0 && duty <= 1.0, "pulse: duty must be in (0, 1]");
      return wave::PulseTrain{pulse_levels({{0.0, duty}}, {a}), t};
    }
    // +a centred on a quarter period, -a centred on three quarters: an odd,
    // half-wave antisymmetric train with only odd sine harmonics.
    require(duty > 0.0 && duty <= 0.5, "bipolar_pulse: duty must be in (0, 0.5]");
    return wave::PulseTrain{
        pulse_levels({{0.25 - duty / 2, 0.25 + duty / 2}, {0.75 - duty / 2, 0.75 + duty / 2}},
                     {a, -a}),
        t};
  }
  throw std::invalid_argument("unknown waveform kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Function space

namespace {

QuadratureRule rule_for(const QuadratureConfig& q, bool sampled) {
  return sampled ? QuadratureRule::Trapezoid : q.rule;
}

}  // namespace

double norm(const Waveform& w, const Interval& iv, const QuadratureConfig& q) {
  q.validate();
  std::vector<double> cuts;
  w.breakpoints(iv.start, iv.end, cuts);
  const double sq = integrate_piecewise(
      [&w](double t) {
        const double v = w.eval(t);
        return v * v;
      },
      iv.start, iv.end, cuts, w.time_scale(), q, rule_for(q, w.contains_sampled()));
  return std::sqrt(std::max(sq, 0.0));
}

double inner_product(const Waveform& w1, const Waveform& w2, const Interval& iv,
                     const QuadratureConfig& q) {
  q.validate();
  std::vector<double> cuts;
  w1.breakpoints(iv.start, iv.end, cuts);
  w2.breakpoints(iv.start, iv.end, cuts);
  return integrate_piecewise([&](double t) { return w1.eval(t) * w2.eval(t); }, iv.start, iv.end,
                             cuts, min_opt(w1.time_scale(), w2.time_scale()), q,
                             rule_for(q, w1.contains_sampled() || w2.contains_sampled()));
}

Gram gram(const Waveform& f, const Waveform& g, const Interval& iv, const QuadratureConfig& q) {
  q.validate();
  std::vector<double> cuts;
  f.breakpoints(iv.start, iv.end, cuts);
  g.breakpoints(iv.start, iv.end, cuts);
  // Same cuts, scale and rule: all three integrals share every node.
  Gram out{0.0, 0.0, 0.0};
  const auto scale = min_opt(f.time_scale(), g.time_scale());
  const auto rule = rule_for(q, f.contains_sampled() || g.contains_sampled());
  std::vector<double> cuts2 = cuts;
  std::vector<double> cuts3 = cuts;
  out.ff = integrate_piecewise(
      [&](double t) {
        const double v = f.eval(t);
        return v * v;
      },
      iv.start, iv.end, cuts, scale, q, rule);
  out.gg = integrate_piecewise(
      [&](double t) {
        const double v = g.eval(t);
        return v * v;
      },
      iv.start, iv.end, cuts2, scale, q, rule);
  out.fg = integrate_piecewise([&](double t) { return f.eval(t) * g.eval(t); }, iv.start, iv.end,
                               cuts3, scale, q, rule);
  return out;
}

Waveform scale_to_norm(const Waveform& w, double target, const Interval& iv,
                       const QuadratureConfig& q) {
  if (!(target > 0.0)) throw std::invalid_argument("scale_to_norm: target norm must be > 0");
  const double n = norm(w, iv, q);
  if (!(n > 0.0) || n < 1e-300) {
    throw std::invalid_argument("scale_to_norm: waveform vanishes on the interval");
  }
  return wave::Scaled{w, target / n};
}

Waveform periodic_extend(const Waveform& w, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("periodic_extend: period must be > 0");
  return wave::PeriodicExtension{w, period, false};
}

Waveform time_reverse_on_interval(const Waveform& w, double span) {
  if (!(span > 0.0)) throw std::invalid_argument("time_reverse_on_interval: T must be > 0");
  return wave::TimeReversed{w, span};
}

}  // namespace tdres
