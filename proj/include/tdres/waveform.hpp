// Time functions and the interval-restricted L2 function space.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tdres/quadrature.hpp"

namespace tdres {

/// Closed time interval [start, end] with end > start.
struct Interval {
  double start;
  double end;

  Interval(double s, double e);
  double length() const { return end - start; }
};

namespace detail {
struct WaveNode;
}

/// Immutable, cheaply copyable time-function descriptor. Nested variants share
/// their children, so copies never deep-copy a tree.
class Waveform {
 public:
  template <class Alt>
    requires(!std::is_same_v<std::remove_cvref_t<Alt>, Waveform>)
  Waveform(Alt alt);  // NOLINT(google-explicit-constructor): alternatives convert implicitly

  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  /// Fundamental period, if the function is periodic.
  std::optional<double> period() const;
  /// Shortest characteristic time (period, decay time) used to size quadrature panels.
  std::optional<double> time_scale() const;
  /// Appends jump/kink instants lying strictly inside (a, b).
  void breakpoints(double a, double b, std::vector<double>& out) const;
  bool contains_sampled() const;

  std::string kind() const;
  const detail::WaveNode& node() const { return *node_; }
  template <class Alt>
  const Alt* as() const;

  nlohmann::json to_json() const;
  static Waveform from_json(const nlohmann::json& j);

 private:
  std::shared_ptr<const detail::WaveNode> node_;
};

namespace wave {

struct Sine {
  double amplitude = 1.0;
  double omega = 1.0;  // rad/s
  double phase = 0.0;  // rad
};
/// +amplitude on the first half of each period, -amplitude on the second;
/// switching instants take the value of the half-period to their left.
struct Square {
  double amplitude = 1.0;
  double period = 1.0;
};
/// Sine-phased triangle: 0 at t = 0, peak +amplitude at period/4.
struct Triangle {
  double amplitude = 1.0;
  double period = 1.0;
};
struct UnitStep {
  double onset = 0.0;
};
struct Constant {
  double value = 0.0;
};
/// amplitude * exp(-rate t) for t >= 0, zero before.
struct Exponential {
  double amplitude = 1.0;
  double rate = 1.0;
};
/// amplitude * exp(-gamma t) sin(omega t) for t >= 0, zero before.
struct DampedSine {
  double amplitude = 1.0;
  double gamma = 0.0;
  double omega = 1.0;
};
/// One period of piecewise-constant levels, each held for period / size.
struct PulseTrain {
  std::vector<double> samples;
  double period = 1.0;
};
/// inner on [t_on, t_off), zero elsewhere.
struct Windowed {
  Waveform inner;
  double t_on;
  double t_off;
};
struct Scaled {
  Waveform inner;
  double factor;
};
/// inner(span - t) for t in [0, span], zero elsewhere.
struct TimeReversed {
  Waveform inner;
  double span;
};
/// inner restricted to [0, period) and repeated. With `antiperiodic` every
/// other copy is negated, so the result has period 2 * period.
struct PeriodicExtension {
  Waveform inner;
  double period;
  bool antiperiodic = false;
};
/// Linear interpolation on a uniform grid, zero outside it.
struct Sampled {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;
};
struct Sum {
  std::vector<Waveform> terms;
};

}  // namespace wave

namespace detail {

using WaveVariant =
    std::variant<wave::Sine, wave::Square, wave::Triangle, wave::UnitStep, wave::Constant,
                 wave::Exponential, wave::DampedSine, wave::PulseTrain, wave::Windowed, wave::Scaled,
                 wave::TimeReversed, wave::PeriodicExtension, wave::Sampled, wave::Sum>;

struct WaveNode {
  WaveVariant alt;
};

void validate(const wave::Sine& w);
void validate(const wave::Square& w);
void validate(const wave::Triangle& w);
void validate(const wave::UnitStep& w);
void validate(const wave::Constant& w);
void validate(const wave::Exponential& w);
void validate(const wave::DampedSine& w);
void validate(const wave::PulseTrain& w);
void validate(const wave::Windowed& w);
void validate(const wave::Scaled& w);
void validate(const wave::TimeReversed& w);
void validate(const wave::PeriodicExtension& w);
void validate(const wave::Sampled& w);
void validate(const wave::Sum& w);

}  // namespace detail

template <class Alt>
  requires(!std::is_same_v<std::remove_cvref_t<Alt>, Waveform>)
Waveform::Waveform(Alt alt) {
  detail::validate(alt);
  node_ = std::make_shared<const detail::WaveNode>(detail::WaveNode{std::move(alt)});
}

template <class Alt>
const Alt* Waveform::as() const {
  return std::get_if<Alt>(&node_->alt);
}

// Constructors for the common shapes.
Waveform sine(double amplitude, double omega, double phase = 0.0);
Waveform square(double amplitude, double period);
Waveform triangle(double amplitude, double period);
Waveform unit_step(double onset = 0.0);
Waveform constant(double value);
Waveform scaled(const Waveform& w, double factor);
Waveform windowed(const Waveform& w, double t_on, double t_off);
Waveform sum(std::vector<Waveform> terms);

/// Builds a waveform from a kind name and numeric parameters, e.g.
/// ("square", {{"amplitude", 1}, {"period", 6.28}}). Unknown kinds and
/// missing or invalid parameters throw std::invalid_argument.
Waveform standard_waveform(std::string_view kind, const std::map<std::string, double>& params);

/// sqrt of the integral of w^2 over iv.
double norm(const Waveform& w, const Interval& iv, const QuadratureConfig& q = {});
/// Integral of w1 * w2 over iv.
double inner_product(const Waveform& w1, const Waveform& w2, const Interval& iv,
                     const QuadratureConfig& q = {});

/// (f, f), (g, g) and (f, g) computed on one shared node set. Because the
/// quadrature weights are positive, |fg| <= sqrt(ff * gg) holds to rounding.
struct Gram {
  double ff;
  double gg;
  double fg;
};
Gram gram(const Waveform& f, const Waveform& g, const Interval& iv, const QuadratureConfig& q = {});

/// Returns Scaled{w, K} with K > 0 chosen so the norm over iv equals target.
Waveform scale_to_norm(const Waveform& w, double target, const Interval& iv,
                       const QuadratureConfig& q = {});
Waveform periodic_extend(const Waveform& w, double period);
Waveform time_reverse_on_interval(const Waveform& w, double span);

}  // namespace tdres
