#include "tdres/sysdecomp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdres {

using std::numbers::pi;

DecomposedSolution first_order_solve(const FirstOrderProblem& p, const std::vector<double>& grid) {
  if (!(p.a > 0.0) || !std::isfinite(p.a)) throw std::invalid_argument("first_order_solve: a must be > 0");
  DecomposedSolution s;
  s.t = grid;
  s.zir.reserve(grid.size());
  s.zsr.reserve(grid.size());
  s.total.reserve(grid.size());
  for (double t : grid) {
    const double e = std::exp(-p.a * t);
    const double zir = p.y0 * e;
    const double zsr = p.A / p.a * (1.0 - e);
    s.zir.push_back(zir);
    s.zsr.push_back(zsr);
    s.total.push_back(zir + zsr);
  }
  return s;
}

double ClosedFormSecondOrder::eval(double t) const {
  const double e = std::exp(-gamma * t);
  return steady_amplitude * std::sin(omega * t + steady_phase) +
         e * (K1 * std::cos(omega_d * t) + K2 * std::sin(omega_d * t));
}

double ClosedFormSecondOrder::derivative(double t) const {
  const double e = std::exp(-gamma * t);
  const double c = std::cos(omega_d * t);
  const double s = std::sin(omega_d * t);
  return steady_amplitude * omega * std::cos(omega * t + steady_phase) +
         e * ((-gamma * K1 + omega_d * K2) * c + (-gamma * K2 - omega_d * K1) * s);
}

ClosedFormSecondOrder second_order_closed_form(const SecondOrderOscillator& osc,
                                               const wave::Sine& drive, KernelFlavor flavor) {
  detail::validate(drive);
  const double w0 = osc.omega0();
  const double g = osc.gamma();
  const double wd = osc.omega_d();
  const double w = drive.omega;
  if (g == 0.0 && w == w0) {
    throw std::domain_error(
        "second_order_closed_form: lossless system driven at omega0 has no steady term; use the "
        "convolution engine");
  }
  double gain = 0.0;
  switch (flavor) {
    case KernelFlavor::Normalized: gain = wd; break;
    case KernelFlavor::Exact: gain = w0 * w0; break;
    default: throw std::invalid_argument("second_order_closed_form: flavor must be exact or normalized");
  }
  const std::complex<double> D(w0 * w0 - w * w, 2.0 * g * w);
  const double M = gain * drive.amplitude / std::abs(D);
  const double phase = drive.phase - std::arg(D);
  const double yp0 = M * std::sin(phase);
  const double dyp0 = M * w * std::cos(phase);
  const double K1 = -yp0;
  const double K2 = (g * K1 - dyp0) / wd;
  return {K1, K2, M, phase, g, wd, w};
}

SecondOrderTrace second_order_closed_form(const SecondOrderOscillator& osc, const wave::Sine& drive,
                                          const std::vector<double>& grid, KernelFlavor flavor) {
  SecondOrderTrace tr{grid, {}, second_order_closed_form(osc, drive, flavor)};
  tr.values.reserve(grid.size());
  for (double t : grid) tr.values.push_back(tr.form.eval(t));
  return tr;
}

NewtonVelocity newton_velocity(const Waveform& force, const std::function<double(double)>& mass,
                               double v0, double t, const QuadratureConfig& q) {
  if (!(t >= 0.0)) throw std::invalid_argument("newton_velocity: t must be >= 0");
  q.validate();
  std::vector<double> cuts;
  force.breakpoints(0.0, t, cuts);
  auto integrand = [&](double s) {
    const double m = mass(s);
    if (!(m > 0.0)) throw std::domain_error("newton_velocity: mass must be > 0");
    return force.eval(s) / m;
  };
  if (!(mass(0.0) > 0.0) || !(mass(t) > 0.0)) {
    throw std::domain_error("newton_velocity: mass must be > 0");
  }
  // The mass profile is opaque, so resolve at least the whole span.
  const auto ts = force.time_scale();
  const double scale = ts ? std::min(*ts, t) : t;
  const double zsr = integrate_piecewise(integrand, 0.0, t, cuts, scale, q,
                                         force.contains_sampled() ? QuadratureRule::Trapezoid : q.rule);
  return {v0, zsr, v0 + zsr};
}

NewtonVelocity newton_velocity(const Waveform& force, double mass, double v0, double t,
                               const QuadratureConfig& q) {
  if (!(mass > 0.0)) throw std::domain_error("newton_velocity: mass must be > 0");
  return newton_velocity(force, [mass](double) { return mass; }, v0, t, q);
}

double asymptotic_tail(const ImpulseResponse& h, const Waveform& input, double t,
                       const QuadratureConfig& q) {
  if (!(t >= 0.0)) throw std::invalid_argument("asymptotic_tail: t must be >= 0");
  if (!input.period()) throw std::invalid_argument("asymptotic_tail: input must be periodic");
  double upper = 0.0;
  if (h.damping() > 0.0) {
    upper = 40.0 / h.damping();
  } else if (h.cutoff()) {
    upper = *h.cutoff();
  } else {
    throw std::domain_error("asymptotic_tail: gamma = 0, the integral does not converge");
  }
  return convolution_segment(h.waveform(), input, t, 0.0, upper, q);
}

namespace {

std::complex<double> kernel_transform(const SecondOrderOscillator& osc, std::complex<double> s,
                                      KernelFlavor flavor) {
  const double w0 = osc.omega0();
  const double wd = osc.omega_d();
  const std::complex<double> a = s + osc.gamma();
  std::complex<double> H = w0 * w0 / (a * a + wd * wd);
  switch (flavor) {
    case KernelFlavor::Exact: return H;
    case KernelFlavor::Normalized: return H * (wd / (w0 * w0));
    default: throw std::invalid_argument("laplace: flavor must be exact or normalized");
  }
}

}  // namespace

std::complex<double> laplace_periodic_output(const SecondOrderOscillator& osc,
                                             const Waveform& input, std::complex<double> s,
                                             const QuadratureConfig& q, KernelFlavor flavor) {
  const auto period = input.period();
  if (!period) throw std::invalid_argument("laplace_periodic_output: input must be periodic");
  const double T = *period;
  const std::complex<double> den = 1.0 - std::exp(-s * T);
  if (std::abs(den) < 1e-12) {
    throw std::domain_error("laplace_periodic_output: pole, 1 - e^{-sT} vanishes");
  }
  if (!(s.real() > 0.0)) throw std::invalid_argument("laplace_periodic_output: Re(s) must be > 0");
  q.validate();
  auto scale = input.time_scale();
  if (s.imag() != 0.0) {
    const double ts = 2.0 * pi / std::abs(s.imag());
    scale = scale ? std::min(*scale, ts) : ts;
  }
  if (!scale) scale = T;
  const QuadratureRule rule = input.contains_sampled() ? QuadratureRule::Trapezoid : q.rule;
  std::vector<double> cuts;
  input.breakpoints(0.0, T, cuts);
  std::vector<double> cuts2 = cuts;
  const double re = integrate_piecewise(
      [&](double t) { return (input.eval(t) * std::exp(-s * t)).real(); }, 0.0, T, cuts, scale, q,
      rule);
  const double im = integrate_piecewise(
      [&](double t) { return (input.eval(t) * std::exp(-s * t)).imag(); }, 0.0, T, cuts2, scale, q,
      rule);
  return kernel_transform(osc, s, flavor) * std::complex<double>(re, im) / den;
}

std::complex<double> numeric_laplace_of_response(const SecondOrderOscillator& osc,
                                                 const Waveform& input, std::complex<double> s,
                                                 double horizon, const QuadratureConfig& q,
                                                 KernelFlavor flavor) {
  if (!(horizon > 0.0)) throw std::invalid_argument("numeric_laplace: horizon must be > 0");
  const ImpulseResponse h = impulse_response(osc, flavor);
  double t_short = osc.damped_period();
  if (auto p = input.period()) t_short = std::min(t_short, *p);
  if (s.imag() != 0.0) t_short = std::min(t_short, 2.0 * pi / std::abs(s.imag()));
  auto n = static_cast<std::size_t>(std::ceil(horizon / (t_short / 64.0)));
  if (n % 2 != 0) ++n;
  const double dt = horizon / static_cast<double>(n);
  const ResponseTrace tr = zsr(h, input, horizon, dt, q);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i <= n && i < tr.values.size(); ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 != 0 ? 4.0 : 2.0);
    acc += w * tr.values[i] * std::exp(-s * tr.time(i));
  }
  return acc * dt / 3.0;
}

nlohmann::json LaplaceCheck::to_json() const {
  return {{"s_re", s.real()},
          {"s_im", s.imag()},
          {"formula_re", formula.real()},
          {"formula_im", formula.imag()},
          {"numeric_re", numeric.real()},
          {"numeric_im", numeric.imag()},
          {"rel_err", rel_err},
          {"kernel", to_string(flavor)},
          {"kernel_scaling", flavor == KernelFlavor::Normalized ? "H(s) * omega_d / omega0^2" : "H(s)"},
          {"horizon", horizon}};
}

LaplaceCheck laplace_check(const SecondOrderOscillator& osc, const Waveform& input,
                           std::complex<double> s, const QuadratureConfig& q, KernelFlavor flavor) {
  if (osc.lossless()) throw std::domain_error("laplace_check: requires gamma > 0");
  const double horizon = 30.0 / osc.gamma();
  const auto formula = laplace_periodic_output(osc, input, s, q, flavor);
  const auto numeric = numeric_laplace_of_response(osc, input, s, horizon, q, flavor);
  return {s, formula, numeric, std::abs(formula - numeric) / std::abs(formula), flavor, horizon};
}

}  // namespace tdres
