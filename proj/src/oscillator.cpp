#include "tdres/oscillator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tdres {

using std::numbers::pi;

void RlcParams::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("rlc: L must be > 0");
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("rlc: C must be > 0");
  if (!(R >= 0.0) || !std::isfinite(R)) throw std::invalid_argument("rlc: R must be >= 0");
  if (!(v_m > 0.0) || !std::isfinite(v_m)) throw std::invalid_argument("rlc: v_m must be > 0");
}

SecondOrderOscillator::SecondOrderOscillator(double gamma, double omega0)
    : gamma_(gamma), omega0_(omega0) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw std::invalid_argument("oscillator: omega0 must be > 0");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("oscillator: gamma must be >= 0");
  }
  if (gamma >= omega0) {
    std::ostringstream msg;
    msg << "oscillator: not underdamped (gamma = " << gamma << " >= omega0 = " << omega0 << ")";
    throw std::invalid_argument(msg.str());
  }
}

SecondOrderOscillator SecondOrderOscillator::from_q(double q, double omega0) {
  if (!(q > 0.5)) {
    throw std::invalid_argument("oscillator: Q must exceed 0.5 for an underdamped system");
  }
  return {std::isinf(q) ? 0.0 : omega0 / (2.0 * q), omega0};
}

double SecondOrderOscillator::q() const {
  if (gamma_ == 0.0) return std::numeric_limits<double>::infinity();
  return omega0_ / (2.0 * gamma_);
}

double SecondOrderOscillator::omega_d() const {
  return std::sqrt(omega0_ * omega0_ - gamma_ * gamma_);
}

double SecondOrderOscillator::natural_period() const { return 2.0 * pi / omega0_; }
double SecondOrderOscillator::damped_period() const { return 2.0 * pi / omega_d(); }

nlohmann::json SecondOrderOscillator::to_json() const {
  return {{"gamma", gamma_}, {"omega0", omega0_}};
}

SecondOrderOscillator SecondOrderOscillator::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("oscillator: expected an object");
  auto get = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw std::invalid_argument(std::string("oscillator.") + key + ": expected a number");
    }
    return j.at(key).get<double>();
  };
  if (j.contains("gamma")) return {get("gamma"), get("omega0")};
  if (j.contains("q")) return from_q(get("q"), get("omega0"));
  if (j.contains("R")) {
    RlcParams p{get("R"), get("L"), get("C"), j.contains("v_m") ? get("v_m") : 1.0};
    return from_rlc(p);
  }
  throw std::invalid_argument("oscillator: need gamma/omega0, q/omega0 or R/L/C");
}

SecondOrderOscillator from_rlc(const RlcParams& p) {
  p.validate();
  return {p.R / (2.0 * p.L), 1.0 / std::sqrt(p.L * p.C)};
}

DerivedQuantities derived_quantities(const SecondOrderOscillator& osc) {
  return {osc.q(), osc.omega_d(), osc.natural_period(), osc.damped_period()};
}

std::string to_string(KernelFlavor f) {
  switch (f) {
    case KernelFlavor::Exact: return "exact";
    case KernelFlavor::Normalized: return "normalized";
    case KernelFlavor::SimplifiedHS: return "simplified_hs";
    case KernelFlavor::FirstOrder: return "first_order";
    case KernelFlavor::Custom: return "custom";
  }
  return "unknown";
}

KernelFlavor kernel_flavor_from_string(const std::string& name) {
  if (name == "exact") return KernelFlavor::Exact;
  if (name == "normalized") return KernelFlavor::Normalized;
  if (name == "simplified_hs" || name == "hs") return KernelFlavor::SimplifiedHS;
  if (name == "first_order") return KernelFlavor::FirstOrder;
  if (name == "custom") return KernelFlavor::Custom;
  throw std::invalid_argument("unknown kernel flavor '" + name + "'");
}

std::optional<double> ImpulseResponse::zero_crossing_spacing() const {
  switch (flavor_) {
    case KernelFlavor::Exact:
    case KernelFlavor::Normalized: return pi / osc_->omega_d();
    case KernelFlavor::SimplifiedHS: return pi / osc_->omega0();
    case KernelFlavor::FirstOrder: return std::nullopt;
    case KernelFlavor::Custom: {
      auto p = period();
      if (p) return *p / 2.0;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<double> ImpulseResponse::period() const {
  switch (flavor_) {
    case KernelFlavor::Exact:
    case KernelFlavor::Normalized: return osc_->damped_period();
    case KernelFlavor::SimplifiedHS: return osc_->natural_period();
    case KernelFlavor::FirstOrder: return std::nullopt;
    case KernelFlavor::Custom:
      if (custom_period_) return custom_period_;
      return waveform_.period();
  }
  return std::nullopt;
}

double ImpulseResponse::damping() const {
  switch (flavor_) {
    case KernelFlavor::Exact:
    case KernelFlavor::Normalized: return osc_->gamma();
    case KernelFlavor::FirstOrder: return rate_;
    default: return 0.0;
  }
}

nlohmann::json ImpulseResponse::to_json() const {
  nlohmann::json j{{"flavor", to_string(flavor_)}, {"waveform", waveform_.to_json()}};
  if (osc_) j["oscillator"] = osc_->to_json();
  if (cutoff_) j["cutoff"] = *cutoff_;
  if (flavor_ == KernelFlavor::FirstOrder) j["a"] = rate_;
  if (custom_period_) j["period"] = *custom_period_;
  return j;
}

ImpulseResponse ImpulseResponse::custom(Waveform w, std::optional<double> period) {
  if (period && !(*period > 0.0)) throw std::invalid_argument("kernel period must be > 0");
  ImpulseResponse h(KernelFlavor::Custom, std::move(w));
  h.custom_period_ = period;
  return h;
}

ImpulseResponse impulse_response(const SecondOrderOscillator& osc, KernelFlavor flavor) {
  const double wd = osc.omega_d();
  Waveform base = wave::DampedSine{1.0, osc.gamma(), wd};
  ImpulseResponse h = [&] {
    switch (flavor) {
      case KernelFlavor::Normalized: return ImpulseResponse(flavor, base);
      case KernelFlavor::Exact:
        return ImpulseResponse(flavor, wave::Scaled{base, osc.omega0() * osc.omega0() / wd});
      default:
        throw std::invalid_argument("impulse_response: flavor must be exact or normalized");
    }
  }();
  h.osc_ = osc;
  return h;
}

ImpulseResponse simplified_impulse_response(const SecondOrderOscillator& osc) {
  if (osc.gamma() == 0.0) {
    throw std::domain_error("simplified_impulse_response: lossless system has no finite cutoff");
  }
  const double half_period = pi / osc.omega0();
  const double ratio = (1.0 / osc.gamma()) / half_period;
  const double halves = std::max(1.0, std::floor(ratio + 0.5));
  const double cutoff = halves * half_period;
  ImpulseResponse h(KernelFlavor::SimplifiedHS,
                    wave::Windowed{wave::Sine{1.0, osc.omega0(), 0.0}, 0.0, cutoff});
  h.osc_ = osc;
  h.cutoff_ = cutoff;
  return h;
}

ImpulseResponse first_order_impulse_response(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("first_order_impulse_response: a must be > 0");
  }
  ImpulseResponse h(KernelFlavor::FirstOrder, wave::Exponential{1.0, a});
  h.rate_ = a;
  return h;
}

}  // namespace tdres
