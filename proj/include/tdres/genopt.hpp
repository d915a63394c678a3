// Optimal norm-constrained periodic drive for a given impulse response.
//
// On the generating interval [0, T) the drive that maximizes the response
// extremes under a fixed L2 norm is proportional to h(T - t). This module
// picks the interval, synthesizes that drive, and certifies candidates
// against the Cauchy-Schwarz bound.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tdres/oscillator.hpp"
#include "tdres/waveform.hpp"

namespace tdres {

enum class GenerationMode { HalfPeriod, FullPeriod };

std::string to_string(GenerationMode m);

struct GeneratingInterval {
  double length;  // T_gen: T / 2 for HalfPeriod, T for FullPeriod
  double period;  // kernel period T
  GenerationMode mode;
  double symmetry_defect;  // ||h(t + T/2) + h(t)|| / ||h|| over [0, T/2]

  Interval interval() const { return {0.0, length}; }
};

/// Defect below this selects HalfPeriod.
inline constexpr double kSymmetryTolerance = 1e-3;

GeneratingInterval choose_generating_interval(const ImpulseResponse& h, double period,
                                              const QuadratureConfig& q = {});
/// Uses the kernel's own period.
GeneratingInterval choose_generating_interval(const ImpulseResponse& h,
                                              const QuadratureConfig& q = {});

/// K h(T_gen - t) on the generating interval, continued periodically (with
/// alternating sign in HalfPeriod mode), K > 0 such that the norm over the
/// generating interval equals target_norm.
Waveform optimal_input(const ImpulseResponse& h, const GeneratingInterval& gi, double target_norm,
                       const QuadratureConfig& q = {});

/// |integral over [0, T_gen] of f(T_gen - t) h(t) dt|.
double s0(const Waveform& f, const ImpulseResponse& h, const GeneratingInterval& gi,
          const QuadratureConfig& q = {});

struct OptimalityReport {
  double s0;
  double bound;      // ||f|| ||h|| on the generating interval
  double gap_ratio;  // s0 / bound
  double f_norm;
  double h_norm;
  std::vector<double> predicted_extremes;  // (-1)^{k+1} s0 k, k = 1..

  nlohmann::json to_json() const;
};

OptimalityReport optimality_report(const Waveform& f, const ImpulseResponse& h,
                                   const GeneratingInterval& gi, const QuadratureConfig& q = {},
                                   int k_max = 10);

struct RankedInput {
  std::size_t index;  // position in the candidate list
  double s0;          // after norm matching
  double gap_ratio;
  double miss;        // (s0_best - s0) / s0_best
};

/// Norm-matches every candidate to target_norm on the generating interval and
/// sorts by s0, descending; exact ties keep insertion order.
std::vector<RankedInput> rank_inputs(const std::vector<Waveform>& candidates,
                                     const ImpulseResponse& h, const GeneratingInterval& gi,
                                     double target_norm, const QuadratureConfig& q = {});

struct PredictedVsSimulated {
  std::vector<double> times;
  std::vector<double> predicted;  // s0 k
  std::vector<double> simulated;  // |f_out(k T_gen)|
  std::vector<double> rel_error;
  double max_rel_error;
};

/// Largest gamma * t_k accepted by predicted_vs_simulated.
inline constexpr double kLinearRegimeGuard = 0.3;

PredictedVsSimulated predicted_vs_simulated(const ImpulseResponse& h, const Waveform& f,
                                            const GeneratingInterval& gi, int k_max,
                                            const QuadratureConfig& q = {});

}  // namespace tdres
