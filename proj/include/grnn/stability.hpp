#pragma once

#include "grnn/dynamics.hpp"
#include "grnn/kinetics.hpp"
#include "grnn/network.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace grnn {

/// Jacobian of the (rna, protein) system of one gene, row-major.
std::array<double, 4> jacobian(const GenePerceptron& gene);

/// (-d1, -d2): the Jacobian is lower triangular.
std::pair<double, double> eigenvalues(const GenePerceptron& gene);

/// V = (R - R*)^2 + (P - P*)^2.
double lyapunov_value(const GenePerceptron& gene, std::span<const RegulationInput> regs,
                      const GeneState& state);

/// dV/dt at an arbitrary state via the chain rule,
/// 2 (R - R*) dR/dt + 2 (P - P*) dP/dt.
double lyapunov_derivative_at(const GenePerceptron& gene,
                              std::span<const RegulationInput> regs,
                              const GeneState& state);

/// Closed-form dV/dt along the trajectory that starts from zero RNA and
/// protein. Uses the analytic limit when d1 and d2 coincide.
double lyapunov_derivative_closed_form(const GenePerceptron& gene,
                                       std::span<const RegulationInput> regs, double t);

/// Chain-rule dV/dt along the analytic trajectory from `init`, with the
/// deviations from equilibrium taken from the closed forms directly.
std::vector<double> lyapunov_derivative_chain(const GenePerceptron& gene,
                                              std::span<const RegulationInput> regs,
                                              std::span<const double> times,
                                              const GeneState& init = {});

/// Closed-form dV/dt on a time grid. Throws UnsupportedConfiguration for a
/// non-zero initial state; use lyapunov_derivative_chain instead.
std::vector<double> lyapunov_derivative_trace(const GenePerceptron& gene,
                                              std::span<const RegulationInput> regs,
                                              std::span<const double> times,
                                              const GeneState& init = {});

inline constexpr double kDefaultStabilizationBand = 1e-3;

/// Smallest sample time after which |dV/dt| <= band * max|dV/dt| holds at
/// every later sample. nullopt when the last sample is still outside.
std::optional<double> stabilization_time(std::span<const double> times,
                                         std::span<const double> dvdt,
                                         double band = kDefaultStabilizationBand);

enum class TraceSource {
  analytic, ///< per-gene closed forms, upstream TFs held at their steady state
  coupled   ///< chain rule on the integrated network trajectory
};

struct StabilityConfig
{
  TraceSource source = TraceSource::analytic;
  double band = kDefaultStabilizationBand;
  double t_end = 0.0; ///< 0 picks 40 / (smallest degradation rate)
  std::size_t samples = 2001;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct GeneStability
{
  std::string gene;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool stable = false;
  std::vector<double> times;
  std::vector<double> dvdt;
  std::optional<double> stabilization_time;
};

struct StabilityReport
{
  TraceSource source = TraceSource::analytic;
  std::vector<GeneStability> genes; ///< topological order
  /// Largest per-gene stabilization time; nullopt if any gene never settles.
  std::optional<double> network_stabilization_time;

  const GeneStability& gene(const std::string& id) const;
};

StabilityReport analyze_network(const Grnn& net, const InputAssignment& inputs,
                                const StabilityConfig& cfg = {});

std::string to_string(TraceSource source);

/// `time,dVdt`
void write_lyapunov_csv(std::ostream& out, const GeneStability& gene);

/// `gene,lambda1,lambda2,stabilization_time`, "not_reached" when absent.
void write_stability_summary_csv(std::ostream& out, const StabilityReport& report);

} // namespace grnn
