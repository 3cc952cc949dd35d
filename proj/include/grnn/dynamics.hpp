#pragma once

#include "grnn/dopri5.hpp"
#include "grnn/network.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace grnn {

struct IntegrationConfig
{
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double t_end = 100.0;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t samples = 1000;
};

/// Throws InvalidArgument if the config is unusable. t_end == 0 is allowed
/// and yields a single-sample trace.
void require_valid(const IntegrationConfig& cfg);

/// Uniform sample grid on [0, t_end] with exact end points.
std::vector<double> sample_grid(double t_end, std::size_t samples);

using InitialStates = std::map<std::string, GeneState>;

struct SimTrace
{
  std::vector<double> times;
  std::vector<std::string> genes; ///< topological order
  std::vector<std::vector<double>> rna;     ///< [gene][sample]
  std::vector<std::vector<double>> protein; ///< [gene][sample]
  std::vector<double> final_state;          ///< unclamped (rna, protein) pairs at t_end
  std::vector<std::string> diagnostics;
  Dopri5Stats stats;

  std::size_t gene_slot(const std::string& id) const;
};

/// Ratio max(d)/min(d) above which simulate() records a stiffness warning.
inline constexpr double kStiffnessWarningRatio = 1e4;

/// Integrates the coupled RNA/protein system of every gene. Regulators that
/// are genes contribute their current protein concentration. Missing
/// entries in `init` start at zero.
SimTrace simulate(const Grnn& net, const InputAssignment& inputs,
                  const InitialStates& init, const IntegrationConfig& cfg);

SimTrace simulate(const Grnn& net, const InputAssignment& inputs,
                  const IntegrationConfig& cfg);

struct ClosedFormDeviation
{
  std::string gene;
  bool applicable = false; ///< false when a regulator is another gene
  double max_rel_rna = 0.0;
  double max_rel_protein = 0.0;
};

/// Relative deviations are |sim - exact| / max(|exact|, floor), where floor
/// is this fraction of the trajectory's peak magnitude.
inline constexpr double kDeviationFloor = 1e-12;

std::vector<ClosedFormDeviation> compare_closed_form(const Grnn& net,
                                                     const InputAssignment& inputs,
                                                     const InitialStates& init,
                                                     const IntegrationConfig& cfg);

std::vector<ClosedFormDeviation> compare_closed_form(const Grnn& net,
                                                     const InputAssignment& inputs,
                                                     const IntegrationConfig& cfg);

/// `time,<gene>.rna,<gene>.protein,...`, one row per sample.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

} // namespace grnn
