#pragma once

#include "grnn/kinetics.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace grnn {

struct RegulatoryEdge
{
  std::string source; ///< gene or input id
  std::string target; ///< gene id
  RegulationMode mode = RegulationMode::activation;
  double k_half = 1.0;

  bool operator==(const RegulatoryEdge&) const = default;
};

enum class RateUnit { per_second, per_minute, per_hour };

/// Seconds in one unit of the given rate denominator.
double seconds_per(RateUnit unit) noexcept;

/// A gene regulatory neural network as declared in a spec document. Gene
/// rates are stored in their declared units (see `units`); use
/// `per_second()` or a NetworkPlan for anything numeric.
struct Grnn
{
  std::map<std::string, GenePerceptron> genes;
  std::vector<RegulatoryEdge> edges;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  /// Optional per-field unit annotation for k1, k2, d1, d2.
  std::map<std::string, RateUnit> units;

  bool operator==(const Grnn&) const = default;

  /// The gene with its rates converted to per-second.
  GenePerceptron per_second(const std::string& id) const;

  bool is_input(const std::string& id) const;
};

using InputAssignment = std::map<std::string, double>;

struct Violation
{
  enum class Kind {
    cycle,
    dangling_edge,
    orphan_gene,
    missing_parameter,
    non_positive_rate,
    invalid_hill,
    invalid_k_half,
    duplicate_edge,
    id_collision,
    edge_into_input,
    unknown_output,
  };

  Kind kind;
  std::string message;
};

const char* to_string(Violation::Kind kind) noexcept;

struct ValidationReport
{
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation::Kind kind) const noexcept;
};

ValidationReport validate(const Grnn& net);

/// Throws PreconditionError listing the violations if `net` is invalid.
void require_valid(const Grnn& net);

/// Deterministic topological order of the genes (Kahn's algorithm, ties
/// broken by id). Requires a valid network.
std::vector<std::string> topological_order(const Grnn& net);

/// True if `order` is a permutation of the genes consistent with every edge.
bool is_topological_order(const Grnn& net, std::span<const std::string> order);

struct SteadyState
{
  double rna = 0.0;
  double protein = 0.0;
  double normalized = 0.0;
};

using SteadyStateMap = std::map<std::string, SteadyState>;

/// Index-based view of a validated network for repeated evaluation.
/// Genes are numbered in a topological order; regulators refer either to
/// an input slot or to an earlier gene.
class NetworkPlan
{
public:
  struct Regulator
  {
    bool from_input = false;
    std::size_t index = 0; ///< input slot or gene index
    RegulationMode mode = RegulationMode::activation;
    double k_half = 1.0;
  };

  explicit NetworkPlan(const Grnn& net);
  NetworkPlan(const Grnn& net, std::span<const std::string> order);

  std::size_t gene_count() const noexcept { return genes_.size(); }
  std::size_t input_count() const noexcept { return inputs_.size(); }

  const GenePerceptron& gene(std::size_t i) const { return genes_[i]; }
  const std::vector<Regulator>& regulators(std::size_t i) const
  {
    return regulators_[i];
  }
  const std::vector<std::string>& input_ids() const noexcept { return inputs_; }
  std::size_t gene_index(const std::string& id) const;
  std::size_t input_index(const std::string& id) const;

  /// True when every regulator of gene i is an external input.
  bool driven_by_inputs_only(std::size_t i) const;

  /// Input values ordered by input slot; throws InvalidArgument if the
  /// assignment misses a declared input, names an unknown one, or holds a
  /// negative or non-finite value.
  std::vector<double> input_vector(const InputAssignment& inputs) const;

  /// Regulation inputs of gene i given input values and current protein
  /// concentrations of all genes (indexed like the plan).
  void fill_regulation(std::size_t i, std::span<const double> input_values,
                       std::span<const double> proteins,
                       std::vector<RegulationInput>& out) const;

  /// Steady state of every gene, indexed like the plan.
  std::vector<SteadyState> steady_states(std::span<const double> input_values) const;

private:
  std::vector<GenePerceptron> genes_;
  std::vector<std::vector<Regulator>> regulators_;
  std::vector<std::string> inputs_;
  std::map<std::string, std::size_t> gene_index_;
};

SteadyStateMap propagate_steady_state(const Grnn& net,
                                      const InputAssignment& inputs);

/// Same, evaluating genes in the caller's topological order.
SteadyStateMap propagate_steady_state(const Grnn& net,
                                      const InputAssignment& inputs,
                                      std::span<const std::string> order);

} // namespace grnn
