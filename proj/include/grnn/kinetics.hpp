#pragma once

#include <span>
#include <string>

namespace grnn {

enum class RegulationMode { activation, repression };

/// Kinetic parameters of one gene-perceptron. Rates are per unit time; the
/// network layer converts declared units to per-second before any of the
/// functions below see them.
struct GenePerceptron
{
  std::string id;
  double k1 = 0.0;          ///< transcription rate
  double k2 = 0.0;          ///< translation rate
  double d1 = 0.0;          ///< RNA degradation rate
  double d2 = 0.0;          ///< protein degradation rate
  double copy_number = 0.0; ///< gene product copy number C_N
  double hill_n = 1.0;      ///< Hill coefficient

  bool operator==(const GenePerceptron&) const = default;
};

/// One regulator acting on a gene: its current concentration, its
/// half-maximal constant K_A and whether it activates or represses.
struct RegulationInput
{
  double tf_concentration = 0.0;
  double k_half = 1.0;
  RegulationMode mode = RegulationMode::activation;
};

struct GeneState
{
  double rna = 0.0;
  double protein = 0.0;
  double time = 0.0;
};

/// Relative gap below which d1 and d2 are treated as equal and the
/// closed forms switch to their analytic limit.
inline constexpr double kDegenerateRateGap = 1e-9;

bool rates_degenerate(double d1, double d2) noexcept;

/// (e^{-a t} - e^{-b t}) / (b - a), symmetric in (a, b), evaluated without
/// cancellation; t e^{-a t} in the degenerate limit.
double exp_difference_quotient(double a, double b, double t);

/// Throws InvalidArgument unless every rate and the copy number are finite
/// and strictly positive and hill_n >= 1.
void require_valid(const GenePerceptron& gene);

/// Activation: TF^n / (TF^n + K^n). Repression: K^n / (K^n + TF^n).
double hill_term(const RegulationInput& input, double hill_n = 1.0);

/// Product of the gene's Hill terms over all regulators. Throws on an empty
/// regulator list.
double hill_product(const GenePerceptron& gene,
                    std::span<const RegulationInput> regs);

double rna_rhs(const GenePerceptron& gene, std::span<const RegulationInput> regs,
               double rna);
double protein_rhs(const GenePerceptron& gene, double rna, double protein);

double rna_closed_form(const GenePerceptron& gene,
                       std::span<const RegulationInput> regs, double rna0,
                       double t);
double protein_closed_form(const GenePerceptron& gene,
                           std::span<const RegulationInput> regs, double rna0,
                           double protein0, double t);

double steady_state_rna(const GenePerceptron& gene,
                        std::span<const RegulationInput> regs);
double steady_state_protein(const GenePerceptron& gene,
                            std::span<const RegulationInput> regs);

/// Steady-state protein divided by its supremum k1 k2 C_N / (d1 d2), which
/// is just the Hill product.
double normalized_steady_state(const GenePerceptron& gene,
                               std::span<const RegulationInput> regs);

/// Supremum of the steady-state protein level, k1 k2 C_N / (d1 d2).
double protein_ceiling(const GenePerceptron& gene);

} // namespace grnn
