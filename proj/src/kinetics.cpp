#include "grnn/kinetics.hpp"

#include "grnn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace grnn {

namespace {

void require_finite(double value, const char* what)
{
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

void require_time(double t)
{
  require_finite(t, "time");
  if (t < 0.0) {
    throw InvalidArgument("time must be non-negative");
  }
}

} // namespace

bool rates_degenerate(double d1, double d2) noexcept
{
  return std::abs(d1 - d2) < kDegenerateRateGap * std::max(d1, d2);
}

double exp_difference_quotient(double a, double b, double t)
{
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (rates_degenerate(lo, hi)) {
    return t * std::exp(-lo * t);
  }
  const double gap = hi - lo;
  return std::exp(-lo * t) * (-std::expm1(-gap * t)) / gap;
}

void require_valid(const GenePerceptron& gene)
{
  const auto positive = [&](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw InvalidArgument("gene '" + gene.id + "': " + name +
                            " must be finite and > 0");
    }
  };
  positive(gene.k1, "k1");
  positive(gene.k2, "k2");
  positive(gene.d1, "d1");
  positive(gene.d2, "d2");
  positive(gene.copy_number, "copy_number");
  if (!std::isfinite(gene.hill_n) || gene.hill_n < 1.0) {
    throw InvalidArgument("gene '" + gene.id + "': hill_n must be >= 1");
  }
}

double hill_term(const RegulationInput& input, double hill_n)
{
  require_finite(input.tf_concentration, "TF concentration");
  require_finite(input.k_half, "k_half");
  require_finite(hill_n, "Hill coefficient");
  if (input.k_half <= 0.0) {
    throw InvalidArgument("k_half must be > 0");
  }
  if (input.tf_concentration < 0.0) {
    throw InvalidArgument("TF concentration must be >= 0");
  }

  const bool activation = input.mode == RegulationMode::activation;
  if (input.tf_concentration == 0.0) {
    return activation ? 0.0 : 1.0;
  }
  // (K/TF)^n keeps both forms in [0,1] without overflowing TF^n.
  const double ratio = std::pow(input.k_half / input.tf_concentration, hill_n);
  if (std::isinf(ratio)) {
    return activation ? 0.0 : 1.0;
  }
  return activation ? 1.0 / (1.0 + ratio) : ratio / (1.0 + ratio);
}

double hill_product(const GenePerceptron& gene,
                    std::span<const RegulationInput> regs)
{
  if (regs.empty()) {
    throw InvalidArgument("gene '" + gene.id + "' has no regulators");
  }
  double product = 1.0;
  for (const auto& reg : regs) {
    product *= hill_term(reg, gene.hill_n);
  }
  return product;
}

double rna_rhs(const GenePerceptron& gene, std::span<const RegulationInput> regs,
               double rna)
{
  require_valid(gene);
  require_finite(rna, "RNA concentration");
  return gene.k1 * gene.copy_number * hill_product(gene, regs) - gene.d1 * rna;
}

double protein_rhs(const GenePerceptron& gene, double rna, double protein)
{
  require_valid(gene);
  require_finite(rna, "RNA concentration");
  require_finite(protein, "protein concentration");
  return gene.k2 * rna - gene.d2 * protein;
}

double rna_closed_form(const GenePerceptron& gene,
                       std::span<const RegulationInput> regs, double rna0,
                       double t)
{
  require_time(t);
  require_finite(rna0, "initial RNA");
  const double r_star = steady_state_rna(gene, regs);
  return r_star + (rna0 - r_star) * std::exp(-gene.d1 * t);
}

double protein_closed_form(const GenePerceptron& gene,
                           std::span<const RegulationInput> regs, double rna0,
                           double protein0, double t)
{
  require_time(t);
  require_finite(rna0, "initial RNA");
  require_finite(protein0, "initial protein");
  const double r_star = steady_state_rna(gene, regs);
  const double p_star = gene.k2 * r_star / gene.d2;
  return p_star + (protein0 - p_star) * std::exp(-gene.d2 * t) +
         gene.k2 * (rna0 - r_star) * exp_difference_quotient(gene.d1, gene.d2, t);
}

double steady_state_rna(const GenePerceptron& gene,
                        std::span<const RegulationInput> regs)
{
  require_valid(gene);
  return gene.k1 * gene.copy_number / gene.d1 * hill_product(gene, regs);
}

double steady_state_protein(const GenePerceptron& gene,
                            std::span<const RegulationInput> regs)
{
  require_valid(gene);
  return protein_ceiling(gene) * hill_product(gene, regs);
}

double normalized_steady_state(const GenePerceptron& gene,
                               std::span<const RegulationInput> regs)
{
  require_valid(gene);
  return hill_product(gene, regs);
}

double protein_ceiling(const GenePerceptron& gene)
{
  return gene.k1 * gene.k2 * gene.copy_number / (gene.d1 * gene.d2);
}

} // namespace grnn
