#include "grnn/stability.hpp"

#include "grnn/errors.hpp"
#include "grnn/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace grnn {

namespace {

// Below this relative gap between d1 and d2 the printed bracket loses
// digits to cancellation; the factored form is used instead.
constexpr double kFactoredFormGap = 1e-3;

double squared_hill_product(const GenePerceptron& gene,
                            std::span<const RegulationInput> regs)
{
  const double h = hill_product(gene, regs);
  return h * h;
}

} // namespace

std::array<double, 4> jacobian(const GenePerceptron& gene)
{
  require_valid(gene);
  return {-gene.d1, 0.0, gene.k2, -gene.d2};
}

std::pair<double, double> eigenvalues(const GenePerceptron& gene)
{
  require_valid(gene);
  return {-gene.d1, -gene.d2};
}

double lyapunov_value(const GenePerceptron& gene, std::span<const RegulationInput> regs,
                      const GeneState& state)
{
  const double dr = state.rna - steady_state_rna(gene, regs);
  const double dp = state.protein - steady_state_protein(gene, regs);
  return dr * dr + dp * dp;
}

double lyapunov_derivative_at(const GenePerceptron& gene,
                              std::span<const RegulationInput> regs,
                              const GeneState& state)
{
  const double dr = state.rna - steady_state_rna(gene, regs);
  const double dp = state.protein - steady_state_protein(gene, regs);
  return 2.0 * dr * rna_rhs(gene, regs, state.rna) +
         2.0 * dp * protein_rhs(gene, state.rna, state.protein);
}

double lyapunov_derivative_closed_form(const GenePerceptron& gene,
                                       std::span<const RegulationInput> regs, double t)
{
  require_valid(gene);
  if (!std::isfinite(t) || t < 0.0) {
    throw InvalidArgument("time must be finite and non-negative");
  }
  const double d1 = gene.d1;
  const double d2 = gene.d2;
  const double k2 = gene.k2;
  const double drive_sq =
      gene.k1 * gene.k1 * gene.copy_number * gene.copy_number * squared_hill_product(gene, regs);

  const double gap = std::abs(d1 - d2) / std::max(d1, d2);
  if (gap >= kFactoredFormGap) {
    // Printed bracket with e^{-2t(d1+d2)} folded into each exponential.
    const double diff = d1 - d2;
    const double bracket = d2 * diff * diff * std::exp(-2.0 * d1 * t) +
                           k2 * k2 * (d2 * std::exp(-2.0 * d1 * t) + d1 * std::exp(-2.0 * d2 * t)) -
                           k2 * k2 * (d1 + d2) * std::exp(-(d1 + d2) * t);
    return -2.0 * drive_sq * bracket / (d1 * d2 * diff * diff);
  }
  // Same expression with (d1 - d2)^2 divided out analytically; reduces to
  // the t e^{-dt} limit when the rates coincide.
  const double q = exp_difference_quotient(d1, d2, t);
  const double rna_part = std::exp(-2.0 * d1 * t) / d1;
  const double protein_part = k2 * k2 * q * (d2 * q + std::exp(-d2 * t)) / (d1 * d2);
  return -2.0 * drive_sq * (rna_part + protein_part);
}

std::vector<double> lyapunov_derivative_chain(const GenePerceptron& gene,
                                              std::span<const RegulationInput> regs,
                                              std::span<const double> times,
                                              const GeneState& init)
{
  require_valid(gene);
  const double r_star = steady_state_rna(gene, regs);
  const double p_star = steady_state_protein(gene, regs);
  const double r0 = init.rna - r_star;
  const double p0 = init.protein - p_star;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) {
      throw InvalidArgument("time must be finite and non-negative");
    }
    const double dr = r0 * std::exp(-gene.d1 * t);
    const double dp =
        p0 * std::exp(-gene.d2 * t) + gene.k2 * r0 * exp_difference_quotient(gene.d1, gene.d2, t);
    const double rna_rate = -gene.d1 * dr;
    const double protein_rate = gene.k2 * dr - gene.d2 * dp;
    out.push_back(2.0 * dr * rna_rate + 2.0 * dp * protein_rate);
  }
  return out;
}

std::vector<double> lyapunov_derivative_trace(const GenePerceptron& gene,
                                              std::span<const RegulationInput> regs,
                                              std::span<const double> times,
                                              const GeneState& init)
{
  if (init.rna != 0.0 || init.protein != 0.0) {
    throw UnsupportedConfiguration(
        "closed-form dV/dt assumes zero initial RNA and protein; use the chain-rule form");
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back(lyapunov_derivative_closed_form(gene, regs, t));
  }
  return out;
}

std::optional<double> stabilization_time(std::span<const double> times,
                                         std::span<const double> dvdt, double band)
{
  if (times.empty() || times.size() != dvdt.size()) {
    throw InvalidArgument("stabilization_time needs a non-empty trace of matching length");
  }
  if (!(band >= 0.0) || !std::isfinite(band)) {
    throw InvalidArgument("band must be finite and >= 0");
  }
  double peak = 0.0;
  for (double v : dvdt) {
    peak = std::max(peak, std::abs(v));
  }
  const double limit = band * peak;
  std::size_t settled = 0;
  for (std::size_t i = dvdt.size(); i-- > 0;) {
    if (std::abs(dvdt[i]) > limit) {
      settled = i + 1;
      break;
    }
  }
  if (settled == dvdt.size()) {
    return std::nullopt;
  }
  return times[settled];
}

const GeneStability& StabilityReport::gene(const std::string& id) const
{
  for (const auto& g : genes) {
    if (g.gene == id) {
      return g;
    }
  }
  throw InvalidArgument("stability report has no gene '" + id + "'");
}

std::string to_string(TraceSource source)
{
  return source == TraceSource::analytic ? "analytic" : "coupled";
}

StabilityReport analyze_network(const Grnn& net, const InputAssignment& inputs,
                                const StabilityConfig& cfg)
{
  require_valid(net);
  if (!(cfg.band >= 0.0) || !std::isfinite(cfg.band)) {
    throw InvalidArgument("band must be finite and >= 0");
  }
  const NetworkPlan plan(net);
  const std::vector<double> input_values = plan.input_vector(inputs);
  const std::size_t n = plan.gene_count();

  double t_end = cfg.t_end;
  if (t_end == 0.0) {
    double d_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      d_min = std::min({d_min, plan.gene(i).d1, plan.gene(i).d2});
    }
    t_end = n == 0 ? 1.0 : 40.0 / d_min;
  }
  if (!std::isfinite(t_end) || t_end < 0.0) {
    throw InvalidArgument("t_end must be finite and >= 0");
  }
  if (t_end > 0.0 && cfg.samples < 2) {
    throw InvalidArgument("at least two samples are needed when t_end > 0");
  }
  const std::vector<double> times = sample_grid(t_end, cfg.samples);

  // Upstream TFs at equilibrium: the regulator levels each gene settles to.
  const std::vector<SteadyState> steady = plan.steady_states(input_values);
  std::vector<double> steady_proteins(n);
  for (std::size_t i = 0; i < n; ++i) {
    steady_proteins[i] = steady[i].protein;
  }

  StabilityReport report;
  report.source = cfg.source;
  std::vector<RegulationInput> regs;

  std::optional<SimTrace> trace;
  if (cfg.source == TraceSource::coupled) {
    IntegrationConfig ic;
    ic.rel_tol = cfg.rel_tol;
    ic.abs_tol = cfg.abs_tol;
    ic.t_end = t_end;
    ic.samples = cfg.samples;
    trace = simulate(net, inputs, ic);
  }

  bool all_settled = true;
  double latest = 0.0;
  std::vector<double> proteins(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GenePerceptron& g = plan.gene(i);
    GeneStability gs;
    gs.gene = g.id;
    std::tie(gs.lambda1, gs.lambda2) = eigenvalues(g);
    gs.stable = gs.lambda1 < 0.0 && gs.lambda2 < 0.0;
    gs.times = times;

    if (cfg.source == TraceSource::analytic) {
      plan.fill_regulation(i, input_values, steady_proteins, regs);
      gs.dvdt = lyapunov_derivative_trace(g, regs, times);
    } else {
      const double r_star = steady[i].rna;
      const double p_star = steady[i].protein;
      gs.dvdt.resize(times.size());
      for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          proteins[j] = trace->protein[j][k];
        }
        plan.fill_regulation(i, input_values, proteins, regs);
        const double rna = trace->rna[i][k];
        const double protein = trace->protein[i][k];
        const double rna_rate = g.k1 * g.copy_number * hill_product(g, regs) - g.d1 * rna;
        const double protein_rate = protein_rhs(g, rna, protein);
        gs.dvdt[k] = 2.0 * (rna - r_star) * rna_rate + 2.0 * (protein - p_star) * protein_rate;
      }
    }
    gs.stabilization_time = stabilization_time(gs.times, gs.dvdt, cfg.band);
    if (gs.stabilization_time) {
      latest = std::max(latest, *gs.stabilization_time);
    } else {
      all_settled = false;
    }
    report.genes.push_back(std::move(gs));
  }
  if (all_settled && n > 0) {
    report.network_stabilization_time = latest;
  }
  return report;
}

void write_lyapunov_csv(std::ostream& out, const GeneStability& gene)
{
  out << "time,dVdt\n";
  for (std::size_t k = 0; k < gene.times.size(); ++k) {
    out << format_double(gene.times[k]) << ',' << format_double(gene.dvdt[k]) << '\n';
  }
}

void write_stability_summary_csv(std::ostream& out, const StabilityReport& report)
{
  out << "gene,lambda1,lambda2,stabilization_time\n";
  for (const auto& g : report.genes) {
    out << g.gene << ',' << format_double(g.lambda1) << ',' << format_double(g.lambda2) << ','
        << (g.stabilization_time ? format_double(*g.stabilization_time) : "not_reached")
        << '\n';
  }
}

} // namespace grnn
