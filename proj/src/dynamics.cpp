#include "grnn/dynamics.hpp"

#include "grnn/errors.hpp"
#include "grnn/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace grnn {

void require_valid(const IntegrationConfig& cfg)
{
  if (!(cfg.rel_tol > 0.0) || !std::isfinite(cfg.rel_tol)) {
    throw InvalidArgument("rel_tol must be finite and > 0");
  }
  if (!(cfg.abs_tol > 0.0) || !std::isfinite(cfg.abs_tol)) {
    throw InvalidArgument("abs_tol must be finite and > 0");
  }
  if (!std::isfinite(cfg.t_end) || cfg.t_end < 0.0) {
    throw InvalidArgument("t_end must be finite and >= 0");
  }
  if (!(cfg.max_step > 0.0)) {
    throw InvalidArgument("max_step must be > 0");
  }
  if (cfg.t_end > 0.0 && cfg.samples < 2) {
    throw InvalidArgument("at least two samples are needed when t_end > 0");
  }
}

std::vector<double> sample_grid(double t_end, std::size_t samples)
{
  if (t_end == 0.0 || samples < 2) {
    return {0.0};
  }
  std::vector<double> times(samples);
  const double last = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    times[i] = t_end * (static_cast<double>(i) / last);
  }
  times.back() = t_end;
  return times;
}

std::size_t SimTrace::gene_slot(const std::string& id) const
{
  auto it = std::find(genes.begin(), genes.end(), id);
  if (it == genes.end()) {
    throw InvalidArgument("trace has no gene '" + id + "'");
  }
  return static_cast<std::size_t>(it - genes.begin());
}

namespace {

std::vector<double> initial_vector(const NetworkPlan& plan, const Grnn& net,
                                   const InitialStates& init)
{
  std::vector<double> y(2 * plan.gene_count(), 0.0);
  for (const auto& [id, state] : init) {
    if (!net.genes.count(id)) {
      throw InvalidArgument("initial state given for unknown gene '" + id + "'");
    }
    if (!std::isfinite(state.rna) || !std::isfinite(state.protein) || state.rna < 0.0 ||
        state.protein < 0.0) {
      throw InvalidArgument("initial state of '" + id +
                            "' must be finite and non-negative");
    }
    const std::size_t i = plan.gene_index(id);
    y[2 * i] = state.rna;
    y[2 * i + 1] = state.protein;
  }
  return y;
}

} // namespace

SimTrace simulate(const Grnn& net, const InputAssignment& inputs,
                  const InitialStates& init, const IntegrationConfig& cfg)
{
  require_valid(cfg);
  const NetworkPlan plan(net);
  const std::vector<double> input_values = plan.input_vector(inputs);
  const std::size_t n_genes = plan.gene_count();
  std::vector<double> y = initial_vector(plan, net, init);

  SimTrace trace;
  trace.times = sample_grid(cfg.t_end, cfg.samples);
  for (std::size_t i = 0; i < n_genes; ++i) {
    trace.genes.push_back(plan.gene(i).id);
  }
  trace.rna.assign(n_genes, std::vector<double>(trace.times.size(), 0.0));
  trace.protein.assign(n_genes, std::vector<double>(trace.times.size(), 0.0));

  double d_min = std::numeric_limits<double>::infinity();
  double d_max = 0.0;
  for (std::size_t i = 0; i < n_genes; ++i) {
    const auto& g = plan.gene(i);
    d_min = std::min({d_min, g.d1, g.d2});
    d_max = std::max({d_max, g.d1, g.d2});
  }
  if (n_genes > 0 && d_max / d_min > kStiffnessWarningRatio) {
    std::ostringstream msg;
    msg << "stiffness warning: degradation rate ratio " << d_max / d_min
        << " exceeds " << kStiffnessWarningRatio;
    trace.diagnostics.push_back(msg.str());
  }

  std::vector<double> proteins(n_genes);
  std::vector<RegulationInput> regs;
  const OdeRhs rhs = [&](double, std::span<const double> state, std::span<double> dydt) {
    for (std::size_t i = 0; i < n_genes; ++i) {
      proteins[i] = std::max(state[2 * i + 1], 0.0);
    }
    for (std::size_t i = 0; i < n_genes; ++i) {
      const auto& g = plan.gene(i);
      plan.fill_regulation(i, input_values, proteins, regs);
      double h = 1.0;
      for (const auto& r : regs) {
        h *= hill_term(r, g.hill_n);
      }
      dydt[2 * i] = g.k1 * g.copy_number * h - g.d1 * state[2 * i];
      dydt[2 * i + 1] = g.k2 * state[2 * i] - g.d2 * state[2 * i + 1];
    }
  };

  Dopri5Options opt;
  opt.rel_tol = cfg.rel_tol;
  opt.abs_tol = cfg.abs_tol;
  opt.max_step = cfg.max_step;
  const SampleSink sink = [&](std::size_t k, std::span<const double> state) {
    // Round-off can leave values a few ulps below zero near an empty state.
    for (std::size_t i = 0; i < n_genes; ++i) {
      trace.rna[i][k] = std::max(state[2 * i], 0.0);
      trace.protein[i][k] = std::max(state[2 * i + 1], 0.0);
    }
  };
  trace.stats = integrate_dopri5(rhs, y, 0.0, trace.times, opt, sink);
  trace.final_state = std::move(y);
  return trace;
}

SimTrace simulate(const Grnn& net, const InputAssignment& inputs,
                  const IntegrationConfig& cfg)
{
  return simulate(net, inputs, InitialStates{}, cfg);
}

std::vector<ClosedFormDeviation> compare_closed_form(const Grnn& net,
                                                     const InputAssignment& inputs,
                                                     const InitialStates& init,
                                                     const IntegrationConfig& cfg)
{
  const NetworkPlan plan(net);
  const std::vector<double> input_values = plan.input_vector(inputs);
  const SimTrace trace = simulate(net, inputs, init, cfg);

  std::vector<ClosedFormDeviation> out;
  std::vector<RegulationInput> regs;
  const std::vector<double> no_proteins(plan.gene_count(), 0.0);
  for (std::size_t i = 0; i < plan.gene_count(); ++i) {
    const auto& g = plan.gene(i);
    ClosedFormDeviation dev;
    dev.gene = g.id;
    dev.applicable = plan.driven_by_inputs_only(i);
    if (dev.applicable) {
      plan.fill_regulation(i, input_values, no_proteins, regs);
      GeneState start;
      if (auto it = init.find(g.id); it != init.end()) {
        start = it->second;
      }
      std::vector<double> rna_exact(trace.times.size());
      std::vector<double> protein_exact(trace.times.size());
      double rna_peak = 0.0;
      double protein_peak = 0.0;
      for (std::size_t k = 0; k < trace.times.size(); ++k) {
        rna_exact[k] = rna_closed_form(g, regs, start.rna, trace.times[k]);
        protein_exact[k] =
            protein_closed_form(g, regs, start.rna, start.protein, trace.times[k]);
        rna_peak = std::max(rna_peak, std::abs(rna_exact[k]));
        protein_peak = std::max(protein_peak, std::abs(protein_exact[k]));
      }
      for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const double r_den = std::max(std::abs(rna_exact[k]), kDeviationFloor * rna_peak);
        const double p_den =
            std::max(std::abs(protein_exact[k]), kDeviationFloor * protein_peak);
        if (r_den > 0.0) {
          dev.max_rel_rna =
              std::max(dev.max_rel_rna, std::abs(trace.rna[i][k] - rna_exact[k]) / r_den);
        }
        if (p_den > 0.0) {
          dev.max_rel_protein = std::max(
              dev.max_rel_protein, std::abs(trace.protein[i][k] - protein_exact[k]) / p_den);
        }
      }
    }
    out.push_back(dev);
  }
  return out;
}

std::vector<ClosedFormDeviation> compare_closed_form(const Grnn& net,
                                                     const InputAssignment& inputs,
                                                     const IntegrationConfig& cfg)
{
  return compare_closed_form(net, inputs, InitialStates{}, cfg);
}

void write_trace_csv(std::ostream& out, const SimTrace& trace)
{
  out << "time";
  for (const auto& g : trace.genes) {
    out << ',' << g << ".rna," << g << ".protein";
  }
  out << '\n';
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out << format_double(trace.times[k]);
    for (std::size_t i = 0; i < trace.genes.size(); ++i) {
      out << ',' << format_double(trace.rna[i][k]) << ','
          << format_double(trace.protein[i][k]);
    }
    out << '\n';
  }
}

} // namespace grnn
