#include "grnn/network.hpp"

#include "grnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace grnn {

double seconds_per(RateUnit unit) noexcept
{
  switch (unit) {
  case RateUnit::per_second:
    return 1.0;
  case RateUnit::per_minute:
    return 60.0;
  case RateUnit::per_hour:
    return 3600.0;
  }
  return 1.0;
}

GenePerceptron Grnn::per_second(const std::string& id) const
{
  auto it = genes.find(id);
  if (it == genes.end()) {
    throw InvalidArgument("unknown gene '" + id + "'");
  }
  GenePerceptron g = it->second;
  g.id = id;
  const auto scale = [&](const char* field, double& value) {
    auto u = units.find(field);
    if (u != units.end()) {
      value /= seconds_per(u->second);
    }
  };
  scale("k1", g.k1);
  scale("k2", g.k2);
  scale("d1", g.d1);
  scale("d2", g.d2);
  return g;
}

bool Grnn::is_input(const std::string& id) const
{
  return std::find(inputs.begin(), inputs.end(), id) != inputs.end();
}

const char* to_string(Violation::Kind kind) noexcept
{
  switch (kind) {
  case Violation::Kind::cycle:
    return "cycle";
  case Violation::Kind::dangling_edge:
    return "dangling-edge";
  case Violation::Kind::orphan_gene:
    return "orphan-gene";
  case Violation::Kind::missing_parameter:
    return "missing-parameter";
  case Violation::Kind::non_positive_rate:
    return "non-positive-rate";
  case Violation::Kind::invalid_hill:
    return "invalid-hill";
  case Violation::Kind::invalid_k_half:
    return "invalid-k-half";
  case Violation::Kind::duplicate_edge:
    return "duplicate-edge";
  case Violation::Kind::id_collision:
    return "id-collision";
  case Violation::Kind::edge_into_input:
    return "edge-into-input";
  case Violation::Kind::unknown_output:
    return "unknown-output";
  }
  return "unknown";
}

bool ValidationReport::has(Violation::Kind kind) const noexcept
{
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

namespace {

void check_gene_parameters(const std::string& id, const GenePerceptron& g,
                           std::vector<Violation>& out)
{
  const std::pair<const char*, double> rates[] = {
      {"k1", g.k1}, {"k2", g.k2}, {"d1", g.d1}, {"d2", g.d2},
      {"copy_number", g.copy_number}};
  for (const auto& [name, value] : rates) {
    if (std::isnan(value)) {
      out.push_back({Violation::Kind::missing_parameter,
                     "gene '" + id + "': parameter " + name + " is missing"});
    } else if (!std::isfinite(value) || value <= 0.0) {
      std::ostringstream msg;
      msg << "gene '" << id << "': " << name << " = " << value
          << " must be finite and > 0";
      out.push_back({Violation::Kind::non_positive_rate, msg.str()});
    }
  }
  if (std::isnan(g.hill_n)) {
    out.push_back({Violation::Kind::missing_parameter,
                   "gene '" + id + "': parameter hill_n is missing"});
  } else if (!std::isfinite(g.hill_n) || g.hill_n < 1.0) {
    std::ostringstream msg;
    msg << "gene '" << id << "': hill_n = " << g.hill_n << " must be >= 1";
    out.push_back({Violation::Kind::invalid_hill, msg.str()});
  }
}

// Returns one cycle per strongly connected back edge found by DFS, each as
// "a -> b -> ... -> a".
std::vector<std::string> find_cycles(const Grnn& net)
{
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& e : net.edges) {
    if (net.genes.count(e.source) && net.genes.count(e.target)) {
      succ[e.source].push_back(e.target);
    }
  }
  for (auto& [_, v] : succ) {
    std::sort(v.begin(), v.end());
  }

  enum class Mark { white, grey, black };
  std::map<std::string, Mark> mark;
  for (const auto& [id, _] : net.genes) {
    mark[id] = Mark::white;
  }
  std::vector<std::string> stack;
  std::vector<std::string> cycles;

  std::function<void(const std::string&)> visit = [&](const std::string& u) {
    mark[u] = Mark::grey;
    stack.push_back(u);
    for (const auto& v : succ[u]) {
      if (mark[v] == Mark::grey) {
        auto start = std::find(stack.begin(), stack.end(), v);
        std::string path;
        for (auto it = start; it != stack.end(); ++it) {
          path += *it + " -> ";
        }
        cycles.push_back(path + v);
      } else if (mark[v] == Mark::white) {
        visit(v);
      }
    }
    stack.pop_back();
    mark[u] = Mark::black;
  };

  for (const auto& [id, _] : net.genes) {
    if (mark[id] == Mark::white) {
      visit(id);
    }
  }
  return cycles;
}

} // namespace

ValidationReport validate(const Grnn& net)
{
  ValidationReport report;
  auto& out = report.violations;

  std::set<std::string> seen_inputs;
  for (const auto& in : net.inputs) {
    if (!seen_inputs.insert(in).second) {
      out.push_back({Violation::Kind::id_collision,
                     "input '" + in + "' declared more than once"});
    }
    if (net.genes.count(in)) {
      out.push_back({Violation::Kind::id_collision,
                     "id '" + in + "' is both an input and a gene"});
    }
  }

  for (const auto& [id, gene] : net.genes) {
    check_gene_parameters(id, gene, out);
  }

  std::set<std::pair<std::string, std::string>> pairs;
  std::set<std::string> regulated;
  for (const auto& e : net.edges) {
    const std::string label = "edge " + e.source + " -> " + e.target;
    const bool source_known = net.genes.count(e.source) || net.is_input(e.source);
    if (!source_known) {
      out.push_back({Violation::Kind::dangling_edge,
                     label + ": unknown source '" + e.source + "'"});
    }
    if (net.is_input(e.target)) {
      out.push_back({Violation::Kind::edge_into_input,
                     label + ": target '" + e.target + "' is an input"});
    } else if (!net.genes.count(e.target)) {
      out.push_back({Violation::Kind::dangling_edge,
                     label + ": unknown target '" + e.target + "'"});
    } else {
      regulated.insert(e.target);
    }
    if (!std::isfinite(e.k_half) || e.k_half <= 0.0) {
      std::ostringstream msg;
      msg << label << ": k_half = " << e.k_half << " must be finite and > 0";
      out.push_back({Violation::Kind::invalid_k_half, msg.str()});
    }
    if (!pairs.insert({e.source, e.target}).second) {
      out.push_back({Violation::Kind::duplicate_edge, label + " appears more than once"});
    }
  }

  for (const auto& [id, _] : net.genes) {
    if (!regulated.count(id)) {
      out.push_back({Violation::Kind::orphan_gene,
                     "gene '" + id + "' has no incoming edge"});
    }
  }

  std::set<std::string> seen_outputs;
  for (const auto& o : net.outputs) {
    if (!net.genes.count(o)) {
      out.push_back({Violation::Kind::unknown_output,
                     "output '" + o + "' is not a gene"});
    } else if (!seen_outputs.insert(o).second) {
      out.push_back({Violation::Kind::id_collision,
                     "output '" + o + "' listed more than once"});
    }
  }

  for (const auto& c : find_cycles(net)) {
    out.push_back({Violation::Kind::cycle, "cycle: " + c});
  }
  return report;
}

void require_valid(const Grnn& net)
{
  const auto report = validate(net);
  if (!report.ok()) {
    std::string msg = "invalid network:";
    for (const auto& v : report.violations) {
      msg += "\n  " + v.message;
    }
    throw PreconditionError(msg);
  }
}

std::vector<std::string> topological_order(const Grnn& net)
{
  require_valid(net);
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [id, _] : net.genes) {
    indegree[id] = 0;
  }
  for (const auto& e : net.edges) {
    if (net.genes.count(e.source)) {
      ++indegree[e.target];
      succ[e.source].push_back(e.target);
    }
  }
  std::set<std::string> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) {
      ready.insert(id);
    }
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string u = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(u);
    for (const auto& v : succ[u]) {
      if (--indegree[v] == 0) {
        ready.insert(v);
      }
    }
  }
  return order;
}

bool is_topological_order(const Grnn& net, std::span<const std::string> order)
{
  if (order.size() != net.genes.size()) {
    return false;
  }
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!net.genes.count(order[i]) || !position.emplace(order[i], i).second) {
      return false;
    }
  }
  for (const auto& e : net.edges) {
    if (net.genes.count(e.source) && position.at(e.source) >= position.at(e.target)) {
      return false;
    }
  }
  return true;
}

NetworkPlan::NetworkPlan(const Grnn& net)
    : NetworkPlan(net, topological_order(net))
{
}

NetworkPlan::NetworkPlan(const Grnn& net, std::span<const std::string> order)
{
  require_valid(net);
  if (!is_topological_order(net, order)) {
    throw InvalidArgument("gene order is not a topological order of the network");
  }
  inputs_ = net.inputs;
  std::map<std::string, std::size_t> input_slot;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    input_slot[inputs_[i]] = i;
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    gene_index_[order[i]] = i;
    genes_.push_back(net.per_second(order[i]));
  }
  regulators_.resize(order.size());
  // Edges keep declaration order within a gene so the Hill product is
  // multiplied in the same sequence whatever gene order is used.
  for (const auto& e : net.edges) {
    Regulator r;
    r.mode = e.mode;
    r.k_half = e.k_half;
    if (auto it = input_slot.find(e.source); it != input_slot.end()) {
      r.from_input = true;
      r.index = it->second;
    } else {
      r.index = gene_index_.at(e.source);
    }
    regulators_[gene_index_.at(e.target)].push_back(r);
  }
}

std::size_t NetworkPlan::gene_index(const std::string& id) const
{
  auto it = gene_index_.find(id);
  if (it == gene_index_.end()) {
    throw InvalidArgument("unknown gene '" + id + "'");
  }
  return it->second;
}

std::size_t NetworkPlan::input_index(const std::string& id) const
{
  auto it = std::find(inputs_.begin(), inputs_.end(), id);
  if (it == inputs_.end()) {
    throw InvalidArgument("unknown input '" + id + "'");
  }
  return static_cast<std::size_t>(it - inputs_.begin());
}

bool NetworkPlan::driven_by_inputs_only(std::size_t i) const
{
  const auto& regs = regulators_.at(i);
  return std::all_of(regs.begin(), regs.end(),
                     [](const Regulator& r) { return r.from_input; });
}

std::vector<double> NetworkPlan::input_vector(const InputAssignment& inputs) const
{
  std::vector<double> values(inputs_.size());
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    auto it = inputs.find(inputs_[i]);
    if (it == inputs.end()) {
      throw InvalidArgument("no value assigned to input '" + inputs_[i] + "'");
    }
    if (!std::isfinite(it->second) || it->second < 0.0) {
      throw InvalidArgument("input '" + inputs_[i] +
                            "' must be a finite non-negative concentration");
    }
    values[i] = it->second;
  }
  for (const auto& [id, _] : inputs) {
    if (std::find(inputs_.begin(), inputs_.end(), id) == inputs_.end()) {
      throw InvalidArgument("'" + id + "' is not an input of the network");
    }
  }
  return values;
}

void NetworkPlan::fill_regulation(std::size_t i, std::span<const double> input_values,
                                  std::span<const double> proteins,
                                  std::vector<RegulationInput>& out) const
{
  const auto& regs = regulators_[i];
  out.resize(regs.size());
  for (std::size_t j = 0; j < regs.size(); ++j) {
    const auto& r = regs[j];
    const double tf = r.from_input ? input_values[r.index] : proteins[r.index];
    out[j] = {std::max(tf, 0.0), r.k_half, r.mode};
  }
}

std::vector<SteadyState> NetworkPlan::steady_states(std::span<const double> input_values) const
{
  std::vector<SteadyState> states(genes_.size());
  std::vector<double> proteins(genes_.size(), 0.0);
  std::vector<RegulationInput> regs;
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    fill_regulation(i, input_values, proteins, regs);
    const auto& g = genes_[i];
    const double h = normalized_steady_state(g, regs);
    states[i].normalized = h;
    states[i].rna = g.k1 * g.copy_number / g.d1 * h;
    states[i].protein = protein_ceiling(g) * h;
    proteins[i] = states[i].protein;
  }
  return states;
}

namespace {

SteadyStateMap to_map(const NetworkPlan& plan, const Grnn& net,
                      const std::vector<SteadyState>& states)
{
  SteadyStateMap out;
  for (const auto& [id, _] : net.genes) {
    out[id] = states[plan.gene_index(id)];
  }
  return out;
}

} // namespace

SteadyStateMap propagate_steady_state(const Grnn& net, const InputAssignment& inputs)
{
  const NetworkPlan plan(net);
  return to_map(plan, net, plan.steady_states(plan.input_vector(inputs)));
}

SteadyStateMap propagate_steady_state(const Grnn& net, const InputAssignment& inputs,
                                      std::span<const std::string> order)
{
  const NetworkPlan plan(net, order);
  return to_map(plan, net, plan.steady_states(plan.input_vector(inputs)));
}

} // namespace grnn
