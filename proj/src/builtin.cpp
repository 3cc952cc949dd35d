#include "grnn/builtin.hpp"

#include "grnn/errors.hpp"
#include "grnn/spec_io.hpp"

namespace grnn {

namespace {

// Half-maximal constants are tabulated in units of 1e-7 and stored here as
// plain concentrations (500 x 1e-7 -> 5e-05). Rates are read as per-second.

constexpr std::string_view kMultilayerSet1 = R"({
  "inputs": ["x1", "x2"],
  "outputs": ["g2_1"],
  "genes": {
    "g1_1": {"k1": 0.1, "k2": 0.1, "d1": 0.3, "d2": 0.3, "copy_number": 100},
    "g1_2": {"k1": 0.2, "k2": 0.2, "d1": 0.2, "d2": 0.2, "copy_number": 250},
    "g1_3": {"k1": 0.4, "k2": 0.4, "d1": 0.5, "d2": 0.5, "copy_number": 500},
    "g2_1": {"k1": 0.5, "k2": 0.5, "d1": 0.6, "d2": 0.6, "copy_number": 400}
  },
  "edges": [
    {"from": "x1", "to": "g1_1", "mode": "activation", "k_half": 5e-05},
    {"from": "x2", "to": "g1_1", "mode": "activation", "k_half": 5e-05},
    {"from": "x1", "to": "g1_2", "mode": "activation", "k_half": 1e-05},
    {"from": "x2", "to": "g1_2", "mode": "activation", "k_half": 1e-05},
    {"from": "x1", "to": "g1_3", "mode": "activation", "k_half": 1e-04},
    {"from": "x2", "to": "g1_3", "mode": "repression", "k_half": 1e-04},
    {"from": "g1_1", "to": "g2_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_2", "to": "g2_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_3", "to": "g2_1", "mode": "activation", "k_half": 5e-06}
  ]
})";

constexpr std::string_view kMultilayerSet2 = R"({
  "inputs": ["x1", "x2"],
  "outputs": ["g2_1"],
  "genes": {
    "g1_1": {"k1": 0.1, "k2": 0.1, "d1": 0.3, "d2": 0.3, "copy_number": 1},
    "g1_2": {"k1": 0.2, "k2": 0.2, "d1": 0.2, "d2": 0.2, "copy_number": 2},
    "g1_3": {"k1": 0.4, "k2": 0.4, "d1": 0.5, "d2": 0.5, "copy_number": 5},
    "g2_1": {"k1": 0.5, "k2": 0.5, "d1": 0.6, "d2": 0.6, "copy_number": 6}
  },
  "edges": [
    {"from": "x1", "to": "g1_1", "mode": "activation", "k_half": 1e-05},
    {"from": "x2", "to": "g1_1", "mode": "activation", "k_half": 1e-05},
    {"from": "x1", "to": "g1_2", "mode": "activation", "k_half": 2e-06},
    {"from": "x2", "to": "g1_2", "mode": "activation", "k_half": 2e-06},
    {"from": "x1", "to": "g1_3", "mode": "activation", "k_half": 1e-06},
    {"from": "x2", "to": "g1_3", "mode": "repression", "k_half": 1e-06},
    {"from": "g1_1", "to": "g2_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_2", "to": "g2_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_3", "to": "g2_1", "mode": "activation", "k_half": 5e-06}
  ]
})";

constexpr std::string_view kRandomStructuredSet1 = R"({
  "inputs": ["x1", "x2"],
  "outputs": ["g3_1"],
  "genes": {
    "g1_1": {"k1": 0.1, "k2": 0.1, "d1": 0.3, "d2": 0.3, "copy_number": 1},
    "g1_2": {"k1": 0.2, "k2": 0.2, "d1": 0.2, "d2": 0.2, "copy_number": 2},
    "g1_3": {"k1": 0.4, "k2": 0.4, "d1": 0.5, "d2": 0.5, "copy_number": 5},
    "g2_1": {"k1": 0.8, "k2": 0.7, "d1": 0.7, "d2": 0.9, "copy_number": 10},
    "g3_1": {"k1": 0.5, "k2": 0.5, "d1": 0.6, "d2": 0.6, "copy_number": 6}
  },
  "edges": [
    {"from": "x1", "to": "g1_1", "mode": "activation", "k_half": 5e-05},
    {"from": "x2", "to": "g1_1", "mode": "activation", "k_half": 5e-05},
    {"from": "x1", "to": "g1_2", "mode": "activation", "k_half": 1e-05},
    {"from": "x2", "to": "g1_2", "mode": "activation", "k_half": 1e-05},
    {"from": "x1", "to": "g1_3", "mode": "activation", "k_half": 1e-04},
    {"from": "x2", "to": "g1_3", "mode": "repression", "k_half": 1e-04},
    {"from": "g1_1", "to": "g2_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g2_1", "to": "g3_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_2", "to": "g3_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_3", "to": "g3_1", "mode": "activation", "k_half": 5e-06}
  ]
})";

constexpr std::string_view kRandomStructuredSet2 = R"({
  "inputs": ["x1", "x2"],
  "outputs": ["g3_1"],
  "genes": {
    "g1_1": {"k1": 0.1, "k2": 0.1, "d1": 0.3, "d2": 0.3, "copy_number": 1},
    "g1_2": {"k1": 0.2, "k2": 0.2, "d1": 0.2, "d2": 0.2, "copy_number": 2},
    "g1_3": {"k1": 0.4, "k2": 0.4, "d1": 0.5, "d2": 0.5, "copy_number": 5},
    "g2_1": {"k1": 0.8, "k2": 0.7, "d1": 0.7, "d2": 0.9, "copy_number": 10},
    "g3_1": {"k1": 0.5, "k2": 0.5, "d1": 0.6, "d2": 0.6, "copy_number": 6}
  },
  "edges": [
    {"from": "x1", "to": "g1_1", "mode": "activation", "k_half": 5e-06},
    {"from": "x2", "to": "g1_1", "mode": "activation", "k_half": 5e-06},
    {"from": "x1", "to": "g1_2", "mode": "activation", "k_half": 1e-05},
    {"from": "x2", "to": "g1_2", "mode": "activation", "k_half": 1e-05},
    {"from": "x1", "to": "g1_3", "mode": "activation", "k_half": 1e-04},
    {"from": "x2", "to": "g1_3", "mode": "repression", "k_half": 1e-04},
    {"from": "g1_1", "to": "g2_1", "mode": "activation", "k_half": 1e-06},
    {"from": "g2_1", "to": "g3_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_2", "to": "g3_1", "mode": "activation", "k_half": 5e-06},
    {"from": "g1_3", "to": "g3_1", "mode": "activation", "k_half": 5e-06}
  ]
})";

// d2 is tabulated as 3.5 % per hour; kept as the plain number under the
// per-second convention like every other rate.
constexpr std::string_view kEcoli = R"({
  "inputs": ["b3025", "b3357"],
  "outputs": ["b1071"],
  "genes": {
    "b1891": {"k1": 0.05, "k2": 0.05, "d1": 0.2, "d2": 0.035, "copy_number": 72},
    "b1892": {"k1": 0.05, "k2": 0.05, "d1": 0.2, "d2": 0.035, "copy_number": 122},
    "b1071": {"k1": 0.05, "k2": 0.05, "d1": 0.2, "d2": 0.035, "copy_number": 151}
  },
  "edges": [
    {"from": "b3025", "to": "b1891", "mode": "activation", "k_half": 7.53e-06},
    {"from": "b3357", "to": "b1891", "mode": "activation", "k_half": 4.26164e-04},
    {"from": "b3025", "to": "b1892", "mode": "activation", "k_half": 7.11e-06},
    {"from": "b3357", "to": "b1892", "mode": "activation", "k_half": 2.06156e-04},
    {"from": "b1891", "to": "b1071", "mode": "activation", "k_half": 3.06e-05},
    {"from": "b1892", "to": "b1071", "mode": "activation", "k_half": 3.77e-05}
  ]
})";

} // namespace

std::string_view BuiltinNetwork::document(int parameter_set) const
{
  if (parameter_set < 1 || parameter_set > parameter_sets()) {
    throw InvalidArgument("builtin '" + name + "' has no parameter set " +
                          std::to_string(parameter_set));
  }
  return documents[static_cast<std::size_t>(parameter_set - 1)];
}

Grnn BuiltinNetwork::load(int parameter_set) const
{
  return load_spec(document(parameter_set));
}

const std::vector<BuiltinNetwork>& builtin_networks()
{
  static const std::vector<BuiltinNetwork> networks = {
      {"multilayer",
       {kMultilayerSet1, kMultilayerSet2},
       {"x1", 0.0, 5e-4},
       {"x2", 0.0, 5e-4},
       {{"x1", 3e-5}, {"x2", 3e-5}}},
      {"random_structured",
       {kRandomStructuredSet1, kRandomStructuredSet2},
       {"x1", 0.0, 5e-4},
       {"x2", 0.0, 5e-4},
       {{"x1", 3e-5}, {"x2", 3e-5}}},
      {"ecoli",
       {kEcoli},
       {"b3025", 0.0, 5e-5},
       {"b3357", 0.0, 5e-3},
       {{"b3025", 3e-5}, {"b3357", 3e-3}}},
  };
  return networks;
}

const BuiltinNetwork& builtin_network(std::string_view name)
{
  for (const auto& b : builtin_networks()) {
    if (b.name == name) {
      return b;
    }
  }
  throw InvalidArgument("unknown builtin network '" + std::string(name) + "'");
}

} // namespace grnn
