#pragma once

#include "grnn/network.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace grnn {

struct AxisPreset
{
  std::string input;
  double lo = 0.0;
  double hi = 1.0;
};

/// A network shipped with the tool: its spec document for each parameter
/// set plus the sweep axes and operating point used by default.
struct BuiltinNetwork
{
  std::string name;
  std::vector<std::string_view> documents; ///< one per parameter set, 1-based
  AxisPreset x_axis;
  AxisPreset y_axis;
  InputAssignment operating_point;

  int parameter_sets() const { return static_cast<int>(documents.size()); }
  std::string_view document(int parameter_set) const;
  Grnn load(int parameter_set = 1) const;
};

/// multilayer, random_structured, ecoli.
const std::vector<BuiltinNetwork>& builtin_networks();

/// Throws InvalidArgument for unknown names.
const BuiltinNetwork& builtin_network(std::string_view name);

} // namespace grnn
