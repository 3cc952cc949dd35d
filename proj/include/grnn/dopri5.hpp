#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace grnn {

struct Dopri5Options
{
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
};

struct Dopri5Stats
{
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

using OdeRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using SampleSink = std::function<void(std::size_t index, std::span<const double> y)>;

/// Dormand-Prince 5(4) with PI step-size control and the 4th-order
/// continuous extension. Integrates from t0 up to the last entry of
/// `sample_times` (sorted, all >= t0) and reports the interpolated state at
/// every sample time. `y` holds the initial state and receives the state at
/// the final time. Throws IntegrationFailure on step-size underflow, step
/// budget exhaustion or a non-finite state.
Dopri5Stats integrate_dopri5(const OdeRhs& rhs, std::vector<double>& y, double t0,
                             std::span<const double> sample_times,
                             const Dopri5Options& options, const SampleSink& sink);

} // namespace grnn
