#include "grnn/dopri5.hpp"

#include "grnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace grnn {

namespace {

// Butcher tableau (Hairer, Norsett & Wanner, "Solving ODEs I", DOPRI5).
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense output.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kMaxGrowth = 10.0;
constexpr double kMaxShrink = 0.2;

double error_norm(std::span<const double> err, std::span<const double> y0,
                  std::span<const double> y1, const Dopri5Options& opt)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sk;
    sum += r * r;
  }
  return err.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(err.size()));
}

double initial_step(const OdeRhs& rhs, double t0, std::span<const double> y0,
                    std::span<const double> f0, double horizon, const Dopri5Options& opt,
                    Dopri5Stats& stats)
{
  const std::size_t n = y0.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = opt.abs_tol + opt.rel_tol * std::abs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min({h, horizon, opt.max_step});

  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] = y0[i] + h * f0[i];
  }
  rhs(t0 + h, y1, f1);
  ++stats.rhs_evaluations;
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = opt.abs_tol + opt.rel_tol * std::abs(y0[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                   : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, horizon, opt.max_step});
}

} // namespace

Dopri5Stats integrate_dopri5(const OdeRhs& rhs, std::vector<double>& y, double t0,
                             std::span<const double> sample_times,
                             const Dopri5Options& opt, const SampleSink& sink)
{
  Dopri5Stats stats;
  if (sample_times.empty()) {
    return stats;
  }
  const double t_end = sample_times.back();
  const std::size_t n = y.size();
  std::size_t next_sample = 0;

  const auto emit_until = [&](double t, const auto& state_at) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
      sink(next_sample, state_at(sample_times[next_sample]));
      ++next_sample;
    }
  };

  emit_until(t0, [&](double) { return std::span<const double>(y); });
  if (t_end <= t0) {
    return stats;
  }

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n), err(n);
  std::vector<double> r1(n), r2(n), r3(n), r4(n), r5(n), interp(n);

  rhs(t0, y, k1);
  ++stats.rhs_evaluations;
  double t = t0;
  double h = initial_step(rhs, t0, y, k1, t_end - t0, opt, stats);
  double facold = 1e-4;
  bool last_rejected = false;

  while (t < t_end) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw IntegrationFailure("step budget exhausted", t);
    }
    const bool final_step = t + 1.01 * h >= t_end;
    if (final_step) {
      h = t_end - t;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t;
      throw IntegrationFailure(msg.str(), t);
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    const double t_new = final_step ? t_end : t + h;
    rhs(t_new, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                            a76 * k6[i]);
    rhs(t_new, ynew, k7);
    stats.rhs_evaluations += 6;

    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
    }
    const double error = error_norm(err, y, ynew, opt);
    if (!std::isfinite(error)) {
      throw IntegrationFailure("non-finite state during integration", t);
    }

    const double fac11 = std::pow(std::max(error, 1e-300), kExpo);
    if (error <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxGrowth, 1.0 / kMaxShrink);
      double h_next = h / fac;
      if (last_rejected) {
        h_next = std::min(h_next, h);
      }
      facold = std::max(error, 1e-4);
      ++stats.accepted;

      if (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
        for (std::size_t i = 0; i < n; ++i) {
          const double ydiff = ynew[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          r1[i] = y[i];
          r2[i] = ydiff;
          r3[i] = bspl;
          r4[i] = ydiff - h * k7[i] - bspl;
          r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                       d7 * k7[i]);
        }
        emit_until(t_new, [&](double ts) -> std::span<const double> {
          if (ts == t_new) {
            return ynew;
          }
          const double theta = (ts - t) / h;
          const double theta1 = 1.0 - theta;
          for (std::size_t i = 0; i < n; ++i) {
            interp[i] = r1[i] +
                        theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
          }
          return interp;
        });
      }

      y.swap(ynew);
      k1.swap(k7);
      t = t_new;
      h = std::min(h_next, opt.max_step);
      last_rejected = false;
    } else {
      h /= std::min(1.0 / kMaxShrink, fac11 / kSafety);
      last_rejected = true;
      ++stats.rejected;
    }
  }
  return stats;
}

} // namespace grnn
